// Command-line front end: simulate survival data, fit the gamma mixture or
// the exponentiated Weibull model, compare them by posterior predictive
// loss, tabulate the parametric catalog, and elicit mixture priors.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrl/mrl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(',', pos);
        const std::string tok =
            text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok.empty()) throw CLI::ValidationError("empty number in list: " + text);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw CLI::ValidationError("bad number '" + tok + "' in list: " + text);
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

std::vector<mrl::SimComponent> parse_components(const std::string& text) {
    // "w:shape:rate,w:shape:rate,..."
    std::vector<mrl::SimComponent> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(',', pos);
        const std::string tok =
            text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        const auto c1 = tok.find(':');
        const auto c2 = tok.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw CLI::ValidationError("component must be w:shape:rate, got: " + tok);
        out.push_back(mrl::SimComponent{std::stod(tok.substr(0, c1)),
                                        std::stod(tok.substr(c1 + 1, c2 - c1 - 1)),
                                        std::stod(tok.substr(c2 + 1))});
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_band_csv(const fs::path& path, const mrl::FunctionalGrid& bands) {
    std::string buf = "t,median,lower,upper,valid_draws\n";
    for (std::size_t j = 0; j < bands.grid.size(); ++j) {
        buf += mrl::format_double(bands.grid[j]);
        buf += ',';
        buf += mrl::format_double(bands.median[j]);
        buf += ',';
        buf += mrl::format_double(bands.lower[j]);
        buf += ',';
        buf += mrl::format_double(bands.upper[j]);
        buf += ',';
        buf += std::to_string(bands.valid_draws[j]);
        buf += '\n';
    }
    write_text_file(path, buf);
}

void write_samples_csv(const fs::path& path, const std::string& column,
                       const std::vector<double>& values) {
    std::string buf = column + "\n";
    for (double v : values) {
        buf += mrl::format_double(v);
        buf += '\n';
    }
    write_text_file(path, buf);
}

// ---------------------------------------------------------------------------
// fit configuration shared by `fit` and `compare`
// ---------------------------------------------------------------------------

struct PriorFlags {
    std::vector<double> a_mu;  // explicit baseline prior mean (2 values)
    double b_mu = -1.0;
    double b_sigma = -1.0;
    double a_sigma = 4.0;
    double a_alpha = 2.0;
    double b_alpha = 1.0;
    double elicit_center = -1.0;
    double elicit_range = -1.0;
    double q_e = 0.6;
    double q_v = 0.025;
};

mrl::Hyperparams resolve_priors(const PriorFlags& flags, const mrl::Dataset& data) {
    if (!flags.a_mu.empty()) {
        if (flags.a_mu.size() != 2 || !(flags.b_mu > 0.0))
            throw CLI::ValidationError("--a-mu needs two values and --b-mu > 0");
        mrl::Hyperparams h;
        h.a_mu = {flags.a_mu[0], flags.a_mu[1]};
        h.b_mu = mrl::Mat2::scaled_identity(flags.b_mu);
        h.b_sigma = mrl::Mat2::scaled_identity(flags.b_sigma > 0.0 ? flags.b_sigma : flags.b_mu);
        h.a_sigma = flags.a_sigma;
        h.a_alpha = flags.a_alpha;
        h.b_alpha = flags.b_alpha;
        h.validate();
        return h;
    }
    double center = flags.elicit_center, range = flags.elicit_range;
    if (!(center > 0.0) || !(range > 0.0)) {
        // default: midrange and range of the observed times
        const auto [lo, hi] = std::minmax_element(data.time.begin(), data.time.end());
        center = 0.5 * (*lo + *hi);
        range = *hi - *lo;
        if (!(range > 0.0)) range = center;
    }
    return mrl::elicit_hyperparameters(center, range, flags.q_e, flags.q_v, flags.a_alpha,
                                       flags.b_alpha);
}

json priors_to_json(const mrl::Hyperparams& h) {
    return json{{"a_mu", {h.a_mu.x, h.a_mu.y}},
                {"B_mu", {{h.b_mu.m00, h.b_mu.m01}, {h.b_mu.m10, h.b_mu.m11}}},
                {"a_sigma", h.a_sigma},
                {"B_sigma", {{h.b_sigma.m00, h.b_sigma.m01}, {h.b_sigma.m10, h.b_sigma.m11}}},
                {"a_alpha", h.a_alpha},
                {"b_alpha", h.b_alpha}};
}

mrl::Grid resolve_grid(double grid_min, double grid_max, std::size_t grid_points,
                       const std::vector<double>& pooled_times) {
    if (grid_min > 0.0 && grid_max > grid_min)
        return mrl::Grid::log_spaced(grid_min, grid_max, grid_points);
    return mrl::Grid::default_for_data(pooled_times, grid_points);
}

struct GroupFit {
    std::string name;
    mrl::PosteriorDraws chain;
    mrl::DrawFunctionals functionals;
};

void write_dpmm_draws_csv(const fs::path& path, const mrl::PosteriorDraws& chain) {
    const std::size_t L = chain.draws.empty() ? 0 : chain.draws.front().weights.size();
    std::string buf = "alpha,mu1,mu2,sigma11,sigma12,sigma21,sigma22";
    for (std::size_t l = 1; l <= L; ++l) buf += ",p_" + std::to_string(l);
    for (std::size_t l = 1; l <= L; ++l)
        buf += ",theta_" + std::to_string(l) + ",phi_" + std::to_string(l);
    buf += '\n';
    for (const auto& d : chain.draws) {
        buf += mrl::format_double(d.alpha);
        buf += ',';
        buf += mrl::format_double(d.mu.x);
        buf += ',';
        buf += mrl::format_double(d.mu.y);
        buf += ',';
        buf += mrl::format_double(d.sigma.m00);
        buf += ',';
        buf += mrl::format_double(d.sigma.m01);
        buf += ',';
        buf += mrl::format_double(d.sigma.m10);
        buf += ',';
        buf += mrl::format_double(d.sigma.m11);
        for (double w : d.weights) {
            buf += ',';
            buf += mrl::format_double(w);
        }
        for (const auto& a : d.atoms) {
            buf += ',';
            buf += mrl::format_double(a.x);
            buf += ',';
            buf += mrl::format_double(a.y);
        }
        buf += '\n';
    }
    write_text_file(path, buf);
}

void write_ew_draws_csv(const fs::path& path, const mrl::EwDraws& draws) {
    std::string buf = "alpha,theta,sigma\n";
    for (const auto& d : draws.draws) {
        buf += mrl::format_double(d.alpha);
        buf += ',';
        buf += mrl::format_double(d.theta);
        buf += ',';
        buf += mrl::format_double(d.sigma);
        buf += '\n';
    }
    write_text_file(path, buf);
}

std::uint64_t group_seed(std::uint64_t base, std::size_t index, std::uint64_t salt) {
    return mrl::RngStream(base).spawn(1000 * salt + index).seed();
}

// ---------------------------------------------------------------------------
// subcommand: simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& preset, const std::string& components, int n,
                 double censor_time, double censor_exp_rate, std::uint64_t seed,
                 const std::string& group, const std::string& out_path, bool append) {
    mrl::SimSpec spec;
    if (!preset.empty()) {
        if (preset == "sim1")
            spec = mrl::sim1_preset(seed, n > 0 ? n : 200);
        else if (preset == "sim2")
            spec = mrl::sim2_preset(seed, n > 0 ? n : 100);
        else
            throw CLI::ValidationError("unknown preset: " + preset);
    } else {
        if (components.empty())
            throw CLI::ValidationError("need --preset or --components");
        spec.components = parse_components(components);
        spec.n = n;
        spec.seed = seed;
    }
    if (censor_time > 0.0)
        spec.censoring = {mrl::CensorScheme::Kind::fixed_time, censor_time};
    else if (censor_exp_rate > 0.0)
        spec.censoring = {mrl::CensorScheme::Kind::exp_competing, censor_exp_rate};
    if (!group.empty()) spec.group = group;

    const mrl::Dataset data = mrl::simulate(spec);
    if (append && fs::exists(out_path)) {
        std::ofstream out(out_path, std::ios::app);
        if (!out) throw std::runtime_error("cannot open " + out_path);
        for (std::size_t i = 0; i < data.size(); ++i)
            out << mrl::format_double(data.time[i]) << ',' << (data.censored[i] ? 0 : 1) << ','
                << data.group << '\n';
    } else {
        mrl::write_dataset_csv(out_path, data);
    }
    std::size_t censored = 0;
    for (auto c : data.censored) censored += c;
    std::cout << "wrote " << data.size() << " rows (" << censored << " censored) to "
              << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: fit
// ---------------------------------------------------------------------------

int cmd_fit(const std::string& data_path, const std::string& model, const std::string& out_dir,
            mrl::ChainConfig chain_config, const PriorFlags& prior_flags,
            const std::string& ew_prior_means, const std::string& ew_quantile_probs,
            mrl::EwConfig ew_config, double grid_min, double grid_max,
            std::size_t grid_points, double band_level, double mrl_band_level,
            const std::string& diff_times_text) {
    const auto t_start = std::chrono::steady_clock::now();
    const auto groups = mrl::load_dataset(data_path);
    fs::create_directories(out_dir);

    std::vector<double> pooled;
    for (const auto& [name, d] : groups)
        pooled.insert(pooled.end(), d.time.begin(), d.time.end());
    const mrl::Grid grid = resolve_grid(grid_min, grid_max, grid_points, pooled);

    json summary;
    summary["command"] = "fit";
    summary["model"] = model;
    summary["data"] = data_path;
    summary["seed"] = chain_config.seed;
    summary["status_convention"] = "status 1 = event observed; internal delta = 1 - status";
    summary["grid"] = {{"min", grid.front()}, {"max", grid.back()}, {"points", grid.size()}};
    summary["band_level"] = band_level;
    summary["mrl_band_level"] = mrl_band_level;

    if (model == "dpmm") {
        // one chain per group, run concurrently with derived seeds
        std::vector<std::pair<std::string, const mrl::Dataset*>> order;
        for (const auto& [name, d] : groups) order.emplace_back(name, &d);

        std::vector<mrl::Hyperparams> priors;
        std::vector<mrl::ChainConfig> configs;
        for (std::size_t g = 0; g < order.size(); ++g) {
            priors.push_back(resolve_priors(prior_flags, *order[g].second));
            mrl::ChainConfig c = chain_config;
            c.seed = group_seed(chain_config.seed, g, 1);
            configs.push_back(c);
        }

        std::vector<std::future<mrl::PosteriorDraws>> futures;
        for (std::size_t g = 0; g < order.size(); ++g)
            futures.push_back(std::async(std::launch::async, [&, g] {
                return mrl::run_chain(*order[g].second, priors[g], configs[g]);
            }));

        std::vector<GroupFit> fits;
        for (std::size_t g = 0; g < order.size(); ++g) {
            GroupFit f;
            f.name = order[g].first;
            f.chain = futures[g].get();
            f.functionals = mrl::evaluate_draw_functionals(f.chain, grid, chain_config.survival_floor);
            fits.push_back(std::move(f));
        }

        summary["sampler"] = {{"L", chain_config.truncation},
                              {"burn_in", chain_config.burn_in},
                              {"thin", chain_config.thin},
                              {"n_save", chain_config.n_save},
                              {"pilot_iters", chain_config.pilot_iters},
                              {"proposal_c", chain_config.proposal_c},
                              {"survival_floor", chain_config.survival_floor}};
        summary["groups"] = json::array();

        for (std::size_t g = 0; g < fits.size(); ++g) {
            const auto& f = fits[g];
            const fs::path base = fs::path(out_dir) / f.name;
            write_dpmm_draws_csv(base.string() + "_draws.csv", f.chain);
            write_band_csv(base.string() + "_density.csv",
                           mrl::pointwise_bands(grid, f.functionals.density, band_level));
            write_band_csv(base.string() + "_survival.csv",
                           mrl::pointwise_bands(grid, f.functionals.survival, band_level));
            write_band_csv(base.string() + "_hazard.csv",
                           mrl::pointwise_bands(grid, f.functionals.hazard, band_level));
            write_band_csv(base.string() + "_mrl.csv",
                           mrl::pointwise_bands(grid, f.functionals.mrl, mrl_band_level));
            write_samples_csv(base.string() + "_correlation.csv", "correlation",
                              mrl::atom_correlation(f.chain));
            summary["groups"].push_back(json{{"name", f.name},
                                             {"n", order[g].second->size()},
                                             {"seed", configs[g].seed},
                                             {"priors", priors_to_json(priors[g])},
                                             {"atom_accept_rate", f.chain.atom_accept_rate}});
        }

        if (fits.size() == 2) {
            const auto& a = fits[0];
            const auto& b = fits[1];
            summary["two_group"] = {{"a", a.name}, {"b", b.name}};

            std::vector<double> diff_times{0.0};
            if (!diff_times_text.empty()) diff_times = parse_number_list(diff_times_text);
            const auto diffs = mrl::mrl_difference(a.chain, b.chain, diff_times);
            for (const auto& d : diffs)
                write_samples_csv(fs::path(out_dir) /
                                      ("diff_t" + mrl::format_double(d.t) + ".csv"),
                                  "difference", d.differences);

            const auto posterior =
                mrl::prob_mrl_greater(grid, a.functionals.mrl, b.functionals.mrl);
            mrl::RngStream prior_rng_a(group_seed(chain_config.seed, 0, 2));
            mrl::RngStream prior_rng_b(group_seed(chain_config.seed, 1, 2));
            const int n_prior = 2000;
            const auto prior_a = mrl::sample_prior_draws(priors[0], chain_config.truncation,
                                                         n_prior, prior_rng_a);
            const auto prior_b = mrl::sample_prior_draws(priors[1], chain_config.truncation,
                                                         n_prior, prior_rng_b);
            const auto prior_curve =
                mrl::prob_mrl_greater(grid, mrl::mrl_draw_matrix(prior_a, grid),
                                      mrl::mrl_draw_matrix(prior_b, grid));
            std::string buf = "t,posterior,posterior_pairs,prior,prior_pairs\n";
            for (std::size_t j = 0; j < grid.size(); ++j) {
                buf += mrl::format_double(grid[j]);
                buf += ',';
                buf += mrl::format_double(posterior.prob[j]);
                buf += ',';
                buf += std::to_string(posterior.pairs[j]);
                buf += ',';
                buf += mrl::format_double(prior_curve.prob[j]);
                buf += ',';
                buf += std::to_string(prior_curve.pairs[j]);
                buf += '\n';
            }
            write_text_file(fs::path(out_dir) / "prob_greater.csv", buf);
        }
    } else if (model == "exp_weibull") {
        summary["sampler"] = {{"burn_in", ew_config.burn_in},
                              {"thin", ew_config.thin},
                              {"n_save", ew_config.n_save},
                              {"proposal_sd", ew_config.proposal_sd}};
        summary["groups"] = json::array();
        std::size_t g = 0;
        for (const auto& [name, d] : groups) {
            mrl::EwPriorMeans prior;
            json prior_json;
            if (!ew_prior_means.empty()) {
                const auto v = parse_number_list(ew_prior_means);
                if (v.size() != 3)
                    throw CLI::ValidationError("--ew-prior-means needs three values");
                prior = {v[0], v[1], v[2]};
                prior_json["source"] = "explicit";
            } else {
                const auto probs = parse_number_list(ew_quantile_probs);
                if (probs.size() != 3)
                    throw CLI::ValidationError("--ew-quantile-probs needs three values");
                std::vector<double> sorted = d.time;
                std::sort(sorted.begin(), sorted.end());
                const std::array<double, 3> p{probs[0], probs[1], probs[2]};
                const std::array<double, 3> q{mrl::quantile_interpolated(sorted, p[0]),
                                              mrl::quantile_interpolated(sorted, p[1]),
                                              mrl::quantile_interpolated(sorted, p[2])};
                const auto sol = mrl::ew_prior_from_quantiles(p, q, true);
                prior = sol.means;
                prior_json["source"] = "data quantiles";
                prior_json["probs"] = probs;
                prior_json["quantiles"] = {q[0], q[1], q[2]};
                prior_json["quantile_residual"] = sol.residual;
                prior_json["exact"] = sol.exact;
            }
            prior_json["means"] = {prior.a_alpha, prior.a_theta, prior.a_sigma};

            mrl::EwConfig c = ew_config;
            c.seed = group_seed(ew_config.seed, g, 3);
            const auto draws = mrl::fit_exp_weibull(d, prior, c);

            const fs::path base = fs::path(out_dir) / name;
            write_ew_draws_csv(base.string() + "_ew_draws.csv", draws);

            std::vector<std::vector<double>> dens(draws.draws.size()),
                surv(draws.draws.size()), haz(draws.draws.size()), mrls(draws.draws.size());
            for (std::size_t k = 0; k < draws.draws.size(); ++k) {
                const auto& s = draws.draws[k];
                const mrl::DistSpec spec = mrl::ExpWeibullDist(s.alpha, s.theta, s.sigma);
                dens[k].resize(grid.size());
                surv[k].resize(grid.size());
                haz[k].resize(grid.size());
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    const auto core = mrl::eval_core(spec, grid[j]);
                    dens[k][j] = core.density;
                    surv[k][j] = core.survival;
                    haz[k][j] = core.hazard;
                }
                mrls[k] = mrl::ew_mrl_curve(s, grid);
            }
            write_band_csv(base.string() + "_density.csv",
                           mrl::pointwise_bands(grid, dens, band_level));
            write_band_csv(base.string() + "_survival.csv",
                           mrl::pointwise_bands(grid, surv, band_level));
            write_band_csv(base.string() + "_hazard.csv",
                           mrl::pointwise_bands(grid, haz, band_level));
            write_band_csv(base.string() + "_mrl.csv",
                           mrl::pointwise_bands(grid, mrls, mrl_band_level));
            summary["groups"].push_back(json{{"name", name},
                                             {"n", d.size()},
                                             {"seed", c.seed},
                                             {"prior", prior_json},
                                             {"accept_rate", draws.accept_rate},
                                             {"degenerate_proposal", draws.degenerate_proposal}});
            ++g;
        }
    } else {
        throw CLI::ValidationError("unknown model: " + model);
    }

    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start);
    summary["runtime_seconds"] = elapsed.count();
    write_text_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    std::cout << "fit complete: " << out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: compare
// ---------------------------------------------------------------------------

int cmd_compare(const std::string& data_path, const std::string& out_dir,
                mrl::ChainConfig chain_config, const PriorFlags& prior_flags,
                const std::string& ew_quantile_probs, mrl::EwConfig ew_config) {
    const auto t_start = std::chrono::steady_clock::now();
    const auto groups = mrl::load_dataset(data_path);
    fs::create_directories(out_dir);

    json summary;
    summary["command"] = "compare";
    summary["data"] = data_path;
    summary["seed"] = chain_config.seed;
    summary["k_grid"] = mrl::default_k_grid();
    summary["groups"] = json::array();

    std::string table = "group,model,k,d\n";
    const auto k_grid = mrl::default_k_grid();
    std::size_t g = 0;
    for (const auto& [name, d] : groups) {
        // gamma mixture side
        const auto priors = resolve_priors(prior_flags, d);
        mrl::ChainConfig cc = chain_config;
        cc.seed = group_seed(chain_config.seed, g, 1);
        const auto chain = mrl::run_chain(d, priors, cc);
        mrl::RngStream rep_rng(group_seed(chain_config.seed, g, 4));
        const auto dpmm_reps = mrl::gg_replicates_dpmm(chain, d.size(), rep_rng);
        const auto dpmm_result = mrl::gelfand_ghosh(dpmm_reps, d.time, k_grid);

        // exponentiated Weibull side, priors from the data quantiles
        const auto probs = parse_number_list(ew_quantile_probs);
        std::vector<double> sorted = d.time;
        std::sort(sorted.begin(), sorted.end());
        const std::array<double, 3> p{probs[0], probs[1], probs[2]};
        const std::array<double, 3> q{mrl::quantile_interpolated(sorted, p[0]),
                                      mrl::quantile_interpolated(sorted, p[1]),
                                      mrl::quantile_interpolated(sorted, p[2])};
        const auto sol = mrl::ew_prior_from_quantiles(p, q, true);
        mrl::EwConfig ec = ew_config;
        ec.seed = group_seed(ew_config.seed, g, 3);
        const auto ew = mrl::fit_exp_weibull(d, sol.means, ec);
        mrl::RngStream ew_rep_rng(group_seed(chain_config.seed, g, 5));
        const auto ew_reps = mrl::gg_replicates_ew(ew, d.size(), ew_rep_rng);
        const auto ew_result = mrl::gelfand_ghosh(ew_reps, d.time, k_grid);

        auto emit = [&](const std::string& model, const mrl::ComparisonResult& r) {
            for (std::size_t i = 0; i < r.k_grid.size(); ++i)
                table += name + "," + model + "," + mrl::format_double(r.k_grid[i]) + "," +
                         mrl::format_double(r.d_values[i]) + "\n";
            table += name + "," + model + ",inf," + mrl::format_double(r.d_infinity) + "\n";
        };
        emit("dpmm", dpmm_result);
        emit("exp_weibull", ew_result);

        summary["groups"].push_back(
            json{{"name", name},
                 {"n", d.size()},
                 {"dpmm", {{"G", dpmm_result.goodness}, {"P", dpmm_result.penalty}}},
                 {"exp_weibull", {{"G", ew_result.goodness}, {"P", ew_result.penalty}}},
                 {"ew_prior_means", {sol.means.a_alpha, sol.means.a_theta, sol.means.a_sigma}}});
        ++g;
    }
    write_text_file(fs::path(out_dir) / "dk_table.csv", table);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start);
    summary["runtime_seconds"] = elapsed.count();
    write_text_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    std::cout << "comparison complete: " << out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: catalog
// ---------------------------------------------------------------------------

int cmd_catalog(const std::string& dist_text, double grid_min, double grid_max,
                std::size_t grid_points, const std::string& out_path) {
    const mrl::DistSpec dist = mrl::parse_dist(dist_text);
    const mrl::Grid grid = mrl::Grid::log_spaced(grid_min, grid_max, grid_points);
    const auto shape = mrl::classify_mrl_shape(dist);

    const bool mrl_defined = shape != mrl::ShapeLabel::UNDEFINED;
    std::string buf = "t,density,survival,hazard,mrl\n";
    for (double t : grid.points) {
        const auto core = mrl::eval_core(dist, t);
        buf += mrl::format_double(t);
        buf += ',';
        buf += mrl::format_double(core.density);
        buf += ',';
        buf += mrl::format_double(core.survival);
        buf += ',';
        buf += mrl::format_double(core.hazard);
        buf += ',';
        buf += mrl_defined ? mrl::format_double(mrl::parametric_mrl(dist, t)) : std::string("nan");
        buf += '\n';
    }
    buf += std::string("# shape=") + mrl::to_string(shape) + "\n";
    if (out_path.empty())
        std::cout << buf;
    else
        write_text_file(out_path, buf);
    std::cout << "shape: " << mrl::to_string(shape) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: elicit
// ---------------------------------------------------------------------------

int cmd_elicit(double center, double range, double q_e, double q_v, double a_alpha,
               double b_alpha, const std::string& out_path) {
    const auto h = mrl::elicit_hyperparameters(center, range, q_e, q_v, a_alpha, b_alpha);
    json out = priors_to_json(h);
    out["inputs"] = {{"center", center}, {"range", range}, {"q_e", q_e}, {"q_v", q_v}};
    out["prior_mean_approx"] = mrl::prior_mean_approx(h.a_mu, h.b_mu, h.b_sigma, h.a_sigma);
    out["prior_variance_approx"] =
        mrl::prior_variance_approx(h.a_mu, h.b_mu, h.b_sigma, h.a_sigma);
    const std::string text = out.dump(2) + "\n";
    if (!out_path.empty()) write_text_file(out_path, text);
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian mean residual life toolkit"};
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "draw survival data from a gamma mixture");
    std::string sim_preset, sim_components, sim_group, sim_out = "data.csv";
    int sim_n = 0;
    double sim_censor_time = 0.0, sim_censor_rate = 0.0;
    std::uint64_t sim_seed = 42;
    bool sim_append = false;
    sim->add_option("--preset", sim_preset, "built-in mixture: sim1 or sim2");
    sim->add_option("--components", sim_components, "custom mixture as w:shape:rate,...");
    sim->add_option("--n", sim_n, "sample size (presets default to 200 for sim1, 100 for sim2)");
    sim->add_option("--censor-time", sim_censor_time, "fixed right-censoring time");
    sim->add_option("--censor-exp-rate", sim_censor_rate, "competing exponential censoring rate");
    sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
    sim->add_option("--group", sim_group, "group label (default all)");
    sim->add_option("--out", sim_out, "output CSV")->capture_default_str();
    sim->add_flag("--append", sim_append, "append rows to an existing CSV");

    // ---- shared fit flags ----
    std::string fit_data, fit_model = "dpmm", fit_out = "run";
    mrl::ChainConfig chain_config;
    PriorFlags prior_flags;
    std::string ew_prior_means, ew_quantile_probs = "0.1,0.5,0.9";
    mrl::EwConfig ew_config;
    double grid_min = 0.0, grid_max = 0.0;
    std::size_t grid_points = 512;
    double band_level = 0.95, mrl_band_level = 0.8;
    std::string diff_times;

    auto add_sampler_flags = [&](CLI::App* cmd) {
        cmd->add_option("--L", chain_config.truncation, "mixture truncation level")
            ->capture_default_str();
        cmd->add_option("--burn-in", chain_config.burn_in, "burn-in sweeps")
            ->capture_default_str();
        cmd->add_option("--thin", chain_config.thin, "thinning interval")->capture_default_str();
        cmd->add_option("--n-save", chain_config.n_save, "retained draws")
            ->capture_default_str();
        cmd->add_option("--pilot-iters", chain_config.pilot_iters,
                        "pilot sweeps for proposal adaptation")
            ->capture_default_str();
        cmd->add_option("--proposal-c", chain_config.proposal_c,
                        "proposal covariance multiplier (> 1)")
            ->capture_default_str();
        cmd->add_option("--survival-floor", chain_config.survival_floor,
                        "mrl reporting floor on the mixture survival")
            ->capture_default_str();
        cmd->add_option("--seed", chain_config.seed, "random seed")->capture_default_str();
        cmd->add_option("--a-mu", prior_flags.a_mu, "baseline prior mean (two values)")
            ->expected(2);
        cmd->add_option("--b-mu", prior_flags.b_mu, "diagonal of B_mu");
        cmd->add_option("--b-sigma", prior_flags.b_sigma, "diagonal of B_Sigma");
        cmd->add_option("--a-sigma", prior_flags.a_sigma, "inverse Wishart df")
            ->capture_default_str();
        cmd->add_option("--a-alpha", prior_flags.a_alpha, "DP precision prior shape")
            ->capture_default_str();
        cmd->add_option("--b-alpha", prior_flags.b_alpha, "DP precision prior rate")
            ->capture_default_str();
        cmd->add_option("--elicit-center", prior_flags.elicit_center,
                        "elicitation midpoint (default: data midrange)");
        cmd->add_option("--elicit-range", prior_flags.elicit_range,
                        "elicitation range (default: data range)");
        cmd->add_option("--q-e", prior_flags.q_e, "mean fraction for exp(a_mu1 - a_mu2)")
            ->capture_default_str();
        cmd->add_option("--q-v", prior_flags.q_v, "variance fraction for exp(a_mu1 - 2 a_mu2)")
            ->capture_default_str();
        cmd->add_option("--ew-burn-in", ew_config.burn_in, "EW burn-in")->capture_default_str();
        cmd->add_option("--ew-thin", ew_config.thin, "EW thinning")->capture_default_str();
        cmd->add_option("--ew-n-save", ew_config.n_save, "EW retained draws")
            ->capture_default_str();
        cmd->add_option("--ew-proposal-sd", ew_config.proposal_sd,
                        "EW log-scale proposal sd")
            ->capture_default_str();
        cmd->add_option("--ew-quantile-probs", ew_quantile_probs,
                        "probabilities for the EW prior quantile system")
            ->capture_default_str();
    };

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "posterior simulation for one or more groups");
    fit->add_option("--data", fit_data, "input CSV (time,status[,group])")->required();
    fit->add_option("--model", fit_model, "dpmm or exp_weibull")->capture_default_str();
    fit->add_option("--out", fit_out, "output directory")->capture_default_str();
    add_sampler_flags(fit);
    fit->add_option("--ew-prior-means", ew_prior_means,
                    "explicit EW prior means a_alpha,a_theta,a_sigma");
    fit->add_option("--grid-min", grid_min, "grid lower end (default data-driven)");
    fit->add_option("--grid-max", grid_max, "grid upper end (default data-driven)");
    fit->add_option("--grid-points", grid_points, "grid size")->capture_default_str();
    fit->add_option("--band-level", band_level, "interval level for density/survival/hazard")
        ->capture_default_str();
    fit->add_option("--mrl-band-level", mrl_band_level, "interval level for the mrl bands")
        ->capture_default_str();
    fit->add_option("--diff-times", diff_times,
                    "comma list of times for two-group mrl difference samples");

    // ---- compare ----
    auto* cmp = app.add_subcommand("compare",
                                   "posterior predictive loss: gamma mixture vs exp. Weibull");
    std::string cmp_data, cmp_out = "comparison";
    cmp->add_option("--data", cmp_data, "input CSV (time,status[,group])")->required();
    cmp->add_option("--out", cmp_out, "output directory")->capture_default_str();
    add_sampler_flags(cmp);

    // ---- catalog ----
    auto* cat = app.add_subcommand("catalog", "tabulate density/survival/hazard/mrl + shape");
    std::string cat_dist, cat_out;
    double cat_min = 0.01, cat_max = 10.0;
    std::size_t cat_points = 100;
    cat->add_option("--dist", cat_dist,
                    "distribution, e.g. gamma:2,1 weibull:1.5,2 lognormal:0,1 "
                    "loglogistic:2,1 gompertz:1,1 expweibull:2,5,2 linearmrl:0.5,2")
        ->required();
    cat->add_option("--grid-min", cat_min, "grid lower end")->capture_default_str();
    cat->add_option("--grid-max", cat_max, "grid upper end")->capture_default_str();
    cat->add_option("--grid-points", cat_points, "grid size")->capture_default_str();
    cat->add_option("--out", cat_out, "output CSV (default stdout)");

    // ---- elicit ----
    auto* eli = app.add_subcommand("elicit", "hyperparameters from a midpoint and range");
    double eli_center = 0.0, eli_range = 0.0, eli_qe = 0.6, eli_qv = 0.025;
    double eli_a_alpha = 2.0, eli_b_alpha = 1.0;
    std::string eli_out;
    eli->add_option("--center", eli_center, "population midpoint")->required();
    eli->add_option("--range", eli_range, "population range")->required();
    eli->add_option("--q-e", eli_qe, "mean fraction")->capture_default_str();
    eli->add_option("--q-v", eli_qv, "variance fraction")->capture_default_str();
    eli->add_option("--a-alpha", eli_a_alpha, "DP precision prior shape")->capture_default_str();
    eli->add_option("--b-alpha", eli_b_alpha, "DP precision prior rate")->capture_default_str();
    eli->add_option("--out", eli_out, "also write the JSON here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_preset, sim_components, sim_n, sim_censor_time,
                                sim_censor_rate, sim_seed, sim_group, sim_out, sim_append);
        if (fit->parsed())
            return cmd_fit(fit_data, fit_model, fit_out, chain_config, prior_flags,
                           ew_prior_means, ew_quantile_probs, ew_config, grid_min, grid_max,
                           grid_points, band_level, mrl_band_level, diff_times);
        if (cmp->parsed())
            return cmd_compare(cmp_data, cmp_out, chain_config, prior_flags, ew_quantile_probs,
                               ew_config);
        if (cat->parsed())
            return cmd_catalog(cat_dist, cat_min, cat_max, cat_points, cat_out);
        if (eli->parsed())
            return cmd_elicit(eli_center, eli_range, eli_qe, eli_qv, eli_a_alpha, eli_b_alpha,
                              eli_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
