#ifndef MRL_SIMULATE_HPP
#define MRL_SIMULATE_HPP

// Gamma-mixture data generators with optional right censoring, plus the two
// built-in simulation presets. The second gamma argument is always a RATE.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrl/gibbs.hpp"
#include "mrl/rng.hpp"

namespace mrl {

struct SimComponent {
    double weight;
    double shape;
    double rate;
};

struct CensorScheme {
    enum class Kind { none, fixed_time, exp_competing };
    Kind kind = Kind::none;
    double value = 0.0;  // censor time, or the rate of the competing exponential
};

struct SimSpec {
    std::vector<SimComponent> components;
    int n = 0;
    CensorScheme censoring;
    std::uint64_t seed = 42;
    std::string group = "all";

    void validate() const {
        if (components.empty() || n < 1) throw std::invalid_argument("SimSpec: empty spec");
        double total = 0.0;
        for (const auto& c : components) {
            if (!(c.weight >= 0.0) || !(c.shape > 0.0) || !(c.rate > 0.0))
                throw std::invalid_argument("SimSpec: invalid component");
            total += c.weight;
        }
        if (std::fabs(total - 1.0) > 1e-12)
            throw std::invalid_argument("SimSpec: weights must sum to 1");
        if (censoring.kind != CensorScheme::Kind::none && !(censoring.value > 0.0))
            throw std::invalid_argument("SimSpec: censoring parameter must be > 0");
    }
};

inline Dataset simulate(const SimSpec& spec) {
    spec.validate();
    RngStream rng(spec.seed);
    std::vector<double> weights;
    weights.reserve(spec.components.size());
    for (const auto& c : spec.components) weights.push_back(c.weight);

    Dataset data;
    data.group = spec.group;
    data.time.reserve(static_cast<std::size_t>(spec.n));
    data.censored.reserve(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) {
        const int k = rng.categorical(weights);
        double t = rng.gamma(spec.components[static_cast<std::size_t>(k)].shape,
                             spec.components[static_cast<std::size_t>(k)].rate);
        std::uint8_t censored = 0;
        switch (spec.censoring.kind) {
            case CensorScheme::Kind::none:
                break;
            case CensorScheme::Kind::fixed_time:
                if (t > spec.censoring.value) {
                    t = spec.censoring.value;
                    censored = 1;
                }
                break;
            case CensorScheme::Kind::exp_competing: {
                const double c = rng.exponential(spec.censoring.value);
                if (t > c) {
                    t = c;
                    censored = 1;
                }
                break;
            }
        }
        data.time.push_back(t);
        data.censored.push_back(censored);
    }
    return data;
}

// 0.35 G(10, 0.5) + 0.4 G(20, 1) + 0.15 G(30, 5) + 0.1 G(40, 8), n = 200
inline SimSpec sim1_preset(std::uint64_t seed = 42, int n = 200) {
    SimSpec spec;
    spec.components = {{0.35, 10.0, 0.5}, {0.40, 20.0, 1.0}, {0.15, 30.0, 5.0}, {0.10, 40.0, 8.0}};
    spec.n = n;
    spec.seed = seed;
    return spec;
}

// 0.3 G(15, 0.2) + 0.25 G(12, 0.5) + 0.35 G(8, 2) + 0.1 G(3, 6), n = 100
inline SimSpec sim2_preset(std::uint64_t seed = 42, int n = 100) {
    SimSpec spec;
    spec.components = {{0.30, 15.0, 0.2}, {0.25, 12.0, 0.5}, {0.35, 8.0, 2.0}, {0.10, 3.0, 6.0}};
    spec.n = n;
    spec.seed = seed;
    return spec;
}

// the presets' population mixtures, for truth overlays in tests
inline MixtureParams preset_truth(const SimSpec& spec) {
    MixtureParams params;
    for (const auto& c : spec.components) {
        params.weights.push_back(c.weight);
        params.atoms.push_back(Vec2{std::log(c.shape), std::log(c.rate)});
    }
    return params;
}

}  // namespace mrl

#endif
