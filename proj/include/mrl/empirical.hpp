#ifndef MRL_EMPIRICAL_HPP
#define MRL_EMPIRICAL_HPP

#include <stdexcept>
#include <vector>

namespace mrl {

// S_n(t) = #{T_i > t} / n
inline double empirical_survival(const std::vector<double>& times, double t) {
    if (times.empty()) throw std::invalid_argument("empirical_survival: empty sample");
    std::size_t count = 0;
    for (double x : times)
        if (x > t) ++count;
    return static_cast<double>(count) / static_cast<double>(times.size());
}

// Empirical mrl for an uncensored sample:
//   m_n(t) = sum_i max(T_i - t, 0) / #{T_i > t},  and 0 beyond the largest
// observation (the indicator cut at T_(n)).
inline double empirical_mrl(const std::vector<double>& times, double t) {
    if (times.empty()) throw std::invalid_argument("empirical_mrl: empty sample");
    double num = 0.0;
    std::size_t at_risk = 0;
    for (double x : times) {
        if (x > t) {
            num += x - t;
            ++at_risk;
        }
    }
    if (at_risk == 0) return 0.0;
    return num / static_cast<double>(at_risk);
}

}  // namespace mrl

#endif
