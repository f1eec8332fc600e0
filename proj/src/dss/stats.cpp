#include "dss/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace dss {

static double log_choose(std::uint64_t n, std::uint64_t w) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(w) + 1.0) -
           std::lgamma(static_cast<double>(n - w) + 1.0);
}

double binomial_factor(std::uint64_t n, std::uint64_t w, double p) {
    if (w > n) throw std::invalid_argument("binomial_factor: w > n");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial_factor: p outside [0,1]");
    if (p == 0.0) return w == 0 ? 1.0 : 0.0;
    if (p == 1.0) return w == n ? 1.0 : 0.0;
    const double log_a = log_choose(n, w) + static_cast<double>(w) * std::log(p) +
                         static_cast<double>(n - w) * std::log1p(-p);
    if (log_a < -745.0) return 0.0;  // below double underflow; treat as exactly zero
    return std::exp(log_a);
}

double multi_binomial_factor(std::span<const std::uint64_t> counts,
                             std::span<const std::uint32_t> weights,
                             std::span<const double> rates) {
    if (counts.size() != weights.size() || counts.size() != rates.size())
        throw std::invalid_argument("multi_binomial_factor: length mismatch");
    double a = 1.0;
    for (std::size_t k = 0; k < counts.size(); ++k)
        a *= binomial_factor(counts[k], weights[k], rates[k]);
    return a;
}

double single_circuit_cutoff(std::uint64_t n, std::uint64_t w_max, double p) {
    double covered = 0.0;
    for (std::uint64_t w = 0; w <= w_max && w <= n; ++w) covered += binomial_factor(n, w, p);
    double delta = 1.0 - covered;
    if (delta < 0.0) delta = 0.0;
    if (delta > 1.0) delta = 1.0;
    return delta;
}

double wilson_variance(const RateEstimate& est) {
    if (est.frozen_zero) return 0.0;
    if (est.trials == 0) throw std::invalid_argument("wilson_variance: no trials on unfrozen estimate");
    const double n = static_cast<double>(est.trials);
    const double q = est.q();
    return (n * q * (1.0 - q) + 0.25) / ((1.0 + n) * (1.0 + n));
}

std::pair<double, double> wilson_interval(std::uint64_t m, std::uint64_t n, double z) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n = 0");
    const double nn = static_cast<double>(n);
    const double p_hat = static_cast<double>(m) / nn;
    const double z2 = z * z;
    const double center = p_hat + z2 / (2.0 * nn);
    const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn));
    const double scale = 1.0 / (1.0 + z2 / nn);
    return {scale * (center - half), scale * (center + half)};
}

double wilson_halfwidth(std::uint64_t m, std::uint64_t n) {
    auto [lo, hi] = wilson_interval(m, n, 1.0);
    return 0.5 * (hi - lo);
}

double wald_error(double p_hat, std::uint64_t n) {
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

}  // namespace dss
