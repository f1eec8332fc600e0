#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace dss {

// Bernoulli rate estimated from counts. `frozen_zero` marks rates that are
// identically zero by construction (deterministic fault-free branching), so
// their variance is forced to zero no matter the trial count.
struct RateEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    bool frozen_zero = false;

    double q() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
};

// C(n,w) p^w (1-p)^(n-w), evaluated in log space so n up to ~1e4 is safe.
double binomial_factor(std::uint64_t n, std::uint64_t w, double p);

// Product of per-category binomial factors.
double multi_binomial_factor(std::span<const std::uint64_t> counts,
                             std::span<const std::uint32_t> weights,
                             std::span<const double> rates);

// 1 - sum_{w<=w_max} A_w, clamped to [0,1].
double single_circuit_cutoff(std::uint64_t n, std::uint64_t w_max, double p);

// Variance of a branching rate per the Wilson score interval,
// (N q (1-q) + 1/4) / (1+N)^2. Zero for frozen estimates.
double wilson_variance(const RateEstimate& est);

// The two roots of the Wilson score interval at z standard deviations.
std::pair<double, double> wilson_interval(std::uint64_t m, std::uint64_t n, double z);

// Symmetric Wilson half-width (p_plus - p_minus)/2 at z = 1.
double wilson_halfwidth(std::uint64_t m, std::uint64_t n);

// Wald standard error sqrt(p(1-p)/N).
double wald_error(double p_hat, std::uint64_t n);

}  // namespace dss
