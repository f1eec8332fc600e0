#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dss/sampler.hpp"

namespace dss {

struct CurveRow {
    std::vector<double> rates;  // the evaluation point, one entry per category
    BoundsResult bounds;
};

// Analytic rescaling of a sampled tree: bounds at scale * p_max for every
// scale in `scales`, without re-sampling. Rows come out sorted by scale.
std::vector<CurveRow> rescale_curve(const SampleTree& tree, const NoiseParams& p_max,
                                    std::vector<double> scales);

// Least-squares slope of log p_L against log of the first rate component over
// all rows. Throws when fewer than 3 rows or any p_L is nonpositive.
double loglog_slope(const std::vector<CurveRow>& rows);

// CSV with header p_phys_1..K,p_L,sigma_L,p_U,sigma_U,delta,p_hat; 12
// significant digits, LF line endings.
void emit_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);
std::vector<CurveRow> parse_curve_csv(std::istream& in);

struct CompareResult {
    std::vector<double> dss_eta;    // total uncertainty after each DSS shot
    std::vector<double> mc_width;   // full Wilson width after each MC shot
    BoundsResult dss_final;
    McResult mc_final;
};

// Run both samplers at the same rate point and record per-shot uncertainty
// traces.
CompareResult compare(const ProtocolGraph& protocol, const NoiseParams& noise,
                      std::uint64_t dss_shots, std::uint64_t mc_shots, Criterion criterion,
                      std::uint64_t seed, int workers = 1);

// CSV with rows sampler,shot,uncertainty.
void emit_compare_csv(std::ostream& out, const CompareResult& result);

// Fixed-format float used by every CSV/report writer (%.12g).
std::string format_value(double v);

// Log-spaced scale factors from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

}  // namespace dss
