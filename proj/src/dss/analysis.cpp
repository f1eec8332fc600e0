#include "dss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dss {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (lo <= 0.0 || hi <= 0.0 || n < 2)
        throw std::invalid_argument("log_spaced: need positive bounds and n >= 2");
    std::vector<double> out(n);
    const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
    return out;
}

std::vector<CurveRow> rescale_curve(const SampleTree& tree, const NoiseParams& p_max,
                                    std::vector<double> scales) {
    std::sort(scales.begin(), scales.end());
    const std::vector<double> base = p_max.rates();
    std::vector<CurveRow> rows;
    rows.reserve(scales.size());
    for (double scale : scales) {
        CurveRow row;
        row.rates.resize(base.size());
        for (std::size_t k = 0; k < base.size(); ++k) row.rates[k] = scale * base[k];
        row.bounds = bounds(tree, row.rates);
        rows.push_back(std::move(row));
    }
    return rows;
}

double loglog_slope(const std::vector<CurveRow>& rows) {
    if (rows.size() < 3) throw std::invalid_argument("loglog_slope: need at least 3 rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const CurveRow& row : rows) {
        if (row.rates.empty() || row.rates[0] <= 0.0 || row.bounds.p_l <= 0.0)
            throw std::invalid_argument("loglog_slope: nonpositive value in window");
        const double x = std::log(row.rates[0]);
        const double y = std::log(row.bounds.p_l);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(rows.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void emit_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
    if (rows.empty()) return;
    const std::size_t num_categories = rows.front().rates.size();
    for (std::size_t k = 0; k < num_categories; ++k) out << "p_phys_" << (k + 1) << ",";
    out << "p_L,sigma_L,p_U,sigma_U,delta,p_hat\n";
    for (const CurveRow& row : rows) {
        for (double rate : row.rates) out << format_value(rate) << ",";
        out << format_value(row.bounds.p_l) << "," << format_value(row.bounds.sigma_l) << ","
            << format_value(row.bounds.p_u) << "," << format_value(row.bounds.sigma_u) << ","
            << format_value(row.bounds.delta) << "," << format_value(row.bounds.p_hat) << "\n";
    }
}

std::vector<CurveRow> parse_curve_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) return {};
    std::size_t num_categories = 0;
    {
        std::istringstream hs(header);
        std::string column;
        while (std::getline(hs, column, ','))
            if (column.rfind("p_phys_", 0) == 0) ++num_categories;
    }
    std::vector<CurveRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(ls, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() != num_categories + 6)
            throw std::invalid_argument("parse_curve_csv: malformed row");
        CurveRow row;
        row.rates.assign(values.begin(), values.begin() + static_cast<long>(num_categories));
        row.bounds.p_l = values[num_categories + 0];
        row.bounds.sigma_l = values[num_categories + 1];
        row.bounds.p_u = values[num_categories + 2];
        row.bounds.sigma_u = values[num_categories + 3];
        row.bounds.delta = values[num_categories + 4];
        row.bounds.p_hat = values[num_categories + 5];
        row.bounds.eta = row.bounds.sigma_l + row.bounds.sigma_u + row.bounds.delta;
        rows.push_back(std::move(row));
    }
    return rows;
}

CompareResult compare(const ProtocolGraph& protocol, const NoiseParams& noise,
                      std::uint64_t dss_shots, std::uint64_t mc_shots, Criterion criterion,
                      std::uint64_t seed, int workers) {
    CompareResult result;
    DssOptions dss_options;
    dss_options.criterion = criterion;
    dss_options.stop.max_shots = dss_shots;
    dss_options.seed = seed;
    dss_options.workers = workers;
    dss_options.record_eta_trace = true;
    DssResult dss = dss_run(protocol, noise, dss_options);
    result.dss_eta = std::move(dss.eta_trace);
    result.dss_final = dss.bounds;

    McOptions mc_options;
    mc_options.shots = mc_shots;
    mc_options.seed = seed;
    mc_options.workers = workers;
    mc_options.record_width_trace = true;
    result.mc_final = mc_run(protocol, noise, mc_options);
    result.mc_width = result.mc_final.width_trace;
    result.mc_final.width_trace.clear();
    return result;
}

void emit_compare_csv(std::ostream& out, const CompareResult& result) {
    out << "sampler,shot,uncertainty\n";
    for (std::size_t i = 0; i < result.dss_eta.size(); ++i)
        out << "dss," << (i + 1) << "," << format_value(result.dss_eta[i]) << "\n";
    for (std::size_t i = 0; i < result.mc_width.size(); ++i)
        out << "mc," << (i + 1) << "," << format_value(result.mc_width[i]) << "\n";
}

}  // namespace dss
