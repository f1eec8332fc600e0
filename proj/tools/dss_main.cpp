// Command-line driver: sample protocols, rescale failure-rate curves, compare
// against direct Monte Carlo, audit fault tolerance, and run the exhaustive
// subset oracle. All outputs are deterministic for a fixed seed.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "dss/analysis.hpp"
#include "dss/config.hpp"
#include "dss/protocols.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    dss::RunConfig config;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "config file (text or JSON)");
        app->add_option("--protocol", config.protocol, "builtin protocol name or protocol file");
        app->add_option("--pmax", config.pmax, "sampling rate per noise category (repeatable)");
        app->add_option("--criterion", config.criterion, "subset choice criterion")
            ->check(CLI::IsMember({"binomial", "eru"}));
        app->add_option("--shots", config.shots, "maximum number of shots");
        app->add_option("--eta-max", config.eta_max, "target total uncertainty (0 disables)");
        app->add_option("--seed", config.seed, "master seed");
        app->add_option("--grid", config.grid, "scale factors for curve evaluation (repeatable)");
        app->add_option("--out", config.out, "output file (default stdout)");
        app->add_option("--workers", config.workers, "parallel shot workers");
        app->add_flag("--prohibit-zero", config.prohibit_zero,
                      "never draw the fault-free subset (binomial criterion)");
    }

    // Config file first, then explicit flags on top.
    void finalize(CLI::App* app) {
        if (config_path.empty()) return;
        dss::RunConfig base = dss::load_config(config_path);
        auto keep = [app](const char* flag) { return app->count(flag) > 0; };
        if (keep("--protocol")) base.protocol = config.protocol;
        if (keep("--pmax")) base.pmax = config.pmax;
        if (keep("--criterion")) base.criterion = config.criterion;
        if (keep("--shots")) base.shots = config.shots;
        if (keep("--eta-max")) base.eta_max = config.eta_max;
        if (keep("--seed")) base.seed = config.seed;
        if (keep("--grid")) base.grid = config.grid;
        if (keep("--out")) base.out = config.out;
        if (keep("--workers")) base.workers = config.workers;
        if (keep("--prohibit-zero")) base.prohibit_zero = config.prohibit_zero;
        config = base;
    }
};

std::unique_ptr<std::ostream> open_output(const std::string& path, std::ostream*& out) {
    if (path.empty()) {
        out = &std::cout;
        return nullptr;
    }
    auto file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file) throw std::runtime_error("cannot open output file " + path);
    out = file.get();
    return file;
}

dss::Criterion parse_criterion(const std::string& name) {
    return name == "eru" ? dss::Criterion::eru : dss::Criterion::binomial;
}

void print_bounds(std::ostream& out, const std::vector<double>& rates, const dss::BoundsResult& b) {
    out << "rates:";
    for (double r : rates) out << " " << dss::format_value(r);
    out << "\n";
    out << "p_L " << dss::format_value(b.p_l) << "\n";
    out << "sigma_L " << dss::format_value(b.sigma_l) << "\n";
    out << "p_U " << dss::format_value(b.p_u) << "\n";
    out << "sigma_U " << dss::format_value(b.sigma_u) << "\n";
    out << "delta " << dss::format_value(b.delta) << "\n";
    out << "eta " << dss::format_value(b.eta) << "\n";
    out << "p_hat " << dss::format_value(b.p_hat) << "\n";
}

dss::DssOptions dss_options_from(const dss::RunConfig& config) {
    dss::DssOptions options;
    options.criterion = parse_criterion(config.criterion);
    options.stop.max_shots = config.shots;
    options.stop.eta_max = config.eta_max;
    options.seed = config.seed;
    options.workers = config.workers;
    options.prohibit_zero = config.prohibit_zero;
    return options;
}

int cmd_run(const dss::RunConfig& config) {
    const dss::ProtocolGraph protocol = dss::make_protocol(config.protocol);
    const dss::NoiseParams noise = config.noise();
    const dss::DssResult result = dss::dss_run(protocol, noise, dss_options_from(config));
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
    std::ostream* out = nullptr;
    auto file = open_output(config.out, out);
    *out << "shots " << result.tree.shots() << "\n";
    print_bounds(*out, noise.rates(), result.bounds);
    result.tree.dump(*out);
    return 0;
}

int cmd_curve(const dss::RunConfig& config) {
    const dss::ProtocolGraph protocol = dss::make_protocol(config.protocol);
    const dss::NoiseParams noise = config.noise();
    const dss::DssResult result = dss::dss_run(protocol, noise, dss_options_from(config));
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
    std::vector<double> scales = config.grid;
    if (scales.empty()) scales = dss::log_spaced(1e-2, 1.0, 13);
    const auto rows = dss::rescale_curve(result.tree, noise, scales);
    std::ostream* out = nullptr;
    auto file = open_output(config.out, out);
    dss::emit_curve_csv(*out, rows);
    return 0;
}

int cmd_compare(const dss::RunConfig& config, std::uint64_t mc_shots) {
    const dss::ProtocolGraph protocol = dss::make_protocol(config.protocol);
    const dss::NoiseParams noise = config.noise();
    const dss::CompareResult result =
        dss::compare(protocol, noise, config.shots, mc_shots, parse_criterion(config.criterion),
                     config.seed, config.workers);
    std::ostream* out = nullptr;
    auto file = open_output(config.out, out);
    dss::emit_compare_csv(*out, result);
    return 0;
}

int cmd_audit(const dss::RunConfig& config) {
    const dss::ProtocolGraph protocol = dss::make_protocol(config.protocol);
    const dss::NoiseParams noise = config.noise();
    const dss::AuditResult result = dss::audit_ft(protocol, noise);
    std::ostream* out = nullptr;
    auto file = open_output(config.out, out);
    *out << "audit-ft " << protocol.name << ": fault-free "
         << (result.fault_free_ok ? "ok" : "FAILED") << ", weight-1 leaves " << result.enumerated
         << ", failures " << result.failures << (result.passed() ? " PASS" : " FAIL") << "\n";
    for (const auto& example : result.failing_examples) *out << "  failing: " << example << "\n";
    return result.passed() ? 0 : 1;
}

int cmd_oracle(const dss::RunConfig& config, std::vector<std::uint32_t> weights) {
    const dss::ProtocolGraph protocol = dss::make_protocol(config.protocol);
    const dss::NoiseParams noise = config.noise();
    if (weights.empty()) weights.assign(noise.num_categories(), 1);
    if (weights.size() != noise.num_categories())
        throw std::runtime_error("oracle: --w arity must match the noise categories");
    const dss::ExhaustiveResult result = dss::exhaustive_subset(protocol, noise, weights);
    std::ostream* out = nullptr;
    auto file = open_output(config.out, out);
    *out << "oracle " << protocol.name << " w=[";
    for (std::size_t k = 0; k < weights.size(); ++k) *out << (k ? "," : "") << weights[k];
    *out << "]\n";
    *out << "rate " << dss::format_value(result.rate) << "\n";
    *out << "placements " << dss::format_value(result.placements) << "\n";
    *out << "leaves " << result.leaves << "\n";
    *out << "failures " << result.failures << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamical subset sampling for non-deterministic QEC protocols"};
    app.require_subcommand(1);

    CommonArgs run_args, curve_args, compare_args, audit_args, oracle_args;
    std::uint64_t mc_shots = 10000;
    std::vector<std::uint32_t> oracle_weights;

    CLI::App* run = app.add_subcommand("run", "sample a protocol; emit bounds and the tree dump");
    run_args.attach(run);
    CLI::App* curve = app.add_subcommand("curve", "rescale a sampled tree over a rate grid (CSV)");
    curve_args.attach(curve);
    CLI::App* cmp = app.add_subcommand("compare", "DSS vs direct MC uncertainty traces (CSV)");
    compare_args.attach(cmp);
    cmp->add_option("--mc-shots", mc_shots, "number of direct MC shots");
    CLI::App* audit = app.add_subcommand("audit-ft", "exhaustive weight-1 fault audit");
    audit_args.attach(audit);
    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive subset failure rate");
    oracle_args.attach(oracle);
    oracle->add_option("--w", oracle_weights, "subset weight per noise category (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            run_args.finalize(run);
            return cmd_run(run_args.config);
        }
        if (curve->parsed()) {
            curve_args.finalize(curve);
            return cmd_curve(curve_args.config);
        }
        if (cmp->parsed()) {
            compare_args.finalize(cmp);
            return cmd_compare(compare_args.config, mc_shots);
        }
        if (audit->parsed()) {
            audit_args.finalize(audit);
            return cmd_audit(audit_args.config);
        }
        if (oracle->parsed()) {
            oracle_args.finalize(oracle);
            return cmd_oracle(oracle_args.config, oracle_weights);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
