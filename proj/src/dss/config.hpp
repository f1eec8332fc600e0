#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dss/noise.hpp"

namespace dss {

// Run configuration shared by the CLI subcommands. Files come in two
// renderings: the plain-text key/value format with nested noise blocks, and
// an equivalent JSON object (detected by a leading '{').
struct RunConfig {
    std::string protocol = "ghz";       // builtin name or protocol file path
    std::string criterion = "binomial";
    std::uint64_t shots = 1000;
    double eta_max = 0.0;               // <= 0 disables the uncertainty target
    std::uint64_t seed = 1;
    int workers = 1;
    bool prohibit_zero = false;
    std::vector<double> pmax;           // per-category sampling rates
    std::vector<NoiseCategory> noise_categories;  // empty: derived from pmax arity
    std::vector<double> grid;           // scale factors for curve evaluation
    std::string out;

    // Noise partition: explicit categories when configured, otherwise the
    // single- or two-parameter default depending on how many rates were given.
    NoiseParams noise() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_json(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace dss
