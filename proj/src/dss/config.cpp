#include "dss/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dss {

NoiseParams RunConfig::noise() const {
    NoiseParams params;
    if (!noise_categories.empty()) {
        params.categories = noise_categories;
        if (!pmax.empty()) params = params.with_rates(pmax);
    } else if (pmax.size() == 2) {
        params = NoiseParams::two_parameter(pmax[0], pmax[1]);
    } else {
        params = NoiseParams::single_parameter(pmax.empty() ? 1e-3 : pmax[0]);
    }
    params.validate();
    return params;
}

namespace {

LocationKind parse_kind(const std::string& name) {
    for (std::size_t k = 0; k < kNumLocationKinds; ++k)
        if (name == location_kind_name(static_cast<LocationKind>(k)))
            return static_cast<LocationKind>(k);
    throw std::invalid_argument("config: unknown location kind '" + name + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "protocol:") {
            ls >> config.protocol;
        } else if (key == "criterion:") {
            ls >> config.criterion;
        } else if (key == "shots:") {
            ls >> config.shots;
        } else if (key == "eta_max:") {
            ls >> config.eta_max;
        } else if (key == "seed:") {
            ls >> config.seed;
        } else if (key == "workers:") {
            ls >> config.workers;
        } else if (key == "prohibit_zero:") {
            std::string v;
            ls >> v;
            config.prohibit_zero = v == "true" || v == "1";
        } else if (key == "pmax:") {
            double v;
            config.pmax.clear();
            while (ls >> v) config.pmax.push_back(v);
        } else if (key == "grid:") {
            double v;
            config.grid.clear();
            while (ls >> v) config.grid.push_back(v);
        } else if (key == "out:") {
            ls >> config.out;
        } else if (key == "noise") {
            NoiseCategory category;
            std::string bline;
            while (std::getline(in, bline)) {
                bline = trim(bline);
                if (bline == "}") break;
                std::istringstream bs(bline);
                std::string bkey;
                bs >> bkey;
                if (bkey == "category:") {
                    bs >> category.name;
                } else if (bkey == "kinds:") {
                    std::string kind;
                    while (bs >> kind) category.kinds[static_cast<std::size_t>(parse_kind(kind))] = true;
                } else if (bkey == "rate:") {
                    bs >> category.rate;
                } else if (!bkey.empty() && bkey[0] != '#') {
                    throw std::invalid_argument("config: unknown noise key '" + bkey + "'");
                }
            }
            config.noise_categories.push_back(category);
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return config;
}

RunConfig parse_config_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunConfig config;
    config.protocol = j.value("protocol", config.protocol);
    config.criterion = j.value("criterion", config.criterion);
    config.shots = j.value("shots", config.shots);
    config.eta_max = j.value("eta_max", config.eta_max);
    config.seed = j.value("seed", config.seed);
    config.workers = j.value("workers", config.workers);
    config.prohibit_zero = j.value("prohibit_zero", config.prohibit_zero);
    config.out = j.value("out", config.out);
    if (j.contains("pmax")) config.pmax = j.at("pmax").get<std::vector<double>>();
    if (j.contains("grid")) config.grid = j.at("grid").get<std::vector<double>>();
    if (j.contains("noise")) {
        for (const auto& block : j.at("noise")) {
            NoiseCategory category;
            category.name = block.value("category", std::string{});
            category.rate = block.value("rate", 0.0);
            for (const auto& kind : block.at("kinds"))
                category.kinds[static_cast<std::size_t>(parse_kind(kind.get<std::string>()))] = true;
            config.noise_categories.push_back(category);
        }
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open config file " + path);
    std::stringstream buf;
    buf << file.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_config_json(text);
    return parse_config_text(text);
}

}  // namespace dss
