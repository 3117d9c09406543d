#include "tdf/serialize.hpp"

#include <fstream>
#include <sstream>

namespace tdf {

using nlohmann::json;

json kou_params_to_json(const KouParams& p) {
    return json{{"mu", p.mu},     {"sigma", p.sigma}, {"lambda", p.lambda},
                {"p_up", p.p_up}, {"eta1", p.eta1},   {"eta2", p.eta2},
                {"r", p.r},       {"dt_months", p.dt_months}};
}

KouParams kou_params_from_json(const json& j) {
    try {
        KouParams p;
        p.mu = j.at("mu").get<double>();
        p.sigma = j.at("sigma").get<double>();
        p.lambda = j.at("lambda").get<double>();
        p.p_up = j.at("p_up").get<double>();
        p.eta1 = j.at("eta1").get<double>();
        p.eta2 = j.at("eta2").get<double>();
        p.r = j.at("r").get<double>();
        p.dt_months = j.value("dt_months", 1.0);
        p.validate();
        return p;
    } catch (const json::exception& e) {
        raise(Errc::bad_config, std::string("bad params JSON: ") + e.what());
    }
}

KouParams load_kou_params(const std::string& path) {
    try {
        return kou_params_from_json(json::parse(read_text_file(path)));
    } catch (const json::exception& e) {
        raise(Errc::io_error, path + ": " + e.what());
    }
}

json scenario_to_json(const Scenario& s) {
    json j{{"T", s.horizon_years}, {"W0", s.initial_wealth}, {"c", s.annual_contribution}};
    if (s.rebalance_interval != 1.0) j["rebalance_interval"] = s.rebalance_interval;
    if (!s.contribution_times.empty()) j["contribution_times"] = s.contribution_times;
    return j;
}

Scenario scenario_from_json(const json& j) {
    try {
        Scenario s;
        s.horizon_years = j.at("T").get<int>();
        s.initial_wealth = j.at("W0").get<double>();
        s.annual_contribution = j.at("c").get<double>();
        s.rebalance_interval = j.value("rebalance_interval", 1.0);
        if (j.contains("contribution_times"))
            s.contribution_times = j.at("contribution_times").get<std::vector<int>>();
        s.validate();
        return s;
    } catch (const json::exception& e) {
        raise(Errc::bad_config, std::string("bad scenario JSON: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    try {
        return scenario_from_json(json::parse(read_text_file(path)));
    } catch (const json::exception& e) {
        raise(Errc::io_error, path + ": " + e.what());
    }
}

json strategy_to_json(const Strategy& s) {
    if (const auto* c = std::get_if<ConstantStrategy>(&s)) return json{{"constant", c->p}};
    if (const auto* g = std::get_if<GlideStrategy>(&s)) return json{{"glide", g->fractions}};
    return json{{"adaptive", std::get<AdaptiveStrategyRef>(s).policy_path}};
}

Strategy strategy_from_json(const json& j) {
    try {
        if (j.contains("constant")) return ConstantStrategy{j.at("constant").get<double>()};
        if (j.contains("glide"))
            return GlideStrategy{j.at("glide").get<std::vector<double>>()};
        if (j.contains("adaptive"))
            return AdaptiveStrategyRef{j.at("adaptive").get<std::string>()};
    } catch (const json::exception& e) {
        raise(Errc::bad_config, std::string("bad strategy JSON: ") + e.what());
    }
    raise(Errc::bad_config, "strategy JSON must have a constant/glide/adaptive key");
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string hash_file_hex(const std::string& path) { return hash_hex(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    out << content;
    if (!out) raise(Errc::io_error, "write failed for " + path);
}

} // namespace tdf
