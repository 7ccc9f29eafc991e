#include "config.hpp"

#include <fstream>

#include "dam/errors.hpp"

namespace damcli {

using nlohmann::json;

namespace {

const json& member(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "." + key + ": missing");
    return *it;
}

double number(const json& obj, const std::string& path, const char* key) {
    const json& v = member(obj, path, key);
    if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double dflt) {
    return obj.contains(key) ? number(obj, path, key) : dflt;
}

std::vector<double> numbers(const json& obj, const std::string& path, const char* key) {
    const json& v = member(obj, path, key);
    if (!v.is_array()) throw ConfigError(path + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(path + "." + key + ": expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string text(const json& obj, const std::string& path, const char* key) {
    const json& v = member(obj, path, key);
    if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return v.get<std::string>();
}

// Runs a constructor and turns invariant violations into schema errors at path.
template <class F>
auto build(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const dam::DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

dam::BatchDistribution parse_batch(const json& b, const std::string& path) {
    std::string kind = text(b, path, "kind");
    return build(path, [&] {
        if (kind == "single") return dam::BatchDistribution::single();
        if (kind == "geometric") return dam::BatchDistribution::geometric(number(b, path, "q"));
        if (kind == "explicit") return dam::BatchDistribution::explicit_law(numbers(b, path, "probs"));
        throw ConfigError(path + ".kind: expected single, geometric or explicit");
    });
}

dam::ServiceDistribution parse_service(const json& s, const std::string& path) {
    std::string fam = text(s, path, "family");
    return build(path, [&] {
        if (fam == "deterministic") return dam::ServiceDistribution::deterministic(number(s, path, "d"));
        if (fam == "exponential") return dam::ServiceDistribution::exponential(number(s, path, "rate"));
        if (fam == "erlang") {
            double k = number(s, path, "k");
            if (k != std::floor(k) || k < 1) throw ConfigError(path + ".k: expected a positive integer");
            return dam::ServiceDistribution::erlang(int(k), number(s, path, "rate"));
        }
        if (fam == "hyperexponential")
            return dam::ServiceDistribution::hyperexponential(numbers(s, path, "weights"), numbers(s, path, "rates"));
        throw ConfigError(path + ".family: expected deterministic, exponential, erlang or hyperexponential");
    });
}

dam::CostProfile parse_costs(const json& c, const std::string& path) {
    std::string kind = text(c, path, "kind");
    return build(path, [&] {
        if (kind == "linear") return dam::CostProfile::linear(number(c, path, "top"), number(c, path, "bottom"));
        if (kind == "explicit") return dam::CostProfile::explicit_values(numbers(c, path, "values"));
        throw ConfigError(path + ".kind: expected linear or explicit");
    });
}

} // namespace

dam::HeavyTrafficParams RunConfig::heavy_params() const {
    if (heavy) return *heavy;
    if (!model) throw ConfigError("heavy_traffic: missing (and no model block to derive it from)");
    return dam::HeavyTrafficParams::from_model(*model);
}

const dam::DamModel& RunConfig::require_model() const {
    if (!model) throw ConfigError("model: missing");
    return *model;
}

double RunConfig::opt_number(const char* key, double dflt) const { return number_or(options, "command", key, dflt); }

std::string RunConfig::opt_string(const char* key, const std::string& dflt) const {
    return options.contains(key) ? text(options, "command", key) : dflt;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("top level: expected an object");
    RunConfig cfg;
    cfg.raw = doc;

    const json& cmd = member(doc, "", "command");
    if (cmd.is_string()) {
        cfg.command = cmd.get<std::string>();
        cfg.options = json::object();
    } else {
        cfg.command = text(cmd, "command", "name");
        cfg.options = cmd;
    }
    if (doc.contains("output")) cfg.output = text(doc, "", "output");

    if (doc.contains("model")) {
        const json& m = doc["model"];
        dam::DamModel model;
        model.lambda = number(m, "model", "lambda");
        model.batch = doc["model"].contains("batch") ? parse_batch(m["batch"], "model.batch") : dam::BatchDistribution();
        model.service1 = parse_service(member(m, "model", "service1"), "model.service1");
        model.service2 = parse_service(member(m, "model", "service2"), "model.service2");
        double L = number(m, "model", "L");
        if (L < 1 || L != std::floor(L)) throw ConfigError("model.L: expected a positive integer");
        model.L = std::size_t(L);
        model.j1 = number_or(m, "model", "j1", 1.0);
        model.j2 = number_or(m, "model", "j2", 1.0);
        if (m.contains("costs")) model.costs = parse_costs(m["costs"], "model.costs");
        build("model", [&] {
            model.validate();
            return 0;
        });
        cfg.model = model;
        cfg.costs = model.costs;
        cfg.j1 = model.j1;
        cfg.j2 = model.j2;
    }

    if (doc.contains("heavy_traffic")) {
        const json& h = doc["heavy_traffic"];
        const std::string p = "heavy_traffic";
        dam::HeavyTrafficParams hp;
        hp.Es = number(h, p, "Es");
        hp.Es2 = number(h, p, "Es2");
        hp.rho12 = number(h, p, "rho12");
        hp.rho2 = number(h, p, "rho2");
        cfg.heavy = hp;
        if (h.contains("costs")) cfg.costs = parse_costs(h["costs"], p + ".costs");
        cfg.j1 = number_or(h, p, "j1", cfg.j1);
        cfg.j2 = number_or(h, p, "j2", cfg.j2);
    }
    if (!cfg.model && !cfg.heavy) throw ConfigError("model: missing");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

} // namespace damcli
