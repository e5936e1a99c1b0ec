#include "qwi/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qwi {

namespace {

using nlohmann::json;

double number_at(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number())
        throw ConfigError("config key \"" + key + "\" must be a number");
    return v.get<double>();
}

void require_keys(const json& j, const ModelConfig& cfg,
                  std::initializer_list<const char*> needed) {
    for (const char* k : needed)
        if (!j.contains(k))
            throw ConfigError("model \"" + cfg.model_name() +
                              "\" requires config key \"" + std::string(k) + "\"");
}

} // namespace

std::string ModelConfig::model_name() const {
    switch (kind) {
    case Kind::Dirac: return "dirac";
    case Kind::DeltaDeltaPrime: return "delta-delta-prime";
    case Kind::KronigPenney: return "kronig-penney";
    }
    return "?";
}

UnitCell ModelConfig::cell() const {
    switch (kind) {
    case Kind::Dirac: return make_dirac_comb(p, L);
    case Kind::DeltaDeltaPrime: return make_delta_delta_prime_comb(p, beta_tilde, L);
    case Kind::KronigPenney: return make_kronig_penney(a, b, U_b);
    }
    throw ConfigError("unreachable model kind");
}

SemiInfiniteLattice ModelConfig::semi_infinite() const {
    if (kind != Kind::Dirac)
        throw ConfigError("surface-state analysis requires model \"dirac\"");
    if (!U_E.has_value() || !(*U_E > 0.0))
        throw ConfigError("surface-state analysis requires a positive \"U_E\"");
    return SemiInfiniteLattice{cell(), *U_E, PointInteraction{eta, 0.0}};
}

ModelConfig parse_model_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    static const std::set<std::string> known = {
        "model", "p", "beta_tilde", "a", "b", "U_b", "L", "U_E", "eta"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw ConfigError("unknown config key \"" + item.key() + "\"");

    if (!j.contains("model") || !j.at("model").is_string())
        throw ConfigError("config requires a string key \"model\"");
    const std::string model = j.at("model").get<std::string>();

    ModelConfig cfg;
    if (model == "dirac")
        cfg.kind = ModelConfig::Kind::Dirac;
    else if (model == "delta-delta-prime")
        cfg.kind = ModelConfig::Kind::DeltaDeltaPrime;
    else if (model == "kronig-penney")
        cfg.kind = ModelConfig::Kind::KronigPenney;
    else
        throw ConfigError("unknown model \"" + model + "\"");

    switch (cfg.kind) {
    case ModelConfig::Kind::Dirac:
        require_keys(j, cfg, {"p"});
        cfg.p = number_at(j, "p");
        break;
    case ModelConfig::Kind::DeltaDeltaPrime:
        require_keys(j, cfg, {"p", "beta_tilde"});
        cfg.p = number_at(j, "p");
        cfg.beta_tilde = number_at(j, "beta_tilde");
        if (!(std::abs(cfg.beta_tilde) < 1.0))
            throw ConfigError("\"beta_tilde\" must lie in (-1, 1)");
        break;
    case ModelConfig::Kind::KronigPenney:
        require_keys(j, cfg, {"a", "b", "U_b"});
        cfg.a = number_at(j, "a");
        cfg.b = number_at(j, "b");
        cfg.U_b = number_at(j, "U_b");
        if (!(cfg.a > 0.0) || !(cfg.b > 0.0))
            throw ConfigError("\"a\" and \"b\" must be positive");
        break;
    }
    for (const char* k : {"p", "beta_tilde", "a", "b", "U_b"})
        if (j.contains(k) && !std::isfinite(number_at(j, k)))
            throw ConfigError(std::string("config key \"") + k + "\" must be finite");

    if (cfg.kind == ModelConfig::Kind::KronigPenney) {
        cfg.L = cfg.a + cfg.b;
        if (j.contains("L")) {
            const double L = number_at(j, "L");
            if (std::abs(L - cfg.L) > 1e-12 * std::max(1.0, cfg.L))
                throw ConfigError("\"L\" must equal a + b for kronig-penney");
        }
    } else if (j.contains("L")) {
        cfg.L = number_at(j, "L");
        if (!(cfg.L > 0.0)) throw ConfigError("\"L\" must be positive");
    }

    if (j.contains("U_E")) {
        cfg.U_E = number_at(j, "U_E");
        if (!(*cfg.U_E >= 0.0) || !std::isfinite(*cfg.U_E))
            throw ConfigError("\"U_E\" must be a finite non-negative number");
    }
    if (j.contains("eta")) {
        cfg.eta = number_at(j, "eta");
        if (!std::isfinite(cfg.eta))
            throw ConfigError("\"eta\" must be finite");
    }
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_config(ss.str());
}

} // namespace qwi
