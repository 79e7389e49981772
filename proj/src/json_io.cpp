#include "islm/json_io.hpp"

#include <fstream>
#include <set>

namespace islm {

using nlohmann::json;

namespace {

void require_fields(const json& j, const char* scope, std::initializer_list<const char*> names) {
    std::set<std::string> expected(names.begin(), names.end());
    for (const auto& [key, _] : j.items())
        if (!expected.count(key))
            throw std::invalid_argument(std::string("unknown field '") + key + "' in " + scope);
    for (const auto& name : expected)
        if (!j.contains(name))
            throw std::invalid_argument(std::string("missing field '") + name + "' in " + scope);
}

double num(const json& j, const char* name) {
    const auto& v = j.at(name);
    if (!v.is_number())
        throw std::invalid_argument(std::string("field '") + name + "' must be a number");
    return v.get<double>();
}

Regime regime_from_string(const std::string& s) {
    if (s == "original_degenerate") return Regime::OriginalDegenerate;
    if (s == "kaldor_goods") return Regime::KaldorGoods;
    if (s == "three_phase_money") return Regime::ThreePhaseMoney;
    throw std::invalid_argument("unknown regime '" + s + "'");
}

FastSide fast_side_from_string(const std::string& s) {
    if (s == "goods") return FastSide::Goods;
    if (s == "money") return FastSide::Money;
    throw std::invalid_argument("unknown fast_side '" + s + "'");
}

} // namespace

ModelConfig config_from_json(const json& j) {
    require_fields(j, "config",
                   {"alpha", "beta", "epsilon", "m_s", "mp", "pi_e", "invest", "save", "demand",
                    "supply", "regime", "fast_side"});

    ModelConfig c;
    c.alpha = num(j, "alpha");
    c.beta = num(j, "beta");
    c.epsilon = num(j, "epsilon");
    c.m_s = num(j, "m_s");
    c.mp = num(j, "mp");
    c.pi_e = num(j, "pi_e");

    const json& iv = j.at("invest");
    require_fields(iv, "invest", {"i0", "a", "b", "ym", "h", "linear_slope"});
    c.invest = {num(iv, "i0"), num(iv, "a"), num(iv, "b"), num(iv, "ym"), num(iv, "h"),
                num(iv, "linear_slope")};

    const json& sv = j.at("save");
    require_fields(sv, "save", {"s0", "s", "g"});
    c.save = {num(sv, "s0"), num(sv, "s"), num(sv, "g")};

    const json& dm = j.at("demand");
    require_fields(dm, "demand", {"l", "d", "kappa_l", "p", "q"});
    c.demand = {num(dm, "l"), num(dm, "d"), num(dm, "kappa_l"), num(dm, "p"), num(dm, "q")};

    const json& sp = j.at("supply");
    require_fields(sp, "supply", {"m", "e", "kappa_m"});
    c.supply = {num(sp, "m"), num(sp, "e"), num(sp, "kappa_m")};

    c.regime = regime_from_string(j.at("regime").get<std::string>());
    c.fast_side = fast_side_from_string(j.at("fast_side").get<std::string>());
    c.validate();
    return c;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j; // nlohmann reports parse location on failure
    return config_from_json(j);
}

json config_to_json(const ModelConfig& c) {
    return json{
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"epsilon", c.epsilon},
        {"m_s", c.m_s},
        {"mp", c.mp},
        {"pi_e", c.pi_e},
        {"invest",
         {{"i0", c.invest.i0},
          {"a", c.invest.a},
          {"b", c.invest.b},
          {"ym", c.invest.ym},
          {"h", c.invest.h},
          {"linear_slope", c.invest.linear_slope}}},
        {"save", {{"s0", c.save.s0}, {"s", c.save.s}, {"g", c.save.g}}},
        {"demand",
         {{"l", c.demand.l},
          {"d", c.demand.d},
          {"kappa_l", c.demand.kappa_l},
          {"p", c.demand.p},
          {"q", c.demand.q}}},
        {"supply", {{"m", c.supply.m}, {"e", c.supply.e}, {"kappa_m", c.supply.kappa_m}}},
        {"regime", to_string(c.regime)},
        {"fast_side", to_string(c.fast_side)},
    };
}

json report_to_json(const ConditionReport& rep) {
    json viols = json::array();
    for (const auto& v : rep.violations)
        viols.push_back({{"condition", v.condition}, {"y", v.y}, {"r", v.r}, {"observed", v.observed}});
    json j{
        {"regime", to_string(rep.regime)},
        {"grid",
         {{"y_min", rep.grid.y_min},
          {"y_max", rep.grid.y_max},
          {"r_min", rep.grid.r_min},
          {"r_max", rep.grid.r_max},
          {"ny", rep.grid.ny},
          {"nr", rep.grid.nr}}},
        {"violations", viols},
        {"intersection_ok", rep.intersection_ok},
        {"passed", rep.passed()},
    };
    if (rep.kaldor_interval)
        j["kaldor_interval"] = {{"x", rep.kaldor_interval->first}, {"z", rep.kaldor_interval->second}};
    return j;
}

json equilibria_to_json(const std::vector<Equilibrium>& eqs) {
    json arr = json::array();
    for (const auto& e : eqs) {
        arr.push_back({
            {"y", e.state.y},
            {"r", e.state.r},
            {"eig1", {{"re", e.eigs.first.real()}, {"im", e.eigs.first.imag()}}},
            {"eig2", {{"re", e.eigs.second.real()}, {"im", e.eigs.second.imag()}}},
            {"trace", e.jac.trace},
            {"det", e.jac.det},
            {"kind", to_string(e.kind)},
        });
    }
    return json{{"equilibria", arr}};
}

} // namespace islm
