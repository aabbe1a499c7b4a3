#include "lmem/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lmem {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

} // namespace

void PhysicalParams::validate() const {
    require_positive(coupling_g, "coupling_g");
    require_positive(density_N, "density_N");
    require_positive(rabi_omega_abs, "rabi_omega_abs");
    require_positive(length_L, "length_L");
    require_positive(gamma, "gamma");
    require_positive(k_signal, "k_signal");
    require_positive(area_S, "area_S");
    require_positive(c_light, "c_light");
}

void DimensionlessConfig::validate() const {
    require_positive(L_tilde, "L_tilde");
    require_positive(Tw_tilde, "Tw_tilde");
    require_positive(Tr_tilde, "Tr_tilde");
    require_positive(p_coeff, "p_coeff");
    if (nt < 2) throw std::invalid_argument("nt must be >= 2");
    if (nz < 2) throw std::invalid_argument("nz must be >= 2");
}

DimensionlessConfig to_dimensionless(const PhysicalParams& params, double Tw_seconds,
                                     double Tr_seconds) {
    params.validate();
    require_positive(Tw_seconds, "Tw_seconds");
    require_positive(Tr_seconds, "Tr_seconds");
    const double omega = params.rabi_omega_abs;
    DimensionlessConfig config;
    config.L_tilde = 2.0 * params.coupling_g * params.coupling_g * params.density_N *
                     params.length_L / omega;
    config.Tw_tilde = omega * Tw_seconds;
    config.Tr_tilde = omega * Tr_seconds;
    config.p_coeff = params.coupling_g * params.density_N / omega;
    config.validate();
    return config;
}

DimensionalWindows from_dimensionless(const DimensionlessConfig& config,
                                      const PhysicalParams& params) {
    params.validate();
    config.validate();
    const double omega = params.rabi_omega_abs;
    DimensionalWindows out;
    out.Tw_seconds = config.Tw_tilde / omega;
    out.Tr_seconds = config.Tr_tilde / omega;
    out.length_L = config.L_tilde * omega /
                   (2.0 * params.coupling_g * params.coupling_g * params.density_N);
    return out;
}

RegimeReport validate_regime(const PhysicalParams& params, double T_seconds) {
    params.validate();
    require_positive(T_seconds, "T_seconds");
    RegimeReport report;
    report.gamma_T = params.gamma * T_seconds;
    report.transit_ratio = params.length_L / (params.c_light * T_seconds);
    report.pass = report.gamma_T <= regime_margin && report.transit_ratio <= regime_margin;
    return report;
}

PhysicalParams load_physical_params_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("parameter JSON malformed: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("parameter JSON must be an object");

    static const std::set<std::string> known = {
        "coupling_g", "density_N", "rabi_omega_abs", "length_L",
        "gamma",      "k_signal",  "area_S",         "c_light"};
    for (const auto& item : doc.items()) {
        if (!known.count(item.key()))
            throw std::invalid_argument("unknown parameter key: " + item.key());
        if (!item.value().is_number())
            throw std::invalid_argument("parameter " + item.key() + " must be a number");
    }
    auto get = [&](const char* key) -> double {
        if (!doc.contains(key))
            throw std::invalid_argument(std::string("missing parameter key: ") + key);
        return doc[key].get<double>();
    };
    PhysicalParams params;
    params.coupling_g = get("coupling_g");
    params.density_N = get("density_N");
    params.rabi_omega_abs = get("rabi_omega_abs");
    params.length_L = get("length_L");
    params.gamma = get("gamma");
    params.k_signal = get("k_signal");
    params.area_S = get("area_S");
    if (doc.contains("c_light")) params.c_light = doc["c_light"].get<double>();
    params.validate();
    return params;
}

PhysicalParams load_physical_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open parameter file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_physical_params_json(buf.str());
}

} // namespace lmem
