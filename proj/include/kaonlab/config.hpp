// config.hpp
// Plain key=value physics configuration. Recognized keys:
//   delta_m_tau_s, tau_l_over_tau_s, eps_abs, eps_phase_deg, system_label
// Unknown keys are rejected. '#' starts a comment; blank lines are skipped.
#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kaonlab/meson.hpp"

namespace kaonlab {

struct ParamsConfig {
    double delta_m_tau_s = kaon_delta_m_tau_s;
    double tau_l_over_tau_s = kaon_tau_ratio;
    double eps_abs = 2.23e-3;
    double eps_phase_deg = 45.0;
    std::string system_label = "kaon";

    MesonParams to_params() const {
        const double phase = eps_phase_deg * std::numbers::pi / 180.0;
        const cd eps = eps_abs * cd(std::cos(phase), std::sin(phase));
        SystemLabel label = SystemLabel::custom;
        if (system_label == "kaon") label = SystemLabel::kaon;
        else if (system_label == "B") label = SystemLabel::B;
        else if (system_label == "D") label = SystemLabel::D;
        else if (system_label == "Bs") label = SystemLabel::Bs;
        else if (system_label != "custom")
            throw std::invalid_argument("config: unknown system_label '" + system_label + "'");
        return make_params(delta_m_tau_s, tau_l_over_tau_s, eps, label);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" +
                                    value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config: key '" + key + "' has trailing junk in '" +
                                    value + "'");
    return v;
}

}  // namespace detail

inline ParamsConfig parse_config(std::istream& in, ParamsConfig base = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value");
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        if (key == "delta_m_tau_s")
            base.delta_m_tau_s = detail::parse_double(key, value);
        else if (key == "tau_l_over_tau_s")
            base.tau_l_over_tau_s = detail::parse_double(key, value);
        else if (key == "eps_abs")
            base.eps_abs = detail::parse_double(key, value);
        else if (key == "eps_phase_deg")
            base.eps_phase_deg = detail::parse_double(key, value);
        else if (key == "system_label")
            base.system_label = value;
        else
            throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                        std::to_string(lineno));
    }
    return base;
}

inline ParamsConfig load_config_file(const std::string& path, ParamsConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return parse_config(in, base);
}

}  // namespace kaonlab
