// meson.hpp
// Physical constants of a neutral meson-antimeson system, quasi-spin state
// algebra over the strangeness / mass / CP bases, strangeness oscillation
// probabilities and the decay-product (Omega) inner products needed for a
// probability-conserving time evolution.
//
// Internal units: rates in Gamma_S (gamma_S == 1), times in tau_S, the mass
// difference enters as the dimensionless product delta_m * tau_S. Absolute
// masses are dropped: the common phase is fixed by the gauge m_S = 0,
// m_L = delta_m, which leaves every observable unchanged.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "kaonlab/complexmat.hpp"

namespace kaonlab {

// hbar in MeV*s (CODATA); used only by the unit-conversion helpers.
inline constexpr double hbar_mev_s = 6.582119569e-22;

// K_S lifetime in seconds and the tau_L/tau_S ratio behind the defaults.
inline constexpr double kaon_tau_s_seconds = 0.89e-10;
inline constexpr double kaon_delta_m_tau_s = 0.47;
inline constexpr double kaon_tau_ratio = 581.0;  // 5.17e-8 / 0.89e-10

enum class Basis { Strangeness, Mass, CP };
enum class Flavor { K0, K0bar };
enum class SystemLabel { kaon, B, D, Bs, custom };

inline std::string to_string(SystemLabel l) {
    switch (l) {
        case SystemLabel::kaon: return "kaon";
        case SystemLabel::B: return "B";
        case SystemLabel::D: return "D";
        case SystemLabel::Bs: return "Bs";
        default: return "custom";
    }
}

struct MesonParams {
    double delta_m = 0.0;    // m_L - m_S in Gamma_S units
    double gamma_S = 1.0;    // == 1 by convention
    double gamma_L = 0.0;
    double gamma_bar = 0.5;  // (Gamma_S + Gamma_L) / 2
    double x = 0.0;          // delta_m / gamma_bar
    cd epsilon{};            // complex CP violation parameter
    cd p{1.0};               // 1 + epsilon
    cd q{1.0};               // 1 - epsilon
    double norm_N = 0.0;     // N, with N^2 = |p|^2 + |q|^2
    SystemLabel label = SystemLabel::custom;
};

inline MesonParams make_params(double delta_m_tau_s, double tau_l_over_tau_s, cd epsilon,
                               SystemLabel label = SystemLabel::custom) {
    if (!(delta_m_tau_s >= 0.0))
        throw std::invalid_argument("make_params: delta_m * tau_S must be >= 0");
    if (!(tau_l_over_tau_s >= 1.0))
        throw std::invalid_argument("make_params: tau_L / tau_S must be >= 1");

    MesonParams P;
    P.delta_m = delta_m_tau_s;
    P.gamma_S = 1.0;
    P.gamma_L = 1.0 / tau_l_over_tau_s;  // 0 for tau_l_over_tau_s == inf
    P.gamma_bar = 0.5 * (P.gamma_S + P.gamma_L);
    P.x = P.delta_m / P.gamma_bar;
    P.epsilon = epsilon;
    P.p = 1.0 + epsilon;
    P.q = 1.0 - epsilon;
    P.norm_N = std::sqrt(std::norm(P.p) + std::norm(P.q));
    P.label = label;
    return P;
}

// |eps| = 2.23e-3 at 45 degrees. The magnitude is an external input (the
// measured order is 1e-3 with phase near 45 degrees); override via config.
inline cd default_epsilon() {
    const double phase = std::numbers::pi / 4.0;
    return 2.23e-3 * cd(std::cos(phase), std::sin(phase));
}

inline MesonParams kaon_params(cd epsilon) {
    return make_params(kaon_delta_m_tau_s, kaon_tau_ratio, epsilon, SystemLabel::kaon);
}

inline MesonParams kaon_params() { return kaon_params(default_epsilon()); }

// Equal widths, x = 0.77; the B-meson-like benchmark point.
inline MesonParams bmeson_params() {
    return make_params(0.77, 1.0, cd{}, SystemLabel::B);
}

// <K_L|K_S> = 2 Re(eps) / (1 + |eps|^2); vanishes iff CP is conserved.
inline double kl_ks_overlap(const MesonParams& P) {
    return 2.0 * P.epsilon.real() / (1.0 + std::norm(P.epsilon));
}

// ---------------------------------------------------------------------------
// Quasi-spin states

struct QuasiSpinState {
    Basis basis = Basis::Strangeness;
    Vec2 amp;  // components on the declared basis pair
};

// Basis pairs, in order: Strangeness (K0, K0bar), Mass (K_S, K_L), CP (K1, K2).
// Phase convention CP|K0> = -|K0bar>, so K1 = (K0 - K0bar)/sqrt2 is CP-even.
inline QuasiSpinState k0_state() { return {Basis::Strangeness, {{cd{1.0}, cd{0.0}}}}; }
inline QuasiSpinState k0bar_state() { return {Basis::Strangeness, {{cd{0.0}, cd{1.0}}}}; }
inline QuasiSpinState k1_state() { return {Basis::CP, {{cd{1.0}, cd{0.0}}}}; }
inline QuasiSpinState k2_state() { return {Basis::CP, {{cd{0.0}, cd{1.0}}}}; }
inline QuasiSpinState ks_state() { return {Basis::Mass, {{cd{1.0}, cd{0.0}}}}; }
inline QuasiSpinState kl_state() { return {Basis::Mass, {{cd{0.0}, cd{1.0}}}}; }
inline QuasiSpinState flavor_state(Flavor f) {
    return f == Flavor::K0 ? k0_state() : k0bar_state();
}

// Components of a state on the orthonormal strangeness pair (K0, K0bar).
inline Vec2 strangeness_components(const QuasiSpinState& s, const MesonParams& P) {
    switch (s.basis) {
        case Basis::Strangeness:
            return s.amp;
        case Basis::CP:
            // K1 = (K0 - K0bar)/sqrt2, K2 = (K0 + K0bar)/sqrt2
            return {{(s.amp[0] + s.amp[1]) / std::sqrt(2.0),
                     (-s.amp[0] + s.amp[1]) / std::sqrt(2.0)}};
        case Basis::Mass:
            // K_S = (p K0 - q K0bar)/N, K_L = (p K0 + q K0bar)/N
            return {{P.p / P.norm_N * (s.amp[0] + s.amp[1]),
                     P.q / P.norm_N * (-s.amp[0] + s.amp[1])}};
    }
    throw std::logic_error("strangeness_components: bad basis");
}

inline QuasiSpinState to_basis(const QuasiSpinState& s, Basis target, const MesonParams& P) {
    const Vec2 c = strangeness_components(s, P);
    switch (target) {
        case Basis::Strangeness:
            return {target, c};
        case Basis::CP:
            return {target, {{(c[0] - c[1]) / std::sqrt(2.0), (c[0] + c[1]) / std::sqrt(2.0)}}};
        case Basis::Mass: {
            // invert the (generally non-orthogonal) mass-basis expansion
            const cd alpha = 0.5 * P.norm_N * (c[0] / P.p - c[1] / P.q);
            const cd beta = 0.5 * P.norm_N * (c[0] / P.p + c[1] / P.q);
            return {target, {{alpha, beta}}};
        }
    }
    throw std::logic_error("to_basis: bad basis");
}

// Normalization is defined through the strangeness components (the mass
// basis is non-orthogonal when eps != 0).
inline double strangeness_norm_sq(const QuasiSpinState& s, const MesonParams& P) {
    return strangeness_components(s, P).norm_sq();
}

// ---------------------------------------------------------------------------
// Oscillation

// g_pm(t) = 1/2 [ +- e^{-i lambda_S t} + e^{-i lambda_L t} ],
// lambda_{S,L} = m_{S,L} - i Gamma_{S,L}/2, in the gauge m_S = 0.
inline std::pair<cd, cd> g_pm(double t, const MesonParams& P) {
    if (!(t >= 0.0)) throw std::domain_error("g_pm: t must be >= 0");
    const cd e_s = std::exp(-0.5 * P.gamma_S * t);
    const cd e_l = std::exp(cd(-0.5 * P.gamma_L * t, -P.delta_m * t));
    return {0.5 * (e_s + e_l), 0.5 * (-e_s + e_l)};
}

// |<final|initial(t)>|^2 for strangeness eigenstates; the flavor-changing
// directions carry |q/p|^2 resp. |p/q|^2.
inline double oscillation_probability(Flavor initial, Flavor final_, double t,
                                      const MesonParams& P) {
    const auto [gp, gm] = g_pm(t, P);
    if (initial == final_) return std::norm(gp);
    const double ratio = initial == Flavor::K0 ? std::norm(P.q) / std::norm(P.p)
                                               : std::norm(P.p) / std::norm(P.q);
    return ratio * std::norm(gm);
}

// ---------------------------------------------------------------------------
// Decay products

struct OmegaRecord {
    double norm_SS = 0.0;  // <Omega_S|Omega_S> = 1 - e^{-Gamma_S t}
    double norm_LL = 0.0;  // <Omega_L|Omega_L> = 1 - e^{-Gamma_L t}
    cd overlap_LS{};       // <Omega_L|Omega_S> = <K_L|K_S>(1 - e^{i dm t} e^{-Gamma t})
};

inline OmegaRecord omega_overlaps(double t, const MesonParams& P) {
    if (!(t >= 0.0)) throw std::domain_error("omega_overlaps: t must be >= 0");
    OmegaRecord r;
    r.norm_SS = 1.0 - std::exp(-P.gamma_S * t);
    r.norm_LL = 1.0 - std::exp(-P.gamma_L * t);
    const cd osc = std::exp(cd(-P.gamma_bar * t, P.delta_m * t));
    r.overlap_LS = kl_ks_overlap(P) * (1.0 - osc);
    return r;
}

// ---------------------------------------------------------------------------
// Unit conversions (tau_S in seconds is an external constant, not a model input)

inline double rate_to_mev(double rate_gamma_s, double tau_s_seconds = kaon_tau_s_seconds) {
    return rate_gamma_s * hbar_mev_s / tau_s_seconds;
}

inline double mev_to_rate(double mev, double tau_s_seconds = kaon_tau_s_seconds) {
    return mev * tau_s_seconds / hbar_mev_s;
}

inline double time_to_seconds(double t_tau_s, double tau_s_seconds = kaon_tau_s_seconds) {
    return t_tau_s * tau_s_seconds;
}

}  // namespace kaonlab
