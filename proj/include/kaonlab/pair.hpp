// pair.hpp
// The entangled meson pair: joint Yes/No detection probabilities for
// arbitrary quasi-spin projections and detection times, and the three
// expectation-value models (unitary, approximate, equal-width).
//
// "No" is the literal dichotomy "not this quasi-spin, or already decayed":
// the decay-product (Omega) sector counts as a No outcome. Probabilities are
// evaluated in the factorized form
//   P = || P_l(k_n) P_r(k_m) U_l(t_l,0) U_r(t_r,0) |psi(0)> ||^2 ,
// carrying the Omega components through their inner products
// (meson.hpp, omega_overlaps). With both sides expanded on the effective
// basis u = {K0, K0bar, Omega_S, Omega_L}, the evolved pair is a rank-2
// amplitude matrix M over u x u and every outcome combination reduces to
//   P = Re tr[ (M^dag X_l M) X_r^T ] ,
// where X is the Gram-weighted projector of the Yes or No question on that
// side. The four probabilities sum to one exactly, for any eps.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "kaonlab/complexmat.hpp"
#include "kaonlab/meson.hpp"

namespace kaonlab {

enum class Side { left, right };
enum class Outcome { yes, no };

struct MeasurementSpec {
    Side side = Side::left;
    QuasiSpinState quasi_spin;
    double time = 0.0;  // tau_S units
    Outcome outcome = Outcome::yes;
};

inline MeasurementSpec measure(Side side, const QuasiSpinState& state, double time,
                               Outcome outcome) {
    return {side, state, time, outcome};
}

// Amplitudes over {|e1> = K_S x K_L, |e2> = K_L x K_S} (Mass basis) or
// {K0 x K0bar, K0bar x K0} (Strangeness basis). The singlet is
// 1/sqrt2 (e1 - e2) up to the N^2/2pq prefactor of the K_S K_L form.
struct PairState {
    Basis basis = Basis::Strangeness;
    cd amp_12{};  // coefficient of first x second
    cd amp_21{};  // coefficient of second x first
};

inline PairState initial_singlet(Basis basis, const MesonParams& P) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (basis) {
        case Basis::Strangeness:
            return {basis, inv_sqrt2, -inv_sqrt2};
        case Basis::Mass: {
            const cd n_sl = P.norm_N * P.norm_N / (2.0 * P.p * P.q);
            return {basis, n_sl * inv_sqrt2, -n_sl * inv_sqrt2};
        }
        case Basis::CP:
            // K1 x K2 - K2 x K1 equals the strangeness singlet (orthogonal rotation)
            return {basis, inv_sqrt2, -inv_sqrt2};
    }
    throw std::logic_error("initial_singlet: bad basis");
}

inline PairState swap_sides(const PairState& s) { return {s.basis, s.amp_21, s.amp_12}; }

// <a (x) b | psi> in strangeness components; used to compare the two
// singlet representations and for t = 0 projections.
inline cd amplitude_at(const PairState& s, const QuasiSpinState& a, const QuasiSpinState& b,
                       const MesonParams& P) {
    QuasiSpinState first, second;
    switch (s.basis) {
        case Basis::Strangeness:
            first = k0_state();
            second = k0bar_state();
            break;
        case Basis::Mass:
            first = ks_state();
            second = kl_state();
            break;
        case Basis::CP:
            first = k1_state();
            second = k2_state();
            break;
    }
    const Vec2 ca = strangeness_components(a, P);
    const Vec2 cb = strangeness_components(b, P);
    const Vec2 c1 = strangeness_components(first, P);
    const Vec2 c2 = strangeness_components(second, P);
    const auto braket = [](const Vec2& bra, const Vec2& ket) {
        return std::conj(bra[0]) * ket[0] + std::conj(bra[1]) * ket[1];
    };
    return s.amp_12 * braket(ca, c1) * braket(cb, c2) +
           s.amp_21 * braket(ca, c2) * braket(cb, c1);
}

namespace detail {

// One side of the evolved pair on the effective basis
// u = {K0, K0bar, Omega_S, Omega_L}: the surviving-kaon coefficients of the
// evolved K_S / K_L plus a unit coefficient on the matching Omega slot.
struct SideVectors {
    Vec4 from_ks;  // U(t) K_S
    Vec4 from_kl;  // U(t) K_L
};

inline SideVectors evolved_side(double t, const MesonParams& P) {
    // gauge m_S = 0: e^{-i lambda_S t} real, e^{-i lambda_L t} oscillates
    const cd e_s = std::exp(-0.5 * P.gamma_S * t);
    const cd e_l = std::exp(cd(-0.5 * P.gamma_L * t, -P.delta_m * t));
    const cd ks0 = P.p / P.norm_N, ks1 = -P.q / P.norm_N;
    const cd kl0 = P.p / P.norm_N, kl1 = P.q / P.norm_N;
    SideVectors sv;
    sv.from_ks = {{e_s * ks0, e_s * ks1, cd{1.0}, cd{0.0}}};
    sv.from_kl = {{e_l * kl0, e_l * kl1, cd{0.0}, cd{1.0}}};
    return sv;
}

// Gram matrix of u at time t: the kaon block is orthonormal, the Omega block
// carries the decay-product inner products, the cross block vanishes.
inline Mat4 gram(double t, const MesonParams& P) {
    const OmegaRecord om = omega_overlaps(t, P);
    Mat4 g;
    g(0, 0) = 1.0;
    g(1, 1) = 1.0;
    g(2, 2) = om.norm_SS;
    g(3, 3) = om.norm_LL;
    g(3, 2) = om.overlap_LS;             // <Omega_L|Omega_S>
    g(2, 3) = std::conj(om.overlap_LS);  // <Omega_S|Omega_L>
    return g;
}

// X_{i'i} = <u_i' | A u_i> for the Yes projector A = |k><k| (kappa are the
// strangeness components of k); the No projector is G - X_yes.
inline Mat4 question_matrix(const QuasiSpinState& k, Outcome outcome, double t,
                            const MesonParams& P) {
    const Vec2 kappa = strangeness_components(k, P);
    Mat4 x;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = kappa[i] * std::conj(kappa[j]);
    if (outcome == Outcome::no) x = gram(t, P) - x;
    return x;
}

}  // namespace detail

// Joint probability of the two Yes/No questions; the left argument must be
// the left side. Throws if a quasi-spin state is not normalized.
inline double joint_probability(const MeasurementSpec& left, const MeasurementSpec& right,
                                const MesonParams& P) {
    if (left.side != Side::left || right.side != Side::right)
        throw std::invalid_argument("joint_probability: sides must be (left, right)");
    if (!(left.time >= 0.0) || !(right.time >= 0.0))
        throw std::invalid_argument("joint_probability: times must be >= 0");
    if (std::abs(strangeness_norm_sq(left.quasi_spin, P) - 1.0) > 1e-6 ||
        std::abs(strangeness_norm_sq(right.quasi_spin, P) - 1.0) > 1e-6)
        throw std::invalid_argument("joint_probability: quasi-spin state not normalized");

    const auto l = detail::evolved_side(left.time, P);
    const auto r = detail::evolved_side(right.time, P);

    // |Psi(t_l,t_r)> = N_SL/sqrt2 { U K_S (x) U K_L - U K_L (x) U K_S }
    const cd pref = P.norm_N * P.norm_N / (2.0 * P.p * P.q) / std::sqrt(2.0);
    Mat4 m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            m(i, j) = pref * (l.from_ks[i] * r.from_kl[j] - l.from_kl[i] * r.from_ks[j]);

    const Mat4 xl = detail::question_matrix(left.quasi_spin, left.outcome, left.time, P);
    const Mat4 xr = detail::question_matrix(right.quasi_spin, right.outcome, right.time, P);

    const double p = ((m.adjoint() * xl * m) * xr.transpose()).trace().real();
    return p < 0.0 && p > -1e-14 ? 0.0 : p;  // clip roundoff at the boundary
}

// E(k_n,t_a; k_m,t_b) from the four Yes/No probabilities.
inline double expectation_general(const QuasiSpinState& k_n, double t_a,
                                  const QuasiSpinState& k_m, double t_b,
                                  const MesonParams& P) {
    const auto prob = [&](Outcome a, Outcome b) {
        return joint_probability(measure(Side::left, k_n, t_a, a),
                                 measure(Side::right, k_m, t_b, b), P);
    };
    return prob(Outcome::yes, Outcome::yes) + prob(Outcome::no, Outcome::no) -
           prob(Outcome::yes, Outcome::no) - prob(Outcome::no, Outcome::yes);
}

// Strangeness expectation value with the decay-product contributions kept
// (unitary evolution); CP violation is neglected here, as the closed form
// assumes eps = 0.
inline double expectation_unitary(double t_l, double t_r, const MesonParams& P) {
    if (!(t_l >= 0.0) || !(t_r >= 0.0))
        throw std::domain_error("expectation_unitary: times must be >= 0");
    const double dt = t_l - t_r;
    return -std::cos(P.delta_m * dt) * std::exp(-P.gamma_bar * (t_l + t_r)) +
           0.5 * (1.0 - std::exp(-P.gamma_L * t_l)) * (1.0 - std::exp(-P.gamma_S * t_r)) +
           0.5 * (1.0 - std::exp(-P.gamma_S * t_l)) * (1.0 - std::exp(-P.gamma_L * t_r));
}

// E^approx = -cos(dm dt) e^{-Gamma(t_l+t_r)}: all decay products ignored,
// good for Gamma_L << Gamma_S.
inline double expectation_approx(double t_l, double t_r, const MesonParams& P) {
    if (!(t_l >= 0.0) || !(t_r >= 0.0))
        throw std::domain_error("expectation_approx: times must be >= 0");
    return -std::cos(P.delta_m * (t_l - t_r)) * std::exp(-P.gamma_bar * (t_l + t_r));
}

// Equal-width closed form; here the decay-product term cannot be ignored.
inline double expectation_bmeson(double t_l, double t_r, const MesonParams& P) {
    if (!(t_l >= 0.0) || !(t_r >= 0.0))
        throw std::domain_error("expectation_bmeson: times must be >= 0");
    if (std::abs(P.gamma_L - P.gamma_S) > 1e-12 * P.gamma_S)
        throw std::invalid_argument("expectation_bmeson: requires gamma_L == gamma_S");
    const double g = P.gamma_S;
    return -std::cos(P.delta_m * (t_l - t_r)) * std::exp(-g * (t_l + t_r)) +
           (1.0 - std::exp(-g * t_l)) * (1.0 - std::exp(-g * t_r));
}

}  // namespace kaonlab
