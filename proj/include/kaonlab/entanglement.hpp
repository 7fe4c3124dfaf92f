// entanglement.hpp
// Entanglement and separability analysis of the decohering pair state:
// von Neumann and reduced entropies, the Peres-Horodecki (PPT) and Horodecki
// reduction criteria, concurrence via the spin-flip construction,
// fully entangled fraction, entanglement of formation, and the
// entanglement-loss / decoherence identities.
//
// The computational routes here are general (partial traces, partial
// transpose, Jacobi eigensolves, sqrt(rho) rho~ sqrt(rho)); the closed forms
// of the model family (Bell weights, C = e^{-lambda t}, f = (1+e^{-lambda t})/2)
// serve as cross-checks in the test suite.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kaonlab/complexmat.hpp"
#include "kaonlab/decoherence.hpp"
#include "kaonlab/pair.hpp"

namespace kaonlab {

struct NormalizedState {
    Mat4 rho_N;          // unit trace, Hermitian
    double t = 0.0;      // tau_S units
    double lambda = 0.0; // Gamma_S units
};

// rho_N = rho / Tr rho, compensating for the decay of the undecayed-kaon
// norm. For the model family this is the Bell mixture
// (1+e^{-lambda t})/2 rho- + (1-e^{-lambda t})/2 rho+.
inline NormalizedState normalize(const PairDensityMatrix& rho) {
    const double tr = rho.rho.trace().real();
    if (!(tr > 1e-300)) throw std::invalid_argument("normalize: state has zero trace");
    if (rho.rho.max_hermiticity_defect() > 1e-9)
        throw std::invalid_argument("normalize: state is not Hermitian");
    NormalizedState s;
    s.rho_N = rho.rho * cd(1.0 / tr, 0.0);
    s.t = rho.time_stamp;
    s.lambda = rho.lambda;
    return s;
}

// Bell basis in the {SS, e1, e2, LL} ordering: psi-+ = (e1 -+ e2)/sqrt2,
// phi-+ = (SS -+ LL)/sqrt2.
inline std::array<Vec4, 4> bell_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{{{cd{0.0}, cd{s}, cd{-s}, cd{0.0}}},    // psi-
             {{cd{0.0}, cd{s}, cd{s}, cd{0.0}}},     // psi+
             {{cd{s}, cd{0.0}, cd{0.0}, cd{-s}}},    // phi-
             {{cd{s}, cd{0.0}, cd{0.0}, cd{s}}}}};   // phi+
}

// Diagonal weights <B_i|rho|B_i> in the order {psi-, psi+, phi-, phi+}.
inline std::array<double, 4> bell_weights(const Mat4& rho) {
    const auto basis = bell_basis();
    std::array<double, 4> w{};
    for (std::size_t k = 0; k < 4; ++k) {
        cd acc{};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                acc += std::conj(basis[k][i]) * rho(i, j) * basis[k][j];
        w[k] = acc.real();
    }
    return w;
}

inline double largest_bell_off_diagonal(const Mat4& rho) {
    const auto basis = bell_basis();
    double worst = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == b) continue;
            cd acc{};
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    acc += std::conj(basis[a][i]) * rho(i, j) * basis[b][j];
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

namespace detail {

inline double entropy_bits(const std::array<double, 4>& w) {
    double s = 0.0;
    for (double wi : w) {
        if (wi > 1e-15) s -= wi * std::log2(wi);
    }
    return s;
}

}  // namespace detail

// S(rho_N) = -Tr rho_N log2 rho_N via the eigenvalue spectrum; 0 log 0 = 0.
inline double von_neumann_entropy(const NormalizedState& s) {
    const auto es = eigh(s.rho_N);
    std::array<double, 4> w{};
    for (std::size_t i = 0; i < 4; ++i) w[i] = std::max(es.values[i], 0.0);
    return detail::entropy_bits(w);
}

inline Mat2 reduced_density(const NormalizedState& s, Side side) {
    return side == Side::left ? partial_trace_right(s.rho_N) : partial_trace_left(s.rho_N);
}

inline double reduced_entropy(const NormalizedState& s, Side side) {
    const Mat2 r = reduced_density(s, side);
    const auto es = eigh(r);
    double out = 0.0;
    for (double w : es.values)
        if (w > 1e-15) out -= w * std::log2(w);
    return out;
}

struct SpectrumVerdict {
    std::array<double, 4> eigenvalues{};  // ascending
    bool separable = false;
};

// Negative eigenvalues above -1e-10 are numerical noise near the asymptotic
// boundary and count as nonnegative.
inline constexpr double separability_tolerance = 1e-10;

// Peres-Horodecki: positivity of the partial transpose decides separability
// for two qubits.
inline SpectrumVerdict ppt_check(const NormalizedState& s) {
    const auto es = eigh(partial_transpose_right(s.rho_N));
    SpectrumVerdict v;
    v.eigenvalues = es.values;
    v.separable = es.values[0] >= -separability_tolerance;
    return v;
}

// Horodecki reduction criterion: 1 (x) rho_r - rho >= 0 (and the mirrored
// form) iff separable in 2x2. For the model family the spectrum coincides
// with the PPT spectrum.
inline SpectrumVerdict reduction_check(const NormalizedState& s) {
    const Mat2 rho_r = partial_trace_left(s.rho_N);
    const Mat4 m = kron(Mat2::identity(), rho_r) - s.rho_N;
    const auto es = eigh(m);
    SpectrumVerdict v;
    v.eigenvalues = es.values;
    v.separable = es.values[0] >= -separability_tolerance;
    return v;
}

namespace detail {

// sigma_y (x) sigma_y in the {SS, SL, LS, LL} tensor ordering. The
// construction is often quoted in the ordering {up up, down down, up down,
// down up}; that is a simultaneous row/column permutation of this one, so
// the spectrum of rho rho~ is unchanged.
inline Mat4 spin_flip_matrix() {
    Mat4 f;
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    return f;
}

}  // namespace detail

// Wootters concurrence: C = max{0, l1 - l2 - l3 - l4} with l_i the square
// roots of the eigenvalues of rho rho~ in decreasing order. Computed through
// the Hermitian equivalent sqrt(rho) rho~ sqrt(rho).
inline double concurrence(const NormalizedState& s) {
    const Mat4 f = detail::spin_flip_matrix();
    Mat4 conj_rho;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) conj_rho(i, j) = std::conj(s.rho_N(i, j));
    const Mat4 rho_tilde = f * conj_rho * f;
    const Mat4 sq = sqrt_psd(s.rho_N);
    const auto es = eigh(sq * rho_tilde * sq);
    std::array<double, 4> l{};
    for (std::size_t i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(es.values[i], 0.0));
    // es.values ascending, so l[3] is the largest
    const double c = l[3] - l[2] - l[1] - l[0];
    return std::max(0.0, c);
}

// f(rho) = max <e|rho|e> over maximally entangled |e>. Supported for
// Bell-diagonal states (the model family), where it is the largest Bell
// weight; anything else is rejected.
inline double fully_entangled_fraction(const NormalizedState& s) {
    if (largest_bell_off_diagonal(s.rho_N) > 1e-8)
        throw std::invalid_argument(
            "fully_entangled_fraction: supported for Bell-diagonal states only");
    const auto w = bell_weights(s.rho_N);
    return *std::max_element(w.begin(), w.end());
}

// E = H(1/2 + sqrt(1 - C^2)/2), the binary entropy of the concurrence.
inline double eof_from_concurrence(double c) {
    if (!(c >= 0.0 && c <= 1.0))
        throw std::domain_error("eof_from_concurrence: C must be in [0,1]");
    const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

inline double entanglement_of_formation(const NormalizedState& s) {
    return eof_from_concurrence(concurrence(s));
}

// Entanglement loss of the model family at (t, lambda):
//   1 - C = zeta(t) exactly, and 1 - E = zeta/ln2 to first order.
struct LossReport {
    double one_minus_C = 0.0;
    double one_minus_E = 0.0;
    double zeta = 0.0;
    double linearized = 0.0;  // zeta / ln 2
};

inline LossReport loss_report(double t, double lambda) {
    if (!(lambda >= 0.0)) throw std::domain_error("loss_report: lambda must be >= 0");
    if (!(t >= 0.0)) throw std::domain_error("loss_report: t must be >= 0");
    LossReport r;
    const double c = std::exp(-lambda * t);
    r.zeta = 1.0 - c;
    r.one_minus_C = r.zeta;
    r.one_minus_E = 1.0 - eof_from_concurrence(c);
    r.linearized = r.zeta / std::numbers::ln2;
    return r;
}

struct MeasureReport {
    double entropy_S = 0.0;
    double reduced_entropy_l = 0.0;
    double reduced_entropy_r = 0.0;
    double concurrence_C = 0.0;
    double fef_f = 0.0;
    double eof_E = 0.0;
    double zeta = 0.0;
};

// Full measurement stack of the model state at (t, lambda); drives the
// `measures` CLI output.
inline MeasureReport measures_at(double t, double lambda, const MesonParams& P) {
    const NormalizedState s = normalize(evolve_pair(t, lambda, P));
    MeasureReport m;
    m.entropy_S = von_neumann_entropy(s);
    m.reduced_entropy_l = reduced_entropy(s, Side::left);
    m.reduced_entropy_r = reduced_entropy(s, Side::right);
    m.concurrence_C = concurrence(s);
    m.fef_f = fully_entangled_fraction(s);
    m.eof_E = entanglement_of_formation(s);
    m.zeta = zeta_of_lambda(t, t, lambda);
    return m;
}

}  // namespace kaonlab
