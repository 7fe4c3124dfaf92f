// decoherence.hpp
// Lindblad-type decoherence for single and entangled neutral mesons: the
// projector-dissipator master equation solutions, like/unlike strangeness
// probabilities, event asymmetries, the effective-zeta model and its exact
// zeta(t) = 1 - e^{-lambda t} correspondence, plus chi-square fitting of the
// decoherence parameter from asymmetry data.
//
// CP invariance is assumed throughout this module (the mass eigenstates are
// treated as orthogonal); eps carried in MesonParams is ignored here and the
// CLI refuses to combine the two.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kaonlab/complexmat.hpp"
#include "kaonlab/meson.hpp"
#include "kaonlab/optim.hpp"

namespace kaonlab {

// Single-meson density matrix on {K_S, K_L}:
//   rho_SS(t) = rho_SS(0) e^{-Gamma_S t}
//   rho_LL(t) = rho_LL(0) e^{-Gamma_L t}
//   rho_LS(t) = rho_LS(0) e^{-i dm t - Gamma t - lambda t}
// The dissipator touches only the off-diagonal elements.
inline Mat2 evolve_single(const Mat2& rho0, double t, double lambda, const MesonParams& P) {
    if (!(lambda >= 0.0)) throw std::domain_error("evolve_single: lambda must be >= 0");
    if (!(t >= 0.0)) throw std::domain_error("evolve_single: t must be >= 0");
    Mat2 r;
    r(0, 0) = rho0(0, 0) * std::exp(-P.gamma_S * t);
    r(1, 1) = rho0(1, 1) * std::exp(-P.gamma_L * t);
    const cd decay = std::exp(cd(-P.gamma_bar * t - lambda * t, 0.0));
    r(1, 0) = rho0(1, 0) * decay * std::exp(cd(0.0, -P.delta_m * t));
    r(0, 1) = rho0(0, 1) * decay * std::exp(cd(0.0, P.delta_m * t));
    return r;
}

// Two-particle state over {|K_S K_S>, |e1>, |e2>, |K_L K_L>} with
// e1 = K_S(l) K_L(r), e2 = K_L(l) K_S(r); row index = 2*left + right.
struct PairDensityMatrix {
    Mat4 rho;
    double time_stamp = 0.0;  // tau_S units
    double lambda = 0.0;      // Gamma_S units
};

// Evolved Bell singlet:
//   rho(t) = 1/2 e^{-2 Gamma t} { |e1><e1| + |e2><e2|
//                                 - e^{-lambda t} (|e1><e2| + |e2><e1|) }.
// The trace decays as e^{-2 Gamma t}; the master equation is not trace
// conserving on the undecayed-kaon space.
inline PairDensityMatrix evolve_pair(double t, double lambda, const MesonParams& P) {
    if (!(lambda >= 0.0)) throw std::domain_error("evolve_pair: lambda must be >= 0");
    if (!(t >= 0.0)) throw std::domain_error("evolve_pair: t must be >= 0");
    PairDensityMatrix out;
    out.time_stamp = t;
    out.lambda = lambda;
    const double damp = 0.5 * std::exp(-2.0 * P.gamma_bar * t);
    const double off = -std::exp(-lambda * t) * damp;
    out.rho(1, 1) = damp;
    out.rho(2, 2) = damp;
    out.rho(1, 2) = off;
    out.rho(2, 1) = off;
    return out;
}

// ---------------------------------------------------------------------------
// Strangeness probabilities and asymmetries

// P_lambda for strangeness outcomes s_l at t_l and s_r at t_r:
//   1/8 { e^{-G_S t_l - G_L t_r} + e^{-G_L t_l - G_S t_r}
//         -+ e^{-lambda t_first} 2 cos(dm dt) e^{-Gamma(t_l+t_r)} }
// with - for like and + for unlike strangeness. The decoherence factor
// depends only on the time of the first measured kaon; arguments with
// t_l < t_r are relabeled internally.
inline double prob_lambda(Flavor s_l, double t_l, Flavor s_r, double t_r, double lambda,
                          const MesonParams& P) {
    if (!(lambda >= 0.0)) throw std::domain_error("prob_lambda: lambda must be >= 0");
    if (!(t_l >= 0.0) || !(t_r >= 0.0))
        throw std::domain_error("prob_lambda: times must be >= 0");
    if (t_l < t_r) {
        std::swap(t_l, t_r);
        std::swap(s_l, s_r);
    }
    const double sum = std::exp(-P.gamma_S * t_l - P.gamma_L * t_r) +
                       std::exp(-P.gamma_L * t_l - P.gamma_S * t_r);
    const double interference = std::exp(-lambda * t_r) * 2.0 *
                                std::cos(P.delta_m * (t_l - t_r)) *
                                std::exp(-P.gamma_bar * (t_l + t_r));
    const double sign = (s_l == s_r) ? -1.0 : 1.0;
    return 0.125 * (sum + sign * interference);
}

// A^QM(dt) = cos(dm dt) / cosh(dGamma dt / 2); depends only on t_l - t_r.
inline double asymmetry_qm(double t_l, double t_r, const MesonParams& P) {
    const double dt = t_l - t_r;
    return std::cos(P.delta_m * dt) / std::cosh(0.5 * (P.gamma_L - P.gamma_S) * dt);
}

// A^lambda = A^QM(dt) e^{-lambda min(t_l, t_r)}.
inline double asymmetry_lambda(double t_l, double t_r, double lambda, const MesonParams& P) {
    if (!(lambda >= 0.0)) throw std::domain_error("asymmetry_lambda: lambda must be >= 0");
    return asymmetry_qm(t_l, t_r, P) * std::exp(-lambda * std::min(t_l, t_r));
}

// Phenomenological model: the interference term is scaled by (1 - zeta).
// zeta = 0 is pure QM, zeta = 1 is spontaneous factorization
// (the Furry-Schroedinger hypothesis).
inline double prob_zeta(Flavor s_l, double t_l, Flavor s_r, double t_r, double zeta,
                        const MesonParams& P) {
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw std::domain_error("prob_zeta: zeta must be in [0,1]");
    if (!(t_l >= 0.0) || !(t_r >= 0.0))
        throw std::domain_error("prob_zeta: times must be >= 0");
    const double sum = std::exp(-P.gamma_S * t_l - P.gamma_L * t_r) +
                       std::exp(-P.gamma_L * t_l - P.gamma_S * t_r);
    const double interference = (1.0 - zeta) * 2.0 * std::cos(P.delta_m * (t_l - t_r)) *
                                std::exp(-P.gamma_bar * (t_l + t_r));
    const double sign = (s_l == s_r) ? -1.0 : 1.0;
    return 0.125 * (sum + sign * interference);
}

inline double asymmetry_zeta(double t_l, double t_r, double zeta, const MesonParams& P) {
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw std::domain_error("asymmetry_zeta: zeta must be in [0,1]");
    return asymmetry_qm(t_l, t_r, P) * (1.0 - zeta);
}

// zeta(t_l, t_r) = 1 - e^{-lambda min(t_l, t_r)}: the value of the effective
// parameter that makes the two models coincide.
inline double zeta_of_lambda(double t_l, double t_r, double lambda) {
    if (!(lambda >= 0.0)) throw std::domain_error("zeta_of_lambda: lambda must be >= 0");
    return 1.0 - std::exp(-lambda * std::min(t_l, t_r));
}

// ---------------------------------------------------------------------------
// Data and fitting

struct AsymmetryPoint {
    double t_l = 0.0;
    double t_r = 0.0;
    double asym = 0.0;
    double sigma = 1.0;
};

struct AsymmetryDataset {
    std::vector<AsymmetryPoint> rows;
    std::string source;
};

enum class FitModel { lambda, zeta_const };

// Reference values of the published CPLEAR fit; the raw event data behind
// them is not public, so they enter tests only through the unit identity
// lambda_bar = Lambda_bar * hbar / tau_S.
inline constexpr double cplear_lambda_bar_mev = 1.84e-12;
inline constexpr double cplear_lambda_bar_up_mev = 4.34e-12;
inline constexpr double cplear_Lambda_bar = 0.25;

struct FitResult {
    double lambda_hat = 0.0;  // best-fit parameter (zeta for the zeta model)
    double ci_lo = 0.0;       // delta-chi2 = 1 interval
    double ci_hi = 0.0;
    double chi2 = 0.0;
    int ndf = 0;
    FitModel model = FitModel::lambda;
    bool at_boundary = false;  // minimum pinned to the scan boundary

    double zeta_equivalent(double t) const {
        return model == FitModel::lambda ? 1.0 - std::exp(-lambda_hat * t) : lambda_hat;
    }
};

namespace detail {

inline double model_asymmetry(FitModel model, double theta, const AsymmetryPoint& row,
                              const MesonParams& P) {
    return model == FitModel::lambda ? asymmetry_lambda(row.t_l, row.t_r, theta, P)
                                     : asymmetry_qm(row.t_l, row.t_r, P) * (1.0 - theta);
}

}  // namespace detail

inline double fit_chi2(const AsymmetryDataset& data, FitModel model, double theta,
                       const MesonParams& P) {
    double chi2 = 0.0;
    for (const auto& row : data.rows) {
        const double res = (detail::model_asymmetry(model, theta, row, P) - row.asym) / row.sigma;
        chi2 += res * res;
    }
    return chi2;
}

// Weighted least squares in one parameter: coarse scan over the parameter
// range, golden-section refinement, delta-chi2 = 1 interval by bisection.
inline FitResult fit_decoherence(const AsymmetryDataset& data, FitModel model,
                                 const MesonParams& P) {
    if (data.rows.empty()) throw std::invalid_argument("fit_decoherence: empty dataset");
    if (data.rows.size() < 2)
        throw std::invalid_argument("fit_decoherence: need at least 2 data rows");
    for (const auto& row : data.rows) {
        if (!(row.sigma > 0.0)) throw std::invalid_argument("fit_decoherence: sigma must be > 0");
        if (!(row.t_l >= 0.0) || !(row.t_r >= 0.0))
            throw std::invalid_argument("fit_decoherence: times must be >= 0");
    }

    const double theta_max = model == FitModel::lambda ? 5.0 : 1.0;
    const int scan_steps = 200;
    const auto chi2_at = [&](double theta) { return fit_chi2(data, model, theta, P); };

    int best = 0;
    double best_chi2 = chi2_at(0.0);
    for (int i = 1; i <= scan_steps; ++i) {
        const double c = chi2_at(theta_max * i / scan_steps);
        if (c < best_chi2) {
            best_chi2 = c;
            best = i;
        }
    }

    FitResult fit;
    fit.model = model;
    fit.ndf = static_cast<int>(data.rows.size()) - 1;

    const double lo = theta_max * std::max(best - 1, 0) / scan_steps;
    const double hi = theta_max * std::min(best + 1, scan_steps) / scan_steps;
    fit.lambda_hat = golden_section_minimize(chi2_at, lo, hi, 1e-6);
    fit.chi2 = chi2_at(fit.lambda_hat);
    fit.at_boundary = best == 0 || best == scan_steps;
    if (fit.at_boundary) {
        // keep the boundary value itself when the scan never left the edge
        const double edge = best == 0 ? 0.0 : theta_max;
        if (chi2_at(edge) <= fit.chi2) {
            fit.lambda_hat = edge;
            fit.chi2 = chi2_at(edge);
        }
    }

    // delta-chi2 = 1 interval, capped at the parameter domain
    const double target = fit.chi2 + 1.0;
    const auto bisect_cross = [&](double a, double b) {
        // chi2(a) <= target <= chi2(b) or vice versa along [a,b]
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (a + b);
            if ((chi2_at(mid) - target) * (chi2_at(b) - target) <= 0.0)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };
    fit.ci_lo = chi2_at(0.0) <= target ? 0.0 : bisect_cross(0.0, fit.lambda_hat);
    fit.ci_hi = chi2_at(theta_max) <= target ? theta_max : bisect_cross(theta_max, fit.lambda_hat);
    return fit;
}

struct WeightedAverage {
    double value = 0.0;
    double sigma = 0.0;
};

// Variance-weighted combination of independent fits, each weighted by its
// half interval width.
inline WeightedAverage variance_weighted_average(const std::vector<FitResult>& fits) {
    if (fits.empty()) throw std::invalid_argument("variance_weighted_average: no fits");
    double sw = 0.0, swx = 0.0;
    for (const auto& f : fits) {
        const double half = 0.5 * (f.ci_hi - f.ci_lo);
        if (!(half > 0.0))
            throw std::invalid_argument("variance_weighted_average: degenerate interval");
        const double w = 1.0 / (half * half);
        sw += w;
        swx += w * f.lambda_hat;
    }
    return {swx / sw, 1.0 / std::sqrt(sw)};
}

// ---------------------------------------------------------------------------
// Synthetic data

namespace detail {

// Box-Muller on explicit 53-bit uniforms; keeps byte-identical streams
// across standard libraries.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next(double sigma) {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 rng_;
};

}  // namespace detail

inline AsymmetryDataset synth_dataset(double lambda_true,
                                      const std::vector<std::pair<double, double>>& time_pairs,
                                      double noise_sigma, std::uint64_t seed,
                                      const MesonParams& P) {
    if (!(noise_sigma >= 0.0)) throw std::domain_error("synth_dataset: noise must be >= 0");
    detail::GaussianStream gauss(seed);
    AsymmetryDataset data;
    data.source = "synthetic lambda=" + std::to_string(lambda_true);
    data.rows.reserve(time_pairs.size());
    for (const auto& [t_l, t_r] : time_pairs) {
        AsymmetryPoint row;
        row.t_l = t_l;
        row.t_r = t_r;
        row.asym = asymmetry_lambda(t_l, t_r, lambda_true, P);
        if (noise_sigma > 0.0) row.asym += gauss.next(noise_sigma);
        row.sigma = noise_sigma > 0.0 ? noise_sigma : 1.0;
        data.rows.push_back(row);
    }
    return data;
}

}  // namespace kaonlab
