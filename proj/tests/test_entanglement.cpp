#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kaonlab/entanglement.hpp"

using namespace kaonlab;

namespace {

const MesonParams& cp_conserving_kaon() {
    static const MesonParams P = make_params(0.47, 581.0, cd{});
    return P;
}

NormalizedState model_state(double t, double lambda) {
    return normalize(evolve_pair(t, lambda, cp_conserving_kaon()));
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace

TEST_SUITE("entanglement") {

TEST_CASE("normalization yields the Bell mixture with weights (1 +- e^{-lambda t})/2") {
    const NormalizedState s0 = model_state(0.0, 0.7);
    const auto w0 = bell_weights(s0.rho_N);
    CHECK(w0[0] == doctest::Approx(1.0).epsilon(1e-14));  // pure psi-
    CHECK(std::abs(w0[1]) < 1e-14);

    const double t = std::numbers::ln2 / 0.7;  // lambda t = ln 2
    const auto w = bell_weights(model_state(t, 0.7).rho_N);
    CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(w[2]) < 1e-14);
    CHECK(std::abs(w[3]) < 1e-14);

    const auto late = bell_weights(model_state(100.0, 1.0).rho_N);
    CHECK(late[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(late[1] == doctest::Approx(0.5).epsilon(1e-10));

    CHECK(std::abs(model_state(2.0, 0.3).rho_N.trace() - 1.0) < 1e-12);

    PairDensityMatrix zero;
    CHECK_THROWS_AS(normalize(zero), std::invalid_argument);
}

TEST_CASE("von Neumann entropy grows from 0 to 1") {
    CHECK(von_neumann_entropy(model_state(0.0, 0.5)) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(von_neumann_entropy(model_state(50.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-10));
    const double t = std::numbers::ln2 / 0.5;
    CHECK(von_neumann_entropy(model_state(t, 0.5)) ==
          doctest::Approx(binary_entropy(0.25)).epsilon(1e-12));
    CHECK(binary_entropy(0.25) == doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("eigenvalue entropy equals the Bell-weight closed form") {
    for (const double lambda : {0.05, 0.25, 1.0})
        for (double t = 0.0; t <= 10.0; t += 0.5) {
            const double kappa = std::exp(-lambda * t);
            const double closed = binary_entropy(0.5 * (1.0 - kappa));
            CHECK(std::abs(von_neumann_entropy(model_state(t, lambda)) - closed) < 1e-10);
        }
}

TEST_CASE("entropy is nondecreasing in time") {
    for (const double lambda : {0.25, 1.0}) {
        double prev = -1.0;
        for (double t = 0.0; t <= 8.0; t += 0.05) {
            const double s = von_neumann_entropy(model_state(t, lambda));
            CHECK(s >= prev - 1e-12);
            prev = s;
        }
    }
}

TEST_CASE("reduced states are maximally mixed at all times") {
    for (const double lambda : {0.0, 0.25, 2.0})
        for (const double t : {0.0, 0.5, 1.0, 4.0}) {
            const NormalizedState s = model_state(t, lambda);
            for (const Side side : {Side::left, Side::right}) {
                const Mat2 r = reduced_density(s, side);
                CHECK(std::abs(r(0, 0) - 0.5) < 1e-13);
                CHECK(std::abs(r(1, 1) - 0.5) < 1e-13);
                CHECK(std::abs(r(0, 1)) < 1e-13);
                CHECK(reduced_entropy(s, side) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(std::abs(r.trace() - 1.0) < 1e-13);
            }
        }
}

TEST_CASE("partial transpose spectrum matches the closed form") {
    for (const double lambda : {0.1, 0.25, 1.0})
        for (const double t : {0.0, 0.4, 1.3, 4.0}) {
            const SpectrumVerdict v = ppt_check(model_state(t, lambda));
            const double kappa = std::exp(-lambda * t);
            CHECK(std::abs(v.eigenvalues[0] + 0.5 * kappa) < 1e-10);
            CHECK(std::abs(v.eigenvalues[1] - 0.5 * kappa) < 1e-10);
            CHECK(std::abs(v.eigenvalues[2] - 0.5) < 1e-10);
            CHECK(std::abs(v.eigenvalues[3] - 0.5) < 1e-10);
            CHECK_FALSE(v.separable);  // entangled for all finite t
        }
    const SpectrumVerdict singlet = ppt_check(model_state(0.0, 0.5));
    CHECK(singlet.eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("reduction criterion has the same spectrum and verdict") {
    for (const double lambda : {0.1, 0.25, 1.0})
        for (const double t : {0.0, 0.4, 1.3, 4.0}) {
            const NormalizedState s = model_state(t, lambda);
            const SpectrumVerdict ppt = ppt_check(s);
            const SpectrumVerdict red = reduction_check(s);
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(std::abs(ppt.eigenvalues[i] - red.eigenvalues[i]) < 1e-10);
            CHECK(ppt.separable == red.separable);
        }
}

TEST_CASE("the maximally mixed state is separable under both criteria") {
    NormalizedState mixed;
    mixed.rho_N = Mat4::identity() * cd(0.25);
    mixed.t = 0.0;
    mixed.lambda = 0.0;
    CHECK(ppt_check(mixed).separable);
    CHECK(reduction_check(mixed).separable);
}

TEST_CASE("concurrence of the model family is e^{-lambda t}") {
    CHECK(concurrence(model_state(0.0, 0.3)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(concurrence(model_state(1.0 / 0.3, 0.3)) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    for (const double lambda : {0.05, 0.25, 1.0})
        for (double t = 0.0; t <= 10.0; t += 1.0)
            CHECK(std::abs(concurrence(model_state(t, lambda)) - std::exp(-lambda * t)) < 1e-10);
}

TEST_CASE("concurrence, fraction and the 2f - 1 relation") {
    for (const double t : {0.0, 0.7, 2.0}) {
        const NormalizedState s = model_state(t, 0.4);
        const double c = concurrence(s);
        const double f = fully_entangled_fraction(s);
        CHECK(c == doctest::Approx(2.0 * f - 1.0).epsilon(1e-9));
        CHECK(f >= 0.5);
    }
    CHECK(fully_entangled_fraction(model_state(0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fully_entangled_fraction(model_state(std::numbers::ln2, 1.0)) ==
          doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("fully entangled fraction rejects non-Bell-diagonal input") {
    NormalizedState s = model_state(0.5, 0.5);
    s.rho_N(0, 1) = 0.1;  // couples the phi and psi sectors
    s.rho_N(1, 0) = 0.1;
    CHECK_THROWS_AS(fully_entangled_fraction(s), std::invalid_argument);
}

TEST_CASE("entanglement of formation endpoints and midpoint") {
    CHECK(eof_from_concurrence(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eof_from_concurrence(0.0) == 0.0);
    CHECK(eof_from_concurrence(0.5) == doctest::Approx(0.354579).epsilon(1e-4));
    CHECK_THROWS_AS(eof_from_concurrence(1.5), std::domain_error);

    // monotone in C
    double prev = -1.0;
    for (double c = 0.0; c <= 1.0; c += 0.01) {
        const double e = eof_from_concurrence(c);
        CHECK(e >= prev);
        prev = e;
    }
}

TEST_CASE("loss of entanglement equals the decoherence") {
    const LossReport none = loss_report(2.0, 0.0);
    CHECK(none.one_minus_C == 0.0);
    CHECK(none.one_minus_E == 0.0);
    CHECK(none.zeta == 0.0);

    for (const double lambda : {0.05, 0.25, 1.0})
        for (double t = 0.0; t <= 10.0; t += 0.25) {
            const LossReport r = loss_report(t, lambda);
            CHECK(r.one_minus_C == zeta_of_lambda(t, t, lambda));
            CHECK(std::abs(1.0 - concurrence(model_state(t, lambda)) - r.zeta) < 1e-10);
        }

    // zeta = 0.13 is the reference magnitude of the fitted average
    const double t13 = -std::log(1.0 - 0.13) / 0.25;
    CHECK(loss_report(t13, 0.25).one_minus_C == doctest::Approx(0.13).epsilon(1e-12));
}

TEST_CASE("small-zeta linearization of the formation loss") {
    const double t = -std::log(1.0 - 0.01) / 0.25;  // zeta = 0.01
    const LossReport r = loss_report(t, 0.25);
    CHECK(r.zeta == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(std::abs(r.one_minus_E - r.linearized) / r.linearized < 0.05);
    CHECK(r.linearized == doctest::Approx(0.01 / std::numbers::ln2).epsilon(1e-12));
}

TEST_CASE("entropy dominates the formation loss on a dense grid") {
    for (const double lambda : {0.25, 0.587})
        for (double t = 0.0; t <= 2.0; t += 0.02) {
            const MeasureReport m = measures_at(t, lambda, cp_conserving_kaon());
            CHECK(m.entropy_S >= (1.0 - m.eof_E) - 1e-10);
        }
}

TEST_CASE("measures_at bundles the full stack consistently") {
    const MeasureReport m = measures_at(0.55, 0.25, cp_conserving_kaon());
    CHECK(m.concurrence_C == doctest::Approx(std::exp(-0.25 * 0.55)).epsilon(1e-9));
    CHECK(m.reduced_entropy_l == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.reduced_entropy_r == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.fef_f == doctest::Approx(0.5 * (1.0 + m.concurrence_C)).epsilon(1e-9));
    CHECK(m.zeta == doctest::Approx(1.0 - m.concurrence_C).epsilon(1e-9));
    CHECK(m.eof_E == doctest::Approx(eof_from_concurrence(m.concurrence_C)).epsilon(1e-9));
}

}  // TEST_SUITE
