// optim.hpp
// Derivative-free building blocks: a bound-constrained Nelder-Mead simplex
// (used for the CHSH time search) and golden-section line minimization
// (used for the chi-square fit). Both are deterministic.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace kaonlab {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Maximizes f over the box [lo, hi]^n from the start point. Candidate
// vertices are clamped into the box. Terminates when the simplex value
// spread falls below tol or after max_iter reflections.
inline SimplexResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                          const std::vector<double>& start, double step,
                                          double lo, double hi, int max_iter = 400,
                                          double tol = 1e-12) {
    const std::size_t n = start.size();
    if (n == 0) throw std::invalid_argument("nelder_mead_maximize: empty start point");

    long evals = 0;
    const auto clamp = [&](std::vector<double>& x) {
        for (auto& xi : x) xi = std::min(std::max(xi, lo), hi);
    };
    const auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += (start[i] + step <= hi) ? step : -step;
        clamp(pts[i + 1]);
    }
    for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    bool converged = false;

    for (int iter = 0; iter < max_iter; ++iter) {
        // order descending: pts[0] is the best vertex (maximization)
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] > vals[b]; });
        {
            std::vector<std::vector<double>> p2(n + 1);
            std::vector<double> v2(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                p2[i] = pts[idx[i]];
                v2[i] = vals[idx[i]];
            }
            pts.swap(p2);
            vals.swap(v2);
        }

        if (vals[0] - vals[n] < tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        const auto along = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (centroid[j] - pts[n][j]);
            clamp(x);
            return x;
        };

        const auto xr = along(alpha);
        const double fr = eval(xr);
        if (fr > vals[0]) {
            const auto xe = along(gamma);
            const double fe = eval(xe);
            if (fe > fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr > vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const auto xc = along(-rho);
            const double fc = eval(xc);
            if (fc > vals[n]) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + sigma * (pts[i][j] - pts[0][j]);
                    clamp(pts[i]);
                    vals[i] = eval(pts[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (vals[i] > vals[best]) best = i;

    return {pts[best], vals[best], evals, converged};
}

// Golden-section minimization of a unimodal f on [a, b] to width tol.
inline double golden_section_minimize(const std::function<double(double)>& f, double a,
                                      double b, double tol = 1e-6) {
    if (!(a <= b)) throw std::invalid_argument("golden_section_minimize: bad bracket");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace kaonlab
