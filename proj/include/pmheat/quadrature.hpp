#pragma once

#include <functional>
#include <vector>

namespace pmheat::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached rule with npts points (Newton iteration on the Legendre recurrence).
const GaussLegendreRule& gauss_legendre(int npts);

/// Integrate f over [a, b] with a single npts-point Gauss-Legendre panel.
template <typename F>
double gl_panel(const F& f, double a, double b, int npts) {
    const GaussLegendreRule& rule = gauss_legendre(npts);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        acc += rule.w[i] * f(mid + half * rule.x[i]);
    }
    return acc * half;
}

/// Adaptive Simpson integration of f over [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth = 60);

} // namespace pmheat::quad
