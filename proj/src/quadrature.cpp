#include "pmheat/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pmheat::quad {

namespace {

GaussLegendreRule build_gauss_legendre(int npts) {
    GaussLegendreRule rule;
    rule.x.resize(npts);
    rule.w.resize(npts);
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        rule.x[i] = -x;
        rule.x[npts - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.w[i] = w;
        rule.w[npts - 1 - i] = w;
    }
    return rule;
}

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double m,
                     double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

const GaussLegendreRule& gauss_legendre(int npts) {
    if (npts < 1) {
        throw std::invalid_argument("gauss_legendre: npts must be >= 1");
    }
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(npts);
    if (it == cache.end()) {
        it = cache.emplace(npts, build_gauss_legendre(npts)).first;
    }
    return it->second;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth) {
    if (a == b) {
        return 0.0;
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(a, fa, fm, b, fb);
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    return adaptive_step(f, a, fa, m, fm, b, fb, whole, tol, max_depth);
}

} // namespace pmheat::quad
