#include "pmheat/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pmheat {

namespace {

constexpr double pi = std::numbers::pi;

// Lanczos g = 7, 9-term coefficient set.
constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double log_gamma_lanczos(double x) {
    // valid for x >= 0.5
    double acc = lanczos_c[0];
    for (int i = 1; i < 9; ++i) {
        acc += lanczos_c[i] / (x - 1.0 + i);
    }
    const double t = x + 6.5; // x + g - 0.5
    return 0.5 * std::log(2.0 * pi) + (x - 0.5) * std::log(t) - t + std::log(acc);
}

double log_nu(double theta) {
    return log_gamma(0.5 * theta) - 0.5 * theta * std::log(pi);
}

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive");
    }
    if (x >= 0.5) {
        return log_gamma_lanczos(x);
    }
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x), 0 < x < 1/2
    return std::log(pi / std::sin(pi * x)) - log_gamma_lanczos(1.0 - x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double beta_function(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("beta_function: arguments must be positive");
    }
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

double riesz_normalizer(double theta) {
    if (!(theta > 0.0)) {
        throw std::domain_error("riesz_normalizer: theta must be positive");
    }
    return std::exp(log_nu(theta));
}

double riesz_composition_constant(double theta1, double theta2, int n) {
    const double nd = static_cast<double>(n);
    if (!(theta1 > 0.0 && theta1 < nd) || !(theta2 > 0.0 && theta2 < nd) ||
        !(theta1 + theta2 > 0.0 && theta1 + theta2 < nd)) {
        throw std::domain_error(
            "riesz_composition_constant: need 0 < theta1, theta2 < n and theta1+theta2 < n");
    }
    // evaluated in log space; the six nu factors can individually over/underflow
    const double log_k = log_nu(theta1) + log_nu(theta2) + log_nu(nd - theta1 - theta2) -
                         log_nu(theta1 + theta2) - log_nu(nd - theta1) - log_nu(nd - theta2);
    return std::exp(log_k);
}

std::complex<double> homogeneous_fourier_constant(int l, double alpha, int n) {
    if (l != 0 && l != 1) {
        throw std::domain_error("homogeneous_fourier_constant: only l in {0,1} supported");
    }
    const double nd = static_cast<double>(n);
    if (!(alpha > 0.0 && alpha < nd)) {
        throw std::domain_error("homogeneous_fourier_constant: need 0 < alpha < n");
    }
    const double mag = std::exp((0.5 * nd - alpha) * std::log(pi) +
                                log_gamma(0.5 * (l + alpha)) -
                                log_gamma(0.5 * (nd + l - alpha)));
    if (l == 0) {
        return {mag, 0.0};
    }
    return {0.0, -mag}; // i^{-1} = -i
}

double bilinear_constant(double b1, double b2, int n) {
    const double nd = static_cast<double>(n);
    if (!(b1 > 0.0 && b1 < nd) || !(b2 > 0.0 && b2 < nd) ||
        !(b1 + b2 > nd && b1 + b2 < 2.0 * nd)) {
        throw std::domain_error("bilinear_constant: need 0 < b1, b2 < n and n < b1+b2 < 2n");
    }
    return riesz_composition_constant(nd - b1, nd - b2, n) / (4.0 * pi * pi);
}

double hardy_constant(int n, double k) {
    if (n < 3) {
        throw std::domain_error("hardy_constant: dimension must be >= 3");
    }
    if (!(k > 2.0 && k < static_cast<double>(n))) {
        throw std::domain_error("hardy_constant: need 2 < k < n");
    }
    return bilinear_constant(static_cast<double>(n) - 2.0, k, n);
}

double hardy_critical_coupling(int n) {
    if (n < 3) {
        throw std::domain_error("hardy_critical_coupling: dimension must be >= 3");
    }
    const double m = static_cast<double>(n) - 2.0;
    return 0.25 * m * m;
}

double optimal_index(int n) {
    if (n < 3) {
        throw std::domain_error("optimal_index: dimension must be >= 3");
    }
    return 0.5 * (static_cast<double>(n) + 2.0);
}

ConstantBundle make_constant_bundle(int n, double k) {
    ConstantBundle b;
    b.n = n;
    b.k = k;
    b.C_value = hardy_constant(n, k); // validates n, k
    b.K_value = riesz_composition_constant(2.0, static_cast<double>(n) - k, n);
    b.lambda_star = hardy_critical_coupling(n);
    b.k_opt = optimal_index(n);
    return b;
}

} // namespace pmheat
