#pragma once

#include <complex>

namespace pmheat {

/// Natural log of the Gamma function, x > 0.
/// Lanczos approximation (g = 7, 9 terms), relative error below 1e-13 on [0.5, 50].
double log_gamma(double x);

/// Gamma(x) for x > 0.
double gamma_fn(double x);

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b), a, b > 0.
double beta_function(double a, double b);

/// Riesz normalizer nu(theta) = pi^{-theta/2} Gamma(theta/2), theta > 0.
double riesz_normalizer(double theta);

/// Composition constant K(theta1, theta2, n) of two radial power-law kernels:
///   ( |x|^{theta1-n} * |x|^{theta2-n} )(y) = K(theta1, theta2, n) |y|^{theta1+theta2-n}.
/// Requires 0 < theta1 < n, 0 < theta2 < n, 0 < theta1+theta2 < n.
double riesz_composition_constant(double theta1, double theta2, int n);

/// Fourier multiplier gamma_{l,alpha} of a homogeneous kernel P_l(x)/|x|^{n+l-alpha}:
///   F[ P_l(x)/|x|^{n+l-alpha} ](xi) = gamma_{l,alpha} P_l(xi)/|xi|^{l+alpha},
/// with the convention  f^(xi) = \int f(x) e^{-2 pi i xi . x} dx.
/// Only the radial (l = 0) and dipole (l = 1) channels are supported; 0 < alpha < n.
std::complex<double> homogeneous_fourier_constant(int l, double alpha, int n);

/// Bilinear Duhamel constant C_{b1,b2} = K(n-b1, n-b2, n) / (4 pi^2),
/// valid for 0 < b1, b2 < n with n < b1 + b2 < 2n.
double bilinear_constant(double b1, double b2, int n);

/// Contraction constant C_{n-2,k} = K(2, n-k, n) / (4 pi^2) for 2 < k < n.
/// Closed form: pi^{n/2} (n-2) / (2 pi^2 Gamma(n/2) (k-2)(n-k)); both routes agree
/// to round-off, the K-based route is the one returned.
double hardy_constant(int n, double k);

/// Critical inverse-square coupling (n-2)^2/4, n >= 3.
double hardy_critical_coupling(int n);

/// Index k = (n+2)/2 at which (k-2)(n-k) is maximal, n >= 3.
double optimal_index(int n);

/// The constants a fixed (n, k) pair feeds into the solver and threshold reports.
struct ConstantBundle {
    int n = 0;               // spatial dimension, >= 3
    double k = 0.0;          // PM index, 2 < k < n
    double K_value = 0.0;    // K(2, n-k, n)
    double C_value = 0.0;    // C_{n-2,k}
    double lambda_star = 0.0;
    double k_opt = 0.0;
};

ConstantBundle make_constant_bundle(int n, double k);

} // namespace pmheat
