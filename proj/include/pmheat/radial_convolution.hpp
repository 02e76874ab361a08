#pragma once

#include <vector>

#include "pmheat/grid.hpp"
#include "pmheat/spectral_field.hpp"

namespace pmheat {

/// Radial kernel on the Fourier side:
///   Vhat(eta) = coefficient * |eta|^{-exponent} * exp(-exp_damping * |eta|).
/// exp_damping = 0 is the pure power law; a positive value is the exact
/// transform of a mollified inverse-square potential (n = 3, exponent 1 only).
struct RadialKernel {
    int n = 0;
    double exponent = 0.0;   // b1, 0 < b1 < n
    double coefficient = 0.0;
    double exp_damping = 0.0;
};

/// Precomputed quadrature for the radial convolution
///   (Vhat * uhat)(rho) = S_{n-2} \int_0^inf uhat(s) s^{n-1} I(rho, s) ds,
///   I(rho, s) = \int_0^pi Vhat(sqrt(rho^2 + s^2 - 2 rho s cos(theta))) sin^{n-2}(theta) dtheta.
///
/// For n = 3 the angular integral reduces exactly to a 1-d kernel primitive;
/// for n >= 4 it is a one-parameter family in q = ((rho-s)/(rho+s))^2,
/// tabulated once per operator. The outer s-integral runs over the field grid
/// extended two decades past each end (the profile is continued as a power
/// law from the measured boundary slopes, slopes capped for integrability)
/// plus closed-form remainders for the far tails. The two panels touching the
/// diagonal s = rho are graded, since the angular integral has a kink there.
///
/// Applying the operator is linear in the weighted profile and costs one
/// matrix-vector product; building it is the expensive step.
class RadialConvolution {
public:
    RadialConvolution(const RadialKernel& kernel, const RadialGrid& grid, double field_weight);

    /// Convolve one field (weight must equal field_weight). The result is
    /// weighted by rho^{b1 + k - n}, the natural decay of the convolution.
    SpectralField apply(const SpectralField& field) const;

    const RadialKernel& kernel() const { return kernel_; }
    double field_weight() const { return k_; }
    double output_weight() const { return kernel_.exponent + k_ - kernel_.n; }

private:
    double angular_integral(double rho, double s) const; // I(rho, s) for unit coefficient
    double phi_lookup(double q) const;
    void build();

    RadialKernel kernel_;
    RadialGrid grid_;
    double k_;

    // angular table (n >= 4 only)
    std::vector<double> phi_;
    double tau_min_ = 0.0;
    double dtau_ = 0.0;

    // extension lattice (the upper one stretches further for lightly damped
    // kernels, until the exponential factor has died out)
    int ext_panels_lo_ = 0;
    int ext_panels_hi_ = 0;
    double s_cut_lo_ = 0.0;
    double s_cut_hi_ = 0.0;

    // quadrature weights: interior matrix plus extension point sets
    std::vector<double> interior_;          // count x count
    std::vector<double> lo_weights_;        // count x (ext point count)
    std::vector<double> hi_weights_;
    std::vector<double> lo_offsets_;        // v - v(rho_min) per extension point
    std::vector<double> hi_offsets_;        // v - v(rho_max)
    std::vector<double> rem_lo_row_;        // frozen-kernel lower remainder per output node
    double rem_hi_base_ = 0.0;
};

/// One-shot convenience wrapper around RadialConvolution.
SpectralField convolve_radial(const RadialKernel& kernel, const SpectralField& field);

/// Closed form K(theta1, theta2, n) rho^{theta1+theta2-n} for the convolution
/// of two pure radial power laws; the test oracle for convolve_radial.
double power_law_convolution_oracle(double theta1, double theta2, int n, double rho);

} // namespace pmheat
