#pragma once

#include <iosfwd>
#include <vector>

#include "pmheat/grid.hpp"

namespace pmheat {

/// Radial Fourier-side profile of a distribution on R^n, stored as the
/// weighted profile h(rho) = rho^k * uhat(rho) on a logarithmic grid.
/// With this weighting the PM^k norm is just the max of |h| over nodes and
/// power-law data have exactly constant profiles.
class SpectralField {
public:
    SpectralField(int n, double k, RadialGrid grid, std::vector<double> profile,
                  bool homogeneous = false);

    int dimension() const { return n_; }
    double weight() const { return k_; }
    const RadialGrid& grid() const { return grid_; }
    const std::vector<double>& profile() const { return h_; }
    bool homogeneous() const { return homogeneous_; }

    double uhat_at(int j) const;

    /// sup over nodes of |h_j| = max over the grid of |rho|^k |uhat(rho)|.
    double pm_norm() const;
    int pm_norm_index() const;
    /// True when the norm of a non-homogeneous field sits on the first or last
    /// node, i.e. the grid window may be too narrow to trust the supremum.
    bool norm_at_edge() const;

private:
    int n_;
    double k_;
    RadialGrid grid_;
    std::vector<double> h_;
    bool homogeneous_;
};

/// Field with uhat(rho) = amplitude * rho^{-k} (constant weighted profile).
/// The homogeneity flag is set. Requires 2 < k < n.
SpectralField make_power_law_field(int n, double k, double amplitude, const RadialGrid& grid);

/// Field with uhat(rho) = amplitude * exp(-pi (scale*rho)^2); this is the
/// transform of a Gaussian bump, the standard Schwartz-class test datum.
SpectralField make_gaussian_field(int n, double k, const RadialGrid& grid,
                                  double amplitude = 1.0, double scale = 1.0);

/// Heat semigroup: h_j <- h_j * exp(-4 pi^2 rho_j^2 t), t >= 0.
SpectralField apply_heat_semigroup(const SpectralField& field, double t);

SpectralField field_add(const SpectralField& a, const SpectralField& b);
SpectralField field_sub(const SpectralField& a, const SpectralField& b);
SpectralField field_scale(const SpectralField& a, double c);

struct RadialValue {
    double radius = 0.0;
    double value = 0.0;
    bool accuracy_warning = false;
};

/// Physical-space values u(r) reconstructed from the radial profile with the
/// Bochner inversion formula
///   u(r) = 2 pi r^{1-n/2} \int_0^inf uhat(rho) J_{n/2-1}(2 pi rho r) rho^{n/2} drho.
/// Oscillation-aware panel quadrature with power-law tail handling; each value
/// carries a flag raised when the internal refinement check disagrees.
std::vector<RadialValue> inverse_radial_transform(const SpectralField& field,
                                                  const std::vector<double>& radii);

/// Weighted profile h at an arbitrary rho: linear interpolation in log rho,
/// clamped to the boundary values outside the grid.
double profile_at_rho(const SpectralField& field, double rho);

/// CSV dump with header "rho,h,uhat".
void write_field_csv(std::ostream& os, const SpectralField& field);

} // namespace pmheat
