#pragma once

#include <complex>
#include <string>
#include <vector>

namespace pmheat {

enum class PotentialKind {
    hardy,                 // lambda / |x|^2
    isotropic_multipolar,  // sum_j lambda_j / |x - x_j|^2
    dipole,                // (d . x) / |x|^3
    anisotropic_multipolar // sum_j (x - x_j) . d_j / |x - x_j|^3
};

struct IsotropicPole {
    std::vector<double> center;
    double lambda = 0.0;
};

struct AnisotropicPole {
    std::vector<double> center;
    std::vector<double> d;
};

/// Description of one of the four supported singular potential families.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::hardy;
    double lambda = 0.0;                     // hardy
    std::vector<IsotropicPole> poles;        // isotropic multipolar
    std::vector<double> d;                   // dipole direction
    std::vector<AnisotropicPole> dpoles;     // anisotropic multipolar

    static PotentialSpec make_hardy(double lambda);
    static PotentialSpec make_isotropic(std::vector<IsotropicPole> poles);
    static PotentialSpec make_dipole(std::vector<double> d);
    static PotentialSpec make_anisotropic(std::vector<AnisotropicPole> dpoles);
};

std::string kind_name(PotentialKind kind);

/// Throws if the description is malformed for dimension n (empty pole lists,
/// zero dipole moment, center length mismatches, non-finite entries).
void validate_potential(const PotentialSpec& spec, int n);

/// PM^{n-2} norm of the potential. `exact` is true when the supremum is
/// attained (single inverse-square pole), false for triangle-inequality
/// bounds. Dipole moments are measured in the sum norm; with the Euclidean
/// norm the dipole thresholds would differ.
struct NormBound {
    double value = 0.0;
    bool exact = false;
};

/// Well-posedness threshold data for one (potential, n, k) triple.
struct ThresholdReport {
    int n = 0;
    double k = 0.0;
    NormBound norm_bound;
    double constant = 0.0;      // C_{n-2,k}
    double tau = 0.0;           // constant * norm_bound.value
    double bound_rhs = 0.0;     // 1 / C_{n-2,k}
    bool passes = false;        // norm_bound.value < bound_rhs, i.e. tau < 1
    double margin = 0.0;        // bound_rhs - norm_bound.value
    double k_opt = 0.0;
    double tau_at_k_opt = 0.0;
    double param_value = 0.0;     // potential strength in its natural units
    double param_threshold = 0.0; // strict upper bound on that strength
};

/// Pointwise V(x); throws on evaluation at a pole.
double physical_value(const PotentialSpec& spec, const std::vector<double>& x);

/// Closed-form Fourier transform V^(xi) with the convention
/// f^(xi) = \int f(x) e^{-2 pi i xi . x} dx; throws at xi = 0.
std::complex<double> fourier_symbol(const PotentialSpec& spec, const std::vector<double>& xi);

NormBound pm_norm_bound(const PotentialSpec& spec, int n);

ThresholdReport threshold_report(const PotentialSpec& spec, int n, double k);

/// lambda * pi^{2-n/2} Gamma((n-2)/2): PM^{n-2} weight of the Fourier side
/// of a unit inverse-square pole.
double inverse_square_fourier_coefficient(int n);

/// 2 pi^{(3-n)/2} Gamma((n-1)/2): analogous weight of a unit dipole.
double dipole_fourier_coefficient(int n);

} // namespace pmheat
