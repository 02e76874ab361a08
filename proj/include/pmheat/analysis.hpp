#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pmheat/picard.hpp"

namespace pmheat {

/// The two explicit stationary power-law solutions of the inverse-square
/// problem: omega_i = A_i |x|^{-(n-2)/2 +- l}, l = sqrt(lambda_star - lambda),
/// normalized to A_i = 1. omega_i lies in PM^{k_i} with k_i = (n+2)/2 +- l;
/// the pair satisfies the sharp identity (k_i - 2)(n - k_i) = lambda.
struct StationaryPair {
    int n = 0;
    double lambda = 0.0;
    double l = 0.0;
    std::array<double, 2> exponents{};          // physical-space powers
    std::array<double, 2> indices{};            // k_1, k_2
    std::array<double, 2> fourier_amplitudes{}; // gamma_{0,k_i}; NaN outside (0, n)
};

StationaryPair stationary_pair(double lambda, int n);

/// Relative sup residual of one mild-map sweep H(w) = G(t) w + L(w) applied
/// to the power-law datum with index k (constant weighted profile). Vanishes
/// up to quadrature error exactly when k is one of the stationary indices.
double power_law_mild_residual(double lambda, int n, double k, const RadialGrid& grid,
                               const TimeGrid& tg);

/// Same, for omega_1 (which = 1) or omega_2 (which = 2); requires the index
/// to lie strictly inside (2, n).
double stationarity_residual(const StationaryPair& pair, int which, const RadialGrid& grid,
                             const TimeGrid& tg);

struct AsymptoticSeries {
    std::vector<double> times;
    std::vector<double> gap_norms;
    std::optional<double> fitted_slope; // log-log tail slope, when decaying
};

/// ||G(t) psi||_{PM^k} over the requested times.
AsymptoticSeries semigroup_gap(const SpectralField& psi, const std::vector<double>& times);

/// Ratio of the series over its final decade of time, 1.0 for empty/zero data.
double decade_ratio(const AsymptoticSeries& series);

struct ConvergenceExperiment {
    AsymptoticSeries solution_gap;    // ||u(t) - v(t)||_{PM^k} on the time grid
    AsymptoticSeries semigroup_series; // ||G(t)(u0 - v0)||_{PM^k}, same times
    bool solution_decays = false;
    bool semigroup_decays = false;
    bool consistent = false; // the two classifications agree (the iff, desk scale)
};

/// Solves the mild problem for both data and compares the decay of the
/// solution gap with the decay of the free gap.
ConvergenceExperiment convergence_experiment(const PotentialSpec& V, const SpectralField& u0,
                                             const SpectralField& v0, const TimeGrid& tg,
                                             double tol = 1e-8, int max_iter = 200);

struct PositivityReport {
    double min_value = 0.0;
    double max_value = 0.0;
    bool passes = false;      // min >= -1e-3 * max
    bool any_warning = false; // inverse-transform refinement disagreements
};

/// Reconstructs u(r, t) at the sampled radii and trajectory nodes nearest the
/// requested times and checks for sign violations.
PositivityReport positivity_check(const Trajectory& traj, const std::vector<double>& radii,
                                  const std::vector<double>& times);

enum class Equivalence { equivalent, not_equivalent, undecided };

std::string to_string(Equivalence e);

/// Classifies a data pair by the decay of ||G(t)(u0 - v0)|| over [1, horizon]:
/// final-decade ratio < 0.3 -> equivalent, > 0.9 -> not_equivalent, otherwise
/// undecided (a legitimate outcome).
Equivalence equivalence_probe(const SpectralField& u0, const SpectralField& v0,
                              double horizon = 1e3);

} // namespace pmheat
