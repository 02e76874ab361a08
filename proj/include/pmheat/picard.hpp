#pragma once

#include <stdexcept>
#include <vector>

#include "pmheat/grid.hpp"
#include "pmheat/potential.hpp"
#include "pmheat/radial_convolution.hpp"
#include "pmheat/spectral_field.hpp"

namespace pmheat {

/// One spectral field per time node; states.front() is the initial datum.
struct Trajectory {
    TimeGrid times;
    std::vector<SpectralField> states;

    const SpectralField& state(int m) const { return states[static_cast<std::size_t>(m)]; }
    /// sup over time nodes of the PM^k norm.
    double x_norm() const;
};

/// Free heat flow of u0 on the given time grid.
Trajectory heat_trajectory(const SpectralField& u0, const TimeGrid& tg);

double trajectory_gap_norm(const Trajectory& a, const Trajectory& b);
Trajectory trajectory_add(const Trajectory& a, const Trajectory& b);

/// The Duhamel term of the mild equation,
///   L(u)(t) = \int_0^t e^{-4 pi^2 rho^2 (t-s)} (Vhat * uhat)(rho, s) ds,
/// evaluated with the convolution at each time node and a piecewise-linear
/// model of the integrand in s, which makes the stiff factor exact per panel
/// (phi-function weights). The output vanishes at t = 0.
class DuhamelOperator {
public:
    DuhamelOperator(const RadialKernel& kernel, const RadialGrid& grid, double field_weight,
                    const TimeGrid& tg);

    Trajectory apply(const Trajectory& traj) const;

    /// Mild-equation right-hand side G(t)u0 + L(traj)(t) at an arbitrary time.
    SpectralField evaluate_mild_rhs(const Trajectory& traj, const SpectralField& u0,
                                    double t) const;

    const RadialConvolution& convolution() const { return conv_; }

private:
    RadialConvolution conv_;
    TimeGrid tg_;
};

/// One-shot Duhamel application (builds the convolution operator each call;
/// the solver reuses a DuhamelOperator instead).
Trajectory duhamel_apply(const RadialKernel& kernel, const Trajectory& traj);

/// Raised when the contraction certificate fails (tau >= 1) and no override
/// was requested; the mild solver has no construction in that regime.
class ContractionRefusal : public std::runtime_error {
public:
    explicit ContractionRefusal(double tau);
    double tau() const { return tau_; }

private:
    double tau_;
};

/// Raised when the Picard iteration exhausts max_iter; carries the diffs.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(std::vector<double> diffs);
    const std::vector<double>& diffs() const { return diffs_; }

private:
    std::vector<double> diffs_;
};

struct SolveReport {
    Trajectory trajectory;
    int iterations = 0;
    std::vector<double> diffs;      // sup-over-time PM^k norms of successive gaps
    double measured_rate = 0.0;     // geometric fit of the diffs
    double tau = 0.0;               // predicted contraction factor
    bool converged = false;
};

struct SolveOptions {
    bool override_contraction = false;  // run even when tau >= 1 (exploratory)
    const Trajectory* initial_guess = nullptr; // defaults to the heat flow
};

/// Predicted contraction factor tau = C_{n-2,k} * ||V||_{PM^{n-2}} (bound).
double contraction_factor(const PotentialSpec& spec, int n, double k);
/// Same for a raw Fourier-side kernel; requires exponent n-2.
double contraction_factor(const RadialKernel& kernel, double k);

/// Fourier side of the inverse-square potential as a radial kernel.
RadialKernel kernel_from_hardy(const PotentialSpec& spec, int n);

/// Exact Fourier side of the mollified potential lambda / (|x|^2 + eps^2)
/// in three dimensions: lambda pi e^{-2 pi eps rho} / rho.
RadialKernel mollified_hardy_kernel(double lambda, double epsilon);

/// Whole-trajectory Picard iteration for the mild equation
/// u = G(t) u0 + L(u); iterates u_{b+1} = G u0 + L(u_b) until the
/// sup-over-time PM^k gap drops below tol.
SolveReport picard_solve(const RadialKernel& kernel, const SpectralField& u0, const TimeGrid& tg,
                         double tol, int max_iter, const SolveOptions& opts = {});
SolveReport picard_solve(const PotentialSpec& spec, const SpectralField& u0, const TimeGrid& tg,
                         double tol, int max_iter, const SolveOptions& opts = {});

/// ||u - (G u0 + L u)||_{X_k} of a trajectory, for convergence certificates.
double mild_residual(const RadialKernel& kernel, const SpectralField& u0, const Trajectory& traj);

struct DependenceReport {
    double measured = 0.0;       // ||u - v||_{X_k} on the grid
    double bound = 0.0;          // Lipschitz data-to-solution bound
    bool within = false;         // measured <= bound * 1.05
    double data_gap = 0.0;       // ||u0 - v0||_{PM^k}
    double potential_gap = 0.0;  // ||V - W||_{PM^{n-2}}
};

/// Solves both problems and compares the measured solution gap against the
/// closed-form continuous-dependence bound.
DependenceReport continuous_dependence_check(const SpectralField& u0, const SpectralField& v0,
                                             const PotentialSpec& V, const PotentialSpec& W,
                                             const TimeGrid& tg, double tol,
                                             int max_iter = 200);

} // namespace pmheat
