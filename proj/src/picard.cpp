#include "pmheat/picard.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pmheat/special_functions.hpp"

namespace pmheat {

namespace {

constexpr double pi = std::numbers::pi;

// phi-function weights of the exponential integrator on one panel:
//   e1(z) = (1 - e^{-z})/z,   e2(z) = (1 - (1+z) e^{-z})/z^2,
// so that for F linear on [t_m, t_m + dt] with endpoint values F0, F1,
//   \int_0^dt e^{-a(dt-s)} F(s) ds = dt [ F1 (e1 - e2) + F0 e2 ],  z = a dt.
double phi1(double z) {
    if (z < 1e-5) {
        return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    }
    return -std::expm1(-z) / z;
}

double phi2(double z) {
    if (z < 1e-3) {
        // sum_{j>=0} (-z)^j (j+1)/(j+2)!
        return 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0 + z * z * z * z / 144.0;
    }
    return (1.0 - (1.0 + z) * std::exp(-z)) / (z * z);
}

double rate_fit(const std::vector<double>& diffs) {
    // Least-squares slope of ln(diffs) against the iteration index over the
    // tail half of the sequence: the first sweeps carry a shape transient,
    // the tail measures the asymptotic contraction rate.
    std::vector<double> ys;
    for (double d : diffs) {
        if (d > 0.0) {
            ys.push_back(std::log(d));
        }
    }
    if (ys.size() < 2) {
        return 0.0;
    }
    const std::size_t start = ys.size() >= 6 ? ys.size() / 2 : 0;
    const std::size_t m = ys.size() - start;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < ys.size(); ++i) {
        sx += static_cast<double>(i);
        sy += ys[i];
        sxx += static_cast<double>(i) * static_cast<double>(i);
        sxy += static_cast<double>(i) * ys[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return std::exp(slope);
}

} // namespace

double Trajectory::x_norm() const {
    double m = 0.0;
    for (const auto& f : states) {
        m = std::max(m, f.pm_norm());
    }
    return m;
}

Trajectory heat_trajectory(const SpectralField& u0, const TimeGrid& tg) {
    Trajectory traj{tg, {}};
    traj.states.reserve(static_cast<std::size_t>(tg.count()));
    for (int m = 0; m < tg.count(); ++m) {
        traj.states.push_back(apply_heat_semigroup(u0, tg.node(m)));
    }
    return traj;
}

double trajectory_gap_norm(const Trajectory& a, const Trajectory& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        m = std::max(m, field_sub(a.states[i], b.states[i]).pm_norm());
    }
    return m;
}

Trajectory trajectory_add(const Trajectory& a, const Trajectory& b) {
    Trajectory out{a.times, {}};
    out.states.reserve(a.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        out.states.push_back(field_add(a.states[i], b.states[i]));
    }
    return out;
}

DuhamelOperator::DuhamelOperator(const RadialKernel& kernel, const RadialGrid& grid,
                                 double field_weight, const TimeGrid& tg)
    : conv_(kernel, grid, field_weight), tg_(tg) {}

Trajectory DuhamelOperator::apply(const Trajectory& traj) const {
    if (!(traj.times == tg_)) {
        throw std::invalid_argument("DuhamelOperator: trajectory time grid mismatch");
    }
    const int nt = tg_.count();
    const RadialGrid& grid = traj.states.front().grid();
    const int nr = grid.count();
    const int n = conv_.kernel().n;
    const double k = conv_.field_weight();

    // convolution of every time slice; weight k - 2 + ... = output_weight
    std::vector<SpectralField> slices;
    slices.reserve(static_cast<std::size_t>(nt));
    for (int m = 0; m < nt; ++m) {
        slices.push_back(conv_.apply(traj.states[static_cast<std::size_t>(m)]));
    }

    // accumulate D_m = \int_0^{t_m} e^{-a (t_m - s)} F(s) ds per node, recursively
    std::vector<std::vector<double>> out(static_cast<std::size_t>(nt),
                                         std::vector<double>(static_cast<std::size_t>(nr), 0.0));
    for (int j = 0; j < nr; ++j) {
        const double rho = grid.nodes()[static_cast<std::size_t>(j)];
        const double a = 4.0 * pi * pi * rho * rho;
        double d = 0.0;
        for (int m = 1; m < nt; ++m) {
            const double dt = tg_.node(m) - tg_.node(m - 1);
            const double z = a * dt;
            const double f0 = slices[static_cast<std::size_t>(m) - 1]
                                  .profile()[static_cast<std::size_t>(j)];
            const double f1 = slices[static_cast<std::size_t>(m)]
                                  .profile()[static_cast<std::size_t>(j)];
            const double e1 = phi1(z);
            const double e2 = phi2(z);
            d = std::exp(-z) * d + dt * (f1 * (e1 - e2) + f0 * e2);
            // lift from the convolution weight k-2 back to weight k
            out[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = d * rho * rho;
        }
    }

    Trajectory result{tg_, {}};
    result.states.reserve(static_cast<std::size_t>(nt));
    for (int m = 0; m < nt; ++m) {
        result.states.emplace_back(n, k, grid, std::move(out[static_cast<std::size_t>(m)]));
    }
    return result;
}

SpectralField DuhamelOperator::evaluate_mild_rhs(const Trajectory& traj,
                                                 const SpectralField& u0, double t) const {
    if (t < 0.0 || t > tg_.t_end()) {
        throw std::domain_error("evaluate_mild_rhs: time outside the trajectory grid");
    }
    int seg = 0;
    while (seg + 1 < tg_.count() && tg_.node(seg + 1) <= t) {
        ++seg;
    }

    std::vector<SpectralField> slices;
    slices.reserve(static_cast<std::size_t>(seg) + 2);
    for (int m = 0; m <= std::min(seg + 1, tg_.count() - 1); ++m) {
        slices.push_back(conv_.apply(traj.states[static_cast<std::size_t>(m)]));
    }

    const RadialGrid& grid = traj.states.front().grid();
    const int nr = grid.count();
    std::vector<double> h(static_cast<std::size_t>(nr));
    for (int j = 0; j < nr; ++j) {
        const double rho = grid.nodes()[static_cast<std::size_t>(j)];
        const double a = 4.0 * pi * pi * rho * rho;
        double d = 0.0;
        for (int m = 1; m <= seg; ++m) {
            const double dt = tg_.node(m) - tg_.node(m - 1);
            const double z = a * dt;
            const double f0 = slices[static_cast<std::size_t>(m) - 1]
                                  .profile()[static_cast<std::size_t>(j)];
            const double f1 = slices[static_cast<std::size_t>(m)]
                                  .profile()[static_cast<std::size_t>(j)];
            d = std::exp(-z) * d + dt * (f1 * (phi1(z) - phi2(z)) + f0 * phi2(z));
        }
        if (t > tg_.node(seg)) {
            // partial panel [t_seg, t] with the linearly interpolated endpoint
            const double dt_full = tg_.node(seg + 1) - tg_.node(seg);
            const double dtp = t - tg_.node(seg);
            const double f0 = slices[static_cast<std::size_t>(seg)]
                                  .profile()[static_cast<std::size_t>(j)];
            const double f1 = slices[static_cast<std::size_t>(seg) + 1]
                                  .profile()[static_cast<std::size_t>(j)];
            const double ft = f0 + (f1 - f0) * dtp / dt_full;
            const double z = a * dtp;
            d = std::exp(-z) * d + dtp * (ft * (phi1(z) - phi2(z)) + f0 * phi2(z));
        }
        h[static_cast<std::size_t>(j)] = d * rho * rho;
    }
    SpectralField duhamel(traj.states.front().dimension(), conv_.field_weight(), grid,
                          std::move(h));
    return field_add(apply_heat_semigroup(u0, t), duhamel);
}

Trajectory duhamel_apply(const RadialKernel& kernel, const Trajectory& traj) {
    const SpectralField& first = traj.states.front();
    DuhamelOperator op(kernel, first.grid(), first.weight(), traj.times);
    return op.apply(traj);
}

ContractionRefusal::ContractionRefusal(double tau)
    : std::runtime_error("picard_solve: contraction certificate fails, tau = " +
                         std::to_string(tau) +
                         " >= 1 (potential too large for the PM threshold condition)"),
      tau_(tau) {}

NonConvergence::NonConvergence(std::vector<double> diffs)
    : std::runtime_error("picard_solve: no convergence within max_iter"),
      diffs_(std::move(diffs)) {}

double contraction_factor(const PotentialSpec& spec, int n, double k) {
    return hardy_constant(n, k) * pm_norm_bound(spec, n).value;
}

double contraction_factor(const RadialKernel& kernel, double k) {
    if (std::abs(kernel.exponent - (kernel.n - 2.0)) > 1e-12) {
        throw std::domain_error(
            "contraction_factor: kernel must decay like |eta|^{-(n-2)} to lie in PM^{n-2}");
    }
    return hardy_constant(kernel.n, k) * std::abs(kernel.coefficient);
}

RadialKernel kernel_from_hardy(const PotentialSpec& spec, int n) {
    if (spec.kind != PotentialKind::hardy) {
        throw std::invalid_argument(
            "kernel_from_hardy: the radial solver handles inverse-square potentials only; "
            "non-radial families are threshold-only (see cartesian backend)");
    }
    return RadialKernel{n, n - 2.0, spec.lambda * inverse_square_fourier_coefficient(n), 0.0};
}

RadialKernel mollified_hardy_kernel(double lambda, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::domain_error("mollified_hardy_kernel: epsilon must be positive");
    }
    return RadialKernel{3, 1.0, lambda * pi, 2.0 * pi * epsilon};
}

SolveReport picard_solve(const RadialKernel& kernel, const SpectralField& u0, const TimeGrid& tg,
                         double tol, int max_iter, const SolveOptions& opts) {
    const double tau = contraction_factor(kernel, u0.weight());
    if (tau >= 1.0 && !opts.override_contraction) {
        throw ContractionRefusal(tau);
    }

    const Trajectory heat = heat_trajectory(u0, tg);
    DuhamelOperator duhamel(kernel, u0.grid(), u0.weight(), tg);

    Trajectory current = opts.initial_guess ? *opts.initial_guess : heat;
    std::vector<double> diffs;
    bool converged = false;

    for (int iter = 1; iter <= max_iter; ++iter) {
        Trajectory next = trajectory_add(heat, duhamel.apply(current));
        const double diff = trajectory_gap_norm(next, current);
        diffs.push_back(diff);
        current = std::move(next);
        if (diff <= tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergence(diffs);
    }
    const int iterations = static_cast<int>(diffs.size());
    const double rate = rate_fit(diffs);
    return SolveReport{std::move(current), iterations, std::move(diffs), rate, tau, true};
}

SolveReport picard_solve(const PotentialSpec& spec, const SpectralField& u0, const TimeGrid& tg,
                         double tol, int max_iter, const SolveOptions& opts) {
    return picard_solve(kernel_from_hardy(spec, u0.dimension()), u0, tg, tol, max_iter, opts);
}

double mild_residual(const RadialKernel& kernel, const SpectralField& u0,
                     const Trajectory& traj) {
    const Trajectory heat = heat_trajectory(u0, traj.times);
    DuhamelOperator duhamel(kernel, u0.grid(), u0.weight(), traj.times);
    return trajectory_gap_norm(traj, trajectory_add(heat, duhamel.apply(traj)));
}

DependenceReport continuous_dependence_check(const SpectralField& u0, const SpectralField& v0,
                                             const PotentialSpec& V, const PotentialSpec& W,
                                             const TimeGrid& tg, double tol, int max_iter) {
    const int n = u0.dimension();
    const double k = u0.weight();
    const double c = hardy_constant(n, k);
    const double norm_v = pm_norm_bound(V, n).value;
    const double norm_w = pm_norm_bound(W, n).value;
    if (c * norm_v >= 1.0 || c * norm_w >= 1.0) {
        throw ContractionRefusal(std::max(c * norm_v, c * norm_w));
    }

    const SolveReport ru = picard_solve(V, u0, tg, tol, max_iter);
    const SolveReport rv = picard_solve(W, v0, tg, tol, max_iter);

    DependenceReport rep;
    rep.measured = trajectory_gap_norm(ru.trajectory, rv.trajectory);
    rep.data_gap = field_sub(u0, v0).pm_norm();
    rep.potential_gap = std::abs(V.lambda - W.lambda) * inverse_square_fourier_coefficient(n);
    rep.bound = (rep.data_gap + c * v0.pm_norm() / (1.0 - c * norm_w) * rep.potential_gap) /
                (1.0 - c * norm_v);
    rep.within = rep.measured <= rep.bound * 1.05;
    return rep;
}

} // namespace pmheat
