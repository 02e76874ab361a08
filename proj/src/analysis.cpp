#include "pmheat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pmheat/special_functions.hpp"

namespace pmheat {

namespace {

std::optional<double> loglog_tail_slope(const std::vector<double>& times,
                                        const std::vector<double>& norms) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] > 0.0 && norms[i] > 0.0) {
            xs.push_back(std::log(times[i]));
            ys.push_back(std::log(norms[i]));
        }
    }
    // fit only when the series materially decays; the truncation-floor drift
    // of homogeneous data (a fraction of a percent) is not a decay law
    if (xs.size() < 3 || ys.front() - ys.back() < 0.02) {
        return std::nullopt;
    }
    const std::size_t start = xs.size() / 2; // fit the tail half
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t m = xs.size() - start;
    for (std::size_t i = start; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace

StationaryPair stationary_pair(double lambda, int n) {
    const double ls = hardy_critical_coupling(n);
    if (!(std::abs(lambda) < ls)) {
        throw std::domain_error("stationary_pair: need |lambda| < (n-2)^2/4");
    }
    StationaryPair p;
    p.n = n;
    p.lambda = lambda;
    p.l = std::sqrt(ls - lambda);
    const double base = -0.5 * (n - 2.0);
    p.exponents = {base + p.l, base - p.l};
    p.indices = {0.5 * (n + 2.0) + p.l, 0.5 * (n + 2.0) - p.l};
    for (int i = 0; i < 2; ++i) {
        const double k = p.indices[static_cast<std::size_t>(i)];
        p.fourier_amplitudes[static_cast<std::size_t>(i)] =
            (k > 0.0 && k < static_cast<double>(n))
                ? homogeneous_fourier_constant(0, k, n).real()
                : std::numeric_limits<double>::quiet_NaN();
    }
    return p;
}

double power_law_mild_residual(double lambda, int n, double k, const RadialGrid& grid,
                               const TimeGrid& tg) {
    if (!(k > 2.0 && k < static_cast<double>(n))) {
        throw std::domain_error("power_law_mild_residual: index must lie in (2, n)");
    }
    const SpectralField omega = make_power_law_field(n, k, 1.0, grid);
    const RadialKernel kernel = kernel_from_hardy(PotentialSpec::make_hardy(lambda), n);
    DuhamelOperator duhamel(kernel, grid, k, tg);

    Trajectory constant{tg, std::vector<SpectralField>(static_cast<std::size_t>(tg.count()), omega)};
    const Trajectory mapped = trajectory_add(heat_trajectory(omega, tg), duhamel.apply(constant));
    return trajectory_gap_norm(mapped, constant) / omega.pm_norm();
}

double stationarity_residual(const StationaryPair& pair, int which, const RadialGrid& grid,
                             const TimeGrid& tg) {
    if (which != 1 && which != 2) {
        throw std::invalid_argument("stationarity_residual: which must be 1 or 2");
    }
    const double k = pair.indices[static_cast<std::size_t>(which - 1)];
    if (!(k > 2.0 && k < static_cast<double>(pair.n))) {
        throw std::domain_error(
            "stationarity_residual: stationary index falls outside (2, n) for this lambda");
    }
    return power_law_mild_residual(pair.lambda, pair.n, k, grid, tg);
}

AsymptoticSeries semigroup_gap(const SpectralField& psi, const std::vector<double>& times) {
    AsymptoticSeries s;
    s.times = times;
    s.gap_norms.reserve(times.size());
    for (double t : times) {
        s.gap_norms.push_back(apply_heat_semigroup(psi, t).pm_norm());
    }
    s.fitted_slope = loglog_tail_slope(s.times, s.gap_norms);
    return s;
}

double decade_ratio(const AsymptoticSeries& series) {
    if (series.times.empty()) {
        return 1.0;
    }
    const double t_end = series.times.back();
    const double n_end = series.gap_norms.back();
    // reference: latest node at or before t_end / 10
    std::size_t ref = series.times.size();
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (series.times[i] <= 0.1 * t_end) {
            ref = i;
        }
    }
    if (ref == series.times.size()) {
        ref = 0; // series shorter than a decade; compare against its start
    }
    const double n_ref = series.gap_norms[ref];
    if (n_ref == 0.0) {
        return n_end == 0.0 ? 0.0 : 1.0;
    }
    return n_end / n_ref;
}

ConvergenceExperiment convergence_experiment(const PotentialSpec& V, const SpectralField& u0,
                                             const SpectralField& v0, const TimeGrid& tg,
                                             double tol, int max_iter) {
    const SolveReport ru = picard_solve(V, u0, tg, tol, max_iter);
    const SolveReport rv = picard_solve(V, v0, tg, tol, max_iter);

    ConvergenceExperiment ex;
    ex.solution_gap.times = tg.nodes();
    ex.solution_gap.gap_norms.reserve(static_cast<std::size_t>(tg.count()));
    for (int m = 0; m < tg.count(); ++m) {
        ex.solution_gap.gap_norms.push_back(
            field_sub(ru.trajectory.state(m), rv.trajectory.state(m)).pm_norm());
    }
    ex.solution_gap.fitted_slope =
        loglog_tail_slope(ex.solution_gap.times, ex.solution_gap.gap_norms);

    ex.semigroup_series = semigroup_gap(field_sub(u0, v0), tg.nodes());

    ex.solution_decays = decade_ratio(ex.solution_gap) < 0.3;
    ex.semigroup_decays = decade_ratio(ex.semigroup_series) < 0.3;
    ex.consistent = ex.solution_decays == ex.semigroup_decays;
    return ex;
}

PositivityReport positivity_check(const Trajectory& traj, const std::vector<double>& radii,
                                  const std::vector<double>& times) {
    PositivityReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.max_value = -std::numeric_limits<double>::infinity();
    for (double t : times) {
        int best = 0;
        for (int m = 1; m < traj.times.count(); ++m) {
            if (std::abs(traj.times.node(m) - t) < std::abs(traj.times.node(best) - t)) {
                best = m;
            }
        }
        const auto values = inverse_radial_transform(traj.state(best), radii);
        for (const auto& v : values) {
            rep.min_value = std::min(rep.min_value, v.value);
            rep.max_value = std::max(rep.max_value, v.value);
            rep.any_warning = rep.any_warning || v.accuracy_warning;
        }
    }
    rep.passes = rep.min_value >= -1e-3 * std::max(rep.max_value, 0.0);
    return rep;
}

std::string to_string(Equivalence e) {
    switch (e) {
    case Equivalence::equivalent:
        return "equivalent";
    case Equivalence::not_equivalent:
        return "not_equivalent";
    case Equivalence::undecided:
        return "undecided";
    }
    return "undecided";
}

Equivalence equivalence_probe(const SpectralField& u0, const SpectralField& v0, double horizon) {
    const SpectralField psi = field_sub(u0, v0);
    if (psi.pm_norm() == 0.0) {
        return Equivalence::equivalent;
    }
    std::vector<double> times;
    const int count = 13;
    for (int i = 0; i < count; ++i) {
        times.push_back(std::pow(horizon, static_cast<double>(i) / (count - 1)));
    }
    const AsymptoticSeries series = semigroup_gap(psi, times);
    const double ratio = decade_ratio(series);
    if (ratio < 0.3) {
        return Equivalence::equivalent;
    }
    if (ratio > 0.9) {
        return Equivalence::not_equivalent;
    }
    return Equivalence::undecided;
}

} // namespace pmheat
