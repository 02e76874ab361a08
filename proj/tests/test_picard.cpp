#include <doctest.h>

#include <cmath>

#include "pmheat/picard.hpp"
#include "pmheat/special_functions.hpp"

using namespace pmheat;

namespace {

const RadialGrid grid = RadialGrid::standard();

Trajectory constant_trajectory(const SpectralField& f, const TimeGrid& tg) {
    return Trajectory{tg, std::vector<SpectralField>(static_cast<std::size_t>(tg.count()), f)};
}

} // namespace

TEST_CASE("time grid construction") {
    const TimeGrid tg = TimeGrid::standard();
    CHECK(tg.count() == 64);
    CHECK(tg.node(0) == 0.0);
    CHECK(tg.t_end() == doctest::Approx(4.0));
    for (int m = 1; m < tg.count(); ++m) {
        CHECK(tg.node(m) > tg.node(m - 1));
    }
    const TimeGrid scaled = tg.scaled(0.25);
    for (int m = 0; m < tg.count(); ++m) {
        CHECK(scaled.node(m) == tg.node(m) * 0.25);
    }
    CHECK_THROWS_AS(TimeGrid(-1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(std::vector<double>{0.0, 1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("duhamel term vanishes on the zero trajectory") {
    const TimeGrid tg = TimeGrid::standard(1.0, 16);
    const SpectralField zero = make_power_law_field(4, 3.0, 0.0, grid);
    DuhamelOperator duh(RadialKernel{4, 2.0, 0.5}, grid, 3.0, tg);
    const Trajectory out = duh.apply(constant_trajectory(zero, tg));
    for (const auto& f : out.states) {
        CHECK(f.pm_norm() == 0.0);
    }
}

TEST_CASE("duhamel term on a stationary profile is exact") {
    // at the stationary index the convolution returns lambda-balanced mass and
    // the time integral is analytic, so L(omega)(t) = (1 - e^{-4pi^2 rho^2 t}) omega
    const double lambda = 0.75;
    const int n = 4;
    const double k = 2.5; // (k-2)(n-k) = 0.75 = lambda
    const TimeGrid tg = TimeGrid::standard(2.0, 32);
    const SpectralField omega = make_power_law_field(n, k, 1.0, grid);
    const RadialKernel kernel = kernel_from_hardy(PotentialSpec::make_hardy(lambda), n);
    DuhamelOperator duh(kernel, grid, k, tg);
    const Trajectory out = duh.apply(constant_trajectory(omega, tg));
    double worst = 0.0;
    for (int m = 0; m < tg.count(); ++m) {
        for (int j = 0; j < grid.count(); ++j) {
            const double rho = grid.nodes()[static_cast<std::size_t>(j)];
            const double expect = 1.0 - std::exp(-4.0 * M_PI * M_PI * rho * rho * tg.node(m));
            worst = std::max(worst,
                             std::abs(out.state(m).profile()[static_cast<std::size_t>(j)] -
                                      expect));
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("duhamel term is linear in the trajectory") {
    const TimeGrid tg = TimeGrid::standard(1.0, 16);
    const SpectralField f = make_gaussian_field(4, 3.0, grid);
    const SpectralField g = make_gaussian_field(4, 3.0, grid, 0.4, 2.0);
    DuhamelOperator duh(RadialKernel{4, 2.0, 0.5}, grid, 3.0, tg);
    const Trajectory base = duh.apply(heat_trajectory(f, tg));
    const Trajectory scaled = duh.apply(heat_trajectory(field_scale(f, -3.0), tg));
    for (int m = 0; m < tg.count(); ++m) {
        CHECK(field_sub(scaled.state(m), field_scale(base.state(m), -3.0)).pm_norm() <=
              1e-12 * base.x_norm() * 3.0);
    }
    // additivity (exact up to the data-driven tail continuation slopes)
    const Trajectory other = duh.apply(heat_trajectory(g, tg));
    const Trajectory joint = duh.apply(heat_trajectory(field_add(f, g), tg));
    for (int m = 0; m < tg.count(); ++m) {
        CHECK(field_sub(joint.state(m), field_add(base.state(m), other.state(m))).pm_norm() <=
              1e-9 * joint.x_norm());
    }
}

TEST_CASE("free flow converges in one sweep") {
    const SpectralField u0 = make_power_law_field(4, 3.0, 1.0, grid);
    const SolveReport rep =
        picard_solve(PotentialSpec::make_hardy(0.0), u0, TimeGrid::standard(), 1e-10, 10);
    CHECK(rep.iterations == 1);
    CHECK(rep.converged);
    CHECK(rep.tau == 0.0);
    const Trajectory heat = heat_trajectory(u0, rep.trajectory.times);
    CHECK(trajectory_gap_norm(rep.trajectory, heat) == 0.0);
    // the flow never exceeds the datum norm
    for (const auto& f : rep.trajectory.states) {
        CHECK(f.pm_norm() <= u0.pm_norm() * (1.0 + 1e-15));
    }
}

TEST_CASE("canonical contraction run") {
    const SpectralField u0 = make_power_law_field(4, 3.0, 1.0 / (2.0 * M_PI), grid);
    const SolveReport rep =
        picard_solve(PotentialSpec::make_hardy(0.5), u0, TimeGrid::standard(), 1e-8, 40);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 40);
    CHECK(rep.tau == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.measured_rate >= 0.45);
    CHECK(rep.measured_rate <= 0.55);
    for (std::size_t b = 1; b < rep.diffs.size(); ++b) {
        if (rep.diffs[b - 1] > 0.0) {
            CHECK(rep.diffs[b] / rep.diffs[b - 1] <= rep.tau * 1.05);
        }
    }
    // fixed-point residual certificate
    const RadialKernel kernel = kernel_from_hardy(PotentialSpec::make_hardy(0.5), 4);
    CHECK(mild_residual(kernel, u0, rep.trajectory) <= 1e-8 / (1.0 - 0.5) * 1.05);
}

TEST_CASE("contraction factors") {
    CHECK(contraction_factor(PotentialSpec::make_hardy(0.5), 4, 3.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(contraction_factor(PotentialSpec::make_hardy(0.0), 4, 3.0) == 0.0);
    // at a stationary index the factor is exactly one
    const double lambda = 0.75;
    const double k2 = 2.5;
    CHECK(std::abs(contraction_factor(PotentialSpec::make_hardy(lambda), 4, k2) - 1.0) <=
          1e-12);
    CHECK_THROWS_AS(contraction_factor(RadialKernel{4, 1.5, 1.0}, 3.0), std::domain_error);
}

TEST_CASE("refusal above the threshold and the exploratory override") {
    const SpectralField u0 = make_power_law_field(4, 3.0, 1.0, grid);
    CHECK_THROWS_AS(
        picard_solve(PotentialSpec::make_hardy(1.2), u0, TimeGrid::standard(), 1e-8, 10),
        ContractionRefusal);
    try {
        picard_solve(PotentialSpec::make_hardy(1.2), u0, TimeGrid::standard(), 1e-8, 10);
    } catch (const ContractionRefusal& e) {
        CHECK(e.tau() == doctest::Approx(1.2).epsilon(1e-12));
    }
    // with the override the iteration runs; past the shape transient the
    // gaps expand at the supercritical rate and the solver reports them
    SolveOptions opts;
    opts.override_contraction = true;
    try {
        picard_solve(PotentialSpec::make_hardy(1.2), u0, TimeGrid::standard(), 1e-12, 30, opts);
        CHECK(false);
    } catch (const NonConvergence& e) {
        REQUIRE(e.diffs().size() == 30);
        CHECK(e.diffs().back() > e.diffs().front());
        const std::size_t last = e.diffs().size() - 1;
        CHECK(e.diffs()[last] / e.diffs()[last - 1] > 1.0);
    }
}

TEST_CASE("solver rejects non-radial potential families") {
    const SpectralField u0 = make_power_law_field(3, 2.5, 1.0, grid);
    CHECK_THROWS_AS(
        picard_solve(PotentialSpec::make_dipole({0.01, 0, 0}), u0, TimeGrid::standard(), 1e-8, 10),
        std::invalid_argument);
}

TEST_CASE("uniqueness probe: both initial guesses land on the same fixed point") {
    const SpectralField u0 = make_power_law_field(4, 3.0, 1.0 / (2.0 * M_PI), grid);
    const PotentialSpec V = PotentialSpec::make_hardy(0.5);
    const double tol = 1e-9;
    const SolveReport from_heat = picard_solve(V, u0, TimeGrid::standard(), tol, 60);

    const SpectralField zero = make_power_law_field(4, 3.0, 0.0, grid);
    const Trajectory zero_traj{TimeGrid::standard(),
                               std::vector<SpectralField>(64, zero)};
    SolveOptions opts;
    opts.initial_guess = &zero_traj;
    const SolveReport from_zero = picard_solve(V, u0, TimeGrid::standard(), tol, 60, opts);

    CHECK(trajectory_gap_norm(from_heat.trajectory, from_zero.trajectory) <=
          2.0 * tol / (1.0 - 0.5));
}

TEST_CASE("self-similar data stay self-similar under grid shifts") {
    // homogeneous datum and potential: the trajectory satisfies
    // h(rho, t) = h(rho r^m, t r^{-2m}); run the solver on a time grid scaled
    // by r^{-2m} and compare against the index-shifted original
    const int m = 16;
    const double scale = std::pow(grid.ratio(), -2.0 * m);
    const SpectralField u0 = make_power_law_field(4, 3.0, 1.0 / (2.0 * M_PI), grid);
    const PotentialSpec V = PotentialSpec::make_hardy(0.5);
    const TimeGrid tg1 = TimeGrid::standard();
    const SolveReport r1 = picard_solve(V, u0, tg1, 1e-10, 80);
    const SolveReport r2 = picard_solve(V, u0, tg1.scaled(scale), 1e-10, 80);

    const double sup = r1.trajectory.x_norm();
    const int edge = 64;
    double worst = 0.0;
    for (int i = 0; i < tg1.count(); ++i) {
        for (int j = edge; j < grid.count() - 1 - edge - m; ++j) {
            const double a = r1.trajectory.state(i).profile()[static_cast<std::size_t>(j)];
            const double b =
                r2.trajectory.state(i).profile()[static_cast<std::size_t>(j) + m];
            worst = std::max(worst, std::abs(a - b) / sup);
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("continuous dependence bounds") {
    const double k = 3.0;
    const SpectralField v0 = make_power_law_field(4, k, 1.0 / (2.0 * M_PI), grid);
    const SpectralField bump = make_gaussian_field(4, k, grid, 0.02);
    const SpectralField u0 = field_add(v0, bump);
    const PotentialSpec V = PotentialSpec::make_hardy(0.5);
    const PotentialSpec W = PotentialSpec::make_hardy(0.45);
    const TimeGrid tg = TimeGrid::standard();

    SUBCASE("identical data and potentials give zero gap") {
        const DependenceReport rep = continuous_dependence_check(v0, v0, V, V, tg, 1e-9);
        CHECK(rep.measured <= 4e-9);
        CHECK(rep.within);
    }
    SUBCASE("data perturbation only") {
        const DependenceReport rep = continuous_dependence_check(u0, v0, V, V, tg, 1e-9);
        CHECK(rep.within);
        CHECK(rep.potential_gap == 0.0);
        // the bound specializes to ||u0 - v0|| / (1 - tau)
        CHECK(rep.bound == doctest::Approx(rep.data_gap / 0.5).epsilon(1e-12));
    }
    SUBCASE("potential perturbation only") {
        const DependenceReport rep = continuous_dependence_check(v0, v0, V, W, tg, 1e-9);
        CHECK(rep.within);
        CHECK(rep.data_gap == 0.0);
        CHECK(rep.potential_gap == doctest::Approx(0.05).epsilon(1e-12));
        // the measured gap scales linearly in the potential gap
        const PotentialSpec W2 = PotentialSpec::make_hardy(0.475);
        const DependenceReport rep2 = continuous_dependence_check(v0, v0, V, W2, tg, 1e-9);
        CHECK(rep.measured == doctest::Approx(2.0 * rep2.measured).epsilon(0.15));
    }
    SUBCASE("joint perturbation") {
        const DependenceReport rep = continuous_dependence_check(u0, v0, V, W, tg, 1e-9);
        CHECK(rep.within);
        CHECK(rep.measured <= rep.bound * 1.05);
    }
}
