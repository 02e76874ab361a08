#include <doctest.h>

#include <cmath>
#include <random>

#include "pmheat/analysis.hpp"
#include "pmheat/special_functions.hpp"

using namespace pmheat;

namespace {
const RadialGrid grid = RadialGrid::standard();
}

TEST_CASE("stationary pair arithmetic") {
    const StationaryPair p = stationary_pair(0.75, 4);
    CHECK(p.l == doctest::Approx(0.5));
    CHECK(p.exponents[0] == doctest::Approx(-0.5));
    CHECK(p.exponents[1] == doctest::Approx(-1.5));
    CHECK(p.indices[0] == doctest::Approx(3.5));
    CHECK(p.indices[1] == doctest::Approx(2.5));
    CHECK(p.fourier_amplitudes[0] ==
          doctest::Approx(homogeneous_fourier_constant(0, 3.5, 4).real()));

    const StationaryPair zero = stationary_pair(0.0, 5);
    CHECK(zero.l == doctest::Approx(1.5));
    CHECK(zero.exponents[0] == doctest::Approx(0.0));
    CHECK(zero.exponents[1] == doctest::Approx(-3.0));

    // the indices coincide at the critical coupling
    const StationaryPair near = stationary_pair(1.0 - 1e-12, 4);
    CHECK(near.indices[0] == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(near.indices[1] == doctest::Approx(3.0).epsilon(1e-5));

    CHECK_THROWS_AS(stationary_pair(1.0, 4), std::domain_error);
    CHECK_THROWS_AS(stationary_pair(-2.0, 4), std::domain_error);
}

TEST_CASE("stationary index identity on random couplings") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int n : {3, 4, 5, 6}) {
        const double ls = hardy_critical_coupling(n);
        for (int trial = 0; trial < 50; ++trial) {
            const double lambda = unif(rng) * ls * 0.9999;
            const StationaryPair p = stationary_pair(lambda, n);
            for (double k : p.indices) {
                CHECK(std::abs((k - 2.0) * (n - k) - lambda) <= 1e-12 * std::max(1.0, lambda));
            }
            CHECK(p.indices[0] + p.indices[1] == doctest::Approx(n + 2.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("stationary profile is a mild fixed point; detuned ones are not") {
    const StationaryPair p = stationary_pair(0.75, 4);
    const TimeGrid tg = TimeGrid::standard();
    const double res2 = stationarity_residual(p, 2, grid, tg);
    CHECK(res2 <= 2e-3);
    // omega_1 has index 3.5, also inside (2, n)
    CHECK(stationarity_residual(p, 1, grid, tg) <= 2e-3);

    const double detuned = power_law_mild_residual(0.75, 4, 3.0, grid, tg);
    CHECK(detuned >= 0.1);
    // the mismatch factor is |1 - lambda / ((k-2)(n-k))| = 1/4 at k = 3
    CHECK(detuned == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("residual is invariant under amplitude scaling") {
    // H - id is linear on the homogeneous class, so the relative residual
    // cannot depend on the amplitude; check by scaling the profile directly
    const double lambda = 0.75;
    const int n = 4;
    const double k = 2.5;
    const TimeGrid tg = TimeGrid::standard(1.0, 24);
    const RadialKernel kernel = kernel_from_hardy(PotentialSpec::make_hardy(lambda), n);
    DuhamelOperator duh(kernel, grid, k, tg);
    for (double amp : {1.0, 5.0, -2.0}) {
        const SpectralField omega = make_power_law_field(n, k, amp, grid);
        Trajectory constant{tg, std::vector<SpectralField>(
                                    static_cast<std::size_t>(tg.count()), omega)};
        const Trajectory mapped =
            trajectory_add(heat_trajectory(omega, tg), duh.apply(constant));
        const double res = trajectory_gap_norm(mapped, constant) / omega.pm_norm();
        CHECK(res <= 2e-3);
    }
}

TEST_CASE("stationary residual enforces the index window") {
    // at lambda = 0 the lower index degenerates to k = 2, outside (2, n)
    const StationaryPair p = stationary_pair(0.0, 4);
    CHECK_THROWS_AS(stationarity_residual(p, 2, grid, TimeGrid::standard()),
                    std::domain_error);
}

TEST_CASE("semigroup gap series") {
    std::vector<double> times;
    for (int i = 0; i <= 24; ++i) {
        times.push_back(10.0 * std::pow(100.0, i / 24.0));
    }

    const AsymptoticSeries gauss = semigroup_gap(make_gaussian_field(4, 3.0, grid), times);
    REQUIRE(gauss.fitted_slope.has_value());
    CHECK(std::abs(*gauss.fitted_slope - (-1.5)) <= 0.075);

    const AsymptoticSeries hom =
        semigroup_gap(make_power_law_field(4, 3.0, 0.7, grid), times);
    double lo = hom.gap_norms.front(), hi = lo;
    for (double v : hom.gap_norms) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double floor = std::exp(-4.0 * M_PI * M_PI * 1e-8 * times.back());
    CHECK(lo / hi >= floor * (1.0 - 1e-9));
    CHECK_FALSE(hom.fitted_slope.has_value());

    const AsymptoticSeries zero =
        semigroup_gap(make_power_law_field(4, 3.0, 0.0, grid), times);
    for (double v : zero.gap_norms) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("solution gaps decay iff the free gaps decay") {
    const double k = 3.0;
    const PotentialSpec V = PotentialSpec::make_hardy(0.5);
    const TimeGrid tg = TimeGrid::standard();
    const SpectralField v0 = make_power_law_field(4, k, 1.0 / (2.0 * M_PI), grid);

    SUBCASE("identical data give the zero series") {
        const ConvergenceExperiment ex = convergence_experiment(V, v0, v0, tg);
        for (double v : ex.solution_gap.gap_norms) {
            CHECK(v == 0.0);
        }
        CHECK(ex.consistent);
    }
    SUBCASE("a Schwartz bump is forgotten") {
        const SpectralField u0 = field_add(v0, make_gaussian_field(4, k, grid, 0.05));
        const ConvergenceExperiment ex = convergence_experiment(V, u0, v0, tg);
        CHECK(ex.solution_decays);
        CHECK(ex.semigroup_decays);
        CHECK(ex.consistent);
        CHECK(decade_ratio(ex.solution_gap) <= 0.1);
    }
    SUBCASE("a homogeneous offset persists") {
        const SpectralField u0 = make_power_law_field(4, k, 1.2 / (2.0 * M_PI), grid);
        const ConvergenceExperiment ex = convergence_experiment(V, u0, v0, tg);
        CHECK_FALSE(ex.solution_decays);
        CHECK_FALSE(ex.semigroup_decays);
        CHECK(ex.consistent);
        // the gap stays within ten percent of its initial value
        const double first = ex.solution_gap.gap_norms.front();
        for (double v : ex.solution_gap.gap_norms) {
            CHECK(std::abs(v - first) <= 0.1 * first);
        }
    }
    SUBCASE("free flow: the two series coincide exactly") {
        const SpectralField u0 = field_add(v0, make_gaussian_field(4, k, grid, 0.05));
        const ConvergenceExperiment ex =
            convergence_experiment(PotentialSpec::make_hardy(0.0), u0, v0, tg);
        for (std::size_t i = 0; i < ex.solution_gap.gap_norms.size(); ++i) {
            CHECK(ex.solution_gap.gap_norms[i] ==
                  doctest::Approx(ex.semigroup_series.gap_norms[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("equivalence probe") {
    const double k = 3.0;
    const SpectralField f = make_power_law_field(4, k, 1.0 / (2.0 * M_PI), grid);
    const SpectralField bump = make_gaussian_field(4, k, grid, 0.03);
    const SpectralField g1 = field_add(f, bump);
    const SpectralField g2 = field_add(f, field_scale(bump, 2.0));
    const SpectralField hom = make_power_law_field(4, k, 0.9 / (2.0 * M_PI), grid);

    CHECK(equivalence_probe(f, f) == Equivalence::equivalent);
    CHECK(equivalence_probe(g1, f) == Equivalence::equivalent);
    CHECK(equivalence_probe(hom, f) == Equivalence::not_equivalent);
    // symmetry
    CHECK(equivalence_probe(f, g1) == equivalence_probe(g1, f));
    CHECK(equivalence_probe(f, hom) == equivalence_probe(hom, f));
    // transitivity on a decided triple
    CHECK(equivalence_probe(g1, g2) == Equivalence::equivalent);
    CHECK(equivalence_probe(f, g2) == Equivalence::equivalent);
    CHECK(to_string(Equivalence::undecided) == "undecided");
}

TEST_CASE("positivity of reconstructed solutions") {
    const std::vector<double> radii = {0.1, 0.2, 0.5, 1.0, 1.5, 2.0, 3.0};
    const std::vector<double> times = {0.0, 0.05, 0.2, 0.5, 1.0};

    SUBCASE("free gaussian flow") {
        const SpectralField u0 = make_gaussian_field(4, 3.0, grid);
        const SolveReport rep = picard_solve(PotentialSpec::make_hardy(0.0), u0,
                                             TimeGrid::standard(1.0, 32), 1e-8, 10);
        const PositivityReport pos = positivity_check(rep.trajectory, radii, times);
        CHECK(pos.passes);
        CHECK(pos.min_value >= -1e-6 * pos.max_value);
    }
    SUBCASE("attractive potential keeps positive data positive") {
        const SpectralField u0 = make_gaussian_field(4, 3.0, grid);
        const SolveReport rep = picard_solve(PotentialSpec::make_hardy(0.5), u0,
                                             TimeGrid::standard(1.0, 32), 1e-8, 60);
        const PositivityReport pos = positivity_check(rep.trajectory, radii, times);
        CHECK(pos.passes);
    }
    SUBCASE("negative data mirror") {
        const SpectralField u0 = make_gaussian_field(4, 3.0, grid, -1.0);
        const SolveReport rep = picard_solve(PotentialSpec::make_hardy(0.5), u0,
                                             TimeGrid::standard(1.0, 32), 1e-8, 60);
        const PositivityReport pos = positivity_check(rep.trajectory, radii, times);
        CHECK(pos.max_value <= 1e-3 * std::abs(pos.min_value));
    }
}
