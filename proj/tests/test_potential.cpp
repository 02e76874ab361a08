#include <doctest.h>

#include <cmath>
#include <random>

#include "pmheat/io.hpp"
#include "pmheat/potential.hpp"
#include "pmheat/special_functions.hpp"

using namespace pmheat;

namespace {

std::vector<double> unit(int n, int axis) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(axis)] = 1.0;
    return e;
}

} // namespace

TEST_CASE("pointwise potential values") {
    CHECK(physical_value(PotentialSpec::make_hardy(1.0), {1, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(physical_value(PotentialSpec::make_dipole({1, 0, 0}), {2, 0, 0}) ==
          doctest::Approx(0.25));
    const PotentialSpec two = PotentialSpec::make_isotropic(
        {{{0, 0, 0}, 1.0}, {unit(3, 0), 1.0}});
    CHECK(physical_value(two, {2, 0, 0}) == doctest::Approx(1.25));

    CHECK_THROWS_AS(physical_value(PotentialSpec::make_hardy(1.0), {0, 0, 0}),
                    std::domain_error);
    CHECK_THROWS_AS(physical_value(two, {1, 0, 0}), std::domain_error);
}

TEST_CASE("potential validation") {
    CHECK_THROWS_AS(validate_potential(PotentialSpec::make_isotropic({}), 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_potential(PotentialSpec::make_dipole({0, 0, 0}), 3),
                    std::invalid_argument);
    // center length must match the dimension
    CHECK_THROWS_AS(validate_potential(
                        PotentialSpec::make_isotropic({{{0.0, 0.0}, 1.0}}), 3),
                    std::invalid_argument);
}

TEST_CASE("fourier symbols") {
    // inverse-square in R^4: coefficient pi^0 Gamma(1) = 1
    const auto hardy = fourier_symbol(PotentialSpec::make_hardy(1.0), {2, 0, 0, 0});
    CHECK(hardy.real() == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(hardy.imag() == doctest::Approx(0.0));

    const auto dip = fourier_symbol(PotentialSpec::make_dipole({1, 0, 0}), {1, 0, 0});
    CHECK(dip.real() == doctest::Approx(0.0));
    CHECK(dip.imag() == doctest::Approx(-2.0).epsilon(1e-12));

    // two equal poles at +-e1 with integer phase: both phases are 1
    const PotentialSpec pair = PotentialSpec::make_isotropic(
        {{{1, 0, 0, 0}, 1.0}, {{-1, 0, 0, 0}, 1.0}});
    const auto sym = fourier_symbol(pair, {2, 0, 0, 0});
    CHECK(sym.real() == doctest::Approx(2.0 / 4.0).epsilon(1e-12));
    CHECK(sym.imag() == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(fourier_symbol(pair, {0, 0, 0, 0}), std::domain_error);
}

TEST_CASE("conjugate symmetry of the symbol") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    const PotentialSpec specs[] = {
        PotentialSpec::make_hardy(0.7),
        PotentialSpec::make_isotropic({{{0.3, -1.0, 0.5}, 0.4}, {{0, 1, 0}, -0.2}}),
        PotentialSpec::make_dipole({0.5, -1.0, 0.25}),
        PotentialSpec::make_anisotropic({{{0.2, 0.1, -0.4}, {1, 0, 2}}}),
    };
    for (const auto& spec : specs) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> xi = {unif(rng), unif(rng), unif(rng)};
            if (std::abs(xi[0]) + std::abs(xi[1]) + std::abs(xi[2]) < 1e-3) {
                continue;
            }
            std::vector<double> mxi = {-xi[0], -xi[1], -xi[2]};
            const auto a = fourier_symbol(spec, xi);
            const auto b = fourier_symbol(spec, mxi);
            CHECK(b.real() == doctest::Approx(a.real()).epsilon(1e-12));
            CHECK(b.imag() == doctest::Approx(-a.imag()).epsilon(1e-12));
        }
    }
}

TEST_CASE("norm bounds") {
    const NormBound hb = pm_norm_bound(PotentialSpec::make_hardy(1.0), 4);
    CHECK(hb.value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(hb.exact);

    const NormBound db = pm_norm_bound(PotentialSpec::make_dipole({1, 0, 0}), 3);
    CHECK(db.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_FALSE(db.exact);

    const NormBound ib = pm_norm_bound(
        PotentialSpec::make_isotropic({{{0, 0, 0, 0}, 0.3}, {{1, 0, 0, 0}, 0.4}}), 4);
    CHECK(ib.value == doctest::Approx(0.7).epsilon(1e-13));
    CHECK_FALSE(ib.exact);

    // a single shifted pole is a translation, so the bound is attained
    const NormBound sb =
        pm_norm_bound(PotentialSpec::make_isotropic({{{1, 2, 3, 4}, -0.5}}), 4);
    CHECK(sb.exact);
    CHECK(sb.value == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("symbol magnitude stays below the norm bound") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    const int n = 3;
    const PotentialSpec specs[] = {
        PotentialSpec::make_hardy(0.8),
        PotentialSpec::make_isotropic({{{0.5, 0, 0}, 0.4}, {{0, -0.7, 0.2}, -0.3}}),
        PotentialSpec::make_dipole({0.3, -0.2, 0.9}),
        PotentialSpec::make_anisotropic(
            {{{0, 0, 0}, {1, 1, 0}}, {{0.4, 0.1, 0}, {0, -0.5, 0.5}}}),
    };
    for (const auto& spec : specs) {
        const double bound = pm_norm_bound(spec, n).value;
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<double> xi = {unif(rng), unif(rng), unif(rng)};
            const double rho = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
            if (rho < 1e-6) {
                continue;
            }
            const double weighted = std::abs(fourier_symbol(spec, xi)) * std::pow(rho, n - 2);
            CHECK(weighted <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("threshold report for the inverse-square potential") {
    const ThresholdReport pass = threshold_report(PotentialSpec::make_hardy(0.5), 4, 3.0);
    CHECK(pass.tau == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(pass.passes);
    CHECK(pass.margin == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pass.bound_rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pass.param_threshold == doctest::Approx(1.0).epsilon(1e-12));

    const ThresholdReport fail = threshold_report(PotentialSpec::make_hardy(1.2), 4, 3.0);
    CHECK(fail.tau == doctest::Approx(1.2).epsilon(1e-13));
    CHECK_FALSE(fail.passes);

    CHECK_THROWS_AS(threshold_report(PotentialSpec::make_hardy(0.5), 4, 4.5),
                    std::domain_error);
}

TEST_CASE("dipole threshold in moment units") {
    // at n = 3, k = 5/2 the strength threshold is pi * (1/4) / beta(1/2, 1) = pi/8
    const ThresholdReport rep =
        threshold_report(PotentialSpec::make_dipole({0.1, 0, 0}), 3, 2.5);
    CHECK(rep.param_threshold == doctest::Approx(M_PI / 8.0).epsilon(1e-12));
    // consistency: strength < threshold iff the PM-norm route passes
    CHECK(rep.passes == (rep.param_value < rep.param_threshold));
    // and the threshold is exactly 1/(C * unit-moment norm factor)
    const double cd = dipole_fourier_coefficient(3);
    CHECK(rep.param_threshold == doctest::Approx(1.0 / (hardy_constant(3, 2.5) * cd)).epsilon(1e-12));
}

TEST_CASE("pass/fail agrees with the coupling window on a dense grid") {
    for (int n : {3, 4, 6}) {
        const double ls = hardy_critical_coupling(n);
        for (int ik = 0; ik < 20; ++ik) {
            const double k = 2.0 + (n - 2.0) * (ik + 0.5) / 20.0;
            for (int il = 0; il < 20; ++il) {
                const double lambda = -1.3 * ls + 2.6 * ls * (il + 0.37) / 20.0;
                const ThresholdReport rep =
                    threshold_report(PotentialSpec::make_hardy(lambda), n, k);
                CHECK(rep.passes == (std::abs(lambda) < (k - 2.0) * (n - k)));
            }
        }
    }
}

TEST_CASE("tau is minimized at the optimal index for every family") {
    const PotentialSpec specs[] = {
        PotentialSpec::make_hardy(0.2),
        PotentialSpec::make_isotropic({{{0, 0, 0, 0}, 0.1}, {{1, 0, 0, 0}, 0.05}}),
        PotentialSpec::make_dipole({0.1, 0, 0, 0}),
        PotentialSpec::make_anisotropic({{{0, 0, 0, 0}, {0.1, 0, 0, 0.1}}}),
    };
    const int n = 4;
    for (const auto& spec : specs) {
        const double tau_star = threshold_report(spec, n, optimal_index(n)).tau;
        for (int i = 1; i < 400; ++i) {
            const double k = 2.0 + (n - 2.0) * i / 400.0;
            CHECK(tau_star <= threshold_report(spec, n, k).tau + 1e-9);
        }
        const ThresholdReport rep = threshold_report(spec, n, 2.4);
        CHECK(rep.tau_at_k_opt <= rep.tau + 1e-12);
    }
}

TEST_CASE("potential JSON round trip") {
    const PotentialSpec specs[] = {
        PotentialSpec::make_hardy(-0.4),
        PotentialSpec::make_isotropic({{{0, 1, 0}, 0.25}, {{0.5, 0, -1}, -0.1}}),
        PotentialSpec::make_dipole({1, 2, 3}),
        PotentialSpec::make_anisotropic({{{1, 0, 0}, {0, 0.5, 0}}}),
    };
    for (const auto& spec : specs) {
        const PotentialSpec back = io::potential_from_json(io::potential_to_json(spec));
        CHECK(back.kind == spec.kind);
        for (std::size_t i = 0; i < 40; ++i) {
            std::vector<double> x = {0.3 + 0.1 * i, -0.2, 1.0 + 0.05 * i};
            CHECK(physical_value(back, x) == doctest::Approx(physical_value(spec, x)));
        }
    }
    CHECK_THROWS(io::potential_from_json(io::json{{"type", "unknown"}}));
}
