#include <doctest.h>

#include <cmath>

#include "pmheat/radial_convolution.hpp"
#include "pmheat/special_functions.hpp"
#include "test_support.hpp"

using namespace pmheat;

namespace {

const RadialGrid grid = RadialGrid::standard();

SpectralField power_profile(int n, double b2) {
    // uhat = rho^{-b2}, stored with weight b2 so the profile is constant
    return SpectralField(n, b2, grid,
                         std::vector<double>(static_cast<std::size_t>(grid.count()), 1.0), true);
}

} // namespace

TEST_CASE("power-law convolution matches the closed form") {
    struct Params {
        int n;
        double b1, b2;
    };
    for (const Params p : {Params{3, 2.0, 1.5}, Params{4, 2.0, 3.0}, Params{4, 2.0, 2.5},
                           Params{6, 4.0, 3.0}}) {
        const SpectralField f = power_profile(p.n, p.b2);
        const SpectralField out = convolve_radial(RadialKernel{p.n, p.b1, 1.0}, f);
        // the result decays like rho^{n-b1-b2}; with the matching output
        // weight the profile is the constant K(n-b1, n-b2, n)
        const double expected = riesz_composition_constant(p.n - p.b1, p.n - p.b2, p.n);
        CHECK(out.weight() == doctest::Approx(p.b1 + p.b2 - p.n));
        const int lo = grid.count() / 5;
        const int hi = grid.count() - grid.count() / 5;
        for (int j = lo; j < hi; ++j) {
            CHECK(std::abs(out.profile()[static_cast<std::size_t>(j)] - expected) <=
                  1e-3 * expected);
        }
    }
}

TEST_CASE("zero field convolves to zero") {
    SpectralField zero(4, 3.0, grid,
                       std::vector<double>(static_cast<std::size_t>(grid.count()), 0.0));
    CHECK(convolve_radial(RadialKernel{4, 2.0, 1.0}, zero).pm_norm() == 0.0);
}

TEST_CASE("convolution is homogeneous of degree one in the field") {
    const SpectralField f = power_profile(4, 3.0);
    const RadialConvolution op(RadialKernel{4, 2.0, 0.7}, grid, 3.0);
    const SpectralField base = op.apply(f);
    for (double c : {2.0, -0.5, 13.25}) {
        const SpectralField scaled = op.apply(field_scale(f, c));
        CHECK(field_sub(scaled, field_scale(base, c)).pm_norm() <=
              1e-12 * std::abs(c) * base.pm_norm());
    }
}

TEST_CASE("convolution output has the composed homogeneity degree") {
    const int n = 4;
    const double b1 = 2.0, b2 = 3.0;
    const SpectralField out = convolve_radial(RadialKernel{n, b1, 1.0}, power_profile(n, b2));
    std::vector<double> rho, uhat;
    for (int j = grid.count() / 4; j < grid.count() - grid.count() / 4; ++j) {
        rho.push_back(grid.nodes()[static_cast<std::size_t>(j)]);
        uhat.push_back(out.uhat_at(j));
    }
    const double slope = oracle::loglog_slope(rho, uhat);
    CHECK(std::abs(slope - (n - b1 - b2)) <= 1e-3);
}

TEST_CASE("weighted output obeys the bilinear sup bound") {
    // ||rho^{b1+b2-n} (Vhat * uhat)||_sup <= K(n-b1, n-b2, n) |coef| ||field||
    struct Params {
        int n;
        double b1, b2;
    };
    for (const Params p : {Params{4, 2.0, 3.0}, Params{3, 1.0, 2.5}}) {
        const double K = riesz_composition_constant(p.n - p.b1, p.n - p.b2, p.n);
        const SpectralField pl = power_profile(p.n, p.b2);
        SpectralField damped = pl;
        {
            std::vector<double> h(pl.profile());
            for (int j = 0; j < grid.count(); ++j) {
                const double rho = grid.nodes()[static_cast<std::size_t>(j)];
                h[static_cast<std::size_t>(j)] *= std::exp(-rho * rho / 4.0);
            }
            damped = SpectralField(p.n, p.b2, grid, h);
        }
        for (const SpectralField& f : {pl, damped}) {
            const SpectralField out = convolve_radial(RadialKernel{p.n, p.b1, 0.6}, f);
            CHECK(out.pm_norm() <= K * 0.6 * f.pm_norm() * (1.0 + 1e-3));
        }
    }
}

TEST_CASE("exponent window is enforced") {
    // b1 + b2 <= n diverges at infinity and is rejected up front
    CHECK_THROWS_AS(convolve_radial(RadialKernel{4, 2.0, 1.0}, power_profile(4, 1.0)),
                    std::domain_error);
    CHECK_THROWS_AS(convolve_radial(RadialKernel{4, 2.0, 1.0}, power_profile(4, 1.5)),
                    std::domain_error);
    CHECK_THROWS_AS((RadialConvolution{RadialKernel{4, 5.0, 1.0}, grid, 3.0}),
                    std::domain_error);
    // mismatched field is rejected at application
    const RadialConvolution op(RadialKernel{4, 2.0, 1.0}, grid, 3.0);
    CHECK_THROWS_AS(op.apply(power_profile(4, 2.5)), std::invalid_argument);
}

TEST_CASE("closed-form oracle values") {
    CHECK(power_law_convolution_oracle(2.0, 1.0, 4, 1.0) ==
          doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK(power_law_convolution_oracle(2.0, 1.0, 4, 2.0) ==
          doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK(power_law_convolution_oracle(1.3, 0.9, 4, 0.7) ==
          doctest::Approx(power_law_convolution_oracle(0.9, 1.3, 4, 0.7)).epsilon(1e-13));
    CHECK_THROWS_AS(power_law_convolution_oracle(2.0, 2.0, 4, 1.0), std::domain_error);
}

TEST_CASE("exponentially damped kernel reduces to the sharp one") {
    // closed-form n = 3 case used by the mollified crosscheck: small damping
    // must approach the pure power law (field decay fast enough that the far
    // tail, where even tiny damping bites, carries no weight)
    const SpectralField f = power_profile(3, 2.8);
    const SpectralField sharp = convolve_radial(RadialKernel{3, 1.0, 1.0}, f);
    const SpectralField damped = convolve_radial(RadialKernel{3, 1.0, 1.0, 1e-7}, f);
    const int mid = grid.count() / 2;
    CHECK(damped.profile()[mid] ==
          doctest::Approx(sharp.profile()[mid]).epsilon(1e-3));
    // damping suppresses the output
    const SpectralField heavy = convolve_radial(RadialKernel{3, 1.0, 1.0, 3.0}, f);
    CHECK(heavy.profile()[mid] < sharp.profile()[mid]);
    // unsupported damped combinations are rejected
    CHECK_THROWS_AS(convolve_radial(RadialKernel{4, 2.0, 1.0, 1.0}, power_profile(4, 3.0)),
                    std::domain_error);
}
