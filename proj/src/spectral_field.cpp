#include "pmheat/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "pmheat/quadrature.hpp"
#include "pmheat/special_functions.hpp"

namespace pmheat {

namespace {

constexpr double pi = std::numbers::pi;

void check_same_shape(const SpectralField& a, const SpectralField& b) {
    if (a.dimension() != b.dimension() || a.weight() != b.weight() ||
        !(a.grid() == b.grid())) {
        throw std::invalid_argument("field arithmetic: dimension/weight/grid mismatch");
    }
}

bool profile_is_constant(const std::vector<double>& h) {
    double lo = h.front(), hi = h.front();
    for (double v : h) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    return scale == 0.0 || (hi - lo) <= 1e-12 * scale;
}

// J_{nu}(z) for z >= 0; the half-integer nu = 1/2 case has a closed form and
// sits in the hottest loop (n = 3).
double bessel_j_radial(double nu, double z) {
    if (z < 1e-8) {
        return std::pow(0.5 * z, nu) / gamma_fn(nu + 1.0);
    }
    if (nu == 0.5) {
        return std::sqrt(2.0 / (pi * z)) * std::sin(z);
    }
    return std::cyl_bessel_j(nu, z);
}

// Two-point log-log slope of uhat at the grid edges, for power-law
// continuation beyond the window. Slopes are capped to keep the model
// integrable; a sign change or vanishing boundary value falls back to -k.
struct EdgeSlopes {
    double lower; // d ln|uhat| / d ln rho at rho_min
    double upper; // same at rho_max
};

EdgeSlopes measure_edge_slopes(const SpectralField& f) {
    const auto& h = f.profile();
    const double dv = f.grid().log_step();
    const double k = f.weight();
    const double n = f.dimension();
    // slope in the direction of increasing rho from two adjacent nodes
    auto slope = [&](double h_a, double h_b) {
        if (h_a == 0.0 || h_b == 0.0 || (h_a > 0) != (h_b > 0)) {
            return -k;
        }
        return std::log(std::abs(h_b / h_a)) / dv - k;
    };
    EdgeSlopes s;
    s.lower = std::clamp(slope(h[0], h[1]), -n + 0.05, 0.0);
    s.upper = std::clamp(slope(h[h.size() - 2], h[h.size() - 1]), -n + 0.05, -0.05);
    return s;
}

struct InverseTransformContext {
    const SpectralField* field;
    EdgeSlopes slopes;
    int cutoff_index; // integrate up to this node; tail model beyond
};

double uhat_interp(const InverseTransformContext& ctx, double rho) {
    const SpectralField& f = *ctx.field;
    const RadialGrid& g = f.grid();
    const auto& h = f.profile();
    const double v = std::log(rho);
    const double v0 = std::log(g.rho_min());
    const double dv = g.log_step();
    const double pos = (v - v0) / dv;
    if (pos <= 0.0) {
        return h.front() * std::pow(g.rho_min(), -f.weight()) *
               std::pow(rho / g.rho_min(), ctx.slopes.lower);
    }
    if (pos >= g.count() - 1) {
        return h.back() * std::pow(g.rho_max(), -f.weight()) *
               std::pow(rho / g.rho_max(), ctx.slopes.upper);
    }
    // 4-point Lagrange in log rho; the profile is smooth there and the
    // reconstruction integral is sensitive to coherent interpolation bias
    const int j0 = std::clamp(static_cast<int>(pos) - 1, 0, g.count() - 4);
    const double t = pos - j0;
    const double c0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double c1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double c2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double c3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    const double hj = c0 * h[static_cast<std::size_t>(j0)] +
                      c1 * h[static_cast<std::size_t>(j0) + 1] +
                      c2 * h[static_cast<std::size_t>(j0) + 2] +
                      c3 * h[static_cast<std::size_t>(j0) + 3];
    return hj * std::pow(rho, -f.weight());
}

// One radius of the Bochner inversion. osc_cap is the maximal panel width in
// units of the oscillation period 1/r.
double inverse_at_radius(const InverseTransformContext& ctx, double r, double osc_cap) {
    const SpectralField& f = *ctx.field;
    const RadialGrid& g = f.grid();
    const int n = f.dimension();
    const double nu = 0.5 * n - 1.0;
    const double pref = 2.0 * pi * std::pow(r, 1.0 - 0.5 * n);

    auto integrand = [&](double rho) {
        return uhat_interp(ctx, rho) * std::pow(rho, 0.5 * n) *
               bessel_j_radial(nu, 2.0 * pi * rho * r);
    };

    // below rho_min: power model anchored at the boundary node and the
    // leading small-argument Bessel term J_nu(z) ~ (z/2)^nu / Gamma(nu+1)
    const double sigma = ctx.slopes.lower;
    const double u0 = f.profile().front() * std::pow(g.rho_min(), -f.weight());
    const double p = sigma + 0.5 * n + nu; // integrand power near zero, > -1
    double total = u0 * std::pow(pi * r, nu) / gamma_fn(nu + 1.0) *
                   std::pow(g.rho_min(), p + 1.0 - sigma) / (p + 1.0);

    // main window: grid intervals, split to resolve the oscillation
    const double max_width = osc_cap / r;
    for (int j = 0; j < ctx.cutoff_index; ++j) {
        const double a = g.nodes()[static_cast<std::size_t>(j)];
        const double b = g.nodes()[static_cast<std::size_t>(j) + 1];
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
        for (int piece = 0; piece < pieces; ++piece) {
            const double pa = a + (b - a) * piece / pieces;
            const double pb = a + (b - a) * (piece + 1) / pieces;
            total += quad::gl_panel(integrand, pa, pb, 8);
        }
    }

    // tail beyond the cutoff: only needed when the profile has not decayed
    // inside the window; one integration-by-parts step on the asymptotic form
    // J_nu(z) ~ sqrt(2/(pi z)) cos(z - nu pi/2 - pi/4).
    if (ctx.cutoff_index == g.count() - 1) {
        const double P = g.rho_max();
        const double u_edge = f.profile().back() * std::pow(P, -f.weight());
        const double p_tail = ctx.slopes.upper + 0.5 * (n - 1.0);
        if (std::abs(u_edge) > 0.0 && p_tail < -0.05) {
            const double omega = 2.0 * pi * r;
            const double theta = omega * P - (nu * pi / 2.0 + pi / 4.0);
            const double gtilde = u_edge * std::pow(P, 0.5 * (n - 1.0)) / (pi * std::sqrt(r));
            total += -gtilde * std::sin(theta) / omega -
                     (p_tail * gtilde / P) * std::cos(theta) / (omega * omega);
        }
    }

    return pref * total;
}

} // namespace

SpectralField::SpectralField(int n, double k, RadialGrid grid, std::vector<double> profile,
                             bool homogeneous)
    : n_(n), k_(k), grid_(std::move(grid)), h_(std::move(profile)), homogeneous_(homogeneous) {
    if (n_ < 3) {
        throw std::invalid_argument("SpectralField: dimension must be >= 3");
    }
    if (!(k_ > 0.0)) {
        throw std::invalid_argument("SpectralField: weight exponent must be positive");
    }
    if (static_cast<int>(h_.size()) != grid_.count()) {
        throw std::invalid_argument("SpectralField: profile length does not match grid");
    }
    for (double v : h_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("SpectralField: profile must be finite");
        }
    }
    if (homogeneous_ && !profile_is_constant(h_)) {
        throw std::invalid_argument("SpectralField: homogeneity flag on a non-constant profile");
    }
}

double SpectralField::uhat_at(int j) const {
    return h_[static_cast<std::size_t>(j)] * std::pow(grid_.nodes()[static_cast<std::size_t>(j)], -k_);
}

double SpectralField::pm_norm() const {
    double m = 0.0;
    for (double v : h_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

int SpectralField::pm_norm_index() const {
    int idx = 0;
    double m = -1.0;
    for (int j = 0; j < grid_.count(); ++j) {
        const double a = std::abs(h_[static_cast<std::size_t>(j)]);
        if (a > m) {
            m = a;
            idx = j;
        }
    }
    return idx;
}

bool SpectralField::norm_at_edge() const {
    if (homogeneous_) {
        return false;
    }
    const int idx = pm_norm_index();
    return idx == 0 || idx == grid_.count() - 1;
}

SpectralField make_power_law_field(int n, double k, double amplitude, const RadialGrid& grid) {
    if (!(k > 2.0 && k < static_cast<double>(n))) {
        throw std::domain_error("make_power_law_field: need 2 < k < n");
    }
    return SpectralField(n, k, grid,
                         std::vector<double>(static_cast<std::size_t>(grid.count()), amplitude),
                         true);
}

SpectralField make_gaussian_field(int n, double k, const RadialGrid& grid, double amplitude,
                                  double scale) {
    std::vector<double> h(static_cast<std::size_t>(grid.count()));
    for (int j = 0; j < grid.count(); ++j) {
        const double rho = grid.nodes()[static_cast<std::size_t>(j)];
        h[static_cast<std::size_t>(j)] =
            amplitude * std::pow(rho, k) * std::exp(-pi * scale * scale * rho * rho);
    }
    return SpectralField(n, k, grid, std::move(h));
}

SpectralField apply_heat_semigroup(const SpectralField& field, double t) {
    if (t < 0.0) {
        throw std::domain_error("apply_heat_semigroup: time must be nonnegative");
    }
    if (t == 0.0) {
        return field;
    }
    std::vector<double> h(field.profile());
    const auto& nodes = field.grid().nodes();
    for (std::size_t j = 0; j < h.size(); ++j) {
        h[j] *= std::exp(-4.0 * pi * pi * nodes[j] * nodes[j] * t);
    }
    return SpectralField(field.dimension(), field.weight(), field.grid(), std::move(h));
}

SpectralField field_add(const SpectralField& a, const SpectralField& b) {
    check_same_shape(a, b);
    std::vector<double> h(a.profile());
    for (std::size_t j = 0; j < h.size(); ++j) {
        h[j] += b.profile()[j];
    }
    return SpectralField(a.dimension(), a.weight(), a.grid(), std::move(h),
                         a.homogeneous() && b.homogeneous());
}

SpectralField field_sub(const SpectralField& a, const SpectralField& b) {
    check_same_shape(a, b);
    std::vector<double> h(a.profile());
    for (std::size_t j = 0; j < h.size(); ++j) {
        h[j] -= b.profile()[j];
    }
    return SpectralField(a.dimension(), a.weight(), a.grid(), std::move(h),
                         a.homogeneous() && b.homogeneous());
}

SpectralField field_scale(const SpectralField& a, double c) {
    std::vector<double> h(a.profile());
    for (double& v : h) {
        v *= c;
    }
    return SpectralField(a.dimension(), a.weight(), a.grid(), std::move(h), a.homogeneous());
}

std::vector<RadialValue> inverse_radial_transform(const SpectralField& field,
                                                  const std::vector<double>& radii) {
    for (double r : radii) {
        if (!(r > 0.0)) {
            throw std::domain_error("inverse_radial_transform: radii must be positive");
        }
    }

    InverseTransformContext ctx;
    ctx.field = &field;
    ctx.slopes = measure_edge_slopes(field);

    // truncate where the remaining weighted mass is negligible
    const RadialGrid& g = field.grid();
    std::vector<double> mass(static_cast<std::size_t>(g.count()), 0.0);
    double total_mass = 0.0;
    for (int j = 0; j < g.count(); ++j) {
        const double rho = g.nodes()[static_cast<std::size_t>(j)];
        mass[static_cast<std::size_t>(j)] =
            std::abs(field.profile()[static_cast<std::size_t>(j)]) *
            std::pow(rho, 0.5 * field.dimension() - field.weight() + 0.5) * rho;
        total_mass += mass[static_cast<std::size_t>(j)];
    }
    ctx.cutoff_index = g.count() - 1;
    if (total_mass > 0.0) {
        double tail = 0.0;
        for (int j = g.count() - 1; j > 0; --j) {
            tail += mass[static_cast<std::size_t>(j)];
            if (tail > 1e-12 * total_mass) {
                ctx.cutoff_index = std::min(j + 1, g.count() - 1);
                break;
            }
        }
    } else {
        ctx.cutoff_index = 1;
    }

    std::vector<RadialValue> out(radii.size());
    double peak = 0.0;
    std::vector<double> coarse(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        coarse[i] = inverse_at_radius(ctx, radii[i], 0.5);
        out[i].radius = radii[i];
        out[i].value = inverse_at_radius(ctx, radii[i], 0.25);
        peak = std::max(peak, std::abs(out[i].value));
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double scale = std::max(std::abs(out[i].value), 1e-3 * peak);
        out[i].accuracy_warning =
            scale > 0.0 && std::abs(out[i].value - coarse[i]) > 1e-3 * scale;
    }
    return out;
}

double profile_at_rho(const SpectralField& field, double rho) {
    if (!(rho > 0.0)) {
        throw std::domain_error("profile_at_rho: rho must be positive");
    }
    const RadialGrid& g = field.grid();
    const auto& h = field.profile();
    const double pos = (std::log(rho) - std::log(g.rho_min())) / g.log_step();
    if (pos <= 0.0) {
        return h.front();
    }
    if (pos >= g.count() - 1) {
        return h.back();
    }
    const int j = static_cast<int>(pos);
    const double alpha = pos - j;
    return h[static_cast<std::size_t>(j)] * (1.0 - alpha) +
           h[static_cast<std::size_t>(j) + 1] * alpha;
}

void write_field_csv(std::ostream& os, const SpectralField& field) {
    os << "rho,h,uhat\n";
    char line[128];
    for (int j = 0; j < field.grid().count(); ++j) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n",
                      field.grid().nodes()[static_cast<std::size_t>(j)],
                      field.profile()[static_cast<std::size_t>(j)], field.uhat_at(j));
        os << line;
    }
}

} // namespace pmheat
