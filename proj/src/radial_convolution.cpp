#include "pmheat/radial_convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pmheat/parallel.hpp"
#include "pmheat/quadrature.hpp"
#include "pmheat/special_functions.hpp"

namespace pmheat {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double ext_decades = 2.0;    // power-law continuation past each grid end
constexpr double tau_floor = std::log(1e-14);
constexpr int angular_table_size = 2801;

double sphere_area(int dim) { // surface area of the unit sphere S^{dim} in R^{dim+1}
    return 2.0 * std::pow(pi, 0.5 * (dim + 1)) / gamma_fn(0.5 * (dim + 1));
}

double sin_power_integral(int n) { // \int_0^pi sin^{n-2} theta dtheta
    return beta_function(0.5 * (n - 1.0), 0.5);
}

struct EdgeState {
    double anchor = 0.0; // uhat at the boundary node
    double sigma = 0.0;  // capped log-log slope of uhat
};

EdgeState lower_edge(const SpectralField& f) {
    const auto& h = f.profile();
    const double k = f.weight();
    const double n = f.dimension();
    EdgeState e;
    e.anchor = h.front() * std::pow(f.grid().rho_min(), -k);
    double sigma = -k;
    if (h[0] != 0.0 && h[1] != 0.0 && (h[0] > 0) == (h[1] > 0)) {
        sigma = std::log(std::abs(h[1] / h[0])) / f.grid().log_step() - k;
    }
    e.sigma = std::clamp(sigma, -n + 0.05, 0.0);
    return e;
}

EdgeState upper_edge(const SpectralField& f, double b1) {
    const auto& h = f.profile();
    const std::size_t c = h.size();
    const double k = f.weight();
    const double n = f.dimension();
    EdgeState e;
    e.anchor = h.back() * std::pow(f.grid().rho_max(), -k);
    double sigma = -k;
    if (h[c - 1] != 0.0 && h[c - 2] != 0.0 && (h[c - 1] > 0) == (h[c - 2] > 0)) {
        sigma = std::log(std::abs(h[c - 1] / h[c - 2])) / f.grid().log_step() - k;
    }
    // the upper tail must decay faster than the kernel grows for the
    // remainder integral to exist
    e.sigma = std::clamp(sigma, -n + 0.05, b1 - n - 0.05);
    return e;
}

} // namespace

RadialConvolution::RadialConvolution(const RadialKernel& kernel, const RadialGrid& grid,
                                     double field_weight)
    : kernel_(kernel), grid_(grid), k_(field_weight) {
    const double nd = static_cast<double>(kernel_.n);
    if (kernel_.n < 3) {
        throw std::domain_error("RadialConvolution: dimension must be >= 3");
    }
    if (!(kernel_.exponent > 0.0 && kernel_.exponent < nd)) {
        throw std::domain_error("RadialConvolution: kernel exponent must lie in (0, n)");
    }
    if (!(k_ > 0.0 && k_ < nd)) {
        throw std::domain_error("RadialConvolution: field weight must lie in (0, n)");
    }
    const double sum = kernel_.exponent + k_;
    if (!(sum > nd && sum < 2.0 * nd)) {
        throw std::domain_error("RadialConvolution: need n < b1 + b2 < 2n");
    }
    if (kernel_.exp_damping < 0.0 ||
        (kernel_.exp_damping > 0.0 &&
         (kernel_.n != 3 || std::abs(kernel_.exponent - 1.0) > 1e-12))) {
        throw std::domain_error(
            "RadialConvolution: exponentially damped kernels only for n = 3, exponent 1");
    }
    build();
}

double RadialConvolution::phi_lookup(double q) const {
    // 4-point Lagrange interpolation of Phi on the uniform ln q table
    const double tau = std::log(std::max(q, 1e-300));
    if (tau <= tau_min_) {
        return phi_.front();
    }
    if (tau >= 0.0) {
        return phi_.back();
    }
    const double u = (tau - tau_min_) / dtau_;
    int i0 = static_cast<int>(u) - 1;
    i0 = std::clamp(i0, 0, static_cast<int>(phi_.size()) - 4);
    const double t = u - i0;
    const double c0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double c1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double c2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double c3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return c0 * phi_[static_cast<std::size_t>(i0)] + c1 * phi_[static_cast<std::size_t>(i0) + 1] +
           c2 * phi_[static_cast<std::size_t>(i0) + 2] + c3 * phi_[static_cast<std::size_t>(i0) + 3];
}

double RadialConvolution::angular_integral(double rho, double s) const {
    const double b = kernel_.exponent;
    const double delta = std::abs(rho - s);
    const double sigma = rho + s;
    if (kernel_.n == 3) {
        // exact reduction: (1/(rho s)) \int_delta^sigma m^{1-b} e^{-a m} dm
        if (kernel_.exp_damping > 0.0) {
            const double a = kernel_.exp_damping; // exponent is 1 here
            return (std::exp(-a * delta) - std::exp(-a * sigma)) / (a * rho * s);
        }
        if (b == 2.0) {
            return std::log(sigma / delta) / (rho * s);
        }
        return (std::pow(sigma, 2.0 - b) - std::pow(delta, 2.0 - b)) / ((2.0 - b) * rho * s);
    }
    const double ratio = delta / sigma;
    return std::pow(2.0, kernel_.n - 1) * std::pow(sigma, -b) * phi_lookup(ratio * ratio);
}

void RadialConvolution::build() {
    const int n = kernel_.n;
    const double b = kernel_.exponent;
    const int count = grid_.count();
    const double dv = grid_.log_step();

    if (n >= 4) {
        // Phi(q) = \int_0^{pi/2} (q cos^2 + sin^2)^{-b/2} (sin cos)^{n-2} dpsi,
        // obtained from the angular integral by m^2 = delta^2 cos^2 psi + sigma^2 sin^2 psi.
        phi_.resize(angular_table_size);
        tau_min_ = tau_floor;
        dtau_ = -tau_min_ / (angular_table_size - 1);
        parallel_for(static_cast<std::size_t>(angular_table_size), [&](std::size_t j) {
            const double q = std::exp(tau_min_ + dtau_ * static_cast<double>(j));
            auto integrand = [&](double psi) {
                const double c = std::cos(psi);
                const double si = std::sin(psi);
                return std::pow(q * c * c + si * si, -0.5 * b) * std::pow(si * c, n - 2);
            };
            const double split = std::min(10.0 * std::sqrt(q), 0.25 * pi);
            const double part1 = quad::adaptive_simpson(integrand, 0.0, split, 1e-12, 1e-300);
            const double part2 = quad::adaptive_simpson(integrand, split, 0.5 * pi, 1e-12, 1e-300);
            phi_[j] = part1 + part2;
        });
    }

    ext_panels_lo_ = static_cast<int>(std::ceil(ext_decades * std::log(10.0) / dv));
    double hi_decades = ext_decades;
    if (kernel_.exp_damping > 0.0) {
        // stretch until the exponential factor is spent, so the dropped
        // remainder really is negligible
        hi_decades = std::clamp(
            std::log10(35.0 / (kernel_.exp_damping * grid_.rho_max())), ext_decades, 8.0);
    }
    ext_panels_hi_ = static_cast<int>(std::ceil(hi_decades * std::log(10.0) / dv));
    const double v_lo = std::log(grid_.rho_min());
    const double v_hi = std::log(grid_.rho_max());
    s_cut_lo_ = std::exp(v_lo - ext_panels_lo_ * dv);
    s_cut_hi_ = std::exp(v_hi + ext_panels_hi_ * dv);

    const auto& gl4 = quad::gauss_legendre(4);
    const auto& gl8 = quad::gauss_legendre(8);
    const double area = sphere_area(n - 2);
    const double wn = sin_power_integral(n);

    const int lo_pts = ext_panels_lo_ * static_cast<int>(gl4.x.size());
    const int hi_pts = ext_panels_hi_ * static_cast<int>(gl4.x.size());
    interior_.assign(static_cast<std::size_t>(count) * count, 0.0);
    lo_weights_.assign(static_cast<std::size_t>(count) * lo_pts, 0.0);
    hi_weights_.assign(static_cast<std::size_t>(count) * hi_pts, 0.0);
    lo_offsets_.resize(static_cast<std::size_t>(lo_pts));
    hi_offsets_.resize(static_cast<std::size_t>(hi_pts));
    rem_lo_row_.resize(static_cast<std::size_t>(count));

    // lower panels run [v_lo-(p+1)dv, v_lo-p dv]; upper ones mirror that
    for (int p = 0; p < ext_panels_lo_; ++p) {
        for (std::size_t g = 0; g < gl4.x.size(); ++g) {
            const std::size_t idx = static_cast<std::size_t>(p) * gl4.x.size() + g;
            lo_offsets_[idx] = -(p + 0.5) * dv + 0.5 * dv * gl4.x[g];
        }
    }
    for (int p = 0; p < ext_panels_hi_; ++p) {
        for (std::size_t g = 0; g < gl4.x.size(); ++g) {
            const std::size_t idx = static_cast<std::size_t>(p) * gl4.x.size() + g;
            hi_offsets_[idx] = (p + 0.5) * dv + 0.5 * dv * gl4.x[g];
        }
    }

    // remainders freeze the kernel at its limiting power law; exponential
    // damping carries through the lower limit and kills the upper tail
    for (int i = 0; i < count; ++i) {
        const double rho = grid_.nodes()[static_cast<std::size_t>(i)];
        rem_lo_row_[static_cast<std::size_t>(i)] =
            area * wn * std::pow(rho, -b) * std::exp(-kernel_.exp_damping * rho);
    }
    rem_hi_base_ = kernel_.exp_damping > 0.0 ? 0.0 : area * wn;

    parallel_for(static_cast<std::size_t>(count), [&](std::size_t row) {
        const double rho = grid_.nodes()[row];
        double* wrow = interior_.data() + row * static_cast<std::size_t>(count);
        double* lrow = lo_weights_.data() + row * static_cast<std::size_t>(lo_pts);
        double* hrow = hi_weights_.data() + row * static_cast<std::size_t>(hi_pts);

        // interior panels [v_j, v_{j+1}]; the weighted profile is interpolated
        // linearly in log-rho, so each point feeds two matrix columns
        for (int j = 0; j + 1 < count; ++j) {
            const double va = v_lo + j * dv;
            const bool diag_right = (j + 1 == static_cast<int>(row)); // diagonal at panel end
            const bool diag_left = (j == static_cast<int>(row));      // diagonal at panel start
            auto add_point = [&](double v, double weight_v) {
                const double s = std::exp(v);
                const double c = area * weight_v * std::pow(s, n - k_) *
                                 angular_integral(rho, s);
                const double alpha = (v - va) / dv;
                wrow[j] += c * (1.0 - alpha);
                wrow[j + 1] += c * alpha;
            };
            if (diag_left || diag_right) {
                // graded dyadic subdivision toward the kink at s = rho
                static constexpr double cuts[5] = {0.0, 0.125, 0.25, 0.5, 1.0};
                for (int piece = 0; piece < 4; ++piece) {
                    double a = cuts[piece], bb = cuts[piece + 1];
                    if (diag_right) { // grade toward the right endpoint
                        a = 1.0 - cuts[piece + 1];
                        bb = 1.0 - cuts[piece];
                    }
                    const double pa = va + a * dv;
                    const double pb = va + bb * dv;
                    for (std::size_t g = 0; g < gl8.x.size(); ++g) {
                        const double v = 0.5 * (pa + pb) + 0.5 * (pb - pa) * gl8.x[g];
                        add_point(v, 0.5 * (pb - pa) * gl8.w[g]);
                    }
                }
            } else {
                for (std::size_t g = 0; g < gl4.x.size(); ++g) {
                    const double v = va + 0.5 * dv + 0.5 * dv * gl4.x[g];
                    add_point(v, 0.5 * dv * gl4.w[g]);
                }
            }
        }

        // extension panels: weights against the power-law continuation,
        // anchored at the boundary nodes
        for (int p = 0; p < lo_pts; ++p) {
            const double w_v = 0.5 * dv * gl4.w[static_cast<std::size_t>(p) % gl4.w.size()];
            const double s_lo = std::exp(v_lo + lo_offsets_[static_cast<std::size_t>(p)]);
            lrow[p] = area * w_v * std::pow(s_lo, n) * angular_integral(rho, s_lo);
        }
        for (int p = 0; p < hi_pts; ++p) {
            const double w_v = 0.5 * dv * gl4.w[static_cast<std::size_t>(p) % gl4.w.size()];
            const double s_hi = std::exp(v_hi + hi_offsets_[static_cast<std::size_t>(p)]);
            hrow[p] = area * w_v * std::pow(s_hi, n) * angular_integral(rho, s_hi);
        }
    });
}

SpectralField RadialConvolution::apply(const SpectralField& field) const {
    if (field.dimension() != kernel_.n || !(field.grid() == grid_) || field.weight() != k_) {
        throw std::invalid_argument("RadialConvolution::apply: field does not match operator");
    }
    const int count = grid_.count();
    const int lo_pts = ext_panels_lo_ * 4;
    const int hi_pts = ext_panels_hi_ * 4;
    const auto& h = field.profile();

    const EdgeState lo = lower_edge(field);
    const EdgeState hi = upper_edge(field, kernel_.exponent);

    std::vector<double> lo_vals(static_cast<std::size_t>(lo_pts));
    std::vector<double> hi_vals(static_cast<std::size_t>(hi_pts));
    for (int p = 0; p < lo_pts; ++p) {
        lo_vals[static_cast<std::size_t>(p)] =
            lo.anchor * std::exp(lo.sigma * lo_offsets_[static_cast<std::size_t>(p)]);
    }
    for (int p = 0; p < hi_pts; ++p) {
        hi_vals[static_cast<std::size_t>(p)] =
            hi.anchor * std::exp(hi.sigma * hi_offsets_[static_cast<std::size_t>(p)]);
    }

    // far-tail remainders for the truncated power-law continuation
    const double n = kernel_.n;
    const double b = kernel_.exponent;
    const double lo_mass = lo.anchor * std::pow(s_cut_lo_, n) *
                           std::pow(s_cut_lo_ / grid_.rho_min(), lo.sigma) / (n + lo.sigma);
    const double hi_mass = hi.anchor * std::pow(s_cut_hi_, n - b) *
                           std::pow(s_cut_hi_ / grid_.rho_max(), hi.sigma) /
                           (b - n - hi.sigma);

    std::vector<double> out(static_cast<std::size_t>(count));
    const double k_out = output_weight();
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t row) {
        const double* wrow = interior_.data() + row * static_cast<std::size_t>(count);
        const double* lrow = lo_weights_.data() + row * static_cast<std::size_t>(lo_pts);
        const double* hrow = hi_weights_.data() + row * static_cast<std::size_t>(hi_pts);
        double acc = 0.0;
        for (int j = 0; j < count; ++j) {
            acc += wrow[j] * h[static_cast<std::size_t>(j)];
        }
        for (int p = 0; p < lo_pts; ++p) {
            acc += lrow[p] * lo_vals[static_cast<std::size_t>(p)];
        }
        for (int p = 0; p < hi_pts; ++p) {
            acc += hrow[p] * hi_vals[static_cast<std::size_t>(p)];
        }
        acc += rem_lo_row_[row] * lo_mass + rem_hi_base_ * hi_mass;
        out[row] = kernel_.coefficient * acc *
                   std::pow(grid_.nodes()[row], k_out);
    });
    return SpectralField(kernel_.n, k_out, grid_, std::move(out));
}

SpectralField convolve_radial(const RadialKernel& kernel, const SpectralField& field) {
    RadialConvolution op(kernel, field.grid(), field.weight());
    return op.apply(field);
}

double power_law_convolution_oracle(double theta1, double theta2, int n, double rho) {
    if (!(rho > 0.0)) {
        throw std::domain_error("power_law_convolution_oracle: rho must be positive");
    }
    return riesz_composition_constant(theta1, theta2, n) *
           std::pow(rho, theta1 + theta2 - n);
}

} // namespace pmheat
