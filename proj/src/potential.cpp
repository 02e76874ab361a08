#include "pmheat/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pmheat/special_functions.hpp"

namespace pmheat {

namespace {

constexpr double pi = std::numbers::pi;

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

double sum_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) {
        s += std::abs(v);
    }
    return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

std::vector<double> diff(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    return d;
}

void check_vector(const std::vector<double>& v, int n, const char* what) {
    if (static_cast<int>(v.size()) != n) {
        throw std::invalid_argument(std::string("potential: ") + what + " has wrong length");
    }
    for (double c : v) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument(std::string("potential: ") + what + " is not finite");
        }
    }
}

[[noreturn]] void singularity(const char* what) {
    throw std::domain_error(std::string("potential: evaluation at a singular point (") + what + ")");
}

} // namespace

PotentialSpec PotentialSpec::make_hardy(double lambda) {
    PotentialSpec s;
    s.kind = PotentialKind::hardy;
    s.lambda = lambda;
    return s;
}

PotentialSpec PotentialSpec::make_isotropic(std::vector<IsotropicPole> poles) {
    PotentialSpec s;
    s.kind = PotentialKind::isotropic_multipolar;
    s.poles = std::move(poles);
    return s;
}

PotentialSpec PotentialSpec::make_dipole(std::vector<double> d) {
    PotentialSpec s;
    s.kind = PotentialKind::dipole;
    s.d = std::move(d);
    return s;
}

PotentialSpec PotentialSpec::make_anisotropic(std::vector<AnisotropicPole> dpoles) {
    PotentialSpec s;
    s.kind = PotentialKind::anisotropic_multipolar;
    s.dpoles = std::move(dpoles);
    return s;
}

std::string kind_name(PotentialKind kind) {
    switch (kind) {
    case PotentialKind::hardy:
        return "hardy";
    case PotentialKind::isotropic_multipolar:
        return "isotropic_multipolar";
    case PotentialKind::dipole:
        return "dipole";
    case PotentialKind::anisotropic_multipolar:
        return "anisotropic_multipolar";
    }
    return "unknown";
}

void validate_potential(const PotentialSpec& spec, int n) {
    if (n < 3) {
        throw std::invalid_argument("potential: dimension must be >= 3");
    }
    switch (spec.kind) {
    case PotentialKind::hardy:
        if (!std::isfinite(spec.lambda)) {
            throw std::invalid_argument("potential: lambda must be finite");
        }
        break;
    case PotentialKind::isotropic_multipolar:
        if (spec.poles.empty()) {
            throw std::invalid_argument("potential: pole list is empty");
        }
        for (const auto& p : spec.poles) {
            check_vector(p.center, n, "pole center");
            if (!std::isfinite(p.lambda)) {
                throw std::invalid_argument("potential: pole strength must be finite");
            }
        }
        break;
    case PotentialKind::dipole:
        check_vector(spec.d, n, "dipole moment");
        if (sum_norm(spec.d) == 0.0) {
            throw std::invalid_argument("potential: dipole moment must be nonzero");
        }
        break;
    case PotentialKind::anisotropic_multipolar:
        if (spec.dpoles.empty()) {
            throw std::invalid_argument("potential: pole list is empty");
        }
        for (const auto& p : spec.dpoles) {
            check_vector(p.center, n, "pole center");
            check_vector(p.d, n, "pole moment");
        }
        break;
    }
}

double physical_value(const PotentialSpec& spec, const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    validate_potential(spec, n);
    switch (spec.kind) {
    case PotentialKind::hardy: {
        const double r = norm2(x);
        if (r == 0.0) {
            singularity("origin");
        }
        return spec.lambda / (r * r);
    }
    case PotentialKind::isotropic_multipolar: {
        double v = 0.0;
        for (const auto& p : spec.poles) {
            const double r = norm2(diff(x, p.center));
            if (r == 0.0) {
                singularity("pole center");
            }
            v += p.lambda / (r * r);
        }
        return v;
    }
    case PotentialKind::dipole: {
        const double r = norm2(x);
        if (r == 0.0) {
            singularity("origin");
        }
        return dot(spec.d, x) / (r * r * r);
    }
    case PotentialKind::anisotropic_multipolar: {
        double v = 0.0;
        for (const auto& p : spec.dpoles) {
            const auto y = diff(x, p.center);
            const double r = norm2(y);
            if (r == 0.0) {
                singularity("pole center");
            }
            v += dot(y, p.d) / (r * r * r);
        }
        return v;
    }
    }
    return 0.0;
}

double inverse_square_fourier_coefficient(int n) {
    return std::pow(pi, 2.0 - 0.5 * n) * gamma_fn(0.5 * (n - 2.0));
}

double dipole_fourier_coefficient(int n) {
    return 2.0 * std::pow(pi, 0.5 * (3.0 - n)) * gamma_fn(0.5 * (n - 1.0));
}

std::complex<double> fourier_symbol(const PotentialSpec& spec, const std::vector<double>& xi) {
    const int n = static_cast<int>(xi.size());
    validate_potential(spec, n);
    const double rho = norm2(xi);
    if (rho == 0.0) {
        singularity("xi = 0");
    }
    using namespace std::complex_literals;
    switch (spec.kind) {
    case PotentialKind::hardy:
        return spec.lambda * inverse_square_fourier_coefficient(n) * std::pow(rho, 2.0 - n);
    case PotentialKind::isotropic_multipolar: {
        const double c = inverse_square_fourier_coefficient(n) * std::pow(rho, 2.0 - n);
        std::complex<double> v = 0.0;
        for (const auto& p : spec.poles) {
            v += p.lambda * std::polar(1.0, -2.0 * pi * dot(p.center, xi));
        }
        return c * v;
    }
    case PotentialKind::dipole:
        return -1.0i * dipole_fourier_coefficient(n) * dot(spec.d, xi) * std::pow(rho, 1.0 - n);
    case PotentialKind::anisotropic_multipolar: {
        const double c = dipole_fourier_coefficient(n) * std::pow(rho, 1.0 - n);
        std::complex<double> v = 0.0;
        for (const auto& p : spec.dpoles) {
            v += dot(p.d, xi) * std::polar(1.0, -2.0 * pi * dot(p.center, xi));
        }
        return -1.0i * c * v;
    }
    }
    return 0.0;
}

NormBound pm_norm_bound(const PotentialSpec& spec, int n) {
    validate_potential(spec, n);
    NormBound b;
    switch (spec.kind) {
    case PotentialKind::hardy:
        b.value = std::abs(spec.lambda) * inverse_square_fourier_coefficient(n);
        b.exact = true;
        break;
    case PotentialKind::isotropic_multipolar: {
        double s = 0.0;
        for (const auto& p : spec.poles) {
            s += std::abs(p.lambda);
        }
        b.value = s * inverse_square_fourier_coefficient(n);
        b.exact = spec.poles.size() == 1;
        break;
    }
    case PotentialKind::dipole:
        b.value = sum_norm(spec.d) * dipole_fourier_coefficient(n);
        b.exact = false;
        break;
    case PotentialKind::anisotropic_multipolar: {
        double s = 0.0;
        for (const auto& p : spec.dpoles) {
            s += sum_norm(p.d);
        }
        b.value = s * dipole_fourier_coefficient(n);
        b.exact = false;
        break;
    }
    }
    return b;
}

namespace {

// potential strength in the units of the family's threshold condition
double strength(const PotentialSpec& spec) {
    switch (spec.kind) {
    case PotentialKind::hardy:
        return std::abs(spec.lambda);
    case PotentialKind::isotropic_multipolar: {
        double s = 0.0;
        for (const auto& p : spec.poles) {
            s += std::abs(p.lambda);
        }
        return s;
    }
    case PotentialKind::dipole:
        return sum_norm(spec.d);
    case PotentialKind::anisotropic_multipolar: {
        double s = 0.0;
        for (const auto& p : spec.dpoles) {
            s += sum_norm(p.d);
        }
        return s;
    }
    }
    return 0.0;
}

double strength_threshold(const PotentialSpec& spec, int n, double k) {
    const double window = (k - 2.0) * (n - k);
    switch (spec.kind) {
    case PotentialKind::hardy:
    case PotentialKind::isotropic_multipolar:
        return window;
    case PotentialKind::dipole:
    case PotentialKind::anisotropic_multipolar:
        return pi * window / ((n - 2.0) * beta_function(0.5, 0.5 * (n - 1.0)));
    }
    return 0.0;
}

} // namespace

ThresholdReport threshold_report(const PotentialSpec& spec, int n, double k) {
    validate_potential(spec, n);
    ThresholdReport r;
    r.n = n;
    r.k = k;
    r.constant = hardy_constant(n, k); // validates 2 < k < n
    r.norm_bound = pm_norm_bound(spec, n);
    r.tau = r.constant * r.norm_bound.value;
    r.bound_rhs = 1.0 / r.constant;
    r.passes = r.norm_bound.value < r.bound_rhs;
    r.margin = r.bound_rhs - r.norm_bound.value;
    r.k_opt = optimal_index(n);
    r.tau_at_k_opt = hardy_constant(n, r.k_opt) * r.norm_bound.value;
    r.param_value = strength(spec);
    r.param_threshold = strength_threshold(spec, n, k);
    return r;
}

} // namespace pmheat
