#pragma once
// Closed-form identities around the chirp transform: the Gaussian
// integration formula, the lambda(alpha) parameter map, regularized
// chirplets, and the fractional Fourier kernel with its Mehler-sum oracle.

#include "grid.hpp"
#include "hermite.hpp"
#include "xform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasexform {

// Below this |sin(alpha)| the kernel's 1/sin and 1/tan terms are rejected.
inline constexpr double kSingularityGuard = 0.1;

namespace detail {

inline double abs_sin(double a) { return std::abs(std::sin(a)); }
inline double abs_sin(cplx a) { return std::abs(std::sin(a)); }

template <class Angle>
void check_alpha(Angle alpha, const char* who)
{
    if (!(abs_sin(alpha) >= kSingularityGuard)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << who << ": alpha = " << alpha << " is too close to a multiple of pi (|sin alpha| = " << abs_sin(alpha)
            << " < " << kSingularityGuard << ")";
        throw std::domain_error(msg.str());
    }
}

} // namespace detail

/**
 * Closed form of the forward transform of exp(-lambda (p^2 + q^2)):
 *
 *     1/sqrt(lambda^2 + 1) * exp(-lambda (x^2 + y^2)/(lambda^2 + 1) + 2i lambda^2 xy/(lambda^2 + 1)).
 *
 * sqrt(lambda^2 + 1) is taken as sqrt(lambda - i) * sqrt(lambda + i) with
 * principal factors. For Re(lambda) > 0 both factors lie in the right half
 * plane, which is the branch the convergent integral selects; Re(lambda) = 0
 * is the boundary value of that branch.
 */
inline cplx gaussian_transform_closed(cplx lambda, double x, double y)
{
    if (std::abs(lambda - I) < 1e-9 || std::abs(lambda + I) < 1e-9)
        throw std::domain_error("gaussian_transform_closed: lambda = +-i is singular");
    const cplx l2 = lambda * lambda;
    const cplx d = l2 + 1.0;
    const cplx root = std::sqrt(lambda - I) * std::sqrt(lambda + I);
    return std::exp(-lambda * (x * x + y * y) / d + 2.0 * I * l2 * x * y / d) / root;
}

// Fractional Fourier angle together with its coupled transform parameters.
struct FrFTParams {
    double alpha;
    cplx lambda;     // -i tan(pi/4 - alpha/2)
    cplx f_exponent; // i (pi/2 - alpha), so that exp(f) = i exp(-i alpha)

    // |-lambda/(lambda^2+1) - i/(2 tan alpha)|
    double coupling_residual() const
    {
        return std::abs(-lambda / (lambda * lambda + 1.0) - I / (2.0 * std::tan(alpha)));
    }
    // |2 lambda^2/(lambda^2+1) - (1 - 1/sin alpha)|
    double chirp_residual() const
    {
        return std::abs(2.0 * lambda * lambda / (lambda * lambda + 1.0) - (1.0 - 1.0 / std::sin(alpha)));
    }
};

inline cplx lambda_of_alpha(double alpha) { return -I * std::tan(pi / 4 - alpha / 2); }

inline FrFTParams params_of_alpha(double alpha)
{
    if (!std::isfinite(alpha)) throw std::domain_error("params_of_alpha: alpha must be finite");
    detail::check_alpha(alpha, "params_of_alpha");
    return {alpha, lambda_of_alpha(alpha), I * (pi / 2 - alpha)};
}

// exp((-eps + i tan(pi/4 - alpha/2)) (p^2 + q^2)) on `grid`.
inline SampledField chirplet_field(double alpha, double epsilon, const PhaseGrid& grid)
{
    if (!(epsilon > 0.0)) throw std::domain_error("chirplet_field: epsilon must be positive");
    const cplx rate = -epsilon + I * std::tan(pi / 4 - alpha / 2);
    return sample_field([&](double p, double q) { return std::exp(rate * (p * p + q * q)); }, grid);
}

/**
 * Fractional Fourier kernel
 *
 *     K_alpha(x, y) = exp(i (x^2 + y^2)/(2 tan alpha) - i xy / sin alpha) / sqrt(2 pi i sin(alpha) exp(-i alpha)).
 *
 * The radicand equals pi (1 - exp(-2i alpha)) whose real part is
 * 2 pi sin^2(alpha) >= 0, so the principal root is continuous and agrees with
 * the Mehler sum. Complex angles alpha - i*delta (delta > 0) give the
 * Abel-damped kernel sum_n exp(-i alpha n - delta n) psi_n(x) psi_n(y).
 */
template <class Angle>
cplx frft_kernel(Angle alpha, double x, double y)
{
    detail::check_alpha(alpha, "frft_kernel");
    const cplx a{alpha};
    const cplx s = std::sin(a);
    const cplx root = std::sqrt(2.0 * pi * I * s * std::exp(-I * a));
    return std::exp(I * (x * x + y * y) / (2.0 * std::tan(a)) - I * x * y / s) / root;
}

// Partial Mehler sum  sum_{n < n_terms} exp(-i alpha n) psi_n(x) psi_n(y).
//
// For real alpha the series converges only conditionally (error ~ n_terms^-1/2);
// a complex angle alpha - i*delta converges geometrically.
template <class Angle>
cplx frft_kernel_hermite(Angle alpha, double x, double y, int n_terms)
{
    if (n_terms < 1) throw std::invalid_argument("frft_kernel_hermite: n_terms must be >= 1");
    const auto n = static_cast<std::size_t>(n_terms);
    const auto px = hermite_functions(x, n - 1);
    const auto py = hermite_functions(y, n - 1);
    const cplx step = std::exp(-I * cplx{alpha});
    cplx phase{1.0};
    cplx acc{};
    for (std::size_t k = 0; k < n; ++k) {
        acc += phase * (px[k] * py[k]);
        phase *= step;
    }
    return acc;
}

// Kernel sampled on `grid` (x on the first axis, y on the second).
inline SampledField frft_kernel_field(double alpha, const PhaseGrid& grid)
{
    detail::check_alpha(alpha, "frft_kernel_field");
    return sample_field([&](double x, double y) { return frft_kernel(alpha, x, y); }, grid);
}

inline SampledField frft_kernel_hermite_field(cplx alpha, const PhaseGrid& grid, int n_terms)
{
    if (n_terms < 1) throw std::invalid_argument("frft_kernel_hermite_field: n_terms must be >= 1");
    const auto n = static_cast<std::size_t>(n_terms) - 1;
    std::vector<std::vector<double>> qs(grid.q.size());
    for (std::size_t k = 0; k < grid.q.size(); ++k) qs[k] = hermite_functions(grid.q[k], n);
    std::vector<cplx> phase(n + 1);
    for (std::size_t m = 0; m <= n; ++m) phase[m] = std::exp(-I * alpha * static_cast<double>(m));
    SampledField out(grid);
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
        const auto px = hermite_functions(grid.p[j], n);
        for (std::size_t k = 0; k < grid.q.size(); ++k) {
            cplx acc{};
            for (std::size_t m = 0; m <= n; ++m) acc += phase[m] * (px[m] * qs[k][m]);
            out(j, k) = acc;
        }
    }
    return out;
}

// Right-hand side of the chirplet identity: sqrt(2 pi) K_alpha(x, y) exp(ixy).
inline cplx chirplet_target(double alpha, double x, double y)
{
    return std::sqrt(2 * pi) * frft_kernel(alpha, x, y) * std::exp(I * (x * y));
}

// Prefactor 2/(i exp(-i alpha) + 1) multiplying the transformed chirplet.
inline cplx chirplet_prefactor(double alpha) { return 2.0 / (I * std::exp(-I * alpha) + 1.0); }

// Quadrature grid adequate for the eps-damped chirplet transform onto `out`:
// truncated where exp(-eps r^2) < 1e-6, step resolving the largest local
// frequency of the integrand with 20% margin.
inline PhaseGrid chirplet_quadrature_grid(double alpha, double epsilon, const PhaseGrid& out)
{
    if (!(epsilon > 0.0)) throw std::domain_error("chirplet_quadrature_grid: epsilon must be positive");
    const double radius = std::sqrt(std::log(1e6) / epsilon);
    const double t = std::abs(std::tan(pi / 4 - alpha / 2));
    const double reach = std::max({std::abs(out.p.min()), std::abs(out.p.max()), std::abs(out.q.min()),
                                   std::abs(out.q.max())});
    const double max_freq = 2 * (radius + reach) + 2 * t * radius;
    const double step = 2 * pi / (1.2 * max_freq);
    auto n = static_cast<std::size_t>(std::ceil(2 * radius / step)) + 1;
    return square_grid(-radius, radius, n);
}

// Deviations from the chirplet identity target for one damping value.
struct ChirpletCheck {
    double epsilon;
    double closed;               // closed form at lambda_eps = eps + lambda(alpha)
    double quadrature;           // fast-path transform of the damped chirplet
    double quadrature_vs_closed; // quadrature error at fixed eps
};

struct ChirpletSweep {
    double alpha;
    double continuation; // closed form at eps = 0 (pure chirplet)
    std::vector<ChirpletCheck> checks;
    double extrapolated; // polynomial extrapolation of the quadrature values to eps = 0
    bool monotone;       // quadrature residual strictly decreases as eps decreases
};

// max over `out` of |prefactor * G(lambda(alpha)) - target|.
inline double chirplet_continuation_residual(double alpha, const PhaseGrid& out)
{
    const auto prm = params_of_alpha(alpha);
    const cplx pre = chirplet_prefactor(alpha);
    double worst = 0.0;
    for (std::size_t a = 0; a < out.p.size(); ++a)
        for (std::size_t b = 0; b < out.q.size(); ++b) {
            const double x = out.p[a], y = out.q[b];
            worst = std::max(worst, std::abs(pre * gaussian_transform_closed(prm.lambda, x, y) -
                                             chirplet_target(alpha, x, y)));
        }
    return worst;
}

namespace detail {

struct ChirpletValues {
    SampledField closed;
    SampledField quadrature;
};

inline ChirpletValues chirplet_values(double alpha, double epsilon, const PhaseGrid& in, const PhaseGrid& out)
{
    const auto prm = params_of_alpha(alpha);
    const cplx pre = chirplet_prefactor(alpha);
    const cplx lam = epsilon + prm.lambda;
    auto closed = sample_field([&](double x, double y) { return pre * gaussian_transform_closed(lam, x, y); }, out);
    auto quad = forward_fast(chirplet_field(alpha, epsilon, in), out);
    for (auto& v : quad.values()) v *= pre;
    return {std::move(closed), std::move(quad)};
}

inline double max_dev_from_target(double alpha, const SampledField& f)
{
    const auto& g = f.grid();
    double worst = 0.0;
    for (std::size_t a = 0; a < g.p.size(); ++a)
        for (std::size_t b = 0; b < g.q.size(); ++b)
            worst = std::max(worst, std::abs(f(a, b) - chirplet_target(alpha, g.p[a], g.q[b])));
    return worst;
}

} // namespace detail

inline ChirpletCheck chirplet_identity_residual(double alpha, double epsilon, const PhaseGrid& in,
                                                const PhaseGrid& out)
{
    auto v = detail::chirplet_values(alpha, epsilon, in, out);
    return {epsilon, detail::max_dev_from_target(alpha, v.closed), detail::max_dev_from_target(alpha, v.quadrature),
            max_abs_diff(v.quadrature, v.closed)};
}

// Runs the identity over an epsilon ladder (quadrature grids chosen per eps)
// and extrapolates the quadrature values to eps = 0 with Neville's scheme.
inline ChirpletSweep chirplet_sweep(double alpha, const std::vector<double>& epsilons, const PhaseGrid& out)
{
    if (epsilons.empty()) throw std::invalid_argument("chirplet_sweep: empty epsilon ladder");
    ChirpletSweep sweep{alpha, chirplet_continuation_residual(alpha, out), {}, 0.0, true};
    std::vector<SampledField> quads;
    for (double eps : epsilons) {
        auto v = detail::chirplet_values(alpha, eps, chirplet_quadrature_grid(alpha, eps, out), out);
        sweep.checks.push_back({eps, detail::max_dev_from_target(alpha, v.closed),
                                detail::max_dev_from_target(alpha, v.quadrature),
                                max_abs_diff(v.quadrature, v.closed)});
        quads.push_back(std::move(v.quadrature));
    }
    // ordered by decreasing epsilon, the residual must strictly decrease
    std::vector<std::size_t> order(epsilons.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return epsilons[a] > epsilons[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (!(sweep.checks[order[i]].quadrature < sweep.checks[order[i - 1]].quadrature)) sweep.monotone = false;

    const std::size_t n = epsilons.size();
    std::vector<cplx> table(n);
    SampledField extrap(out);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        for (std::size_t i = 0; i < n; ++i) table[i] = quads[i].values()[idx];
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t i = 0; i + k < n; ++i)
                table[i] = (epsilons[i + k] * table[i] - epsilons[i] * table[i + 1]) / (epsilons[i + k] - epsilons[i]);
        extrap.values()[idx] = table[0];
    }
    sweep.extrapolated = detail::max_dev_from_target(alpha, extrap);
    return sweep;
}

} // namespace phasexform
