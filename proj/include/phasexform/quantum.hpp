#pragma once
// Weyl-Wigner correspondence on truncated position grids (hbar = 1).
//
// Symbols are stored with momentum first: h(p, q). Operators are kernels
// <q1|H|q2> on an axis pair, acting as (H psi)(q1) = sum_k step K(q1, q2_k) psi(q2_k).
//
// quantize:  <q1|H|q2> = (1/2pi) int dp h(p, (q1+q2)/2) exp(ip(q1 - q2))
// symbol:    h(p, q)   = int du exp(-ipu) <q + u/2|H|q - u/2>
// Wigner:    W(p, q)   = symbol(rho)(p, q) / 2pi
//
// Symbols are read along kernel anti-diagonals (q1 + q2 fixed), which land
// exactly on kernel samples when q sits on the kernel axis' half-step lattice.

#include "closedform.hpp"
#include "grid.hpp"
#include "hermite.hpp"
#include "xform.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasexform {

using Warnings = std::vector<std::string>;

// Matrix <q1|H|q2> on an axis pair.
class OperatorKernel {
public:
    OperatorKernel(Axis q1, Axis q2, Eigen::MatrixXcd values) : q1_(std::move(q1)), q2_(std::move(q2)), m_(std::move(values))
    {
        if (static_cast<std::size_t>(m_.rows()) != q1_.size() || static_cast<std::size_t>(m_.cols()) != q2_.size())
            throw std::invalid_argument("OperatorKernel: matrix shape does not match axes");
        if (!m_.allFinite()) throw std::invalid_argument("OperatorKernel: non-finite entry");
    }

    const Axis& q1_axis() const { return q1_; }
    const Axis& q2_axis() const { return q2_; }
    const Eigen::MatrixXcd& values() const { return m_; }
    cplx operator()(std::size_t i, std::size_t k) const
    {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }
    bool square() const { return q1_ == q2_; }

    // step * sum of the diagonal (square kernels only).
    cplx trace() const
    {
        require_square("trace");
        return m_.diagonal().sum() * q1_.step();
    }

    // max |K(q1,q2) - conj(K(q2,q1))|
    double hermiticity_error() const
    {
        require_square("hermiticity_error");
        return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    }

    // Throws unless Hermitian and of unit trace within `tol`.
    void validate_density(double tol = 1e-8) const
    {
        const double herm = hermiticity_error();
        const cplx tr = trace();
        if (herm > tol || std::abs(tr - 1.0) > tol) {
            std::ostringstream msg;
            msg << "density operator check failed: hermiticity error " << herm << ", trace " << tr.real()
                << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i";
            throw std::invalid_argument(msg.str());
        }
    }

private:
    void require_square(const char* who) const
    {
        if (!square()) throw std::invalid_argument(std::string(who) + ": kernel axes differ");
    }

    Axis q1_;
    Axis q2_;
    Eigen::MatrixXcd m_;
};

// |psi><psi| on psi's axis.
inline OperatorKernel pure_state_density(const Signal& psi)
{
    const auto n = static_cast<Eigen::Index>(psi.axis().size());
    Eigen::VectorXcd v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = psi[static_cast<std::size_t>(k)];
    return OperatorKernel(psi.axis(), psi.axis(), v * v.adjoint());
}

// Normalized oscillator eigenstate psi_n sampled on `axis`.
inline Signal number_state(std::size_t n, const Axis& axis)
{
    return Signal::sample(axis, [n](double q) { return cplx{hermite_function(n, q)}; });
}

// |n><n| on `axis`.
inline OperatorKernel number_projector(std::size_t n, const Axis& axis) { return pure_state_density(number_state(n, axis)); }

// Weyl quantization of h(p, q) onto `axis` x `axis`. The midpoint (q1+q2)/2
// is read from h's q-axis by linear interpolation, exact when h's q-step is
// half the operator step and the lattices align.
inline OperatorKernel weyl_quantize(const SampledField& h, const Axis& axis, Warnings* warnings = nullptr)
{
    const auto& g = h.grid();
    if (axis.min() < g.q.min() - 1e-12 || axis.max() > g.q.max() + 1e-12)
        throw std::invalid_argument("weyl_quantize: operator axis exceeds the symbol's q-range");
    if (warnings) {
        double edge = 0.0;
        for (std::size_t k = 0; k < g.q.size(); ++k)
            edge = std::max({edge, std::abs(h(0, k)), std::abs(h(g.p.size() - 1, k))});
        if (edge > 1e-12) {
            std::ostringstream msg;
            msg << "weyl_quantize: symbol not decayed at the p boundary (max |h| = " << edge << ")";
            warnings->push_back(msg.str());
        }
    }
    const std::size_t n = axis.size(), np = g.p.size();
    const double d = axis.step();
    // symbol columns at every midpoint (index sum s = i + k), trapezoid-weighted
    std::vector<cplx> mid((2 * n - 1) * np);
    for (std::size_t s = 0; s < 2 * n - 1; ++s) {
        const double qm = axis.min() + 0.5 * static_cast<double>(s) * d;
        double pos = g.q.position(qm);
        pos = std::clamp(pos, 0.0, static_cast<double>(g.q.size() - 1));
        auto k0 = std::min(static_cast<std::size_t>(pos), g.q.size() - 2);
        const double t = pos - static_cast<double>(k0);
        for (std::size_t j = 0; j < np; ++j)
            mid[s * np + j] = g.p.weight(j) * ((1 - t) * h(j, k0) + t * h(j, k0 + 1));
    }
    // exp(ip (q1 - q2)) for every offset (i - k) + n - 1
    std::vector<cplx> phase((2 * n - 1) * np);
    for (std::size_t o = 0; o < 2 * n - 1; ++o) {
        const double diff = (static_cast<double>(o) - static_cast<double>(n - 1)) * d;
        for (std::size_t j = 0; j < np; ++j) phase[o * np + j] = std::exp(I * (g.p[j] * diff));
    }
    const double scale = g.p.step() / (2 * pi);
    Eigen::MatrixXcd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx* a = mid.data() + (i + k) * np;
            const cplx* b = phase.data() + (i + n - 1 - k) * np;
            cplx acc{};
            for (std::size_t j = 0; j < np; ++j) acc += a[j] * b[j];
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = acc * scale;
        }
    return OperatorKernel(axis, axis, std::move(m));
}

namespace detail {

// int du exp(-ipu) K(q + u/2, q - u/2) along the anti-diagonal i + k = s.
inline cplx antidiagonal_integral(const OperatorKernel& H, std::size_t s, double p)
{
    const std::size_t n = H.q1_axis().size();
    const double d = H.q1_axis().step();
    const std::size_t lo = s >= n - 1 ? s - (n - 1) : 0;
    const std::size_t hi = std::min(s, n - 1);
    if (lo == hi) return {}; // a single point carries no trapezoid area
    cplx acc{};
    for (std::size_t i = lo; i <= hi; ++i) {
        const double u = (2.0 * static_cast<double>(i) - static_cast<double>(s)) * d;
        const double w = (i == lo || i == hi) ? 0.5 : 1.0;
        acc += w * std::exp(-I * (p * u)) * H(i, s - i);
    }
    return acc * (2 * d);
}

} // namespace detail

// Weyl symbol h(p, q) of H on `grid`; q off the half-step lattice is
// linearly interpolated between neighbouring anti-diagonals.
inline SampledField weyl_symbol(const OperatorKernel& H, const PhaseGrid& grid)
{
    if (!H.square()) throw std::invalid_argument("weyl_symbol: kernel axes differ");
    const Axis& ax = H.q1_axis();
    if (grid.q.min() < ax.min() - 1e-12 || grid.q.max() > ax.max() + 1e-12)
        throw std::invalid_argument("weyl_symbol: grid q-range exceeds the kernel axis");
    const std::size_t n = ax.size();
    SampledField h(grid);
    for (std::size_t k = 0; k < grid.q.size(); ++k) {
        double pos = 2 * ax.position(grid.q[k]); // in half steps
        pos = std::clamp(pos, 0.0, static_cast<double>(2 * n - 2));
        double s0 = std::floor(pos + 1e-9);
        double t = pos - s0;
        if (t < 1e-9) t = 0.0;
        const auto s = static_cast<std::size_t>(s0);
        for (std::size_t j = 0; j < grid.p.size(); ++j) {
            cplx v = detail::antidiagonal_integral(H, s, grid.p[j]);
            if (t > 0.0 && s + 1 <= 2 * n - 2)
                v = (1 - t) * v + t * detail::antidiagonal_integral(H, s + 1, grid.p[j]);
            h(j, k) = v;
        }
    }
    return h;
}

// Wigner function Tr[rho Delta(p, q)] = symbol / 2pi.
inline SampledField wigner_of_density(const OperatorKernel& rho, const PhaseGrid& grid)
{
    auto w = weyl_symbol(rho, grid);
    for (auto& v : w.values()) v /= 2 * pi;
    return w;
}

// W(p, q) = int du/2pi exp(ipu) conj(psi(q + u/2)) psi(q - u/2), with u
// stepped by twice the signal step so that on-lattice q reads exact samples.
inline SampledField wigner_of_signal(const Signal& psi, const PhaseGrid& grid)
{
    const Axis& ax = psi.axis();
    if (grid.q.min() < ax.min() - 1e-12 || grid.q.max() > ax.max() + 1e-12)
        throw std::invalid_argument("wigner_of_signal: signal axis does not cover the grid's q-range");
    const double d = ax.step();
    const auto reach = static_cast<long>(ax.size());
    SampledField w(grid);
    std::vector<cplx> prod;
    std::vector<double> us;
    for (std::size_t k = 0; k < grid.q.size(); ++k) {
        const double q = grid.q[k];
        prod.clear();
        us.clear();
        for (long m = -reach; m <= reach; ++m) {
            const double half = static_cast<double>(m) * d;
            const cplx v = std::conj(psi.interpolate(q + half)) * psi.interpolate(q - half);
            if (v != cplx{}) {
                prod.push_back(v);
                us.push_back(2 * half);
            }
        }
        for (std::size_t j = 0; j < grid.p.size(); ++j) {
            cplx acc{};
            for (std::size_t m = 0; m < prod.size(); ++m) acc += std::exp(I * (grid.p[j] * us[m])) * prod[m];
            w(j, k) = acc * (2 * d / (2 * pi));
        }
    }
    return w;
}

// <p = x|H|y> = (1/sqrt(2pi)) int dq1 exp(-ix q1) <q1|H|y>, y snapped to the
// nearest q2 sample.
inline cplx mixed_matrix_element(const OperatorKernel& H, double x, double y)
{
    const Axis& a1 = H.q1_axis();
    const Axis& a2 = H.q2_axis();
    if (!(y >= a2.min() - 0.5 * a2.step() && y <= a2.max() + 0.5 * a2.step()))
        throw std::invalid_argument("mixed_matrix_element: y outside the kernel's q2 axis");
    const std::size_t c = a2.nearest(y);
    cplx acc{};
    for (std::size_t i = 0; i < a1.size(); ++i) acc += a1.weight(i) * std::exp(-I * (x * a1[i])) * H(i, c);
    return acc * (a1.step() / std::sqrt(2 * pi));
}

// sqrt(2pi) <p = x|H|y> exp(ixy) on `grid` (x first axis, y second).
inline SampledField mixed_element_field(const OperatorKernel& H, const PhaseGrid& grid)
{
    return sample_field(
        [&](double x, double y) { return std::sqrt(2 * pi) * mixed_matrix_element(H, x, y) * std::exp(I * (x * y)); },
        grid);
}

struct SymbolIdentityResidual {
    double forward; // max |T[symbol(H)] - sqrt(2pi) <p=x|H|y> exp(ixy)|
    double inverse; // max |T^-1[sqrt(2pi) <p=x|H|y> exp(ixy)] - symbol(H)|
};

// Both directions of the symbol / mixed-element identity. `out` must have
// its second axis on the kernel's q2 samples and capture the mixed element's
// support for the inverse direction.
inline SymbolIdentityResidual symbol_identity_residual(const OperatorKernel& H, const PhaseGrid& symbol_grid,
                                                       const PhaseGrid& out)
{
    const auto h = weyl_symbol(H, symbol_grid);
    const auto g = mixed_element_field(H, out);
    const auto th = forward_fast(h, out);
    const auto back = inverse_fast(g, symbol_grid);
    return {max_abs_diff(th, g), max_abs_diff(back, h)};
}

/**
 * Weyl symbol of exp(f (P^2 + Q^2 - 1)/2):
 *
 *     2/(e^f + 1) * exp(((e^f - 1)/(e^f + 1)) (p^2 + q^2)).
 *
 * The exponent coefficient is tanh(f/2); at f -> -inf this is the ground
 * projector's symbol 2 exp(-(p^2 + q^2)).
 */
inline cplx oscillator_exponential_symbol_at(cplx f, double p, double q)
{
    const cplx ef = std::exp(f);
    if (std::abs(ef + 1.0) < 1e-9) throw std::domain_error("oscillator_exponential_symbol: e^f = -1 is singular");
    return 2.0 / (ef + 1.0) * std::exp((ef - 1.0) / (ef + 1.0) * (p * p + q * q));
}

inline SampledField oscillator_exponential_symbol(cplx f, const PhaseGrid& grid)
{
    oscillator_exponential_symbol_at(f, 0.0, 0.0);
    return sample_field([&](double p, double q) { return oscillator_exponential_symbol_at(f, p, q); }, grid);
}

// Closed-form forward transform of the oscillator-exponential symbol: the
// Gaussian formula at lambda = -(e^f - 1)/(e^f + 1) times 2/(e^f + 1).
inline cplx oscillator_exponential_transform_closed(cplx f, double x, double y)
{
    const cplx ef = std::exp(f);
    if (std::abs(ef + 1.0) < 1e-9) throw std::domain_error("oscillator_exponential_transform_closed: e^f = -1");
    return 2.0 / (ef + 1.0) * gaussian_transform_closed(-(ef - 1.0) / (ef + 1.0), x, y);
}

// Truncated spectral kernel sum_{n <= n_max} e^{fn} psi_n(q1) psi_n(q2) on the basis axis.
inline OperatorKernel oscillator_exponential_kernel(cplx f, const HermiteBasis& basis)
{
    if (f.real() > 0.0) throw std::domain_error("oscillator_exponential_kernel: Re(f) must be <= 0");
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXcd coeff(n);
    for (Eigen::Index k = 0; k < n; ++k) coeff(k) = std::exp(f * static_cast<double>(k));
    const Eigen::MatrixXcd t = basis.table().cast<cplx>();
    return OperatorKernel(basis.axis(), basis.axis(), t.transpose() * coeff.asDiagonal() * t);
}

// Fourier transform psi~(p) = (1/sqrt(2pi)) int dq exp(-ipq) psi(q).
inline cplx momentum_amplitude(const Signal& psi, double p)
{
    const Axis& ax = psi.axis();
    cplx acc{};
    for (std::size_t k = 0; k < ax.size(); ++k) acc += ax.weight(k) * std::exp(-I * (p * ax[k])) * psi[k];
    return acc * (ax.step() / std::sqrt(2 * pi));
}

// Kirkwood-Rihaczek value Tr[rho delta(q - Q) delta(p - P)] for rho = |psi><psi|:
// conj(psi(q)) psi~(p) exp(ipq) / sqrt(2pi).
inline cplx kirkwood_qp_closed(const Signal& psi, double p, double q)
{
    return std::conj(psi.interpolate(q)) * momentum_amplitude(psi, p) * std::exp(I * (p * q)) / std::sqrt(2 * pi);
}

// Anti-ordered partner Tr[rho delta(p - P) delta(q - Q)]: psi(q) conj(psi~(p)) exp(-ipq) / sqrt(2pi).
inline cplx kirkwood_pq_closed(const Signal& psi, double p, double q)
{
    return psi.interpolate(q) * std::conj(momentum_amplitude(psi, p)) * std::exp(-I * (p * q)) / std::sqrt(2 * pi);
}

struct KirkwoodResidual {
    double qp; // forward transform of W vs the Q-P ordered closed form
    double pq; // inverse-kernel transform of W vs the P-Q ordered closed form
};

// Transforms the signal's Wigner function (sampled on `wigner_grid`) onto
// `out` = (p, q) with both kernels and compares to the ordered closed forms.
inline KirkwoodResidual wigner_to_kirkwood_residual(const Signal& psi, const PhaseGrid& wigner_grid,
                                                    const PhaseGrid& out)
{
    const auto w = wigner_of_signal(psi, wigner_grid);
    const auto fwd = forward_fast(w, out);
    const auto inv = inverse_fast(w, out);
    std::vector<cplx> amp(out.p.size());
    for (std::size_t a = 0; a < out.p.size(); ++a) amp[a] = momentum_amplitude(psi, out.p[a]);
    KirkwoodResidual r{0.0, 0.0};
    for (std::size_t a = 0; a < out.p.size(); ++a)
        for (std::size_t b = 0; b < out.q.size(); ++b) {
            const double p = out.p[a], q = out.q[b];
            const cplx pq_phase = std::exp(I * (p * q)) / std::sqrt(2 * pi);
            const cplx psi_q = psi.interpolate(q);
            const cplx qp = std::conj(psi_q) * amp[a] * pq_phase;
            const cplx pq = psi_q * std::conj(amp[a]) * std::conj(pq_phase);
            r.qp = std::max(r.qp, std::abs(fwd(a, b) - qp));
            r.pq = std::max(r.pq, std::abs(inv(a, b) - pq));
        }
    return r;
}

// Matrix elements <m|rho|n> of a kernel in the Hermite basis.
class BasisOperator {
public:
    BasisOperator(const OperatorKernel& rho, const HermiteBasis& basis, double max_projection_error = 1e-8)
    {
        if (!(rho.q1_axis() == basis.axis()) || !(rho.q2_axis() == basis.axis()))
            throw std::invalid_argument("BasisOperator: kernel axes must equal the basis axis");
        const Axis& ax = basis.axis();
        Eigen::VectorXd w(ax.size());
        for (std::size_t k = 0; k < ax.size(); ++k) w(static_cast<Eigen::Index>(k)) = ax.weight(k) * ax.step();
        const Eigen::MatrixXcd t = basis.table().cast<cplx>();
        const Eigen::MatrixXcd tw = t * w.cast<cplx>().asDiagonal();
        m_ = tw * rho.values() * tw.transpose();
        const Eigen::MatrixXcd back = t.transpose() * m_ * t;
        const double scale = rho.values().cwiseAbs().maxCoeff();
        projection_error_ = scale > 0 ? (back - rho.values()).cwiseAbs().maxCoeff() / scale : 0.0;
        if (projection_error_ > max_projection_error) {
            std::ostringstream msg;
            msg << "BasisOperator: kernel not representable in " << basis.size()
                << " Hermite modes (relative projection error " << projection_error_ << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    const Eigen::MatrixXcd& matrix() const { return m_; }
    double projection_error() const { return projection_error_; }

private:
    Eigen::MatrixXcd m_;
    double projection_error_ = 0.0;
};

// Position and momentum matrices in the truncated number basis.
inline Eigen::MatrixXcd position_matrix(std::size_t dim)
{
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n) {
        const double v = std::sqrt(static_cast<double>(n) / 2.0);
        q(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = v;
        q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 1)) = v;
    }
    return q;
}

inline Eigen::MatrixXcd momentum_matrix(std::size_t dim)
{
    // P = -i (a - a^dagger)/sqrt(2)
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n) {
        const double v = std::sqrt(static_cast<double>(n) / 2.0);
        p(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = -I * v;
        p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 1)) = I * v;
    }
    return p;
}

// Evaluates ordered characteristic functions of one state in the Hermite basis.
class CharacteristicFunction {
public:
    CharacteristicFunction(const OperatorKernel& rho, const HermiteBasis& basis)
        : rho_(BasisOperator(rho, basis).matrix()), q_(position_matrix(basis.size())), p_(momentum_matrix(basis.size()))
    {
    }

    // Q-P ordered: Tr[rho exp(i(q - Q)u) exp(i(p - P)v)].
    cplx qp(double q, double p, double u, double v) const
    {
        check(u, v);
        const Eigen::MatrixXcd eq = (-I * u * q_).exp();
        const Eigen::MatrixXcd ep = (-I * v * p_).exp();
        return (rho_ * eq * ep).trace() * std::exp(I * (q * u + p * v));
    }

    // P-Q ordered: Tr[rho exp(i(p - P)v) exp(i(q - Q)u)].
    cplx pq(double q, double p, double u, double v) const
    {
        check(u, v);
        const Eigen::MatrixXcd eq = (-I * u * q_).exp();
        const Eigen::MatrixXcd ep = (-I * v * p_).exp();
        return (rho_ * ep * eq).trace() * std::exp(I * (q * u + p * v));
    }

    // qp over a (u, v) lattice, reusing one exponential per u and per v.
    Eigen::MatrixXcd qp_table(double q, double p, const std::vector<double>& us, const std::vector<double>& vs) const
    {
        std::vector<Eigen::MatrixXcd> ev;
        for (double v : vs) {
            check(0.0, v);
            ev.push_back((-I * v * p_).exp());
        }
        Eigen::MatrixXcd out(static_cast<Eigen::Index>(us.size()), static_cast<Eigen::Index>(vs.size()));
        for (std::size_t a = 0; a < us.size(); ++a) {
            check(us[a], 0.0);
            const Eigen::MatrixXcd re = rho_ * (-I * us[a] * q_).exp();
            for (std::size_t b = 0; b < vs.size(); ++b)
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    re.cwiseProduct(ev[b].transpose()).sum() * std::exp(I * (q * us[a] + p * vs[b]));
        }
        return out;
    }

private:
    static void check(double u, double v)
    {
        if (std::abs(u) > 6.0 || std::abs(v) > 6.0)
            throw std::domain_error("characteristic function: |u|, |v| must be <= 6 for the truncated basis");
    }

    Eigen::MatrixXcd rho_;
    Eigen::MatrixXcd q_;
    Eigen::MatrixXcd p_;
};

inline cplx char_function_qp(const OperatorKernel& rho, const HermiteBasis& basis, double q, double p, double u,
                             double v)
{
    return CharacteristicFunction(rho, basis).qp(q, p, u, v);
}

inline cplx char_function_pq(const OperatorKernel& rho, const HermiteBasis& basis, double q, double p, double u,
                             double v)
{
    return CharacteristicFunction(rho, basis).pq(q, p, u, v);
}

} // namespace phasexform
