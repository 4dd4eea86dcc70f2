#pragma once
// Uniform sampling axes, phase-space grids, sampled fields and signals.
//
// Every integral over the real line is approximated by the trapezoid rule on
// a truncated, endpoint-inclusive uniform axis. Two-dimensional fields are
// stored row-major with the first ("p") axis outer and the second ("q") axis
// inner.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phasexform {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Endpoint-inclusive uniform axis: samples min + k*step, k = 0..n-1.
class Axis {
public:
    Axis(double min, double max, std::size_t n) : min_(min), max_(max), n_(n)
    {
        if (!std::isfinite(min) || !std::isfinite(max))
            throw std::invalid_argument("Axis: bounds must be finite");
        if (n < 2)
            throw std::invalid_argument("Axis: need at least 2 samples, got " + std::to_string(n));
        if (!(max > min))
            throw std::invalid_argument("Axis: max must exceed min");
        step_ = (max - min) / static_cast<double>(n - 1);
    }

    double min() const { return min_; }
    double max() const { return max_; }
    std::size_t size() const { return n_; }
    double step() const { return step_; }

    // The last sample is pinned to max so both endpoints are reproduced exactly.
    double operator[](std::size_t k) const
    {
        return k + 1 == n_ ? max_ : min_ + static_cast<double>(k) * step_;
    }

    // Trapezoid weight (without the step factor).
    double weight(std::size_t k) const { return (k == 0 || k + 1 == n_) ? 0.5 : 1.0; }

    bool contains(double x) const { return x >= min_ && x <= max_; }

    // Fractional sample index of x; not clamped.
    double position(double x) const { return (x - min_) / step_; }

    // Index of the sample closest to x (clamped to the axis).
    std::size_t nearest(double x) const
    {
        double pos = std::round(position(x));
        if (pos < 0.0) return 0;
        if (pos > static_cast<double>(n_ - 1)) return n_ - 1;
        return static_cast<std::size_t>(pos);
    }

    std::vector<double> samples() const
    {
        std::vector<double> s(n_);
        for (std::size_t k = 0; k < n_; ++k) s[k] = (*this)[k];
        return s;
    }

    bool operator==(const Axis& o) const { return min_ == o.min_ && max_ == o.max_ && n_ == o.n_; }

private:
    double min_;
    double max_;
    std::size_t n_;
    double step_;
};

inline Axis make_axis(double min, double max, std::size_t n) { return Axis(min, max, n); }

// Axis with the given step that contains every sample of `inner` and extends
// at least `margin` beyond it on both sides.
inline Axis extend_axis(const Axis& inner, double margin)
{
    auto extra = static_cast<std::size_t>(std::ceil(margin / inner.step() - 1e-9));
    double d = inner.step();
    return Axis(inner.min() - static_cast<double>(extra) * d, inner.max() + static_cast<double>(extra) * d,
                inner.size() + 2 * extra);
}

// Tensor product of a first (p-like) and second (q-like) axis.
struct PhaseGrid {
    Axis p;
    Axis q;

    std::size_t size() const { return p.size() * q.size(); }
    std::size_t index(std::size_t j, std::size_t k) const { return j * q.size() + k; }
    bool operator==(const PhaseGrid&) const = default;
};

inline PhaseGrid square_grid(double min, double max, std::size_t n) { return {Axis(min, max, n), Axis(min, max, n)}; }

namespace detail {

inline bool all_finite(const std::vector<cplx>& v)
{
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

} // namespace detail

// Complex function sampled on a PhaseGrid.
class SampledField {
public:
    explicit SampledField(PhaseGrid grid) : grid_(std::move(grid)), values_(grid_.size(), cplx{}) {}

    SampledField(PhaseGrid grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values))
    {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("SampledField: value count " + std::to_string(values_.size()) +
                                        " does not match grid size " + std::to_string(grid_.size()));
        if (!detail::all_finite(values_))
            throw std::invalid_argument("SampledField: non-finite value");
    }

    const PhaseGrid& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }

    cplx operator()(std::size_t j, std::size_t k) const { return values_[grid_.index(j, k)]; }
    cplx& operator()(std::size_t j, std::size_t k) { return values_[grid_.index(j, k)]; }

    // Bilinear interpolation with zero extension outside the grid.
    cplx interpolate(double p, double q) const
    {
        const Axis& ap = grid_.p;
        const Axis& aq = grid_.q;
        double sp = ap.position(p);
        double sq = aq.position(q);
        if (sp < 0.0 || sq < 0.0 || sp > static_cast<double>(ap.size() - 1) ||
            sq > static_cast<double>(aq.size() - 1))
            return {};
        auto j = std::min(static_cast<std::size_t>(sp), ap.size() - 2);
        auto k = std::min(static_cast<std::size_t>(sq), aq.size() - 2);
        double tp = sp - static_cast<double>(j);
        double tq = sq - static_cast<double>(k);
        return (1 - tp) * ((1 - tq) * (*this)(j, k) + tq * (*this)(j, k + 1)) +
               tp * ((1 - tq) * (*this)(j + 1, k) + tq * (*this)(j + 1, k + 1));
    }

private:
    PhaseGrid grid_;
    std::vector<cplx> values_;
};

// Complex 1D wavefunction on an Axis.
class Signal {
public:
    Signal(Axis axis, std::vector<cplx> values) : axis_(std::move(axis)), values_(std::move(values))
    {
        if (values_.size() != axis_.size())
            throw std::invalid_argument("Signal: value count does not match axis size");
        if (!detail::all_finite(values_))
            throw std::invalid_argument("Signal: non-finite value");
    }

    template <class F>
    static Signal sample(const Axis& axis, F&& fn)
    {
        std::vector<cplx> v(axis.size());
        for (std::size_t k = 0; k < axis.size(); ++k) v[k] = fn(axis[k]);
        return Signal(axis, std::move(v));
    }

    const Axis& axis() const { return axis_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx operator[](std::size_t k) const { return values_[k]; }

    // Linear interpolation with zero extension.
    cplx interpolate(double q) const
    {
        double s = axis_.position(q);
        if (s < 0.0 || s > static_cast<double>(axis_.size() - 1)) return {};
        auto k = std::min(static_cast<std::size_t>(s), axis_.size() - 2);
        double t = s - static_cast<double>(k);
        return (1 - t) * values_[k] + t * values_[k + 1];
    }

    // Trapezoid approximation of the integral of |psi|^2.
    double norm_sq() const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < values_.size(); ++k) acc += axis_.weight(k) * std::norm(values_[k]);
        return acc * axis_.step();
    }

private:
    Axis axis_;
    std::vector<cplx> values_;
};

// Samples fn(p, q) on every grid point; a non-finite evaluation is an error
// naming the grid point.
template <class F>
SampledField sample_field(F&& fn, const PhaseGrid& grid)
{
    std::vector<cplx> v(grid.size());
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
        double p = grid.p[j];
        for (std::size_t k = 0; k < grid.q.size(); ++k) {
            double q = grid.q[k];
            cplx z = fn(p, q);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "sample_field: non-finite value at grid point (" << j << ", " << k << ") = (" << p << ", "
                    << q << ")";
                throw std::domain_error(msg.str());
            }
            v[grid.index(j, k)] = z;
        }
    }
    return SampledField(grid, std::move(v));
}

// Trapezoid approximation of the measure-weighted norm  (1/pi) * iint |h|^2 dp dq.
inline double weighted_norm_sq(const SampledField& h)
{
    const auto& g = h.grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.p.size(); ++j) {
        double row = 0.0;
        for (std::size_t k = 0; k < g.q.size(); ++k) row += g.q.weight(k) * std::norm(h(j, k));
        acc += g.p.weight(j) * row;
    }
    return acc * g.p.step() * g.q.step() / pi;
}

// Maximum absolute difference between two fields on identical grids.
inline double max_abs_diff(const SampledField& a, const SampledField& b)
{
    if (!(a.grid() == b.grid())) throw std::invalid_argument("max_abs_diff: grid mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

// Relative discrete L2 error ||a - b|| / ||b|| (unweighted sums).
inline double relative_l2(const SampledField& a, const SampledField& b)
{
    if (!(a.grid() == b.grid())) throw std::invalid_argument("relative_l2: grid mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        num += std::norm(a.values()[i] - b.values()[i]);
        den += std::norm(b.values()[i]);
    }
    if (den == 0.0) throw std::invalid_argument("relative_l2: reference field is zero");
    return std::sqrt(num / den);
}

} // namespace phasexform
