#pragma once
// Normalized Hermite functions (harmonic-oscillator eigenfunctions).

#include "grid.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace phasexform {

// psi_0(x) .. psi_{n_max}(x) via the normalized three-term recurrence
//   psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}.
inline std::vector<double> hermite_functions(double x, std::size_t n_max)
{
    std::vector<double> psi(n_max + 1);
    psi[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
    if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (std::size_t n = 1; n < n_max; ++n) {
        double nn = static_cast<double>(n);
        psi[n + 1] = std::sqrt(2.0 / (nn + 1)) * x * psi[n] - std::sqrt(nn / (nn + 1)) * psi[n - 1];
    }
    return psi;
}

inline double hermite_function(std::size_t n, double x) { return hermite_functions(x, n)[n]; }

// Axis wide enough for discrete orthonormality of psi_0..psi_{n_max}:
// covers [-sqrt(2 n_max) - 4, sqrt(2 n_max) + 4].
inline Axis hermite_axis(std::size_t n_max, std::size_t n_samples)
{
    double half = std::sqrt(2.0 * static_cast<double>(n_max)) + 4.0;
    return Axis(-half, half, n_samples);
}

// Table psi_n(q_k) for n = 0..n_max on a fixed axis. Immutable once built.
class HermiteBasis {
public:
    HermiteBasis(std::size_t n_max, Axis axis) : n_max_(n_max), axis_(std::move(axis)), table_(n_max + 1, axis_.size())
    {
        for (std::size_t k = 0; k < axis_.size(); ++k) {
            auto psi = hermite_functions(axis_[k], n_max_);
            for (std::size_t n = 0; n <= n_max_; ++n)
                table_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = psi[n];
        }
    }

    std::size_t n_max() const { return n_max_; }
    std::size_t size() const { return n_max_ + 1; }
    const Axis& axis() const { return axis_; }
    // Row n holds psi_n sampled on the axis.
    const Eigen::MatrixXd& table() const { return table_; }
    double operator()(std::size_t n, std::size_t k) const
    {
        return table_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    }

    // Gram matrix step * sum_k psi_m psi_n (trapezoid).
    Eigen::MatrixXd gram() const
    {
        Eigen::VectorXd w(axis_.size());
        for (std::size_t k = 0; k < axis_.size(); ++k)
            w(static_cast<Eigen::Index>(k)) = axis_.weight(k) * axis_.step();
        return table_ * w.asDiagonal() * table_.transpose();
    }

    // max |gram - identity|
    double orthonormality_error() const
    {
        return (gram() - Eigen::MatrixXd::Identity(table_.rows(), table_.rows())).cwiseAbs().maxCoeff();
    }

private:
    std::size_t n_max_;
    Axis axis_;
    Eigen::MatrixXd table_;
};

} // namespace phasexform
