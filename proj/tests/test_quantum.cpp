#include "oracles.hpp"

#include <phasexform/quantum.hpp>

#include <gtest/gtest.h>

using namespace phasexform;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// iint f dp dq by the trapezoid rule on the field's grid
cplx integrate(const SampledField& f)
{
    const auto& g = f.grid();
    cplx acc{};
    for (std::size_t j = 0; j < g.p.size(); ++j)
        for (std::size_t k = 0; k < g.q.size(); ++k) acc += g.p.weight(j) * g.q.weight(k) * f(j, k);
    return acc * g.p.step() * g.q.step();
}

double max_imag(const SampledField& f)
{
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v.imag()));
    return m;
}

} // namespace

TEST(Wigner, GroundState)
{
    const auto g = square_grid(-5, 5, 128);
    const auto psi = number_state(0, extend_axis(g.q, 3.0));
    const auto w = wigner_of_signal(psi, g);
    double err = 0.0;
    for (std::size_t j = 0; j < g.p.size(); ++j)
        for (std::size_t k = 0; k < g.q.size(); ++k)
            err = std::max(err, std::abs(w(j, k) - std::exp(-g.p[j] * g.p[j] - g.q[k] * g.q[k]) / oracle::pi));
    EXPECT_LT(err, 1e-8);
    EXPECT_NEAR(std::abs(integrate(w) - 1.0), 0.0, 1e-6);
    // psi real and even: W(p, q) = W(-p, q)
    for (std::size_t j = 0; j < g.p.size(); ++j)
        for (std::size_t k = 0; k < g.q.size(); ++k)
            EXPECT_NEAR(std::abs(w(j, k) - w(g.p.size() - 1 - j, k)), 0.0, 1e-15);
}

TEST(Wigner, FirstExcitedIntegratesToOne)
{
    const auto g = square_grid(-6, 6, 128);
    const auto w = wigner_of_signal(number_state(1, extend_axis(g.q, 3.0)), g);
    EXPECT_NEAR(std::abs(integrate(w) - 1.0), 0.0, 1e-6);
    // W_1 = (1/pi)(2(p^2+q^2) - 1) e^{-(p^2+q^2)}
    const std::size_t j = 70, k = 50;
    const double r2 = g.p[j] * g.p[j] + g.q[k] * g.q[k];
    EXPECT_NEAR(std::abs(w(j, k) - (2 * r2 - 1) * std::exp(-r2) / oracle::pi), 0.0, 1e-8);
}

TEST(Wigner, RejectsNarrowSignalAxis)
{
    const auto g = square_grid(-5, 5, 64);
    EXPECT_THROW(wigner_of_signal(number_state(0, Axis(-3, 3, 64)), g), std::invalid_argument);
}

TEST(Wigner, OfDensityMatchesGroundState)
{
    const Axis ax(-8, 8, 129);
    const auto rho = number_projector(0, ax);
    // q on the half-step lattice of the kernel axis
    const PhaseGrid g{Axis(-5, 5, 101), Axis(-5, 5, 161)};
    const auto w = wigner_of_density(rho, g);
    double err = 0.0;
    for (std::size_t j = 0; j < g.p.size(); ++j)
        for (std::size_t k = 0; k < g.q.size(); ++k)
            err = std::max(err, std::abs(w(j, k) - std::exp(-g.p[j] * g.p[j] - g.q[k] * g.q[k]) / oracle::pi));
    EXPECT_LT(err, 1e-8);
    EXPECT_LT(max_imag(w), 1e-10);
    EXPECT_NEAR(std::abs(integrate(w) - 1.0), 0.0, 1e-6);
}

TEST(WeylSymbol, GroundProjector)
{
    const Axis ax(-8, 8, 128);
    const auto h = weyl_symbol(number_projector(0, ax), PhaseGrid{ax, ax});
    double err = 0.0;
    for (std::size_t j = 0; j < ax.size(); ++j)
        for (std::size_t k = 0; k < ax.size(); ++k)
            err = std::max(err, std::abs(h(j, k) - 2 * std::exp(-ax[j] * ax[j] - ax[k] * ax[k])));
    EXPECT_LT(err, 1e-6);
}

TEST(WeylSymbol, HermitianGivesRealSymbol)
{
    const Axis ax(-8, 8, 129);
    const auto a = number_state(1, ax), b = number_state(2, ax);
    Eigen::MatrixXcd m(ax.size(), ax.size());
    for (std::size_t i = 0; i < ax.size(); ++i)
        for (std::size_t k = 0; k < ax.size(); ++k)
            m(i, k) = cplx{0.3, 0.8} * a[i] * std::conj(b[k]) + cplx{0.3, -0.8} * b[i] * std::conj(a[k]);
    const OperatorKernel H(ax, ax, m);
    EXPECT_LT(H.hermiticity_error(), 1e-15);
    EXPECT_LT(max_imag(weyl_symbol(H, PhaseGrid{Axis(-5, 5, 64), Axis(-5, 5, 81)})), 1e-10);
}

TEST(WeylQuantize, RegularizedIdentity)
{
    const double eps = 0.01;
    const Axis ax(-8, 8, 129);
    const PhaseGrid hg{Axis(-60, 60, 601), Axis(-8, 8, 257)};
    const auto h = sample_field([&](double p, double q) { return cplx{std::exp(-eps * (p * p + q * q))}; }, hg);
    Warnings warn;
    const auto H = weyl_quantize(h, ax, &warn);
    EXPECT_TRUE(warn.empty());
    double err = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i)
        for (std::size_t k = 0; k < ax.size(); ++k) {
            const double d = ax[i] - ax[k], m = (ax[i] + ax[k]) / 2;
            const double ref =
                std::sqrt(oracle::pi / eps) / (2 * oracle::pi) * std::exp(-d * d / (4 * eps) - eps * m * m);
            err = std::max(err, std::abs(H(i, k) - ref));
        }
    EXPECT_LT(err, 1e-8);
}

TEST(WeylQuantize, WarnsOnPoorTruncation)
{
    const Axis ax(-4, 4, 65);
    const PhaseGrid hg{Axis(-2, 2, 41), Axis(-4, 4, 129)};
    const auto h = sample_field([](double p, double q) { return cplx{std::exp(-(p * p + q * q) / 4)}; }, hg);
    Warnings warn;
    weyl_quantize(h, ax, &warn);
    EXPECT_FALSE(warn.empty());
}

TEST(WeylQuantize, RoundTripWithSymbol)
{
    const Axis ax(-8, 8, 129);
    const PhaseGrid hg{Axis(-8, 8, 128), Axis(-8, 8, 257)};
    const auto h = sample_field(
        [](double p, double q) { return cplx{1 + p * q + 0.5 * q * q, 0.3 * p} * std::exp(-(p * p + q * q) / 2); },
        hg);
    EXPECT_LT(relative_l2(weyl_symbol(weyl_quantize(h, ax), hg), h), 1e-6);
}

TEST(OscillatorSymbol, Values)
{
    EXPECT_NEAR(std::abs(oscillator_exponential_symbol_at(0.0, 1.3, -0.4) - 1.0), 0.0, 1e-15);
    const cplx f = -std::log(3.0);
    for (double p : {0.0, 0.7, -1.9})
        for (double q : {0.0, 1.1})
            EXPECT_NEAR(std::abs(oscillator_exponential_symbol_at(f, p, q) - 1.5 * std::exp(-(p * p + q * q) / 2)),
                        0.0, 1e-15);
    // f -> -inf: ground projector symbol
    EXPECT_NEAR(std::abs(oscillator_exponential_symbol_at(-40.0, 0.5, 0.5) - 2 * std::exp(-0.5)), 0.0, 1e-12);
    EXPECT_THROW(oscillator_exponential_symbol_at(I * oracle::pi, 0, 0), std::domain_error);
}

TEST(OscillatorSymbol, ChirpletFormAtImaginaryExponent)
{
    // f = i(pi/2 - alpha): symbol = prefactor * exp(i tan(pi/4 - alpha/2)(p^2+q^2))
    for (double a : {pi / 3, 1.0, 2.8}) {
        const cplx f = I * (pi / 2 - a);
        for (double p : {0.0, 0.9})
            for (double q : {-1.2, 0.4}) {
                const cplx ref = 2.0 / (I * std::exp(-I * a) + 1.0) *
                                 std::exp(I * std::tan(pi / 4 - a / 2) * (p * p + q * q));
                EXPECT_NEAR(std::abs(oscillator_exponential_symbol_at(f, p, q) - ref), 0.0, 1e-13);
            }
    }
}

TEST(OscillatorKernel, QuantizedSymbolMatchesSpectralSum)
{
    const cplx f = -std::log(3.0);
    const Axis ax(-8, 8, 129);
    const PhaseGrid hg{Axis(-8, 8, 128), Axis(-8, 8, 257)};
    const auto H = weyl_quantize(oscillator_exponential_symbol(f, hg), ax);
    double err = 0.0;
    std::vector<std::vector<double>> psi(ax.size());
    for (std::size_t i = 0; i < ax.size(); ++i) psi[i] = oracle::hermite_psi_all(ax[i], 80);
    for (std::size_t i = 0; i < ax.size(); ++i)
        for (std::size_t k = 0; k < ax.size(); ++k) {
            double ref = 0.0;
            for (std::size_t n = 0; n <= 80; ++n) ref += std::pow(3.0, -static_cast<double>(n)) * psi[i][n] * psi[k][n];
            err = std::max(err, std::abs(H(i, k) - ref));
        }
    EXPECT_LT(err, 1e-6);
}

TEST(OscillatorKernel, Limits)
{
    const Axis ax = hermite_axis(120, 512);
    const HermiteBasis basis(120, ax);
    EXPECT_LT(max_abs_diff(oscillator_exponential_kernel(-40.0, basis).values(), number_projector(0, ax).values()),
              1e-15);
    // f = 0: completeness on smooth functions
    const auto K = oscillator_exponential_kernel(0.0, basis);
    Eigen::VectorXcd g(ax.size());
    for (std::size_t k = 0; k < ax.size(); ++k) g(k) = std::exp(-ax[k] * ax[k]) * cplx{1.0, ax[k]};
    const Eigen::VectorXcd Kg = K.values() * g * ax.step();
    EXPECT_LT((Kg - g).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_THROW(oscillator_exponential_kernel(cplx{0.1, 0.0}, basis), std::domain_error);
}

TEST(MixedElement, GroundProjector)
{
    const Axis ax(-8, 8, 257);
    const auto H = number_projector(0, ax);
    double err = 0.0;
    for (double x : {-3.0, -1.1, 0.0, 2.4})
        for (std::size_t c = 64; c <= 192; c += 16)
            err = std::max(err, std::abs(mixed_matrix_element(H, x, ax[c]) - oracle::psi0(x) * oracle::psi0(ax[c])));
    EXPECT_LT(err, 1e-8);
}

TEST(MixedElement, IdentityKernelIsFourierOverlap)
{
    const Axis ax(-6, 6, 97);
    const OperatorKernel id(ax, ax, Eigen::MatrixXcd::Identity(97, 97) / ax.step());
    for (double x : {-2.0, 0.3, 1.7})
        for (std::size_t c : {10u, 48u, 90u})
            EXPECT_NEAR(std::abs(mixed_matrix_element(id, x, ax[c]) - std::exp(-I * (x * ax[c])) / std::sqrt(2 * oracle::pi)),
                        0.0, 1e-14);
    EXPECT_THROW(mixed_matrix_element(id, 0.0, 7.0), std::invalid_argument);
}

TEST(MixedElement, DampedOscillatorKernelIsFrftKernel)
{
    const Axis ax = hermite_axis(120, 512);
    const HermiteBasis basis(120, ax);
    for (double a : {0.3, 1.0, 2.0, 2.8}) {
        const double delta = 0.2;
        const auto K = oscillator_exponential_kernel(I * (pi / 2 - a) - delta, basis);
        double err = 0.0;
        for (double x = -3; x <= 3; x += 0.75)
            for (std::size_t c = 0; c < ax.size(); c += 7)
                if (std::abs(ax[c]) <= 3)
                    err = std::max(err, std::abs(mixed_matrix_element(K, x, ax[c]) -
                                                 oracle::frft_kernel(cplx{a, -delta}, x, ax[c])));
        EXPECT_LT(err, 1e-8) << "alpha=" << a;
    }
}

TEST(SymbolIdentity, Projectors)
{
    const Axis ax(-8, 8, 128);
    const PhaseGrid g{ax, ax};
    for (std::size_t n : {0u, 1u}) {
        const auto r = symbol_identity_residual(number_projector(n, ax), g, g);
        EXPECT_LT(r.forward, 1e-6) << n;
        EXPECT_LT(r.inverse, 1e-6) << n;
    }
}

TEST(SymbolIdentity, OscillatorExponential)
{
    const Axis ax(-8, 8, 128);
    const PhaseGrid g{ax, ax};
    const auto H = oscillator_exponential_kernel(-std::log(3.0), HermiteBasis(100, ax));
    const auto r = symbol_identity_residual(H, g, g);
    EXPECT_LT(r.forward, 1e-6);
    EXPECT_LT(r.inverse, 1e-6);
}

TEST(Kirkwood, GroundStateClosedForm)
{
    const auto psi = number_state(0, Axis(-10, 10, 401));
    for (double p : {-1.0, 0.0, 0.8})
        for (double q : {-2.0, 0.0, 1.5}) {
            const cplx ref = std::exp(-(p * p + q * q) / 2 + I * (p * q)) / (std::sqrt(2 * oracle::pi) * std::sqrt(oracle::pi));
            EXPECT_NEAR(std::abs(kirkwood_qp_closed(psi, p, q) - ref), 0.0, 1e-12);
        }
    const cplx at_p0 = kirkwood_qp_closed(psi, 0.0, 0.7);
    EXPECT_GT(at_p0.real(), 0.0);
    EXPECT_NEAR(at_p0.imag(), 0.0, 1e-15);
}

TEST(Kirkwood, IntegratesToOne)
{
    const auto psi = number_state(1, Axis(-10, 10, 401));
    const auto g = square_grid(-7, 7, 141);
    const auto k = sample_field([&](double p, double q) { return kirkwood_qp_closed(psi, p, q); }, g);
    EXPECT_NEAR(std::abs(integrate(k) - 1.0), 0.0, 1e-6);
}

TEST(Kirkwood, TransformOfWigner)
{
    const auto g = square_grid(-5, 5, 128);
    const auto ax = extend_axis(g.q, 3.0);
    for (std::size_t n : {0u, 1u}) {
        const auto r = wigner_to_kirkwood_residual(number_state(n, ax), g, g);
        EXPECT_LT(r.qp, 1e-6) << n;
        EXPECT_LT(r.pq, 1e-6) << n;
    }
    // spot-check the first excited state against analytic amplitudes (psi~_1 = -i psi_1)
    const auto psi1 = number_state(1, ax);
    const double p = 0.9, q = ax[ax.size() / 3];  // on the lattice, no interpolation
    const cplx qp = oracle::psi1(q) * (-I * oracle::psi1(p)) * std::exp(I * (p * q)) / std::sqrt(2 * oracle::pi);
    EXPECT_NEAR(std::abs(kirkwood_qp_closed(psi1, p, q) - qp), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(kirkwood_pq_closed(psi1, p, q) - std::conj(qp)), 0.0, 1e-10);
}

TEST(CharFunction, GroundStateAtOrigin)
{
    const Axis ax = hermite_axis(120, 512);
    const HermiteBasis basis(120, ax);
    const CharacteristicFunction cf(number_projector(0, ax), basis);
    for (double u : {-3.0, -0.5, 0.0, 1.5, 3.0})
        for (double v : {-3.0, 0.0, 2.0}) {
            const cplx ref = std::exp(-(u * u + v * v) / 4) * std::exp(-I * (u * v / 2));
            EXPECT_NEAR(std::abs(cf.qp(0, 0, u, v) - ref), 0.0, 1e-8);
        }
    EXPECT_NEAR(std::abs(cf.qp(0.4, -1.0, 0, 0) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(char_function_qp(number_projector(0, ax), basis, 0, 0, 1.0, 1.0) -
                         std::exp(-0.5) * std::exp(-I * 0.5)),
                0.0, 1e-8);
    EXPECT_THROW(cf.qp(0, 0, 6.5, 0), std::domain_error);
}

TEST(CharFunction, OrderedPartnersAreConjugate)
{
    const Axis ax = hermite_axis(60, 300);
    const HermiteBasis basis(60, ax);
    const auto a = number_state(0, ax), b = number_state(1, ax);
    Eigen::MatrixXcd m(ax.size(), ax.size());
    for (std::size_t i = 0; i < ax.size(); ++i)
        for (std::size_t k = 0; k < ax.size(); ++k) {
            const cplx ai = a[i], bi = b[i], ak = a[k], bk = b[k];
            m(i, k) = 0.6 * ai * ak + 0.4 * bi * bk + cplx{0.1, 0.2} * ai * bk + cplx{0.1, -0.2} * bi * ak;
        }
    const OperatorKernel rho(ax, ax, m);
    rho.validate_density();
    const CharacteristicFunction cf(rho, basis);
    for (double u : {-2.0, 0.5})
        for (double v : {-1.0, 2.5})
            EXPECT_NEAR(std::abs(cf.pq(0, 0, u, v) - std::conj(cf.qp(0, 0, -u, -v))), 0.0, 1e-10);
}

TEST(CharFunction, RejectsPoorlyProjectedState)
{
    const Axis ax = hermite_axis(40, 300);
    const HermiteBasis basis(20, ax);
    EXPECT_THROW(CharacteristicFunction(number_projector(30, ax), basis), std::invalid_argument);
}

TEST(Operators, CanonicalCommutatorInBasis)
{
    const auto Q = position_matrix(20), P = momentum_matrix(20);
    const Eigen::MatrixXcd c = Q * P - P * Q;
    // exact except in the last row/column (truncation)
    for (int i = 0; i < 19; ++i)
        for (int j = 0; j < 19; ++j) EXPECT_NEAR(std::abs(c(i, j) - (i == j ? I : cplx{})), 0.0, 1e-14);
}

TEST(OperatorKernel, DensityValidation)
{
    const Axis ax(-6, 6, 97);
    EXPECT_NO_THROW(number_projector(0, ax).validate_density());
    auto m = number_projector(0, ax).values();
    m *= 2.0;
    EXPECT_THROW(OperatorKernel(ax, ax, m).validate_density(), std::invalid_argument);
    m = number_projector(0, ax).values();
    m(3, 40) += cplx{0.0, 0.5};
    EXPECT_THROW(OperatorKernel(ax, ax, m).validate_density(), std::invalid_argument);
    EXPECT_THROW(OperatorKernel(ax, ax, Eigen::MatrixXcd::Zero(5, 5)), std::invalid_argument);
}
