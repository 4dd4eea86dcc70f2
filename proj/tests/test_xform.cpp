#include "oracles.hpp"

#include <phasexform/closedform.hpp>
#include <phasexform/xform.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace phasexform;

namespace {

SampledField gaussian(const PhaseGrid& g, double lam = 1.0)
{
    return sample_field([&](double p, double q) { return cplx{std::exp(-lam * (p * p + q * q))}; }, g);
}

// Gaussian-damped field with random complex quadratic polynomial factor.
SampledField damped_random(const PhaseGrid& g, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cplx c[6];
    for (auto& v : c) v = {u(rng), u(rng)};
    return sample_field(
        [&](double p, double q) {
            return (c[0] + c[1] * p + c[2] * q + c[3] * p * p + c[4] * p * q + c[5] * q * q) *
                   std::exp(-(p * p + q * q));
        },
        g);
}

SampledField combine(cplx a, const SampledField& x, cplx b, const SampledField& y)
{
    SampledField out(x.grid());
    for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = a * x.values()[i] + b * y.values()[i];
    return out;
}

} // namespace

TEST(Transform, TestGridsResolveTheChirp)
{
    EXPECT_TRUE(oracle::resolves_chirp(square_grid(-6, 6, 64)));
    EXPECT_TRUE(oracle::resolves_chirp(square_grid(-6, 6, 128)));
    EXPECT_TRUE(oracle::resolves_chirp(square_grid(-5, 5, 256)));
    EXPECT_FALSE(oracle::resolves_chirp(square_grid(-6, 6, 16)));
}

TEST(Transform, DirectMatchesBruteForceSum)
{
    const auto in = square_grid(-3, 3, 20);
    const PhaseGrid out{Axis(-1.3, 0.9, 7), Axis(-0.4, 1.7, 9)};
    const auto h = damped_random(in, 5);
    EXPECT_LT(max_abs_diff(forward_direct(h, out), oracle::brute_transform(h, out, +1.0)), 1e-12);
    EXPECT_LT(max_abs_diff(inverse_direct(h, out), oracle::brute_transform(h, out, -1.0)), 1e-12);
}

TEST(Transform, FastMatchesDirect64)
{
    const auto g = square_grid(-6, 6, 64);
    ASSERT_TRUE(oracle::resolves_chirp(g));
    const auto h = gaussian(g);
    EXPECT_LT(max_abs_diff(forward_fast(h, g), forward_direct(h, g)), 1e-8);
    for (unsigned s = 1; s <= 3; ++s) {
        const auto r = damped_random(g, s);
        EXPECT_LT(max_abs_diff(forward_fast(r, g), forward_direct(r, g)), 1e-8);
        EXPECT_LT(max_abs_diff(inverse_fast(r, g), inverse_direct(r, g)), 1e-8);
    }
}

TEST(Transform, FastMatchesDirectOnUnrelatedOutputGrid)
{
    const auto in = square_grid(-5, 5, 48);
    const PhaseGrid out{Axis(-2.3, 1.1, 13), Axis(0.2, 3.7, 21)};
    const auto h = damped_random(in, 11);
    EXPECT_LT(max_abs_diff(forward_fast(h, out), forward_direct(h, out)), 1e-10);
    EXPECT_LT(max_abs_diff(inverse_fast(h, out), inverse_direct(h, out)), 1e-10);
}

TEST(Transform, Linearity)
{
    const auto g = square_grid(-5, 5, 40);
    const auto h1 = damped_random(g, 21), h2 = damped_random(g, 22);
    const cplx a{0.7, -1.2}, b{-2.0, 0.3};
    for (Path path : {Path::direct, Path::fast}) {
        const auto lhs = transform(combine(a, h1, b, h2), g, Direction::forward, path);
        const auto rhs = combine(a, transform(h1, g, Direction::forward, path), b,
                                 transform(h2, g, Direction::forward, path));
        EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12) << to_string(path);
    }
}

TEST(Transform, ZeroFieldMapsToZero)
{
    const auto g = square_grid(-4, 4, 24);
    const SampledField zero(g);
    for (Path path : {Path::direct, Path::fast})
        for (Direction dir : {Direction::forward, Direction::inverse})
            EXPECT_EQ(oracle::max_abs(transform(zero, g, dir, path)), 0.0);
    EXPECT_EQ(oracle::max_abs(forward_shifted_form(zero, square_grid(-1, 1, 3))), 0.0);
}

TEST(Transform, GaussianClosedForm)
{
    const auto in = square_grid(-7, 7, 128);
    const auto out = square_grid(-2, 2, 21);
    const auto f = forward_fast(gaussian(in), out);
    const auto ref = sample_field([](double x, double y) { return oracle::gaussian_transform(1.0, x, y); }, out);
    EXPECT_LT(max_abs_diff(f, ref), 1e-6);
    // centre value 1/sqrt(2)
    EXPECT_NEAR(std::abs(f(10, 10) - 1.0 / std::sqrt(2.0)), 0.0, 1e-10);
    // at lambda = 1: (1/sqrt2) exp(-(x^2+y^2)/2 + ixy)
    for (double x : {-1.5, 0.0, 0.7})
        for (double y : {-0.3, 1.9})
            EXPECT_NEAR(std::abs(oracle::gaussian_transform(1.0, x, y) -
                                 std::exp(-(x * x + y * y) / 2 + I * (x * y)) / std::sqrt(2.0)),
                        0.0, 1e-14);
}

TEST(Transform, WeaklyDampedGaussianApproachesOne)
{
    // eps = 0.05 needs |p|,|q| up to about 23 for 1e-11 truncation
    const auto in = square_grid(-24, 24, 800);
    const auto out = square_grid(-1, 1, 11);
    const double eps = 0.05;
    const auto f = forward_fast(gaussian(in, eps), out);
    const auto ref = sample_field([&](double x, double y) { return oracle::gaussian_transform(eps, x, y); }, out);
    EXPECT_LT(max_abs_diff(f, ref), 1e-6);
    // and the regularized constant maps to something near 1 on the unit square
    for (const auto& v : f.values()) EXPECT_LT(std::abs(v - 1.0), 0.2);

    // the inverse of a real field is the conjugate of its forward image
    const auto back = inverse_fast(gaussian(in, eps), out);
    for (std::size_t i = 0; i < back.values().size(); ++i)
        EXPECT_NEAR(std::abs(back.values()[i] - std::conj(ref.values()[i])), 0.0, 1e-6);
}

TEST(Transform, InverseOfGaussianPair)
{
    const auto in = square_grid(-7, 7, 128);
    const auto f = sample_field([](double x, double y) { return oracle::gaussian_transform(1.0, x, y); }, in);
    const auto out = square_grid(-2, 2, 17);
    EXPECT_LT(max_abs_diff(inverse_fast(f, out), gaussian(out)), 1e-6);
}

TEST(Transform, RoundTripBothPaths)
{
    const auto g = square_grid(-6, 6, 64);
    const PhaseGrid wide{extend_axis(g.p, 2.0), extend_axis(g.q, 2.0)};
    const auto h = damped_random(g, 99);
    EXPECT_LT(relative_l2(inverse_fast(forward_fast(h, wide), g), h), 1e-6);
    EXPECT_LT(relative_l2(inverse_direct(forward_direct(h, wide), g), h), 1e-6);
}

TEST(Transform, RoundTrip128)
{
    const auto g = square_grid(-6, 6, 128);
    for (unsigned s = 30; s < 33; ++s) {
        const auto h = damped_random(g, s);
        EXPECT_LT(relative_l2(inverse_fast(forward_fast(h, g), g), h), 1e-6);
    }
}

TEST(Parseval, GaussianAndHermiteGaussian)
{
    const auto g = square_grid(-6, 6, 128);
    const auto wide = square_grid(-8, 8, 170);
    EXPECT_LT(parseval_residual(gaussian(g), wide), 1e-6);
    const auto hg = sample_field([](double p, double q) { return cplx{p, q} * std::exp(-(p * p + q * q) / 2); },
                                 square_grid(-8, 8, 170));
    const auto wider = square_grid(-9, 9, 190);
    const double r = parseval_residual(hg, wider);
    EXPECT_LT(r, 1e-6);
    EXPECT_LT(parseval_residual(hg, wider, Path::direct), 1e-6);

    // independent check of the two norms
    const auto f = forward_fast(hg, wider);
    auto norm = [](const SampledField& x) {
        const auto& gg = x.grid();
        double acc = 0.0;
        for (std::size_t j = 0; j < gg.p.size(); ++j)
            for (std::size_t k = 0; k < gg.q.size(); ++k) acc += gg.p.weight(j) * gg.q.weight(k) * std::norm(x(j, k));
        return acc * gg.p.step() * gg.q.step() / oracle::pi;
    };
    EXPECT_NEAR(norm(hg), 1.0, 1e-10);  // (1/pi) iint r^2 e^{-r^2} = 1
    EXPECT_NEAR(norm(f), norm(hg), 1e-6);
}

TEST(Parseval, ScaleInvariant)
{
    const auto g = square_grid(-6, 6, 96);
    const auto wide = square_grid(-8, 8, 128);
    const auto h = damped_random(g, 7);
    auto h7 = h;
    for (auto& v : h7.values()) v *= 7.0;
    EXPECT_NEAR(parseval_residual(h7, wide), parseval_residual(h, wide), 1e-12);
}

TEST(Parseval, RejectsZeroNorm)
{
    const auto g = square_grid(-1, 1, 5);
    EXPECT_THROW(parseval_residual(SampledField(g), g), std::invalid_argument);
}

TEST(ShiftedForm, ConvergesToDirect)
{
    const PhaseGrid out{Axis(-0.93, 0.71, 5), Axis(-0.58, 0.87, 5)};
    double err[2];
    std::size_t ns[2] = {128, 256};
    for (int i = 0; i < 2; ++i) {
        const auto g = square_grid(-5, 5, ns[i]);
        ASSERT_TRUE(oracle::resolves_chirp(g));
        const auto h = gaussian(g);
        err[i] = max_abs_diff(forward_shifted_form(h, out), forward_direct(h, out));
    }
    // bilinear interpolation: second order in the step
    EXPECT_LT(err[1], 1e-3);
    EXPECT_GT(err[0] / err[1], 3.0);
}

TEST(TransformPlan, RejectsMismatchedInput)
{
    const auto g = square_grid(-1, 1, 8);
    TransformPlan plan(g, g, Direction::forward, Path::fast);
    EXPECT_THROW(plan.execute(SampledField(square_grid(-1, 1, 9))), std::invalid_argument);
    EXPECT_EQ(plan.input_grid(), g);
    EXPECT_EQ(plan.path(), Path::fast);
}
