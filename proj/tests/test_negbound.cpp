#include "isolp/chord_measure.hpp"
#include "isolp/errors.hpp"
#include "isolp/negbound.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace isolp;
using isolp_test::Gen;
using isolp_test::rel_err;

namespace {

// Closed forms for the complex hyperbolic candle
// J = sinh(1.5t)/1.5 * (sinh(0.75t)/0.75)^2 = (sinh(3t)/2 - sinh(1.5t)) / 1.6875
// against s = sinh^3 t = (sinh(3t) - 3 sinh t)/4, and their primitives.
// Long double: the terms cancel to O(t^5) for small t.
using ld = long double;

double ch2_u(ld t)
{
    const ld j = (std::sinh(3 * t) / 2 - std::sinh(1.5 * t)) / 1.6875;
    return static_cast<double>(j - (std::sinh(3 * t) - 3 * std::sinh(t)) / 4);
}

double ch2_u1(ld t)
{
    const ld j = ((std::cosh(3 * t) - 1) / 6 - (std::cosh(1.5 * t) - 1) / 1.5) / 1.6875;
    return static_cast<double>(j - ((std::cosh(3 * t) - 1) / 3 - 3 * (std::cosh(t) - 1)) / 4);
}

double ch2_u2(ld t)
{
    const ld j = ((std::sinh(3 * t) / 3 - t) / 6 - (std::sinh(1.5 * t) / 1.5 - t) / 1.5) / 1.6875;
    return static_cast<double>(j - ((std::sinh(3 * t) / 3 - t) / 3 - 3 * (std::sinh(t) - t)) / 4);
}

double ch2_margin(double r, double ell)
{
    const double t = std::tanh(r);
    return ch2_u(ell) - 6 * t * ch2_u1(ell) + 9 * t * t * ch2_u2(ell);
}

} // namespace

TEST_CASE("smallness condition")
{
    const SmallnessResult a = smallness_ok({-1.0, 0.5, 0.5});
    CHECK(a.product == doctest::Approx(std::tanh(0.5) * std::tanh(0.5)).epsilon(1e-15));
    CHECK(a.product == doctest::Approx(0.21366).epsilon(1e-4));
    CHECK(a.ok);
    CHECK(a.margin == doctest::Approx(0.5 - a.product).epsilon(1e-15));
    const SmallnessResult far = smallness_ok({-1.0, INFINITY, 40.0});
    CHECK(far.product == 1.0);
    CHECK_FALSE(far.ok);
    CHECK(smallness_ok({-4.0, 0.25, 0.25}).product == a.product);
    CHECK_THROWS_AS(smallness_ok({0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(smallness_ok({-1.0, 0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(smallness_ok({-1.0, 1.0, -1.0}), DomainError);
}

TEST_CASE("property: smallness is scale invariant")
{
    Gen gen(31);
    for (int i = 0; i < 500; ++i) {
        const SmallnessInput in{-gen.uniform(0.1, 5.0), gen.uniform(0.01, 3.0),
                                gen.uniform(0.01, 3.0)};
        const double base = smallness_ok(in).product;
        const double pow2 = std::ldexp(1.0, gen.integer(-6, 6));
        CHECK(smallness_ok({pow2 * pow2 * in.kappa, in.L / pow2, in.r / pow2}).product == base);
        const double lambda = gen.uniform(0.2, 5.0);
        const double scaled = smallness_ok({lambda * lambda * in.kappa, in.L / lambda,
                                            in.r / lambda}).product;
        CHECK(rel_err(scaled, base) <= 1e-14);
    }
}

TEST_CASE("combined inequality is an equality on the model ball")
{
    for (const double r : {0.5, 1.2}) {
        const BallGeometry ball = ball_from_radius({4, -1.0}, r);
        const DiscreteMeasure mu = discretize_ball_measure(ball, 128);
        const double t = std::tanh(r);
        const double rhs = std::pow(ball.area - 3 * t * ball.volume, 2);
        INFO("r=" << r);
        CHECK(std::abs(conjecture_residual(r, mu)) / rhs <= 1e-7);
        DiscreteMeasure light = mu;
        for (auto &atom : light.atoms) {
            atom.mass *= 0.9;
        }
        CHECK(conjecture_residual(r, light) < 0.0);
        CHECK(conjecture_residual(r, light) == doctest::Approx(-0.1 * rhs).epsilon(1e-6));
    }
}

TEST_CASE("property: combined residual is the Croke residual combination")
{
    Gen gen(37);
    for (int i = 0; i < 30; ++i) {
        const double r = gen.uniform(0.1, 2.0);
        const BallGeometry ball = ball_from_radius({4, -1.0}, r);
        const DiscreteMeasure mu =
            sample_chords(ball, 200, static_cast<std::uint64_t>(gen.integer(0, 1 << 30)));
        const double t = std::tanh(r);
        const double combined = croke_residual(ball, mu, 1) - 6 * t * croke_residual(ball, mu, 2) +
                                9 * t * t * croke_residual(ball, mu, 3);
        const double scale = croke_target(ball, 1) + 6 * t * croke_target(ball, 2) +
                             9 * t * t * croke_target(ball, 3);
        CHECK(std::abs(conjecture_residual(r, mu) - combined) <= 1e-12 * scale);
    }
}

TEST_CASE("planar lemma closes with the bare V^2 weight")
{
    for (const double r : {0.7, 1.5}) {
        const BallGeometry ball = ball_from_radius({2, -1.0}, r);
        const Hyp2Residual res = hyp2_lemma_residual(r, discretize_ball_measure(ball, 128));
        const double t = std::tanh(r);
        const double rhs = ball.area * ball.volume - t * ball.volume * ball.volume;
        INFO("r=" << r);
        CHECK(std::abs(res.bare) / rhs <= 1e-7);
        CHECK(res.two_pi == doctest::Approx(res.bare + (2 * pi - 1) * t * ball.volume *
                                                           ball.volume)
                                .epsilon(1e-12));
        CHECK(res.two_pi > 0.0);

        const Hyp2Residual zero = hyp2_lemma_residual(r, DiscreteMeasure{});
        CHECK(zero.bare == doctest::Approx(-rhs).epsilon(1e-15));
        CHECK(zero.two_pi ==
              doctest::Approx(-(ball.area * ball.volume - 2 * pi * t * ball.volume * ball.volume))
                  .epsilon(1e-15));
    }
}

TEST_CASE("candle deficit integrals against closed forms")
{
    const CurvatureSpectrum ch2 = complex_hyperbolic_spectrum();
    CHECK(ch2.dimension() == 4);
    for (const double ell : {0.05, 0.5, 1.0, 3.0, 7.5}) {
        const CandleDeficit d = candle_deficit(ch2, ell);
        INFO("ell=" << ell);
        CHECK(rel_err(d.at_end, ch2_u(ell)) <= 1e-9);
        CHECK(rel_err(d.from_start, ch2_u1(ell)) <= 1e-9);
        CHECK(rel_err(d.to_end, ch2_u1(ell)) <= 1e-9);
        CHECK(rel_err(d.double_int, ch2_u2(ell)) <= 1e-9);
    }
    CHECK_THROWS_AS(candle_deficit(ch2, 0.0), DomainError);
    CHECK_THROWS_AS(candle_deficit(CurvatureSpectrum{}, 1.0), UsageError);
}

TEST_CASE("question 1 margin")
{
    Gen gen(41);
    const CurvatureSpectrum flat_k{{-1.0, -1.0, -1.0}};
    const CurvatureSpectrum strong{{-2.0, -2.0, -2.0}};
    const CurvatureSpectrum ch2 = complex_hyperbolic_spectrum();
    for (int i = 0; i < 40; ++i) {
        const double r = gen.uniform(0.05, 5.0);
        const double ell = gen.uniform(0.05, 6.0);
        const double a = gen.uniform(0.0, 1.4);
        const double b = gen.uniform(0.0, 1.4);
        INFO("r=" << r << " ell=" << ell << " a=" << a << " b=" << b);
        const double s = std::pow(std::sinh(ell), 3);
        CHECK(std::abs(question1_margin(flat_k, r, ell, a, b)) <= 1e-12 * (1.0 + s));
        CHECK(question1_margin(flat_k, r, ell, a, b) == 0.0);
        CHECK(question1_margin(strong, r, ell, a, b) >= 0.0);
        const double m = question1_margin(ch2, r, ell, 0.0, 0.0);
        CHECK(std::abs(m - ch2_margin(r, ell)) <= 1e-9 * (1.0 + std::abs(ch2_u(ell))));
    }
    CHECK(question1_margin(ch2, 5.0, 4.0, 0.0, 0.0) < 0.0);
    CHECK_THROWS_AS(question1_margin(ch2, 0.0, 1.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(question1_margin(ch2, 1.0, 1.0, pi / 2, 0.0), DomainError);
}

TEST_CASE("property: margin is continuous in the spectrum")
{
    Gen gen(43);
    for (int i = 0; i < 20; ++i) {
        // Moderate chords: the margin grows like exp(3 sqrt(3) ell).
        const double r = gen.uniform(0.1, 3.0);
        const double ell = gen.uniform(0.1, 1.0);
        const double a = gen.uniform(0.0, 1.0);
        const double b = gen.uniform(0.0, 1.0);
        CurvatureSpectrum spec{{gen.uniform(-3.0, -0.5), gen.uniform(-3.0, -0.5),
                                gen.uniform(-3.0, -0.5)}};
        const double base = question1_margin(spec, r, ell, a, b);
        for (double &k : spec.kappas) {
            k += gen.uniform(0.0, 1.0) < 0.5 ? -1e-6 : 1e-6;
        }
        CHECK(std::abs(question1_margin(spec, r, ell, a, b) - base) <= 1e-4);
    }
}

TEST_CASE("complex hyperbolic counterexample search")
{
    const CounterexampleResult best = ch2_counterexample_search(10.0, 5.0, 40);
    MESSAGE("most negative margin " << best.margin << " at r=" << best.r << " ell=" << best.ell);
    CHECK(best.margin < 0.0);
    CHECK(best.grid == 40);

    double oracle = INFINITY;
    for (int j = 1; j <= 40; ++j) {
        for (int i = 1; i <= 40; ++i) {
            oracle = std::min(oracle, ch2_margin(i * 5.0 / 40, j * 10.0 / 40));
        }
    }
    CHECK(rel_err(best.margin, oracle) <= 1e-8);
    CHECK(best.margin == doctest::Approx(ch2_margin(best.r, best.ell)).epsilon(1e-8));

    const CounterexampleResult again = ch2_counterexample_search(10.0, 5.0, 40);
    CHECK(again.margin == best.margin);
    CHECK(again.r == best.r);
    CHECK(again.ell == best.ell);

    const CounterexampleResult model =
        ch2_counterexample_search(10.0, 5.0, 40, CurvatureSpectrum{{-1.0, -1.0, -1.0}});
    CHECK(model.margin == 0.0);

    const CounterexampleResult tiny = ch2_counterexample_search(0.1, 0.1, 20);
    CHECK(tiny.margin >= 0.0);
    CHECK_THROWS_AS(ch2_counterexample_search(1.0, 1.0, 0), UsageError);

    const nlohmann::json j = best;
    CHECK(j.at("margin").get<double>() == best.margin);
}
