#include "isolp/chord_measure.hpp"
#include "isolp/errors.hpp"
#include "isolp/quadrature.hpp"
#include "test_support.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace isolp;
using isolp_test::Gen;
using isolp_test::rel_err;

namespace {

const ModelParams six_cases[] = {{2, -1.0}, {2, 0.0}, {2, 1.0}, {4, -1.0}, {4, 0.0}, {4, 1.0}};

} // namespace

TEST_CASE("ball chord density")
{
    const BallGeometry disk = ball_from_radius({2, 0.0}, 1.0);
    const double ell = 1.0;
    const double expected = 2.0 * pi * ell / (2.0 * std::sqrt(1.0 - ell * ell / 4.0));
    CHECK(rel_err(ball_chord_density(disk, ell), expected) < 1e-14);
    CHECK(ball_chord_density(disk, 0.0) == 0.0);

    const BallGeometry b4 = ball_from_radius({4, 1.0}, 0.6);
    CHECK(std::abs(ball_chord_density(b4, 1.2)) < 1e-14);
    CHECK_THROWS_AS(ball_chord_density(b4, 1.3), DomainError);
}

TEST_CASE("density integrates to the total mass")
{
    for (const ModelParams params : {ModelParams{3, 0.0}, ModelParams{4, 1.0},
                                     ModelParams{4, -1.0}, ModelParams{5, 0.5}}) {
        const BallGeometry ball = ball_from_radius(params, 0.9);
        const double total =
            integrate_adaptive([&](double l) { return ball_chord_density(ball, l); }, 0.0,
                               ball.max_chord());
        INFO("n=" << params.n << " kappa=" << params.kappa);
        CHECK(rel_err(total, ball_measure_mass(ball)) < 1e-9);
    }
    // n = 2 has an inverse square-root singularity at 2r; substitute ell = 2r(1 - u^2).
    const BallGeometry disk = ball_from_radius({2, 0.0}, 1.0);
    const double total = integrate_adaptive(
        [&](double u) { return ball_chord_density(disk, 2.0 * (1.0 - u * u)) * 4.0 * u; }, 0.0,
        1.0);
    CHECK(rel_err(total, 4.0 * pi) < 1e-9);
}

TEST_CASE("discretized ball measure")
{
    for (const ModelParams &params : six_cases) {
        const BallGeometry ball = ball_from_radius(params, 0.8);
        const DiscreteMeasure m = discretize_ball_measure(ball, 64);
        INFO("n=" << params.n << " kappa=" << params.kappa);
        CHECK(m.source == MeasureSource::quadrature);
        CHECK(m.atoms.size() == 64);
        CHECK(rel_err(m.total_mass(), ball_measure_mass(ball)) < 1e-10);
        for (const auto &atom : m.atoms) {
            CHECK(atom.alpha == atom.beta);
            CHECK(std::abs(std::cos(atom.alpha) - chord_T(params.kappa, ball.radius, atom.ell)) <
                  4e-16);
            CHECK(atom.mass >= 0.0);
            CHECK(atom.ell <= ball.max_chord());
        }
        const double coarse = santalo_residual(ball, discretize_ball_measure(ball, 8));
        const double fine = santalo_residual(ball, discretize_ball_measure(ball, 128));
        CHECK(std::abs(coarse - fine) < 1e-6);
    }
}

TEST_CASE("integrals over the unit disk")
{
    const ModelParams flat2{2, 0.0};
    const BallGeometry disk = ball_from_radius(flat2, 1.0);
    const DiscreteMeasure m = discretize_ball_measure(disk, 64);
    CHECK(rel_err(integrate(m, Functional::length, flat2), 2.0 * pi * pi) < 1e-12);
    CHECK(rel_err(integrate(m, Functional::croke1, flat2), 4.0 * pi * pi) < 1e-12);
    CHECK(std::abs(santalo_residual(disk, m)) < 1e-8);
    CHECK(std::abs(croke_residual(disk, m, 1)) < 1e-8);
    CHECK(std::abs(croke_residual(disk, m, 2)) < 1e-8);
    CHECK_THROWS_AS(croke_residual(disk, m, 4), UsageError);

    DiscreteMeasure single;
    single.atoms.push_back({0.0, 0.3, 0.3, 1.0});
    CHECK(integrate(single, Functional::croke3, flat2) == 0.0);

    const DiscreteMeasure empty;
    CHECK(santalo_residual(disk, empty) == doctest::Approx(-2.0 * pi * pi).epsilon(1e-15));

    DiscreteMeasure tangent;
    tangent.atoms.push_back({0.5, pi / 2, 0.2, 1.0});
    CHECK_THROWS_AS(integrate(tangent, Functional::croke1, flat2), InfiniteContribution);
    CHECK_THROWS_AS(integrate(tangent, Functional::croke2, flat2), InfiniteContribution);
    CHECK_NOTHROW(integrate(tangent, Functional::croke3, flat2));
}

TEST_CASE("croke3 for the flat four-ball")
{
    const BallGeometry ball = ball_from_radius({4, 0.0}, 1.0);
    const DiscreteMeasure m = discretize_ball_measure(ball, 128);
    const double target = std::pow(pi * pi / 2.0, 2);
    CHECK(std::abs(croke_residual(ball, m, 3)) / target < 1e-7);
}

TEST_CASE("four-ball of curvature 1: Santalo")
{
    const BallGeometry ball = ball_from_radius({4, 1.0}, 0.8);
    const double scale = sphere_volume(3) * ball.volume;
    CHECK(std::abs(santalo_residual(ball, discretize_ball_measure(ball, 128))) / scale < 1e-8);
}

TEST_CASE("property: Croke residuals vanish on model balls as nodes grow")
{
    for (const ModelParams &params : six_cases) {
        for (const double r : {0.4, 1.1}) {
            const BallGeometry ball = ball_from_radius(params, r);
            double previous = 1e300;
            for (const int nodes : {8, 32, 128}) {
                const DiscreteMeasure m = discretize_ball_measure(ball, nodes);
                double worst = std::abs(santalo_residual(ball, m)) /
                               (sphere_volume(params.n - 1) * ball.volume);
                for (int w = 1; w <= 3; ++w) {
                    worst = std::max(worst, std::abs(croke_residual(ball, m, w)) /
                                                croke_target(ball, w));
                }
                INFO("n=" << params.n << " kappa=" << params.kappa << " r=" << r
                          << " nodes=" << nodes);
                CHECK(worst <= std::max(previous, 1e-13));
                previous = worst;
            }
            CHECK(previous < 1e-10);
        }
    }
}

TEST_CASE("property: alpha marginal matches A_B delta^n")
{
    Gen gen(5);
    for (const ModelParams &params : six_cases) {
        const BallGeometry ball = ball_from_radius(params, 0.7);
        const DiscreteMeasure m = discretize_ball_measure(ball, 64);
        for (int trial = 0; trial < 5; ++trial) {
            double coeff[7];
            for (double &c : coeff) {
                c = gen.uniform(-1.0, 1.0);
            }
            const auto g = [&](double a) {
                double v = 0.0;
                for (int k = 6; k >= 0; --k) {
                    v = v * a + coeff[k];
                }
                return v;
            };
            const double lhs = integrate(m, [&](double a, double) { return g(a); });
            const double rhs =
                ball.area * integrate_adaptive(
                                [&](double a) { return g(a) * delta_weight(params.n, a); }, 0.0,
                                pi / 2);
            CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("property: integrals are symmetric in alpha and beta")
{
    Gen gen(9);
    const ModelParams params{4, -1.0};
    DiscreteMeasure m;
    DiscreteMeasure swapped;
    for (int i = 0; i < 50; ++i) {
        const ChordAtom atom{gen.uniform(0.0, 2.0), gen.uniform(0.0, 1.4), gen.uniform(0.0, 1.4),
                             gen.uniform(0.0, 1.0)};
        m.atoms.push_back(atom);
        swapped.atoms.push_back({atom.ell, atom.beta, atom.alpha, atom.mass});
    }
    for (const Functional f :
         {Functional::croke1, Functional::croke2, Functional::croke3, Functional::length}) {
        CHECK(rel_err(integrate(m, f, params), integrate(swapped, f, params)) < 1e-14);
    }
}

TEST_CASE("Monte Carlo sampling")
{
    const BallGeometry ball = ball_from_radius({4, -1.0}, 0.9);
    const DiscreteMeasure a = sample_chords(ball, 1000, 42);
    const DiscreteMeasure b = sample_chords(ball, 1000, 42);
    CHECK(a.atoms == b.atoms);
    CHECK(a.seed == std::uint64_t{42});
    CHECK(a.source == MeasureSource::monte_carlo);
    CHECK(sample_chords(ball, 1000, 43).atoms != a.atoms);
    // Prefixes agree: atom i depends only on (seed, i).
    const DiscreteMeasure shorter = sample_chords(ball, 10, 42);
    for (int i = 0; i < 10; ++i) {
        CHECK(shorter.atoms[i].alpha == a.atoms[i].alpha);
    }
    CHECK(rel_err(a.total_mass(), ball_measure_mass(ball)) < 1e-12);
}

TEST_CASE("Monte Carlo Santalo and Croke within three standard errors")
{
    for (const ModelParams &params : six_cases) {
        const BallGeometry ball = ball_from_radius(params, 0.8);
        const DiscreteMeasure m = sample_chords(ball, 100000, 2024);
        const Estimate s = integrate_with_error(m, Functional::length, params);
        INFO("n=" << params.n << " kappa=" << params.kappa);
        CHECK(std::abs(s.value - sphere_volume(params.n - 1) * ball.volume) <
              3.0 * s.standard_error);
        const Functional fs[] = {Functional::croke1, Functional::croke2, Functional::croke3};
        for (int w = 1; w <= 3; ++w) {
            const Estimate e = integrate_with_error(m, fs[w - 1], params);
            CHECK(std::abs(e.value - croke_target(ball, w)) < 3.0 * e.standard_error);
        }
    }
}

TEST_CASE("alpha histogram follows delta^n")
{
    for (const int n : {2, 4}) {
        const BallGeometry ball = ball_from_radius({n, 0.0}, 1.0);
        const DiscreteMeasure m = sample_chords(ball, 100000, 7);
        constexpr int bins = 40;
        double counts[bins] = {};
        for (const auto &atom : m.atoms) {
            const int b = std::min(bins - 1, static_cast<int>(atom.alpha / (pi / 2) * bins));
            counts[b] += 1.0;
        }
        double chi2 = 0.0;
        for (int b = 0; b < bins; ++b) {
            const double lo = std::pow(std::sin(b * (pi / 2) / bins), n - 1);
            const double hi = std::pow(std::sin((b + 1) * (pi / 2) / bins), n - 1);
            const double expected = 100000.0 * (hi - lo);
            chi2 += (counts[b] - expected) * (counts[b] - expected) / expected;
        }
        const boost::math::chi_squared dist(bins - 1);
        const double p = boost::math::cdf(boost::math::complement(dist, chi2));
        INFO("n=" << n << " chi2=" << chi2);
        CHECK(p > 0.01);
    }
}

TEST_CASE("Monte Carlo error decays like N^{-1/2}")
{
    const ModelParams params{2, 1.0};
    const BallGeometry ball = ball_from_radius(params, 0.9);
    const double truth = sphere_volume(1) * ball.volume;
    const int sizes[] = {250, 1000, 4000, 16000};
    double xs[4];
    double ys[4];
    for (int k = 0; k < 4; ++k) {
        double sq = 0.0;
        constexpr int seeds = 64;
        for (int s = 0; s < seeds; ++s) {
            const double err =
                integrate(sample_chords(ball, sizes[k], 1000 + s), Functional::length, params) -
                truth;
            sq += err * err;
        }
        xs[k] = std::log(static_cast<double>(sizes[k]));
        ys[k] = 0.5 * std::log(sq / seeds);
    }
    double mx = 0.0;
    double my = 0.0;
    for (int k = 0; k < 4; ++k) {
        mx += xs[k] / 4;
        my += ys[k] / 4;
    }
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < 4; ++k) {
        num += (xs[k] - mx) * (ys[k] - my);
        den += (xs[k] - mx) * (xs[k] - mx);
    }
    CHECK(std::abs(num / den + 0.5) < 0.15);
}

TEST_CASE("measure serialization round trips")
{
    const BallGeometry ball = ball_from_radius({4, 1.0}, 0.5);
    const DiscreteMeasure m = sample_chords(ball, 20, 3);

    std::stringstream csv;
    write_csv(csv, m);
    CHECK(csv.str().rfind("ell,alpha,beta,mass\n", 0) == 0);
    const DiscreteMeasure back = read_csv(csv);
    CHECK(back.atoms == m.atoms);
    CHECK(back.source == MeasureSource::external);

    const nlohmann::json j = m;
    const DiscreteMeasure from = j.get<DiscreteMeasure>();
    CHECK(from.atoms == m.atoms);
    CHECK(from.seed == m.seed);
    CHECK(from.source == MeasureSource::monte_carlo);

    std::stringstream bad("ell,alpha,beta,mass\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(bad), UsageError);
    std::stringstream negative("ell,alpha,beta,mass\n1,0.1,0.1,-1\n");
    CHECK_THROWS_AS(read_csv(negative), UsageError);
}
