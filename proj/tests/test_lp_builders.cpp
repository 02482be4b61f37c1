#include "isolp/errors.hpp"
#include "isolp/lp_builders.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace isolp;

namespace {

const ModelParams four_cases[] = {{2, 0.0}, {4, 0.0}, {2, 1.0}, {4, 1.0}};

double test_volume(const ModelParams &p)
{
    return p.kappa > 0.0 ? 0.5 * hemisphere_volume(p) : 1.0;
}

} // namespace

TEST_CASE("grid construction")
{
    const ModelParams p{4, 1.0};
    const GridSpec spec{};
    const GridNodes coarse = make_grid(p, 1.2, spec);
    const GridNodes fine = make_grid(p, 1.2, spec.refined());
    CHECK(coarse.alpha.size() == 20);
    CHECK(coarse.alpha.front() == 0.0);
    CHECK(coarse.alpha.back() < pi / 2);
    CHECK(coarse.ell.size() >= 40);
    CHECK(coarse.ell.back() < pi);
    CHECK(coarse.ell.back() > 2.4);
    for (const double a : coarse.alpha) {
        CHECK(std::find(fine.alpha.begin(), fine.alpha.end(), a) != fine.alpha.end());
        const double on_curve = chord_length_from_cos(1.0, 1.2, std::cos(a));
        CHECK(std::find(coarse.ell.begin(), coarse.ell.end(), on_curve) != coarse.ell.end());
    }
    for (const double l : coarse.ell) {
        CHECK(std::find(fine.ell.begin(), fine.ell.end(), l) != fine.ell.end());
    }
    CHECK_THROWS_AS(make_grid(p, 1.6, spec), DomainError);
    CHECK_THROWS_AS(make_grid(p, 1.0, GridSpec{0, 20}), UsageError);
}

TEST_CASE("LP shape and row labels")
{
    const ModelParams p{2, 0.0};
    const auto family = symmetric_products();
    const ChordLP c = build_isoperimetric_lp(p, 1.0, GridSpec{10, 5}, family);
    CHECK(c.lp.row_count() == 4 + static_cast<Eigen::Index>(family.size()));
    CHECK(c.lp.variable_count() ==
          1 + static_cast<Eigen::Index>(c.grid.ell.size() * c.grid.alpha.size() *
                                        c.grid.alpha.size()));
    CHECK(c.lp.row_labels[0] == "a");
    CHECK(c.lp.row_labels[3] == "d");
    CHECK(c.lp.row_labels[4].rfind("f:", 0) == 0);
    const BallGeometry ball = ball_from_volume(p, 1.0);
    CHECK(c.lp.constraints(0, 0) == ball.area);
    CHECK(c.lp.constraints(1, 0) == 1.0);
    CHECK(c.lp.rhs(2) == -1.0);
    CHECK(c.lp.rhs(3) == doctest::Approx(2.0 * pi).epsilon(1e-15)); // omega_1 V
    // f = cos a cos b: A_B * int cos^2 a * 2 cos a da = A_B * 4/3.
    CHECK(c.lp.rhs(5) == doctest::Approx(-ball.area * 4.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("invalid grid nodes are rejected")
{
    const ModelParams p{2, 1.0};
    GridNodes grid{{0.5, 1.0}, {0.0, pi / 2}};
    CHECK_THROWS_AS(build_isoperimetric_lp(p, 1.0, grid, {}), DomainError);
    grid = {{0.5, 3.5}, {0.0, 0.5}};
    CHECK_THROWS_AS(build_isoperimetric_lp(p, 1.0, grid, {}), DomainError);
    grid = {{0.0, 1.0}, {0.0, 0.5}};
    CHECK_THROWS_AS(build_isoperimetric_lp(p, 1.0, grid, {}), DomainError);
    CHECK_THROWS_AS(build_isoperimetric_lp(p, 7.0, GridSpec{}, {}), DomainError);
}

TEST_CASE("optimal area matches the ball on curve-aligned grids")
{
    for (const ModelParams &p : four_cases) {
        const double V = test_volume(p);
        const BallGeometry ball = ball_from_volume(p, V);
        const auto family = default_family(p, ball.radius);
        REQUIRE(family.back().label == "certificate");
        GridSpec spec{10, 5};
        double previous = std::numeric_limits<double>::infinity();
        for (int level = 0; level < 3; ++level) {
            const ChordLP c = build_isoperimetric_lp(p, V, spec, family);
            const LPSolution s = solve(c.lp, 1e-9);
            INFO("n=" << p.n << " kappa=" << p.kappa << " grid " << spec.ell_nodes << "x"
                      << spec.alpha_nodes);
            REQUIRE(s.status == LPStatus::optimal);
            CHECK(s.objective <= previous * (1.0 + 1e-12));
            CHECK(s.objective >= ball.area * (1.0 - 1e-9));
            previous = s.objective;
            spec = spec.refined();
        }
        CHECK(std::abs(previous / ball.area - 1.0) <= 0.02);
    }
}

TEST_CASE("certificate dual vector is feasible and reaches A_B")
{
    for (const ModelParams &p : four_cases) {
        const double V = test_volume(p);
        const BallGeometry ball = ball_from_volume(p, V);
        const ChordLP c = build_isoperimetric_lp(p, V, GridSpec{}, default_family(p, ball.radius));
        const LPSolution s = solve(c.lp, 1e-9);
        REQUIRE(s.status == LPStatus::optimal);
        const Eigen::VectorXd y =
            certificate_dual(c, paper_certificate(p, ball.radius), c.family.size() - 1);
        const DualityReport r = verify_weak_duality(c.lp, s.primal, y);
        INFO("n=" << p.n << " kappa=" << p.kappa);
        CHECK(r.dual_violation <= 1e-12);
        CHECK(r.dual_objective == doctest::Approx(ball.area).epsilon(1e-9));
        CHECK(std::abs(r.gap) <= 0.02 * ball.area);
    }
    const ChordLP c = build_isoperimetric_lp({2, 0.0}, 1.0, GridSpec{4, 4}, symmetric_products());
    CHECK_THROWS_AS(certificate_dual(c, paper_certificate({2, 0.0}, 1.0), 9), UsageError);
}

TEST_CASE("property: optimum is monotone under nested families")
{
    const ModelParams cases[] = {{2, 0.0}, {4, 1.0}, {4, -1.0}};
    for (const ModelParams &p : cases) {
        const double V = test_volume(p);
        const auto all = default_family(p, ball_from_volume(p, V).radius);
        double previous = 0.0;
        for (std::size_t k = 0; k <= all.size(); ++k) {
            const std::vector<FamilyMember> family(all.begin(),
                                                   all.begin() + static_cast<long>(k));
            const LPSolution s = solve(build_isoperimetric_lp(p, V, GridSpec{20, 10}, family).lp, 1e-9);
            REQUIRE(s.status == LPStatus::optimal);
            CHECK(s.objective >= previous * (1.0 - 1e-12));
            previous = s.objective;
        }
    }
}

TEST_CASE("small-volume limit in the flat plane")
{
    for (const double V : {1e-2, 1e-4, 1e-6}) {
        const LPSolution s =
            solve(build_isoperimetric_lp({2, 0.0}, V, GridSpec{}, symmetric_products()).lp, 1e-9);
        REQUIRE(s.status == LPStatus::optimal);
        CHECK(std::abs(s.objective / std::sqrt(V) / (2.0 * std::sqrt(pi)) - 1.0) <= 0.05);
    }
}

TEST_CASE("primal measure reproduces the LP row activities")
{
    const ModelParams p{4, 1.0};
    const double V = test_volume(p);
    const ChordLP c =
        build_isoperimetric_lp(p, V, GridSpec{20, 10}, default_family(p, ball_from_volume(p, V).radius));
    const LPSolution s = solve(c.lp, 1e-9);
    REQUIRE(s.status == LPStatus::optimal);
    const DiscreteMeasure mu = primal_measure(c, s);
    CHECK(static_cast<Eigen::Index>(mu.atoms.size()) <= c.lp.row_count());
    const Eigen::VectorXd expected = c.lp.constraints * s.primal - c.lp.rhs;
    const Eigen::VectorXd got = row_residuals(c, s.primal(0), mu);
    for (Eigen::Index i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(got(i) - expected(i)) <= 1e-10 * (1.0 + std::abs(c.lp.rhs(i))));
    }
}

TEST_CASE("relative LP")
{
    const ModelParams p{2, 0.0};
    const auto family = symmetric_products();
    const ChordLP iso = build_isoperimetric_lp(p, 1.3, GridSpec{10, 5}, family);
    const ChordLP rel1 = build_relative_lp(p, 1.3, 1, GridSpec{10, 5}, family);
    CHECK(rel1.lp.constraints == iso.lp.constraints);
    CHECK(rel1.lp.rhs == iso.lp.rhs);
    CHECK_THROWS_AS(build_relative_lp(p, 1.0, 0, GridSpec{}, family), UsageError);
    CHECK_THROWS_AS(build_relative_lp({4, 1.0}, 0.6 * hemisphere_volume({4, 1.0}), 2,
                                      GridSpec{}, family),
                    DomainError);

    // m = 2, V = pi/2: half the circumference of the unit disk.
    const double V = pi / 2;
    const ChordLP rel2 = build_relative_lp(p, V, 2, GridSpec{}, default_family(p, 1.0));
    const LPSolution s = solve(rel2.lp, 1e-9);
    REQUIRE(s.status == LPStatus::optimal);
    CHECK(rel2.reference_area == doctest::Approx(pi).epsilon(1e-12));
    CHECK(std::abs(s.objective / pi - 1.0) <= 0.02);

    const ChordLP verbatim =
        build_relative_lp(p, V, 2, GridSpec{}, default_family(p, 1.0), Table2Variant::verbatim);
    CHECK(verbatim.lp.rhs(2) == doctest::Approx(-2.0 * pi * 2.0 * V * V).epsilon(1e-15));
    CHECK(verbatim.lp.rhs(3) == V);
    CHECK(rel2.lp.rhs(2) == doctest::Approx(-2.0 * V * V).epsilon(1e-15));
    CHECK(rel2.lp.rhs(3) == doctest::Approx(2.0 * pi * V).epsilon(1e-15));

    CHECK(table2_variant_from_string(to_string(Table2Variant::verbatim)) == Table2Variant::verbatim);
    CHECK_THROWS_AS(table2_variant_from_string("transposed"), UsageError);
}

TEST_CASE("orbifold measure saturates the corrected relative rows")
{
    for (const int m : {2, 3}) {
        const ModelParams p{4, 0.0};
        const double V = 0.8;
        const BallGeometry big = ball_from_volume(p, m * V);
        DiscreteMeasure mu = discretize_ball_measure(big, 400);
        for (auto &atom : mu.atoms) {
            atom.mass /= m;
        }
        const ChordLP rel =
            build_relative_lp(p, V, m, GridSpec{4, 4}, default_family(p, big.radius));
        const Eigen::VectorXd res = row_residuals(rel, big.area / m, mu);
        for (Eigen::Index i = 0; i < res.size(); ++i) {
            INFO("m=" << m << " row " << rel.lp.row_labels[static_cast<std::size_t>(i)]);
            CHECK(std::abs(res(i)) <= 1e-7 * (1.0 + std::abs(rel.lp.rhs(i))));
        }
    }
}
