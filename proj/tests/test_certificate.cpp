#include "isolp/certificate.hpp"
#include "isolp/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace isolp;
using isolp_test::Gen;

namespace {

const ModelParams six_cases[] = {{2, -1.0}, {2, 0.0}, {2, 1.0}, {4, -1.0}, {4, 0.0}, {4, 1.0}};

double tuple_error(const Coefficients &got, const Coefficients &want)
{
    const double scale =
        std::max({std::abs(want.a), std::abs(want.b), std::abs(want.c), std::abs(want.d)});
    return std::max({std::abs(got.a - want.a), std::abs(got.b - want.b),
                     std::abs(got.c - want.c), std::abs(got.d - want.d)}) /
           scale;
}

Coefficients expected_tuple(const ModelParams &p, double r)
{
    const double t = std::tan(r);
    const double h = std::tanh(r);
    if (p.kappa == 0.0) {
        return p.n == 4 ? Coefficients{1, 0, 0, 12 * r * r} : Coefficients{0, 1, 0, 2 * r};
    }
    if (p.kappa > 0.0) {
        return p.n == 4 ? Coefficients{1, 6 * t, 9 * t * t, 12 * t * t}
                        : Coefficients{0, 1, t, 2 * t};
    }
    return p.n == 4 ? Coefficients{1, -6 * h, 9 * h * h, 12 * h * h}
                    : Coefficients{0, 1, -h, 2 * h};
}

} // namespace

TEST_CASE("consistency fit reproduces the closed-form tuples")
{
    for (const ModelParams &p : six_cases) {
        for (const double r : {0.3, 0.7, 1.2}) {
            const ConsistencyFit fit = solve_consistency(p, r, 64);
            INFO("n=" << p.n << " kappa=" << p.kappa << " r=" << r);
            CHECK(tuple_error(fit.coeffs, expected_tuple(p, r)) < 1e-8);
            CHECK(tuple_error(paper_certificate(p, r).coeffs, expected_tuple(p, r)) < 1e-15);
            CHECK_FALSE(fit.rank_deficient);
            CHECK(fit.singular_values.size() == 4);
            CHECK(fit.nonnegative == (p.kappa >= 0.0));
            CHECK(fit.residual < 1e-10 * std::max(1.0, fit.coeffs.d));
        }
    }
    CHECK_THROWS_AS(solve_consistency({4, 0.0}, 1.0, 7), UsageError);
}

TEST_CASE("closed-form certificates: unsupported cases")
{
    CHECK_THROWS_AS(paper_certificate({3, 0.0}, 1.0), NotImplementedCase);
    CHECK_THROWS_AS(paper_certificate({4, 0.5}, 1.0), NotImplementedCase);
    CHECK_THROWS_AS(paper_certificate({4, 1.0}, 1.6), DomainError);
}

TEST_CASE("closed-form f and maximizer examples")
{
    const DualCertificate c40 = paper_certificate({4, 0.0}, 1.0);
    const SupResult top = build_f(c40, 0.0, 0.0);
    CHECK(top.value == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(top.argmax == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(closed_form_f(c40, 0.0, 0.0) == doctest::Approx(16.0).epsilon(1e-15));

    const DualCertificate c20 = paper_certificate({2, 0.0}, 1.0);
    CHECK(closed_form_f(c20, 0.4, 0.9) ==
          doctest::Approx(4.0 / (1.0 / std::cos(0.4) + 1.0 / std::cos(0.9))).epsilon(1e-15));

    const DualCertificate c21 = paper_certificate({2, 1.0}, 0.8);
    REQUIRE(has_closed_form_argmax(c21));
    CHECK_FALSE(has_closed_form_f(c21));
    CHECK_THROWS_AS(closed_form_f(c21, 0.1, 0.2), NotImplementedCase);
    Gen gen(3);
    for (int i = 0; i < 20; ++i) {
        const double a = gen.uniform(0.0, 1.5);
        const double b = gen.uniform(0.0, 1.5);
        const double expected =
            2.0 * std::atan(2.0 * std::tan(0.8) / (1.0 / std::cos(a) + 1.0 / std::cos(b)));
        CHECK(closed_form_argmax(c21, a, b) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(std::abs(build_f(c21, a, b).argmax - expected) < 1e-9);
    }
    CHECK_THROWS_AS(build_f(c21, pi / 2, 0.0), DomainError);
}

TEST_CASE("numeric f matches the flat closed forms on a 50x50 grid")
{
    for (const double r : {0.5, 1.0, 1.7}) {
        const DualCertificate c40 = paper_certificate({4, 0.0}, r);
        const DualCertificate c20 = paper_certificate({2, 0.0}, r);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const double a = (pi / 2 - 1e-3) * i / 49;
                const double b = (pi / 2 - 1e-3) * j / 49;
                const double f4 = 16.0 * r * r * r * std::sqrt(std::cos(a) * std::cos(b));
                const double f2 = 4.0 * r * r / (1.0 / std::cos(a) + 1.0 / std::cos(b));
                worst = std::max(worst, std::abs(build_f(c40, a, b).value - f4));
                worst = std::max(worst, std::abs(build_f(c20, a, b).value - f2));
            }
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("search cap")
{
    const DualCertificate linear{{2, 0.0}, 1.0, {0.0, 0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(build_f(linear, 0.2, 0.2), SearchCapError);
    const DualCertificate hyperbolic{{4, -1.0}, 1.0, {0.0, 0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(build_f(hyperbolic, 0.2, 0.2), SearchCapError);
}

TEST_CASE("property: diagonal maximizer lies on the chord curve")
{
    for (const ModelParams &p : six_cases) {
        for (const double r : {0.3, 0.7, 1.2}) {
            const DualCertificate cert = paper_certificate(p, r);
            for (int i = 0; i < 30; ++i) {
                const double alpha = 1.5 * i / 29;
                const double expected = chord_length_from_cos(p.kappa, r, std::cos(alpha));
                INFO("n=" << p.n << " kappa=" << p.kappa << " r=" << r << " alpha=" << alpha);
                CHECK(std::abs(build_f(cert, alpha, alpha).argmax - expected) < 1e-8);
                CHECK(std::abs(consistency_defect(cert, expected)) < 1e-9);
            }
        }
    }
}

TEST_CASE("property: gauge covariance")
{
    Gen gen(17);
    for (const ModelParams &p : six_cases) {
        const DualCertificate cert = paper_certificate(p, 0.9);
        for (int i = 0; i < 20; ++i) {
            const double lambda = gen.uniform(0.1, 10.0);
            const double a = gen.uniform(0.0, 1.5);
            const double b = gen.uniform(0.0, 1.5);
            const DualCertificate scaled{p, 0.9, cert.coeffs.scaled(lambda)};
            const SupResult base = build_f(cert, a, b);
            const SupResult other = build_f(scaled, a, b);
            CHECK(std::abs(other.argmax - base.argmax) < 1e-8);
            CHECK(other.value == doctest::Approx(lambda * base.value).epsilon(1e-10));
        }
    }
}

TEST_CASE("scaling law for the flat four-dimensional certificate")
{
    // f ~ r^3 and d ~ r^2: fit exponents between consecutive radii.
    const double radii[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    for (int k = 0; k + 1 < 5; ++k) {
        const double r0 = radii[k];
        const double r1 = radii[k + 1];
        const double f0 = build_f(paper_certificate({4, 0.0}, r0), 0.3, 0.6).value;
        const double f1 = build_f(paper_certificate({4, 0.0}, r1), 0.3, 0.6).value;
        const double d0 = solve_consistency({4, 0.0}, r0, 32).coeffs.d;
        const double d1 = solve_consistency({4, 0.0}, r1, 32).coeffs.d;
        CHECK(std::abs(std::log(f1 / f0) / std::log(r1 / r0) - 3.0) < 1e-6);
        CHECK(std::abs(std::log(d1 / d0) / std::log(r1 / r0) - 2.0) < 1e-6);
    }
}

TEST_CASE("family membership")
{
    const double r = 0.8;
    const MembershipReport flat4 = check_family_membership(paper_certificate({4, 0.0}, r), 40);
    CHECK(flat4.passed);
    CHECK(flat4.min_offdiagonal_defect > 0.0);
    // AM-GM oracle: the defect is 8 r^3 (sqrt(cos a) - sqrt(cos b))^2.
    const double step = (pi / 2 - 1e-3) / 39;
    const double oracle =
        8.0 * r * r * r * std::pow(std::sqrt(std::cos(0.0)) - std::sqrt(std::cos(2 * step)), 2);
    CHECK(flat4.min_offdiagonal_defect <= oracle + 1e-12);

    const MembershipReport flat2 = check_family_membership(paper_certificate({2, 0.0}, r), 40);
    CHECK(flat2.passed);
    CHECK(flat2.min_offdiagonal_defect > 0.0);

    const MembershipReport sphere4 = check_family_membership(paper_certificate({4, 1.0}, r), 40);
    CHECK(sphere4.passed);
    CHECK(sphere4.min_defect >= -1e-9);
    CHECK(sphere4.near_zero_offdiagonal == 0);
}

TEST_CASE("verification of all six certificates")
{
    for (const ModelParams &p : six_cases) {
        VerifyOptions options;
        options.require_nonnegative = p.kappa >= 0.0;
        options.grid = 30;
        const VerificationReport report = verify_certificate(paper_certificate(p, 0.7), options);
        INFO("n=" << p.n << " kappa=" << p.kappa);
        CHECK(report.passed());
        CHECK(report.flags.empty());
    }
}

TEST_CASE("verification failures")
{
    DualCertificate corrupt = paper_certificate({4, 1.0}, 0.7);
    corrupt.coeffs.d *= 1.1;
    const VerificationReport bad = verify_certificate(corrupt, {.grid = 10});
    CHECK(bad.consistency_residual > 1e-3);
    CHECK_FALSE(bad.passed());

    const VerificationReport neg4 = verify_certificate(paper_certificate({4, -1.0}, 0.7), {.grid = 10});
    CHECK_FALSE(neg4.passed());
    CHECK(neg4.consistency_ok);
    CHECK(std::find(neg4.flags.begin(), neg4.flags.end(), "negative b") != neg4.flags.end());

    const VerificationReport neg2 = verify_certificate(paper_certificate({2, -1.0}, 0.7), {.grid = 10});
    CHECK(std::find(neg2.flags.begin(), neg2.flags.end(), "negative c") != neg2.flags.end());
}

TEST_CASE("duality lower bound")
{
    const auto bound = [](const ModelParams &p, double volume) {
        const BallGeometry ball = ball_from_volume(p, volume);
        return duality_lower_bound(verify_certificate(paper_certificate(p, ball.radius), {.grid = 20}),
                                   volume);
    };
    CHECK(bound({2, 0.0}, pi) == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(bound({4, 0.0}, pi * pi / 2) == doctest::Approx(2.0 * pi * pi).epsilon(1e-12));
    CHECK(bound({2, 1.0}, 2.0 * pi * (1.0 - std::cos(1.0))) ==
          doctest::Approx(2.0 * pi * std::sin(1.0)).epsilon(1e-12));

    const VerificationReport unverified =
        verify_certificate(paper_certificate({4, -1.0}, 0.7), {.grid = 10});
    CHECK_THROWS_AS(duality_lower_bound(unverified, 1.0), DomainError);
    const VerificationReport good = verify_certificate(paper_certificate({2, 0.0}, 1.0), {.grid = 10});
    CHECK_THROWS_AS(duality_lower_bound(good, 2.0 * pi), DomainError);
}

TEST_CASE("report JSON")
{
    const nlohmann::json j = verify_certificate(paper_certificate({4, 0.0}, 1.0), {.grid = 10});
    CHECK(j.at("coefficients").at("d").get<double>() == doctest::Approx(12.0));
    CHECK(j.at("passed").get<bool>());
}
