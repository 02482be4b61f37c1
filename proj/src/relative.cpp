#include "isolp/relative.hpp"

#include "isolp/errors.hpp"
#include "isolp/negbound.hpp"

#include <algorithm>
#include <cmath>

namespace isolp {

namespace {

constexpr double equality_tol = 1e-7;

BallGeometry big_ball(const RelativeCase &c)
{
    validate(c);
    return ball_from_volume(c.params, c.m * c.volume);
}

} // namespace

void validate(const RelativeCase &c)
{
    validate(c.params);
    if (c.m < 1) {
        throw UsageError("relative case: m must be a positive integer");
    }
    if (!(c.volume > 0.0) || !std::isfinite(c.volume)) {
        throw DomainError("relative case: volume must be positive and finite");
    }
    if (c.params.kappa > 0.0 && c.m * c.volume > hemisphere_volume(c.params)) {
        throw DomainError("relative case: m V exceeds the hemisphere volume");
    }
    if (c.params.kappa < 0.0 && std::isfinite(c.max_geodesic)) {
        const double r = ball_from_volume(c.params, c.m * c.volume).radius;
        if (!smallness_ok({c.params.kappa, c.max_geodesic, r}).ok) {
            throw DomainError("relative case: smallness condition fails");
        }
    }
}

double relative_bound(const RelativeCase &c)
{
    return big_ball(c).area / c.m;
}

DiscreteMeasure orbifold_measure(const RelativeCase &c, int nodes)
{
    DiscreteMeasure mu = discretize_ball_measure(big_ball(c), nodes);
    for (auto &atom : mu.atoms) {
        atom.mass /= c.m;
    }
    return mu;
}

RelativeResiduals verify_relative_equality(const RelativeCase &c, int nodes)
{
    const BallGeometry big = big_ball(c);
    const DiscreteMeasure mu = orbifold_measure(c, nodes);
    const double m = c.m;
    const double area = big.area / m;
    const double v = c.volume;
    const auto rel = [](double value, double target) { return (value - target) / target; };

    RelativeResiduals out;
    out.reference_area = area;
    out.croke1 = rel(integrate(mu, Functional::croke1, c.params), m * area * area);
    out.croke2 = rel(integrate(mu, Functional::croke2, c.params), m * area * v);
    out.croke3 = rel(integrate(mu, Functional::croke3, c.params), m * v * v);
    out.santalo = rel(integrate(mu, Functional::length, c.params),
                      sphere_volume(c.params.n - 1) * v);
    out.passed = std::max({std::abs(out.croke1), std::abs(out.croke2), std::abs(out.croke3),
                           std::abs(out.santalo)}) <= equality_tol;
    return out;
}

RelativeLPCheck relative_lp_check(const RelativeCase &c, const GridSpec &spec,
                                  Table2Variant variant)
{
    const BallGeometry big = big_ball(c);
    const ChordLP problem = build_relative_lp(c.params, c.volume, c.m, spec,
                                              default_family(c.params, big.radius), variant);
    const LPSolution s = solve(problem.lp, 1e-9);
    RelativeLPCheck out;
    out.variant = variant;
    out.status = s.status;
    out.bound = big.area / c.m;
    out.optimum = s.objective;
    out.relative_gap = s.objective / out.bound - 1.0;
    return out;
}

void to_json(nlohmann::json &j, const RelativeResiduals &r)
{
    j = {{"reference_area", r.reference_area},
         {"croke1", r.croke1},
         {"croke2", r.croke2},
         {"croke3", r.croke3},
         {"santalo", r.santalo},
         {"passed", r.passed}};
}

void to_json(nlohmann::json &j, const RelativeLPCheck &r)
{
    j = {{"variant", to_string(r.variant)},
         {"status", to_string(r.status)},
         {"optimum", r.optimum},
         {"bound", r.bound},
         {"relative_gap", r.relative_gap}};
}

} // namespace isolp
