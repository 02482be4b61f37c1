#include "isolp/lp_builders.hpp"

#include "isolp/errors.hpp"
#include "isolp/parallel.hpp"
#include "isolp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace isolp {

namespace {

struct RowScaling {
    double area_a = 0.0; // coefficient of A in row a
    double area_b = 0.0; // coefficient of A in row b
    double rhs_c = 0.0;
    double rhs_d = 0.0;
    double f_area = 0.0; // multiplies the diagonal integral in f rows
};

void check_grid(const ModelParams &params, const GridNodes &grid)
{
    if (grid.ell.empty() || grid.alpha.empty()) {
        throw UsageError("chord LP: empty grid");
    }
    const double cap = conjugate_distance(params.kappa);
    for (const double ell : grid.ell) {
        if (!(ell > 0.0 && ell < cap)) {
            throw DomainError("chord LP: ell node outside (0, pi/sqrt(kappa))");
        }
    }
    for (const double alpha : grid.alpha) {
        if (!(alpha >= 0.0 && alpha < pi / 2) || std::cos(alpha) <= 1e-15) {
            throw DomainError("chord LP: alpha node outside [0, pi/2)");
        }
    }
}

double diagonal_integral(const PairFunction &f, int n)
{
    return integrate_adaptive([&](double a) { return f(a, a) * delta_weight(n, a); }, 0.0,
                              pi / 2, 1e-10);
}

ChordLP assemble(const ModelParams &params, double volume, int m, double reference_area,
                 const GridNodes &grid, const std::vector<FamilyMember> &family,
                 const RowScaling &scale)
{
    check_grid(params, grid);
    const auto n_ell = static_cast<Eigen::Index>(grid.ell.size());
    const auto n_alpha = static_cast<Eigen::Index>(grid.alpha.size());
    const Eigen::Index pairs = n_alpha * n_alpha;
    const Eigen::Index columns = 1 + pairs * n_ell;
    const auto rows = static_cast<Eigen::Index>(4 + family.size());

    ChordLP out;
    out.params = params;
    out.volume = volume;
    out.multiplicity = m;
    out.reference_area = reference_area;
    out.grid = grid;
    out.family = family;
    out.atoms.resize(static_cast<std::size_t>(pairs * n_ell));

    LinearProgram &lp = out.lp;
    lp.objective = Eigen::VectorXd::Zero(columns);
    lp.objective(0) = 1.0;
    lp.constraints = Eigen::MatrixXd::Zero(rows, columns);
    lp.rhs = Eigen::VectorXd::Zero(rows);
    lp.row_labels = {"a", "b", "c", "d"};
    for (const auto &member : family) {
        lp.row_labels.push_back("f:" + member.label);
    }
    lp.constraints(0, 0) = scale.area_a;
    lp.constraints(1, 0) = scale.area_b;
    lp.rhs(2) = scale.rhs_c;
    lp.rhs(3) = scale.rhs_d;

    parallel_for(static_cast<std::size_t>(pairs), [&](std::size_t p) {
        const auto pair = static_cast<Eigen::Index>(p);
        const double alpha = grid.alpha[static_cast<std::size_t>(pair / n_alpha)];
        const double beta = grid.alpha[static_cast<std::size_t>(pair % n_alpha)];
        std::vector<double> fvals(family.size());
        for (std::size_t k = 0; k < family.size(); ++k) {
            fvals[k] = family[k].f(alpha, beta);
        }
        for (Eigen::Index i = 0; i < n_ell; ++i) {
            const Eigen::Index col = 1 + pair * n_ell + i;
            const ChordAtom atom{grid.ell[static_cast<std::size_t>(i)], alpha, beta, 0.0};
            out.atoms[static_cast<std::size_t>(col - 1)] = atom;
            lp.constraints(0, col) = -evaluate(Functional::croke1, params, atom);
            lp.constraints(1, col) = -evaluate(Functional::croke2, params, atom);
            lp.constraints(2, col) = -evaluate(Functional::croke3, params, atom);
            lp.constraints(3, col) = atom.ell;
            for (std::size_t k = 0; k < family.size(); ++k) {
                lp.constraints(out.f_row(k), col) = -fvals[k];
            }
        }
    });
    for (std::size_t k = 0; k < family.size(); ++k) {
        lp.rhs(out.f_row(k)) = -scale.f_area * diagonal_integral(family[k].f, params.n);
    }
    out.area_coefficients = lp.constraints.col(0);
    lp.validate();
    return out;
}

} // namespace

GridSpec GridSpec::refined() const
{
    GridSpec next = *this;
    next.ell_nodes *= 2;
    next.alpha_nodes *= 2;
    return next;
}

GridNodes make_grid(const ModelParams &params, double radius, const GridSpec &spec)
{
    if (spec.ell_nodes < 1 || spec.alpha_nodes < 1 || !(spec.ell_max_factor > 1.0)) {
        throw UsageError("make_grid: need positive node counts and ell_max_factor > 1");
    }
    const double diameter = 2.0 * radius;
    double ell_max = spec.ell_max_factor * diameter;
    const double cap = conjugate_distance(params.kappa);
    if (std::isfinite(cap)) {
        if (diameter >= cap) {
            throw DomainError("make_grid: ball diameter reaches the conjugate distance");
        }
        ell_max = std::min(ell_max, diameter + 0.5 * (cap - diameter));
    }

    GridNodes grid;
    for (int j = 0; j < spec.alpha_nodes; ++j) {
        grid.alpha.push_back(j * (pi / 2) / spec.alpha_nodes);
    }
    for (int i = 0; i < spec.ell_nodes; ++i) {
        grid.ell.push_back((i + 1) * ell_max / spec.ell_nodes);
    }
    if (spec.curve_aligned) {
        for (const double alpha : grid.alpha) {
            grid.ell.push_back(chord_length_from_cos(params.kappa, radius, std::cos(alpha)));
        }
    }
    std::sort(grid.ell.begin(), grid.ell.end());
    const double merge = 1e-12 * ell_max;
    grid.ell.erase(std::unique(grid.ell.begin(), grid.ell.end(),
                               [&](double x, double y) { return y - x <= merge; }),
                   grid.ell.end());
    return grid;
}

std::vector<FamilyMember> symmetric_products()
{
    std::vector<FamilyMember> family;
    for (const double gamma : {0.5, 1.0, 1.5, 2.0}) {
        family.push_back({"cos-product^" + std::to_string(gamma).substr(0, 3),
                          [gamma](double a, double b) {
                              return std::pow(std::cos(a) * std::cos(b), gamma);
                          }});
    }
    return family;
}

FamilyMember certificate_member(const DualCertificate &cert)
{
    return {"certificate", [cert](double a, double b) { return evaluate_f(cert, a, b); }};
}

std::vector<FamilyMember> default_family(const ModelParams &params, double radius)
{
    std::vector<FamilyMember> family = symmetric_products();
    try {
        const DualCertificate cert = paper_certificate(params, radius);
        if (cert.coeffs.nonnegative()) {
            family.push_back(certificate_member(cert));
        }
    } catch (const NotImplementedCase &) {
    }
    return family;
}

std::string to_string(Table2Variant variant)
{
    return variant == Table2Variant::corrected ? "corrected" : "verbatim";
}

Table2Variant table2_variant_from_string(const std::string &name)
{
    if (name == "corrected") {
        return Table2Variant::corrected;
    }
    if (name == "verbatim") {
        return Table2Variant::verbatim;
    }
    throw UsageError("unknown relative LP variant: " + name);
}

ChordLP build_isoperimetric_lp(const ModelParams &params, double volume, const GridNodes &grid,
                               const std::vector<FamilyMember> &family)
{
    const BallGeometry ball = ball_from_volume(params, volume);
    RowScaling scale;
    scale.area_a = ball.area;
    scale.area_b = volume;
    scale.rhs_c = -volume * volume;
    scale.rhs_d = sphere_volume(params.n - 1) * volume;
    scale.f_area = ball.area;
    return assemble(params, volume, 1, ball.area, grid, family, scale);
}

ChordLP build_isoperimetric_lp(const ModelParams &params, double volume, const GridSpec &spec,
                               const std::vector<FamilyMember> &family)
{
    const BallGeometry ball = ball_from_volume(params, volume);
    return build_isoperimetric_lp(params, volume, make_grid(params, ball.radius, spec), family);
}

ChordLP build_relative_lp(const ModelParams &params, double volume, int m,
                          const GridNodes &grid, const std::vector<FamilyMember> &family,
                          Table2Variant variant)
{
    if (m < 1) {
        throw UsageError("build_relative_lp: m must be a positive integer");
    }
    const BallGeometry big = ball_from_volume(params, m * volume);
    const double area = big.area / m;
    const double omega = sphere_volume(params.n - 1);
    RowScaling scale;
    scale.area_a = m * area;
    scale.area_b = m * volume;
    scale.f_area = area;
    if (variant == Table2Variant::corrected) {
        scale.rhs_c = -m * volume * volume;
        scale.rhs_d = omega * volume;
    } else {
        scale.rhs_c = -omega * m * volume * volume;
        scale.rhs_d = volume;
    }
    return assemble(params, volume, m, area, grid, family, scale);
}

ChordLP build_relative_lp(const ModelParams &params, double volume, int m,
                          const GridSpec &spec, const std::vector<FamilyMember> &family,
                          Table2Variant variant)
{
    if (m < 1) {
        throw UsageError("build_relative_lp: m must be a positive integer");
    }
    const BallGeometry big = ball_from_volume(params, m * volume);
    return build_relative_lp(params, volume, m, make_grid(params, big.radius, spec), family,
                             variant);
}

Eigen::VectorXd row_residuals(const ChordLP &problem, double area,
                              const DiscreteMeasure &measure)
{
    Eigen::VectorXd out = area * problem.area_coefficients - problem.lp.rhs;
    out(0) -= integrate(measure, Functional::croke1, problem.params);
    out(1) -= integrate(measure, Functional::croke2, problem.params);
    out(2) -= integrate(measure, Functional::croke3, problem.params);
    out(3) += integrate(measure, Functional::length, problem.params);
    for (std::size_t k = 0; k < problem.family.size(); ++k) {
        out(problem.f_row(k)) -= integrate(measure, problem.family[k].f);
    }
    return out;
}

Eigen::VectorXd certificate_dual(const ChordLP &problem, const DualCertificate &cert,
                                 std::size_t member)
{
    if (member >= problem.family.size()) {
        throw UsageError("certificate_dual: family member out of range");
    }
    const Coefficients &k = cert.coeffs;
    const double norm = k.a * problem.area_coefficients(0) + k.b * problem.area_coefficients(1);
    if (!(norm > 0.0)) {
        throw DomainError("certificate_dual: a A_B + b V must be positive");
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(problem.lp.row_count());
    y(0) = k.a;
    y(1) = k.b;
    y(2) = k.c;
    y(3) = k.d;
    y(problem.f_row(member)) = 1.0;
    return y / norm;
}

DiscreteMeasure primal_measure(const ChordLP &problem, const LPSolution &solution)
{
    DiscreteMeasure out;
    out.source = MeasureSource::external;
    for (std::size_t j = 0; j < problem.atoms.size(); ++j) {
        const double mass = solution.primal(static_cast<Eigen::Index>(j + 1));
        if (mass > 0.0) {
            ChordAtom atom = problem.atoms[j];
            atom.mass = mass;
            out.atoms.push_back(atom);
        }
    }
    return out;
}

} // namespace isolp
