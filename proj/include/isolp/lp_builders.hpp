#pragma once

// Discretized chord-measure linear programs. Variables are the area A and
// the masses of atoms (ell_i, alpha_j, alpha_k) on a product grid; rows are
// the linearized Croke inequalities, the Santalo inequality and one row per
// test function f(alpha, beta).

#include "isolp/certificate.hpp"
#include "isolp/chord_measure.hpp"
#include "isolp/lp.hpp"

#include <string>
#include <vector>

namespace isolp {

struct GridSpec {
    int ell_nodes = 40;   // uniform ell nodes in (0, ell_max]
    int alpha_nodes = 20; // alpha_j = j (pi/2) / alpha_nodes, j < alpha_nodes
    bool curve_aligned = true; // add T^{-1}(cos alpha_j) to the ell nodes
    double ell_max_factor = 1.25; // ell_max = factor * 2r, kept below pi/sqrt(kappa)

    /// Doubles both counts. The refined grid contains this one.
    GridSpec refined() const;
};

struct GridNodes {
    std::vector<double> ell;   // sorted, distinct
    std::vector<double> alpha; // shared by alpha and beta
};

GridNodes make_grid(const ModelParams &params, double radius, const GridSpec &spec);

struct FamilyMember {
    std::string label;
    PairFunction f;
};

/// (cos a cos b)^gamma for gamma in {1/2, 1, 3/2, 2}.
std::vector<FamilyMember> symmetric_products();

/// Symmetric products plus the closed-form certificate's f when the case
/// has one with nonnegative coefficients.
std::vector<FamilyMember> default_family(const ModelParams &params, double radius);

FamilyMember certificate_member(const DualCertificate &cert);

enum class Table2Variant {
    corrected, // row c: -m V^2, row d: omega_{n-1} V
    verbatim,  // row c: -omega_{n-1} m V^2, row d: V
};

std::string to_string(Table2Variant variant);
Table2Variant table2_variant_from_string(const std::string &name);

struct ChordLP {
    LinearProgram lp;
    ModelParams params;
    double volume = 0.0;
    int multiplicity = 1;
    double reference_area = 0.0; // A_B, or |dB(mV)|/m for the relative problem
    GridNodes grid;
    std::vector<ChordAtom> atoms; // column j + 1 carries atoms[j]
    std::vector<FamilyMember> family;
    Eigen::VectorXd area_coefficients; // column 0 of the constraint matrix

    Eigen::Index f_row(std::size_t member) const
    {
        return 4 + static_cast<Eigen::Index>(member);
    }
};

/// Rows a, b, c, d, then one row per family member; objective minimizes A.
/// Throws DomainError for alpha nodes outside [0, pi/2) or ell nodes outside
/// (0, pi/sqrt(kappa)).
ChordLP build_isoperimetric_lp(const ModelParams &params, double volume, const GridNodes &grid,
                               const std::vector<FamilyMember> &family);
ChordLP build_isoperimetric_lp(const ModelParams &params, double volume, const GridSpec &spec,
                               const std::vector<FamilyMember> &family);

/// The relative problem for pairs of points joined by at most m geodesics.
/// With m = 1 the corrected variant coincides with build_isoperimetric_lp.
ChordLP build_relative_lp(const ModelParams &params, double volume, int m,
                          const GridNodes &grid, const std::vector<FamilyMember> &family,
                          Table2Variant variant = Table2Variant::corrected);
ChordLP build_relative_lp(const ModelParams &params, double volume, int m,
                          const GridSpec &spec, const std::vector<FamilyMember> &family,
                          Table2Variant variant = Table2Variant::corrected);

/// Row activities A * coef + sum(mass * row(atom)) - rhs for an arbitrary
/// measure, on or off the grid.
Eigen::VectorXd row_residuals(const ChordLP &problem, double area,
                              const DiscreteMeasure &measure);

/// Dual vector (a, b, c, d, 0, ..., 1 at `member`, ...) / (a coef_a + b coef_b).
Eigen::VectorXd certificate_dual(const ChordLP &problem, const DualCertificate &cert,
                                 std::size_t member);

/// Atoms with positive mass in a primal solution.
DiscreteMeasure primal_measure(const ChordLP &problem, const LPSolution &solution);

} // namespace isolp
