#pragma once

// Dense linear programs in the form
//     minimize c.x  subject to  A x >= b,  x >= 0
// with a two-phase revised simplex solver and an algorithm-independent
// weak-duality check.

#include <Eigen/Dense>
#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace isolp {

struct LinearProgram {
    Eigen::VectorXd objective;   // c, minimized
    Eigen::MatrixXd constraints; // A, one row per constraint
    Eigen::VectorXd rhs;         // b
    std::vector<std::string> row_labels;

    LinearProgram() = default;
    explicit LinearProgram(Eigen::VectorXd c);

    Eigen::Index variable_count() const { return objective.size(); }
    Eigen::Index row_count() const { return constraints.rows(); }

    /// Appends the constraint row.x >= rhs.
    void add_row(const std::string &label, const Eigen::VectorXd &row, double rhs_value);
    /// Copy with row `index` removed.
    LinearProgram without_row(Eigen::Index index) const;

    /// Throws UsageError on mismatched sizes or non-finite entries.
    void validate() const;
};

enum class LPStatus { optimal, infeasible, unbounded, tolerance_failure };

std::string to_string(LPStatus status);

/// Residuals of a primal-dual pair. Violations are relative: each row or
/// column defect is divided by 1 + the magnitudes of the terms involved.
struct DualityReport {
    double primal_violation = 0.0;     // rows b - A x and bounds -x
    double dual_violation = 0.0;       // columns A^T y - c and bounds -y
    double primal_objective = 0.0;     // c.x
    double dual_objective = 0.0;       // b.y
    double gap = 0.0;                  // c.x - b.y, >= 0 for feasible pairs
    double complementary_slackness = 0.0;

    double relative_gap() const;
    /// All violations and |gap| (relative to 1 + |c.x|) at most tol.
    bool certifies(double tol) const;
};

struct LPSolution {
    LPStatus status = LPStatus::tolerance_failure;
    Eigen::VectorXd primal;
    Eigen::VectorXd dual;
    double objective = 0.0;
    DualityReport report;
    int iterations = 0;
};

/// Independent check of a primal-dual pair against the LP.
DualityReport verify_weak_duality(const LinearProgram &lp, const Eigen::VectorXd &primal,
                                  const Eigen::VectorXd &dual);

struct SimplexOptions {
    double tol = 1e-9;
    int max_iterations = 0;     // 0: 50 (rows + columns)
    int degenerate_switch = 50; // consecutive degenerate pivots before Bland's rule
};

/// Two-phase revised simplex. Rows and columns are equilibrated internally;
/// the basis is refactored every iteration. Pricing is Dantzig's rule with
/// ties broken by lowest index, falling back to Bland's rule while the
/// method stalls on degenerate pivots, so runs are reproducible.
/// Status is `optimal` only when verify_weak_duality certifies the pair.
LPSolution solve(const LinearProgram &lp, const SimplexOptions &options = {});
LPSolution solve(const LinearProgram &lp, double tol);

/// One line per row: label, coefficients, ">=", rhs. The objective is a
/// first line labelled "objective" with sense "min".
void write_lp_text(std::ostream &out, const LinearProgram &lp);
LinearProgram read_lp_text(std::istream &in);

void to_json(nlohmann::json &j, const DualityReport &report);
void to_json(nlohmann::json &j, const LPSolution &solution);

} // namespace isolp
