#include "isolp/lp.hpp"

#include "isolp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <locale>
#include <ostream>
#include <sstream>

namespace isolp {

LinearProgram::LinearProgram(Eigen::VectorXd c)
    : objective(std::move(c)), constraints(0, objective.size()), rhs(0)
{
}

void LinearProgram::add_row(const std::string &label, const Eigen::VectorXd &row,
                            double rhs_value)
{
    if (row.size() != objective.size()) {
        throw UsageError("LinearProgram::add_row: row width " + std::to_string(row.size()) +
                         " differs from variable count " + std::to_string(objective.size()));
    }
    const Eigen::Index m = constraints.rows();
    constraints.conservativeResize(m + 1, objective.size());
    constraints.row(m) = row.transpose();
    rhs.conservativeResize(m + 1);
    rhs(m) = rhs_value;
    row_labels.push_back(label);
}

LinearProgram LinearProgram::without_row(Eigen::Index index) const
{
    if (index < 0 || index >= row_count()) {
        throw UsageError("LinearProgram::without_row: index out of range");
    }
    LinearProgram out(objective);
    for (Eigen::Index i = 0; i < row_count(); ++i) {
        if (i != index) {
            out.add_row(row_labels[i], constraints.row(i).transpose(), rhs(i));
        }
    }
    return out;
}

void LinearProgram::validate() const
{
    if (constraints.cols() != objective.size() || constraints.rows() != rhs.size() ||
        static_cast<Eigen::Index>(row_labels.size()) != rhs.size()) {
        throw UsageError("LinearProgram: inconsistent sizes");
    }
    if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite()) {
        throw UsageError("LinearProgram: non-finite coefficient");
    }
}

std::string to_string(LPStatus status)
{
    switch (status) {
    case LPStatus::optimal:
        return "optimal";
    case LPStatus::infeasible:
        return "infeasible";
    case LPStatus::unbounded:
        return "unbounded";
    case LPStatus::tolerance_failure:
        return "tolerance-failure";
    }
    return "tolerance-failure";
}

double DualityReport::relative_gap() const
{
    return std::abs(gap) / (1.0 + std::abs(primal_objective));
}

bool DualityReport::certifies(double tol) const
{
    return primal_violation <= tol && dual_violation <= tol && relative_gap() <= tol;
}

DualityReport verify_weak_duality(const LinearProgram &lp, const Eigen::VectorXd &x,
                                  const Eigen::VectorXd &y)
{
    lp.validate();
    if (x.size() != lp.variable_count() || y.size() != lp.row_count()) {
        throw UsageError("verify_weak_duality: vector sizes do not match the program");
    }
    const Eigen::MatrixXd &A = lp.constraints;
    const Eigen::VectorXd Ax = A * x;
    const Eigen::VectorXd Aty = A.transpose() * y;
    const Eigen::VectorXd row_mag = A.cwiseAbs() * x.cwiseAbs();
    const Eigen::VectorXd col_mag = A.cwiseAbs().transpose() * y.cwiseAbs();

    DualityReport report;
    for (Eigen::Index i = 0; i < lp.row_count(); ++i) {
        const double scale = 1.0 + std::abs(lp.rhs(i)) + row_mag(i);
        const double slack = Ax(i) - lp.rhs(i);
        report.primal_violation = std::max(report.primal_violation, -slack / scale);
        report.dual_violation = std::max(report.dual_violation, -y(i) / (1.0 + std::abs(y(i))));
        report.complementary_slackness =
            std::max(report.complementary_slackness,
                     std::abs(y(i) * slack) / (1.0 + std::abs(y(i)) * scale));
    }
    for (Eigen::Index j = 0; j < lp.variable_count(); ++j) {
        const double scale = 1.0 + std::abs(lp.objective(j)) + col_mag(j);
        const double reduced = lp.objective(j) - Aty(j);
        report.dual_violation = std::max(report.dual_violation, -reduced / scale);
        report.primal_violation =
            std::max(report.primal_violation, -x(j) / (1.0 + std::abs(x(j))));
        report.complementary_slackness =
            std::max(report.complementary_slackness,
                     std::abs(x(j) * reduced) / (1.0 + std::abs(x(j)) * scale));
    }
    report.primal_objective = lp.objective.dot(x);
    report.dual_objective = lp.rhs.dot(y);
    report.gap = report.primal_objective - report.dual_objective;
    return report;
}

namespace {

enum class PhaseResult { optimal, unbounded, iteration_limit, singular };

// Working problem: W z = beta, z >= 0, where z = [x', surplus, artificials].
class Simplex {
public:
    Simplex(Eigen::MatrixXd W, Eigen::VectorXd beta, Eigen::Index first_artificial,
            std::vector<Eigen::Index> basis, const SimplexOptions &options)
        : W_(std::move(W)), beta_(std::move(beta)), first_artificial_(first_artificial),
          basis_(std::move(basis)), options_(options)
    {
        max_iterations_ = options.max_iterations > 0
                              ? options.max_iterations
                              : static_cast<int>(50 * (W_.rows() + W_.cols()));
    }

    PhaseResult run(const Eigen::VectorXd &cost, bool artificials_may_enter)
    {
        int degenerate_run = 0;
        const double dtol = reduced_tol * (1.0 + cost.cwiseAbs().maxCoeff());
        std::vector<char> is_basic(W_.cols(), 0);
        for (;;) {
            if (iterations_ >= max_iterations_) {
                return PhaseResult::iteration_limit;
            }
            if (!factor()) {
                return PhaseResult::singular;
            }
            std::fill(is_basic.begin(), is_basic.end(), 0);
            for (const auto b : basis_) {
                is_basic[b] = 1;
            }
            Eigen::VectorXd cB(basis_.size());
            for (std::size_t r = 0; r < basis_.size(); ++r) {
                cB(r) = cost(basis_[r]);
            }
            const Eigen::VectorXd y = lu_t_.solve(cB);
            const Eigen::VectorXd reduced = cost - W_.transpose() * y;

            const bool bland = degenerate_run >= options_.degenerate_switch;
            const Eigen::Index limit = artificials_may_enter ? W_.cols() : first_artificial_;
            Eigen::Index entering = -1;
            double best = -dtol;
            for (Eigen::Index j = 0; j < limit; ++j) {
                if (is_basic[j] || reduced(j) >= -dtol) {
                    continue;
                }
                if (bland) {
                    entering = j;
                    break;
                }
                if (reduced(j) < best) {
                    best = reduced(j);
                    entering = j;
                }
            }
            if (entering < 0) {
                return PhaseResult::optimal;
            }

            const Eigen::VectorXd direction = lu_.solve(W_.col(entering));
            Eigen::Index leaving = -1;
            double step = 0.0;
            double pivot = 0.0;
            for (Eigen::Index r = 0; r < direction.size(); ++r) {
                const double d = direction(r);
                double ratio;
                if (!artificials_may_enter && basis_[r] >= first_artificial_ &&
                    std::abs(d) > pivot_tol) {
                    ratio = 0.0; // an artificial stuck at zero must not move
                } else if (d > pivot_tol) {
                    ratio = std::max(0.0, x_basic_(r)) / d;
                } else {
                    continue;
                }
                const bool better =
                    leaving < 0 || ratio < step - ratio_tie * (1.0 + step) ||
                    (ratio <= step + ratio_tie * (1.0 + step) &&
                     (bland ? basis_[r] < basis_[leaving] : std::abs(d) > pivot));
                if (better) {
                    leaving = r;
                    step = ratio;
                    pivot = std::abs(d);
                }
            }
            if (leaving < 0) {
                return PhaseResult::unbounded;
            }
            degenerate_run = step <= 1e-14 ? degenerate_run + 1 : 0;
            basis_[leaving] = entering;
            ++iterations_;
        }
    }

    // Pivot zero-level artificials out of the basis where a structural or
    // surplus column can replace them. Remaining ones mark redundant rows.
    void expel_artificials()
    {
        if (!factor()) {
            return;
        }
        for (std::size_t r = 0; r < basis_.size(); ++r) {
            if (basis_[r] < first_artificial_) {
                continue;
            }
            Eigen::VectorXd unit = Eigen::VectorXd::Zero(basis_.size());
            unit(static_cast<Eigen::Index>(r)) = 1.0;
            const Eigen::VectorXd row = W_.transpose() * lu_t_.solve(unit);
            Eigen::Index best = -1;
            for (Eigen::Index j = 0; j < first_artificial_; ++j) {
                if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) {
                    continue;
                }
                if (std::abs(row(j)) > 1e-9 &&
                    (best < 0 || std::abs(row(j)) > std::abs(row(best)))) {
                    best = j;
                }
            }
            if (best >= 0) {
                basis_[r] = best;
                if (!factor()) {
                    return;
                }
            }
        }
    }

    bool factor()
    {
        const Eigen::Index m = static_cast<Eigen::Index>(basis_.size());
        Eigen::MatrixXd B(m, m);
        for (Eigen::Index r = 0; r < m; ++r) {
            B.col(r) = W_.col(basis_[r]);
        }
        lu_.compute(B);
        lu_t_.compute(B.transpose());
        if (m > 0 && !(lu_.rcond() > 1e-15)) {
            return false;
        }
        x_basic_ = lu_.solve(beta_);
        return true;
    }

    Eigen::VectorXd values() const
    {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(W_.cols());
        for (std::size_t r = 0; r < basis_.size(); ++r) {
            z(basis_[r]) = std::max(0.0, x_basic_(static_cast<Eigen::Index>(r)));
        }
        return z;
    }

    Eigen::VectorXd duals(const Eigen::VectorXd &cost) const
    {
        Eigen::VectorXd cB(basis_.size());
        for (std::size_t r = 0; r < basis_.size(); ++r) {
            cB(static_cast<Eigen::Index>(r)) = cost(basis_[r]);
        }
        return lu_t_.solve(cB);
    }

    int iterations() const { return iterations_; }

private:
    static constexpr double pivot_tol = 1e-11;
    static constexpr double reduced_tol = 1e-11;
    static constexpr double ratio_tie = 1e-12;

    Eigen::MatrixXd W_;
    Eigen::VectorXd beta_;
    Eigen::Index first_artificial_;
    std::vector<Eigen::Index> basis_;
    SimplexOptions options_;
    int max_iterations_ = 0;
    int iterations_ = 0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_t_;
    Eigen::VectorXd x_basic_;
};

} // namespace

LPSolution solve(const LinearProgram &lp, double tol)
{
    SimplexOptions options;
    options.tol = tol;
    return solve(lp, options);
}

LPSolution solve(const LinearProgram &lp, const SimplexOptions &options)
{
    lp.validate();
    if (!(options.tol > 0.0 && options.tol <= 1e-3)) {
        throw UsageError("solve: tol must lie in (0, 1e-3]");
    }
    const Eigen::Index m = lp.row_count();
    const Eigen::Index n = lp.variable_count();

    // Equilibrate rows, then columns.
    Eigen::VectorXd row_scale(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double big =
            std::max(lp.constraints.row(i).cwiseAbs().maxCoeff(), std::abs(lp.rhs(i)));
        row_scale(i) = big > 0.0 ? 1.0 / big : 1.0;
    }
    Eigen::MatrixXd A = row_scale.asDiagonal() * lp.constraints;
    const Eigen::VectorXd b = row_scale.cwiseProduct(lp.rhs);
    Eigen::VectorXd col_scale(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double big = m > 0 ? A.col(j).cwiseAbs().maxCoeff() : 0.0;
        col_scale(j) = big > 0.0 ? 1.0 / big : 1.0;
    }
    A = A * col_scale.asDiagonal();
    const Eigen::VectorXd c = col_scale.cwiseProduct(lp.objective);

    std::vector<Eigen::Index> needs_artificial;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (b(i) > 0.0) {
            needs_artificial.push_back(i);
        }
    }
    const Eigen::Index k = static_cast<Eigen::Index>(needs_artificial.size());
    const Eigen::Index first_artificial = n + m;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, n + m + k);
    W.leftCols(n) = A;
    W.block(0, n, m, m) = -Eigen::MatrixXd::Identity(m, m);
    std::vector<Eigen::Index> basis(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        basis[i] = n + i;
    }
    for (Eigen::Index a = 0; a < k; ++a) {
        W(needs_artificial[a], first_artificial + a) = 1.0;
        basis[needs_artificial[a]] = first_artificial + a;
    }

    Simplex simplex(std::move(W), b, first_artificial, basis, options);
    LPSolution solution;
    solution.primal = Eigen::VectorXd::Zero(n);
    solution.dual = Eigen::VectorXd::Zero(m);

    if (k > 0) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m + k);
        phase1.tail(k).setOnes();
        const PhaseResult r1 = simplex.run(phase1, true);
        solution.iterations = simplex.iterations();
        if (r1 != PhaseResult::optimal) {
            solution.status = LPStatus::tolerance_failure;
            return solution;
        }
        const double infeasibility = simplex.values().tail(k).sum();
        if (infeasibility > 1e-9 * (1.0 + b.cwiseAbs().maxCoeff())) {
            solution.status = LPStatus::infeasible;
            return solution;
        }
        simplex.expel_artificials();
    }

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m + k);
    phase2.head(n) = c;
    const PhaseResult r2 = simplex.run(phase2, false);
    solution.iterations = simplex.iterations();
    if (r2 == PhaseResult::unbounded) {
        solution.status = LPStatus::unbounded;
        return solution;
    }
    if (r2 != PhaseResult::optimal) {
        solution.status = LPStatus::tolerance_failure;
        return solution;
    }
    solution.primal = col_scale.cwiseProduct(simplex.values().head(n));
    solution.dual = row_scale.cwiseProduct(simplex.duals(phase2)).cwiseMax(0.0);
    solution.objective = lp.objective.dot(solution.primal);
    solution.report = verify_weak_duality(lp, solution.primal, solution.dual);
    solution.status =
        solution.report.certifies(options.tol) ? LPStatus::optimal : LPStatus::tolerance_failure;
    return solution;
}

namespace {

std::string sanitize_label(const std::string &label)
{
    std::string out = label.empty() ? std::string("row") : label;
    std::replace_if(
        out.begin(), out.end(),
        [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; }, '_');
    return out;
}

} // namespace

void write_lp_text(std::ostream &out, const LinearProgram &lp)
{
    lp.validate();
    std::ostringstream text;
    text.imbue(std::locale::classic());
    text << std::setprecision(17);
    text << "objective";
    for (Eigen::Index j = 0; j < lp.variable_count(); ++j) {
        text << ' ' << lp.objective(j);
    }
    text << " min\n";
    for (Eigen::Index i = 0; i < lp.row_count(); ++i) {
        text << sanitize_label(lp.row_labels[i]);
        for (Eigen::Index j = 0; j < lp.variable_count(); ++j) {
            text << ' ' << lp.constraints(i, j);
        }
        text << " >= " << lp.rhs(i) << '\n';
    }
    out << text.str();
}

LinearProgram read_lp_text(std::istream &in)
{
    std::string line;
    auto tokens_of = [](const std::string &s) {
        std::istringstream stream(s);
        stream.imbue(std::locale::classic());
        std::vector<std::string> out;
        std::string tok;
        while (stream >> tok) {
            out.push_back(tok);
        }
        return out;
    };
    auto number = [](const std::string &tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) {
                throw UsageError("LP text: bad number '" + tok + "'");
            }
            return v;
        } catch (const std::logic_error &) {
            throw UsageError("LP text: bad number '" + tok + "'");
        }
    };
    if (!std::getline(in, line)) {
        throw UsageError("LP text: missing objective line");
    }
    const auto head = tokens_of(line);
    if (head.size() < 2 || head.front() != "objective" || head.back() != "min") {
        throw UsageError("LP text: first line must be 'objective c1 ... cn min'");
    }
    Eigen::VectorXd c(static_cast<Eigen::Index>(head.size() - 2));
    for (std::size_t j = 1; j + 1 < head.size(); ++j) {
        c(static_cast<Eigen::Index>(j - 1)) = number(head[j]);
    }
    LinearProgram lp(c);
    while (std::getline(in, line)) {
        const auto tok = tokens_of(line);
        if (tok.empty()) {
            continue;
        }
        if (tok.size() != static_cast<std::size_t>(c.size()) + 3 || tok[tok.size() - 2] != ">=") {
            throw UsageError("LP text: malformed row '" + tok.front() + "'");
        }
        Eigen::VectorXd row(c.size());
        for (Eigen::Index j = 0; j < c.size(); ++j) {
            row(j) = number(tok[static_cast<std::size_t>(j) + 1]);
        }
        lp.add_row(tok.front(), row, number(tok.back()));
    }
    return lp;
}

void to_json(nlohmann::json &j, const DualityReport &report)
{
    j = nlohmann::json{{"primal_violation", report.primal_violation},
                       {"dual_violation", report.dual_violation},
                       {"primal_objective", report.primal_objective},
                       {"dual_objective", report.dual_objective},
                       {"gap", report.gap},
                       {"relative_gap", report.relative_gap()},
                       {"complementary_slackness", report.complementary_slackness}};
}

void to_json(nlohmann::json &j, const LPSolution &solution)
{
    j = nlohmann::json{{"status", to_string(solution.status)},
                       {"objective", solution.objective},
                       {"iterations", solution.iterations},
                       {"report", solution.report},
                       {"primal", std::vector<double>(solution.primal.begin(),
                                                      solution.primal.end())},
                       {"dual",
                        std::vector<double>(solution.dual.begin(), solution.dual.end())}};
}

} // namespace isolp
