#include "isolp/certificate.hpp"

#include "isolp/errors.hpp"
#include "isolp/parallel.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace isolp {

std::string Coefficients::sign_flag() const
{
    if (a < 0.0) {
        return "negative a";
    }
    if (b < 0.0) {
        return "negative b";
    }
    if (c < 0.0) {
        return "negative c";
    }
    if (d < 0.0) {
        return "negative d";
    }
    return "";
}

namespace {

std::vector<double> chebyshev_nodes(double radius, int count)
{
    std::vector<double> nodes(count);
    for (int i = 0; i < count; ++i) {
        nodes[i] = radius * (1.0 - std::cos((2.0 * i + 1.0) * pi / (2.0 * count)));
    }
    return nodes;
}

struct Columns {
    double a, b, c;
};

// Terms multiplying a, b, c in the consistency equation on the chord curve.
Columns consistency_columns(const ModelParams &params, double radius, double ell)
{
    const double T = chord_T(params.kappa, radius, ell);
    return {candle_derivative(params, ell) / (T * T), candle(params, ell) / T,
            candle_anti(params, ell)};
}

// Unit null vector of the column-scaled matrix, mapped back to unscaled
// coordinates. Also returns the singular values.
Eigen::VectorXd scaled_null_vector(const Eigen::MatrixXd &M, std::vector<double> &singular)
{
    Eigen::VectorXd norms = M.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < norms.size(); ++j) {
        if (norms(j) == 0.0) {
            norms(j) = 1.0;
        }
    }
    const Eigen::MatrixXd scaled = M * norms.cwiseInverse().asDiagonal();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    singular.assign(s.begin(), s.end());
    const Eigen::VectorXd v = svd.matrixV().col(scaled.cols() - 1);
    return v.cwiseQuotient(norms);
}

constexpr int scan_nodes = 512;

double search_length(const DualCertificate &cert)
{
    if (cert.params.kappa > 0.0) {
        return conjugate_distance(cert.params.kappa);
    }
    return 40.0 * std::max(1.0, cert.radius);
}

void require_angle(double angle)
{
    if (!(angle >= 0.0 && angle < 0.5 * pi)) {
        throw DomainError("angle must lie in [0, pi/2)");
    }
}

} // namespace

ConsistencyFit solve_consistency(const ModelParams &params, double radius, int node_count)
{
    validate(params);
    if (node_count < 8) {
        throw UsageError("solve_consistency: node_count must be at least 8");
    }
    const std::vector<double> nodes = chebyshev_nodes(radius, node_count);
    Eigen::MatrixXd M(node_count, 4);
    for (int i = 0; i < node_count; ++i) {
        const Columns col = consistency_columns(params, radius, nodes[i]);
        M.row(i) << col.a, col.b, col.c, -1.0;
    }
    ConsistencyFit fit;
    Eigen::VectorXd v = scaled_null_vector(M, fit.singular_values);
    const auto &sv = fit.singular_values;
    fit.rank_deficient = sv[2] <= 1e-10 * sv[0];

    Coefficients k;
    const double largest = v.tail(3).cwiseAbs().maxCoeff();
    if (std::abs(v(0)) > 1e-10 * largest) {
        v /= v(0);
        k = {1.0, v(1), v(2), v(3)};
    } else {
        // a vanishes: refit on the remaining columns in the gauge b = 1.
        std::vector<double> reduced_sv;
        Eigen::VectorXd w = scaled_null_vector(M.rightCols(3), reduced_sv);
        w /= w(0);
        k = {0.0, 1.0, w(1), w(2)};
    }
    // Entries at round-off level relative to the tuple are exact zeros.
    const double scale = std::max({std::abs(k.a), std::abs(k.b), std::abs(k.c), std::abs(k.d)});
    for (double *entry : {&k.a, &k.b, &k.c, &k.d}) {
        if (std::abs(*entry) <= 1e-12 * scale) {
            *entry = 0.0;
        }
    }
    fit.coeffs = k;
    fit.nonnegative = k.nonnegative();

    const DualCertificate cert{params, radius, k};
    for (const double ell : chebyshev_nodes(radius, 10 * node_count)) {
        fit.residual = std::max(fit.residual, std::abs(consistency_defect(cert, ell)));
    }
    return fit;
}

double consistency_defect(const DualCertificate &cert, double ell)
{
    const Columns col = consistency_columns(cert.params, cert.radius, ell);
    const Coefficients &k = cert.coeffs;
    const double a_term = k.a == 0.0 ? 0.0 : k.a * col.a;
    return a_term + k.b * col.b + k.c * col.c - k.d;
}

DualCertificate paper_certificate(const ModelParams &params, double radius)
{
    validate(params);
    if (!(radius > 0.0)) {
        throw DomainError("paper_certificate: radius must be positive");
    }
    const int n = params.n;
    const double k = params.kappa;
    if ((n != 2 && n != 4) || (k != -1.0 && k != 0.0 && k != 1.0)) {
        throw NotImplementedCase("paper_certificate: closed forms exist only for n in {2, 4} "
                                 "and kappa in {-1, 0, 1}");
    }
    if (k > 0.0 && radius >= 0.5 * pi) {
        throw DomainError("paper_certificate: radius must be below pi/2 when kappa = 1");
    }
    const double t = k > 0.0 ? std::tan(radius) : std::tanh(radius);
    Coefficients c;
    if (k == 0.0) {
        c = n == 4 ? Coefficients{1.0, 0.0, 0.0, 12.0 * radius * radius}
                   : Coefficients{0.0, 1.0, 0.0, 2.0 * radius};
    } else if (k > 0.0) {
        c = n == 4 ? Coefficients{1.0, 6.0 * t, 9.0 * t * t, 12.0 * t * t}
                   : Coefficients{0.0, 1.0, t, 2.0 * t};
    } else {
        c = n == 4 ? Coefficients{1.0, -6.0 * t, 9.0 * t * t, 12.0 * t * t}
                   : Coefficients{0.0, 1.0, -t, 2.0 * t};
    }
    return {params, radius, c};
}

double g_value(const DualCertificate &cert, double ell, double alpha, double beta)
{
    const double x = 1.0 / std::cos(alpha);
    const double y = 1.0 / std::cos(beta);
    const Coefficients &k = cert.coeffs;
    const ModelParams &p = cert.params;
    double v = k.d * ell;
    if (k.a != 0.0) {
        v -= k.a * candle(p, ell) * x * y;
    }
    if (k.b != 0.0) {
        v -= k.b * 0.5 * candle_anti(p, ell) * (x + y);
    }
    if (k.c != 0.0) {
        v -= k.c * candle_anti2(p, ell);
    }
    return v;
}

double g_slope(const DualCertificate &cert, double ell, double alpha, double beta)
{
    const double x = 1.0 / std::cos(alpha);
    const double y = 1.0 / std::cos(beta);
    const Coefficients &k = cert.coeffs;
    const ModelParams &p = cert.params;
    double v = k.d;
    if (k.a != 0.0) {
        v -= k.a * candle_derivative(p, ell) * x * y;
    }
    if (k.b != 0.0) {
        v -= k.b * 0.5 * candle(p, ell) * (x + y);
    }
    if (k.c != 0.0) {
        v -= k.c * candle_anti(p, ell);
    }
    return v;
}

SupResult build_f(const DualCertificate &cert, double alpha, double beta)
{
    require_angle(alpha);
    require_angle(beta);
    const double top = search_length(cert);
    const auto g = [&](double ell) { return g_value(cert, ell, alpha, beta); };

    int best = 0;
    double best_value = g(0.0);
    for (int i = 1; i < scan_nodes; ++i) {
        const double v = g(top * i / (scan_nodes - 1));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (best == scan_nodes - 1 && cert.params.kappa <= 0.0) {
        throw SearchCapError("build_f: supremum reaches the search cap ell = " +
                             std::to_string(top));
    }
    const double lo = top * std::max(0, best - 1) / (scan_nodes - 1);
    const double hi = top * std::min(scan_nodes - 1, best + 1) / (scan_nodes - 1);
    const auto slope = [&](double ell) { return g_slope(cert, ell, alpha, beta); };

    double argmax;
    const double slope_lo = slope(lo);
    const double slope_hi = slope(hi);
    if (slope_lo > 0.0 && slope_hi < 0.0) {
        std::uintmax_t iterations = 200;
        const auto root = boost::math::tools::toms748_solve(
            slope, lo, hi, slope_lo, slope_hi, boost::math::tools::eps_tolerance<double>(52),
            iterations);
        argmax = 0.5 * (root.first + root.second);
    } else {
        // Golden section on [lo, hi].
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo;
        double b = hi;
        double c = b - ratio * (b - a);
        double d = a + ratio * (b - a);
        double gc = g(c);
        double gd = g(d);
        while (b - a > 1e-10 * std::max(1.0, top)) {
            if (gc >= gd) {
                b = d;
                d = c;
                gd = gc;
                c = b - ratio * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + ratio * (b - a);
                gd = g(d);
            }
        }
        argmax = 0.5 * (a + b);
    }
    SupResult result{g(argmax), argmax};
    if (best_value > result.value) {
        result = {best_value, top * best / (scan_nodes - 1)};
    }
    return result;
}

bool has_closed_form_f(const DualCertificate &cert)
{
    const Coefficients &k = cert.coeffs;
    if (cert.params.kappa != 0.0) {
        return false;
    }
    if (cert.params.n == 4) {
        return k.a > 0.0 && k.b == 0.0 && k.c == 0.0 && k.d >= 0.0;
    }
    if (cert.params.n == 2) {
        return k.a == 0.0 && k.b > 0.0 && k.c == 0.0 && k.d >= 0.0;
    }
    return false;
}

double closed_form_f(const DualCertificate &cert, double alpha, double beta)
{
    if (!has_closed_form_f(cert)) {
        throw NotImplementedCase("closed_form_f: no closed form for this certificate");
    }
    require_angle(alpha);
    require_angle(beta);
    const Coefficients &k = cert.coeffs;
    const double x = 1.0 / std::cos(alpha);
    const double y = 1.0 / std::cos(beta);
    if (cert.params.n == 4) {
        // -a l^3 x y + d l peaks at l = sqrt(d / (3 a x y)) with value (2/3) d l.
        return (2.0 / 3.0) * k.d * std::sqrt(k.d / (3.0 * k.a * x * y));
    }
    // -b (l^2/4)(x + y) + d l peaks at l = 2 d / (b (x + y)).
    return k.d * k.d / (k.b * (x + y));
}

bool has_closed_form_argmax(const DualCertificate &cert)
{
    if (has_closed_form_f(cert)) {
        return true;
    }
    const Coefficients &k = cert.coeffs;
    return cert.params.n == 2 && cert.params.kappa == 1.0 && k.a == 0.0 && k.b > 0.0 &&
           std::abs(k.c - 0.5 * k.d) <= 1e-14 * std::abs(k.d);
}

double closed_form_argmax(const DualCertificate &cert, double alpha, double beta)
{
    if (!has_closed_form_argmax(cert)) {
        throw NotImplementedCase("closed_form_argmax: no closed form for this certificate");
    }
    require_angle(alpha);
    require_angle(beta);
    const Coefficients &k = cert.coeffs;
    const double x = 1.0 / std::cos(alpha);
    const double y = 1.0 / std::cos(beta);
    if (cert.params.kappa == 1.0) {
        return 2.0 * std::atan(k.d / (k.b * (x + y)));
    }
    if (cert.params.n == 4) {
        return std::sqrt(k.d / (3.0 * k.a * x * y));
    }
    return 2.0 * k.d / (k.b * (x + y));
}

double evaluate_f(const DualCertificate &cert, double alpha, double beta)
{
    if (has_closed_form_f(cert)) {
        return closed_form_f(cert, alpha, beta);
    }
    return build_f(cert, alpha, beta).value;
}

MembershipReport check_family_membership(const DualCertificate &cert, int grid, double epsilon)
{
    if (grid < 2) {
        throw UsageError("check_family_membership: grid must be at least 2");
    }
    MembershipReport report;
    report.grid = grid;
    report.epsilon = epsilon;
    const double step = (0.5 * pi - epsilon) / (grid - 1);
    std::vector<double> f(static_cast<std::size_t>(grid) * grid);
    parallel_for(static_cast<std::size_t>(grid), [&](std::size_t i) {
        for (int j = static_cast<int>(i); j < grid; ++j) {
            const double v = evaluate_f(cert, static_cast<double>(i) * step, j * step);
            f[i * grid + j] = v;
            f[static_cast<std::size_t>(j) * grid + i] = v;
        }
    });
    report.min_f = std::numeric_limits<double>::infinity();
    report.min_defect = std::numeric_limits<double>::infinity();
    report.min_offdiagonal_defect = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double fij = f[static_cast<std::size_t>(i) * grid + j];
            const double defect = 0.5 * (f[static_cast<std::size_t>(i) * grid + i] +
                                         f[static_cast<std::size_t>(j) * grid + j]) -
                                  fij;
            report.min_f = std::min(report.min_f, fij);
            report.min_defect = std::min(report.min_defect, defect);
            if (std::abs(i - j) >= 2) {
                report.min_offdiagonal_defect = std::min(report.min_offdiagonal_defect, defect);
                if (defect <= 1e-9) {
                    ++report.near_zero_offdiagonal;
                }
            }
        }
    }
    report.passed =
        report.min_f >= -1e-9 && report.min_defect >= -1e-9 && report.near_zero_offdiagonal == 0;
    return report;
}

VerificationReport verify_certificate(const DualCertificate &cert, const VerifyOptions &options)
{
    VerificationReport report;
    report.cert = cert;

    for (const double ell : chebyshev_nodes(cert.radius, 640)) {
        report.consistency_residual =
            std::max(report.consistency_residual, std::abs(consistency_defect(cert, ell)));
    }
    report.consistency_ok = report.consistency_residual <= options.consistency_tol;
    if (!report.consistency_ok) {
        report.flags.push_back("consistency");
    }

    const int diagonal = 25;
    for (int i = 0; i < diagonal; ++i) {
        const double alpha = (0.5 * pi - 1e-3) * i / (diagonal - 1);
        const double expected =
            chord_length_from_cos(cert.params.kappa, cert.radius, std::cos(alpha));
        try {
            const double found = build_f(cert, alpha, alpha).argmax;
            report.argmax_error = std::max(report.argmax_error, std::abs(found - expected));
        } catch (const SearchCapError &) {
            report.argmax_error = std::numeric_limits<double>::infinity();
        }
    }
    report.sup_on_curve_ok = report.argmax_error <= options.argmax_tol;
    if (!report.sup_on_curve_ok) {
        report.flags.push_back("sup off the chord curve");
    }

    try {
        report.membership = check_family_membership(cert, options.grid);
    } catch (const SearchCapError &) {
        report.membership.passed = false;
        report.flags.push_back("search cap");
    }
    report.membership_ok = report.membership.passed;
    if (!report.membership_ok) {
        report.flags.push_back("family membership");
    }

    if (cert.coeffs.a == 0.0 && cert.coeffs.b == 0.0) {
        report.sign_ok = false;
        report.flags.push_back("a and b vanish");
    }
    if (options.require_nonnegative && !cert.coeffs.nonnegative()) {
        report.sign_ok = false;
        report.flags.push_back(cert.coeffs.sign_flag());
    }
    return report;
}

double duality_lower_bound(const VerificationReport &report, double volume)
{
    if (!report.passed()) {
        throw DomainError("duality_lower_bound: certificate did not pass verification");
    }
    const BallGeometry ball = ball_from_volume(report.cert.params, volume);
    if (std::abs(ball.radius - report.cert.radius) > 1e-9 * std::max(1.0, ball.radius)) {
        throw DomainError("duality_lower_bound: certificate radius does not match the ball of "
                          "this volume");
    }
    return ball.area;
}

void to_json(nlohmann::json &j, const Coefficients &coeffs)
{
    j = nlohmann::json{{"a", coeffs.a}, {"b", coeffs.b}, {"c", coeffs.c}, {"d", coeffs.d}};
}

void to_json(nlohmann::json &j, const MembershipReport &report)
{
    j = nlohmann::json{{"grid", report.grid},
                       {"epsilon", report.epsilon},
                       {"min_f", report.min_f},
                       {"min_defect", report.min_defect},
                       {"min_offdiagonal_defect", report.min_offdiagonal_defect},
                       {"near_zero_offdiagonal", report.near_zero_offdiagonal},
                       {"passed", report.passed}};
}

void to_json(nlohmann::json &j, const VerificationReport &report)
{
    j = nlohmann::json{{"n", report.cert.params.n},
                       {"kappa", report.cert.params.kappa},
                       {"radius", report.cert.radius},
                       {"coefficients", report.cert.coeffs},
                       {"consistency_residual", report.consistency_residual},
                       {"argmax_error", report.argmax_error},
                       {"membership", report.membership},
                       {"consistency_ok", report.consistency_ok},
                       {"sup_on_curve_ok", report.sup_on_curve_ok},
                       {"membership_ok", report.membership_ok},
                       {"sign_ok", report.sign_ok},
                       {"flags", report.flags},
                       {"passed", report.passed()}};
}

} // namespace isolp
