#pragma once

// Dual certificates for the isoperimetric linear program: coefficients
// (a, b, c, d) and the function
//   f(alpha, beta) = sup_ell g(ell, alpha, beta),
//   g = -a s(ell)/(cos a cos b) - b (s^(ell)/2)(1/cos a + 1/cos b) - c s^^(ell) + d ell.

#include "isolp/spaceform.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace isolp {

struct Coefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    Coefficients scaled(double factor) const
    {
        return {a * factor, b * factor, c * factor, d * factor};
    }
    bool nonnegative() const { return a >= 0.0 && b >= 0.0 && c >= 0.0 && d >= 0.0; }
    /// "negative a", "negative b", ... for the first negative entry, else "".
    std::string sign_flag() const;
};

struct DualCertificate {
    ModelParams params;
    double radius = 0.0;
    Coefficients coeffs;
};

struct ConsistencyFit {
    Coefficients coeffs;
    double residual = 0.0;               // max |defect| on a 10x denser node set
    std::vector<double> singular_values; // of the column-scaled collocation matrix
    bool rank_deficient = false;         // null space of dimension > 1
    bool nonnegative = false;
};

/// Least-squares fit of d = a s'(l)/T^2 + b s(l)/T + c s^(l) on Chebyshev
/// nodes of (0, 2r), in the gauge a = 1, or b = 1 when a vanishes.
ConsistencyFit solve_consistency(const ModelParams &params, double radius, int node_count);

/// Defect of the consistency equation on the chord curve at length ell.
double consistency_defect(const DualCertificate &cert, double ell);

/// The closed-form coefficients for (n, kappa) in {2, 4} x {-1, 0, 1}.
/// Throws NotImplementedCase otherwise.
DualCertificate paper_certificate(const ModelParams &params, double radius);

/// g(ell, alpha, beta) and its ell-derivative.
double g_value(const DualCertificate &cert, double ell, double alpha, double beta);
double g_slope(const DualCertificate &cert, double ell, double alpha, double beta);

struct SupResult {
    double value = 0.0;
    double argmax = 0.0;
};

/// Numerical supremum over ell: 512-node scan, then a bracketed root of
/// g' (or golden section when g' does not change sign). The domain is
/// [0, pi/sqrt(kappa)] for kappa > 0 and [0, 40 max(1, r)] otherwise; a
/// maximum on that artificial cap raises SearchCapError.
SupResult build_f(const DualCertificate &cert, double alpha, double beta);

/// Closed forms where known: f for kappa = 0 (n = 2, 4) and the maximizer
/// for kappa = 0 and (n, kappa) = (2, 1). Throw NotImplementedCase otherwise.
bool has_closed_form_f(const DualCertificate &cert);
double closed_form_f(const DualCertificate &cert, double alpha, double beta);
bool has_closed_form_argmax(const DualCertificate &cert);
double closed_form_argmax(const DualCertificate &cert, double alpha, double beta);

/// f from the closed form when available, else from build_f.
double evaluate_f(const DualCertificate &cert, double alpha, double beta);

struct MembershipReport {
    int grid = 0;
    double epsilon = 1e-3;
    double min_f = 0.0;
    double min_defect = 0.0;             // min of (f_ii + f_jj)/2 - f_ij
    double min_offdiagonal_defect = 0.0; // over |i - j| >= 2
    int near_zero_offdiagonal = 0;       // cells with |i - j| >= 2 and defect <= 1e-9
    bool passed = false;
};

/// f and its family defect on the grid alpha_i = i (pi/2 - eps)/(grid - 1).
MembershipReport check_family_membership(const DualCertificate &cert, int grid,
                                         double epsilon = 1e-3);

struct VerifyOptions {
    int grid = 50;
    bool require_nonnegative = true;
    double consistency_tol = 1e-8;
    double argmax_tol = 1e-8;
};

struct VerificationReport {
    DualCertificate cert;
    double consistency_residual = 0.0;
    double argmax_error = 0.0; // diagonal maximizer vs the chord curve
    MembershipReport membership;
    bool consistency_ok = false;
    bool sup_on_curve_ok = false;
    bool membership_ok = false;
    bool sign_ok = true;
    std::vector<std::string> flags;

    bool passed() const { return consistency_ok && sup_on_curve_ok && membership_ok && sign_ok; }
};

VerificationReport verify_certificate(const DualCertificate &cert,
                                      const VerifyOptions &options = {});

/// A_B for the ball of volume V. Refuses (DomainError) unless the report
/// passed and the certificate radius is that ball's radius.
double duality_lower_bound(const VerificationReport &report, double volume);

void to_json(nlohmann::json &j, const Coefficients &coeffs);
void to_json(nlohmann::json &j, const MembershipReport &report);
void to_json(nlohmann::json &j, const VerificationReport &report);

} // namespace isolp
