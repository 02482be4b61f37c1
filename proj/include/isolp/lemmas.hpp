#pragma once

// The two technical lemmas behind the four-dimensional certificates for
// kappa = 1 and kappa = -1, in the variables
//   t = tan(ell/2) (spherical) or tanh(ell/2) (hyperbolic),
//   p = 1/(3 tn(r) cos alpha),  q = 1/(3 tn(r) cos beta).
// G(t, p, q) is the certificate's g divided by 9 tn(r)^2 and
//   H(t, p, q) = G(1/3p, p, p) + G(1/3q, q, q) - 2 G(t, p, q).
// Critical points of H are found by multistart Gauss-Newton on the
// numerators of its gradient; this is a numerical check, not a symbolic one.

#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace isolp {

enum class LemmaCase { spherical, hyperbolic };

std::string to_string(LemmaCase c);
LemmaCase lemma_case_from_string(const std::string &name);

/// S_i(t) = s^{(i)}(ell) for s = sin^3 or sinh^3 and i = 1, 0, -1, -2.
struct STable {
    double s1 = 0.0;
    double s0 = 0.0;
    double sm1 = 0.0;
    double sm2 = 0.0;
};

/// Throws DomainError for t < 0, or t >= 1 in the hyperbolic case.
STable S_table(LemmaCase c, double t);

struct LemmaPoint {
    double t = 0.0;
    double p = 0.0;
    double q = 0.0;
};

/// The change of variables from (ell, alpha, beta) for a ball of radius r.
LemmaPoint lemma_vars(LemmaCase c, double radius, double ell, double alpha, double beta);

double G(LemmaCase c, double t, double p, double q);
/// Throws DomainError unless p, q > 0 (spherical) or p, q > 1/3 (hyperbolic).
double H(LemmaCase c, double t, double p, double q);

/// Closed form of dG/dt.
double dGdt(LemmaCase c, double t, double p, double q);

/// Gradient of H from the numerator polynomials and their positive
/// denominators.
std::array<double, 3> H_gradient(LemmaCase c, double t, double p, double q);

/// 12p^2t^4 - 16pt^3 + (4 - 12p^2)t^2 + 4/3 - 4(3pt - 1)(pt^3 - t^2 - pt - 1/3).
double check_factorization(double p, double t);

/// Sign of (1 - 3pt)(pt^3 - t^2 + pt + 1/3), which is the sign of the
/// hyperbolic dG/dt(t, p, p).
int hyperbolic_slice_sign(double p, double t);

struct IdentityCheck {
    double derivative = 0.0;  // central difference
    double closed_form = 0.0; // 216 p^4 / (9p^2 + 1)^2
    double residual = 0.0;
};

/// d/dp (G(1/3p, p, p) + 8p/3 - 2pi/3) in the spherical case.
IdentityCheck dGdp_identity(double p);

struct SliceMax {
    double argmax = 0.0;
    double value = 0.0;
    double expected_argmax = 0.0; // 1/(3p)
    double tail_limit = 0.0;      // spherical: 2pi/3 - 8p/3 as t -> inf; NaN otherwise
};

/// Maximizer of G(., p, p) over the case domain: scan, then a bracketed
/// root of dG/dt around the best node.
SliceMax slice_maximizer(LemmaCase c, double p);

/// Integer exponents (t, p, q) and a coefficient.
struct Monomial {
    int t = 0;
    int p = 0;
    int q = 0;
    double coeff = 0.0;
};

struct Polynomial {
    std::vector<Monomial> terms;

    double operator()(double t, double p, double q) const;
    std::array<double, 3> gradient(double t, double p, double q) const;
    /// Sum of |terms| at a point, the natural scale of the value there.
    double magnitude(double t, double p, double q) const;
    int degree(int variable) const; // 0: t, 1: p, 2: q
    Polynomial swapped_pq() const;
};

struct Box {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};
    bool contains(const LemmaPoint &x) const;
};

struct PolySystem {
    LemmaCase lemma_case = LemmaCase::spherical;
    std::vector<Polynomial> equations; // numerators of dH/dt, dH/dp, dH/dq
    std::array<std::string, 3> variables{"t", "p", "q"};
    Box box;
};

/// Numerator system of dH = 0 with the default search box of the case.
PolySystem critical_system(LemmaCase c);

/// Euclidean distance from (t, p, q) to the curve p = q = 1/(3t).
double curve_distance(const LemmaPoint &x);

struct CriticalRoot {
    LemmaPoint point;
    double residual = 0.0; // max |equation| / magnitude
    double curve_distance = 0.0;
    double h_value = 0.0;
    int multiplicity = 1; // converged starts merged into this root
};

struct CriticalReport {
    std::vector<CriticalRoot> roots;
    int starts = 0;
    int converged = 0;
    int singular_starts = 0; // Jacobian of rank < 2 at the start
    int not_converged = 0;   // stalled or pinned to the box
    double max_curve_distance = 0.0;
    double max_h_value = 0.0;
};

/// Damped Gauss-Newton from `n_starts` counter-seeded points in the box,
/// minimum-norm steps (the solution set is a curve, so the Jacobian has
/// rank 2 there). Roots closer than 1e-6 are merged.
CriticalReport solve_critical_points(const PolySystem &system, const Box &box, int n_starts,
                                     std::uint64_t seed);

struct HGridSpec {
    int points = 120; // per axis
    double t_lo = 0.0;
    double t_hi = 0.0;
    double pq_lo = 0.0;
    double pq_hi = 0.0;
};

/// t in [0.02, 4], p, q in [0.05, 6]; hyperbolic t in [0.01, 0.99], p, q in [0.34, 6].
HGridSpec default_h_grid(LemmaCase c, int points = 120);

struct EscapeRay {
    std::string name;
    std::vector<double> values; // H along the ray, approaching the limit
    double liminf_estimate = 0.0; // min over the last third of the values
    bool ok = false;
};

std::vector<EscapeRay> escape_rays(LemmaCase c);

struct HScan {
    LemmaCase lemma_case = LemmaCase::spherical;
    HGridSpec grid;
    double min_value = 0.0;
    LemmaPoint argmin;
    double argmin_curve_distance = 0.0;
    double grid_diagonal = 0.0;
    std::vector<EscapeRay> rays;
    bool passed = false; // min >= -1e-9, argmin near the curve, all rays ok
};

HScan verify_H_nonneg(LemmaCase c, const HGridSpec &grid);

void to_json(nlohmann::json &j, const LemmaPoint &x);
void to_json(nlohmann::json &j, const CriticalRoot &root);
void to_json(nlohmann::json &j, const CriticalReport &report);
void to_json(nlohmann::json &j, const EscapeRay &ray);
void to_json(nlohmann::json &j, const HScan &scan);

} // namespace isolp
