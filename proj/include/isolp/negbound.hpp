#pragma once

// Negative curvature (kappa = -1) checks: the smallness condition, the
// combined inequality used in dimension 4, the planar lemma, and a tester
// for the candle inequality along a geodesic in models with constant flag
// curvature, where j(x, y) depends on y - x only.

#include "isolp/chord_measure.hpp"
#include "isolp/spaceform.hpp"

#include <json.hpp>

namespace isolp {

struct SmallnessInput {
    double kappa = -1.0;
    double L = 0.0; // longest geodesic in M, may be +inf
    double r = 0.0; // radius of the comparison ball
};

struct SmallnessResult {
    double product = 0.0; // tanh(L sqrt(-kappa)) tanh(r sqrt(-kappa))
    bool ok = false;      // product <= 1/2
    double margin = 0.0;  // 1/2 - product
};

/// Throws DomainError unless kappa < 0, L > 0, r > 0.
SmallnessResult smallness_ok(const SmallnessInput &input);

/// int (F1 - 6 tanh(r) F2 + 9 tanh(r)^2 F3) d(mu) - (A - 3 tanh(r) V)^2 on
/// the ball B^4_{-1}(r).
double conjecture_residual(double radius, const DiscreteMeasure &measure);

/// Planar lemma, int (F2 - tanh(r) F3) d(mu) - (A V - w tanh(r) V^2) on
/// B^2_{-1}(r), for the printed weight w = 2 pi and for w = 1.
struct Hyp2Residual {
    double bare = 0.0;
    double two_pi = 0.0;
};

Hyp2Residual hyp2_lemma_residual(double radius, const DiscreteMeasure &measure);

/// Integrals of u(x, y) = j(x, y) - s_{-1}(y - x) along a chord of length ell.
struct CandleDeficit {
    double at_end = 0.0;     // u(0, ell)
    double from_start = 0.0; // int_0^ell u(0, y) dy
    double to_end = 0.0;     // int_0^ell u(x, ell) dx
    double double_int = 0.0; // int_0^ell int_0^y u(x, y) dx dy
};

/// Nested adaptive quadrature at relative tolerance 1e-10. The comparison
/// dimension is spectrum.dimension().
CandleDeficit candle_deficit(const CurvatureSpectrum &spectrum, double ell);

/// LHS - RHS of the candle inequality with coefficients 3 tanh(r) and
/// 9 tanh(r)^2; negative means the inequality fails.
double question1_margin(const CurvatureSpectrum &spectrum, double r, double ell, double alpha,
                        double beta);
double question1_margin(const CandleDeficit &deficit, double r, double alpha, double beta);

/// Jacobi spectrum of the complex hyperbolic plane scaled to curvature in
/// [-9/4, -9/16].
CurvatureSpectrum complex_hyperbolic_spectrum();

struct CounterexampleResult {
    double r = 0.0;
    double ell = 0.0;
    double margin = 0.0;
    int grid = 0;
    double r_max = 0.0;
    double ell_max = 0.0;
};

/// Most negative margin at cos(alpha) = cos(beta) = 1 over the grid
/// r_i = i r_max / grid, ell_j = j ell_max / grid, i, j = 1..grid. Ties go
/// to the smallest (ell, r) index.
CounterexampleResult ch2_counterexample_search(double ell_max, double r_max, int grid,
                                               const CurvatureSpectrum &spectrum =
                                                   complex_hyperbolic_spectrum());

void to_json(nlohmann::json &j, const SmallnessInput &input);
void to_json(nlohmann::json &j, const SmallnessResult &result);
void to_json(nlohmann::json &j, const Hyp2Residual &residual);
void to_json(nlohmann::json &j, const CounterexampleResult &result);

} // namespace isolp
