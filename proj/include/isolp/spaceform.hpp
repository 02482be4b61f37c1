#pragma once

// Constant-curvature model spaces S^n_kappa: candle functions (normalized
// Jacobians of the exponential map), their primitives, metric balls and the
// chord function T describing chords of a ball seen from a boundary point.

#include <limits>
#include <vector>

namespace isolp {

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Dimension n and curvature bound kappa of a comparison space form.
struct ModelParams {
    int n = 2;
    double kappa = 0.0;

    friend bool operator==(const ModelParams &, const ModelParams &) = default;
};

/// Throws DomainError unless n >= 2 and kappa is finite.
void validate(const ModelParams &params);

/// Metric ball of S^n_kappa. `area` is the boundary volume A_B.
struct BallGeometry {
    ModelParams params;
    double volume = 0.0;
    double radius = 0.0;
    double area = 0.0;

    double max_chord() const { return 2.0 * radius; }
};

/// Volume of the unit k-sphere, omega_k = 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double sphere_volume(int k);

/// One-dimensional candle sn_kappa(t): sin(sqrt(k) t)/sqrt(k), t, or
/// sinh(sqrt(-k) t)/sqrt(-k).
double sn(double kappa, double t);
/// cos(sqrt(k) t), 1 or cosh(sqrt(-k) t); the derivative of sn.
double cs(double kappa, double t);
/// tan(sqrt(k) t)/sqrt(k) and its hyperbolic/flat analogues.
double tn(double kappa, double t);
/// Inverse of tn for the same kappa.
double atn(double kappa, double y);

/// First conjugate distance pi/sqrt(kappa), +inf when kappa <= 0.
double conjugate_distance(double kappa);

/// s_kappa(t) = sn_kappa(t)^{n-1}, set to zero past the conjugate distance.
double candle(const ModelParams &params, double t);
/// d/dt s_kappa(t).
double candle_derivative(const ModelParams &params, double t);
/// Primitive of the candle vanishing at 0. For kappa > 0 it is constant past
/// the conjugate distance.
double candle_anti(const ModelParams &params, double t);
/// Second primitive; linear past the conjugate distance when kappa > 0.
double candle_anti2(const ModelParams &params, double t);

/// kappa^{-n/2} omega_n / 2, or +inf for kappa <= 0.
double hemisphere_volume(const ModelParams &params);

double ball_volume(const ModelParams &params, double radius);
double ball_area(const ModelParams &params, double radius);

/// Ball of prescribed volume. The radius is found by bisection-safeguarded
/// Newton iteration on V = omega_{n-1} s^(r), relative tolerance 1e-12.
BallGeometry ball_from_volume(const ModelParams &params, double volume);
BallGeometry ball_from_radius(const ModelParams &params, double radius);

/// Chords of a ball of radius r starting at a boundary point satisfy
/// cos(alpha) = T(ell). Defined for 0 <= ell <= 2r.
double chord_T(double kappa, double radius, double ell);
/// dT/d(ell).
double chord_T_derivative(double kappa, double radius, double ell);
/// Inverse of chord_T: the chord length whose angle has cosine c in [0, 1].
double chord_length_from_cos(double kappa, double radius, double c);

/// delta^n(alpha) = omega_{n-2} sin^{n-2}(alpha) cos(alpha), alpha in [0, pi/2].
double delta_weight(int n, double alpha);

/// Principal curvatures kappa_1..kappa_{n-1} along a geodesic.
struct CurvatureSpectrum {
    std::vector<double> kappas;

    int dimension() const { return static_cast<int>(kappas.size()) + 1; }
};

struct SpectrumCandle {
    double value = 0.0;
    bool beyond_conjugate = false;
};

/// Product of the one-dimensional candles sn_{kappa_i}(t). Past the first
/// conjugate point the value is 0 and the flag is set.
SpectrumCandle candle_from_spectrum(const CurvatureSpectrum &spectrum, double t);

} // namespace isolp
