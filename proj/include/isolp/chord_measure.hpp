#pragma once

// Measures on geodesic chords of a ball, in the coordinates (ell, alpha, beta):
// chord length and the angles the chord makes with the inner normal at its
// two endpoints.

#include "isolp/spaceform.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace isolp {

struct ChordAtom {
    double ell = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double mass = 0.0;

    friend bool operator==(const ChordAtom &, const ChordAtom &) = default;
};

enum class MeasureSource { quadrature, monte_carlo, external };

std::string to_string(MeasureSource source);
MeasureSource measure_source_from_string(const std::string &name);

struct DiscreteMeasure {
    std::vector<ChordAtom> atoms;
    MeasureSource source = MeasureSource::external;
    std::optional<std::uint64_t> seed; // set for Monte Carlo measures

    double total_mass() const;
};

/// Density of the ell-marginal of the ball's chord measure,
/// A_B delta^n(alpha(ell)) |d alpha / d ell| with cos alpha(ell) = T(ell).
double ball_chord_density(const BallGeometry &ball, double ell);

/// A_B omega_{n-2} / (n-1).
double ball_measure_mass(const BallGeometry &ball);

/// Gauss-Legendre discretization of the ball measure. Nodes are placed in
/// alpha on (0, pi/2), which is ell pulled back through the chord curve and
/// absorbs the endpoint singularity at ell = 2r. Each atom lies on the curve
/// cos(alpha) = cos(beta) = T(ell).
DiscreteMeasure discretize_ball_measure(const BallGeometry &ball, int nodes);

/// Equal-mass Monte Carlo sample of the ball measure. Atom i depends only on
/// (seed, i).
DiscreteMeasure sample_chords(const BallGeometry &ball, int count, std::uint64_t seed);

/// Uniform double in (0, 1) from a counter-based generator.
double counter_uniform(std::uint64_t seed, std::uint64_t index);

enum class Functional {
    croke1, // s(ell) / (cos a cos b)
    croke2, // (s^(ell)/2)(1/cos a + 1/cos b)
    croke3, // s^^(ell)
    length, // ell
};

using PairFunction = std::function<double(double alpha, double beta)>;

/// Value of a functional at one chord. Throws InfiniteContribution for
/// croke1/croke2 at cos(alpha) = 0 or cos(beta) = 0.
double evaluate(Functional which, const ModelParams &params, const ChordAtom &atom);

/// Sum of mass * F over the atoms (compensated summation).
double integrate(const DiscreteMeasure &measure, Functional which, const ModelParams &params);
double integrate(const DiscreteMeasure &measure, const PairFunction &f);

struct Estimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Integral with its Monte Carlo standard error. Assumes equal masses.
Estimate integrate_with_error(const DiscreteMeasure &measure, Functional which,
                              const ModelParams &params);

/// int ell d(mu) - omega_{n-1} V.
double santalo_residual(const BallGeometry &ball, const DiscreteMeasure &measure);

/// int F_which d(mu) - {A^2, A V, V^2}[which], which in {1, 2, 3}.
double croke_residual(const BallGeometry &ball, const DiscreteMeasure &measure, int which);
/// The right-hand side subtracted by croke_residual.
double croke_target(const BallGeometry &ball, int which);

void write_csv(std::ostream &out, const DiscreteMeasure &measure);
/// Reads `ell,alpha,beta,mass` rows after a header line. Source is external.
DiscreteMeasure read_csv(std::istream &in);

void to_json(nlohmann::json &j, const ChordAtom &atom);
void from_json(const nlohmann::json &j, ChordAtom &atom);
void to_json(nlohmann::json &j, const DiscreteMeasure &measure);
void from_json(const nlohmann::json &j, DiscreteMeasure &measure);

} // namespace isolp
