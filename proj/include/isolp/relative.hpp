#pragma once

// Domains in which any two points are joined by at most m geodesics. The
// extremal example is the quotient of the ball B_0 of volume mV by a rotation
// of order m, whose chord measure is mu_{B_0} / m and whose boundary has area
// |d B_0| / m.

#include "isolp/chord_measure.hpp"
#include "isolp/lp_builders.hpp"
#include "isolp/spaceform.hpp"

#include <json.hpp>

#include <cmath>

namespace isolp {

struct RelativeCase {
    ModelParams params;
    int m = 1;
    double volume = 0.0;
    /// Longest geodesic, only used for the smallness check when kappa < 0.
    double max_geodesic = NAN;
};

/// UsageError for m < 1; DomainError for V <= 0, m V beyond the hemisphere
/// (kappa > 0) or a failed smallness check (kappa < 0, max_geodesic set).
void validate(const RelativeCase &c);

/// |d B(m V)| / m.
double relative_bound(const RelativeCase &c);

DiscreteMeasure orbifold_measure(const RelativeCase &c, int nodes);

struct RelativeResiduals {
    double reference_area = 0.0; // A_R
    // Relative residuals of int F_i d(mu_R) against m A_R^2, m A_R V, m V^2
    // and of int ell d(mu_R) against omega_{n-1} V.
    double croke1 = 0.0;
    double croke2 = 0.0;
    double croke3 = 0.0;
    double santalo = 0.0;
    bool passed = false; // all four at most 1e-7 in absolute value
};

RelativeResiduals verify_relative_equality(const RelativeCase &c, int nodes);

struct RelativeLPCheck {
    Table2Variant variant = Table2Variant::corrected;
    double optimum = 0.0;
    double bound = 0.0;
    double relative_gap = 0.0; // optimum / bound - 1
    LPStatus status = LPStatus::tolerance_failure;
};

/// Solves the relative LP on the given grid with the default family of B(mV).
RelativeLPCheck relative_lp_check(const RelativeCase &c, const GridSpec &spec,
                                  Table2Variant variant);

void to_json(nlohmann::json &j, const RelativeResiduals &r);
void to_json(nlohmann::json &j, const RelativeLPCheck &r);

} // namespace isolp
