#pragma once

#include <functional>
#include <vector>

namespace isolp {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// N-point Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int count, double a = -1.0, double b = 1.0);

/// Adaptive Gauss-Kronrod (31 point) integral of f over [a, b] with relative
/// tolerance `rel_tol`. Endpoints are never evaluated.
double integrate_adaptive(const std::function<double(double)> &f, double a, double b,
                          double rel_tol = 1e-12);

/// Composite Gauss-Legendre: `panels` equal panels, `order` nodes each. For
/// smooth integrands where adaptive bisection would chase round-off.
double integrate_composite(const std::function<double(double)> &f, double a, double b,
                           int panels, int order = 32);

} // namespace isolp
