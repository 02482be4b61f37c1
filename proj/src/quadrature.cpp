#include "isolp/quadrature.hpp"

#include "isolp/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace isolp {

GaussRule gauss_legendre(int count, double a, double b)
{
    if (count < 1) {
        throw UsageError("gauss_legendre: count must be positive");
    }
    GaussRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    const int m = (count + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_count.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Re-evaluate the derivative at the converged node.
        {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = count * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[count - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[count - 1 - i] = half * w;
    }
    if (count % 2 == 1) {
        rule.nodes[count / 2] = mid;
    }
    return rule;
}

double integrate_adaptive(const std::function<double(double)> &f, double a, double b,
                          double rel_tol)
{
    if (a == b) {
        return 0.0;
    }
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol,
                                                                        &error);
}

double integrate_composite(const std::function<double(double)> &f, double a, double b,
                           int panels, int order)
{
    if (panels < 1) {
        throw UsageError("integrate_composite: panels must be positive");
    }
    const GaussRule unit = gauss_legendre(order, 0.0, 1.0);
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double left = a + p * width;
        double part = 0.0;
        for (int i = 0; i < order; ++i) {
            part += unit.weights[i] * f(left + width * unit.nodes[i]);
        }
        total += part * width;
    }
    return total;
}

} // namespace isolp
