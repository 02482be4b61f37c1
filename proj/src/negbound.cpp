#include "isolp/negbound.hpp"

#include "isolp/errors.hpp"
#include "isolp/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace isolp {

namespace {

constexpr double rel_tol = 1e-10;
constexpr int max_depth = 12;

// Gauss-Kronrod bisection that also stops once the error is below
// `abs_floor`; the deficit u is exactly 0 for some spectra and a purely
// relative test would chase round-off there.
double adaptive(const std::function<double(double)> &f, double a, double b, double abs_floor,
                int depth = max_depth)
{
    if (a == b) {
        return 0.0;
    }
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &error);
    if (depth == 0 || error <= std::max(rel_tol * std::abs(value), abs_floor)) {
        return value;
    }
    const double mid = 0.5 * (a + b);
    return adaptive(f, a, mid, 0.5 * abs_floor, depth - 1) +
           adaptive(f, mid, b, 0.5 * abs_floor, depth - 1);
}

void check_angle(double angle, const char *what)
{
    if (!(angle >= 0.0 && angle < pi / 2) || std::cos(angle) <= 0.0) {
        throw DomainError(std::string("question1_margin: ") + what + " must lie in [0, pi/2)");
    }
}

} // namespace

SmallnessResult smallness_ok(const SmallnessInput &input)
{
    if (!(input.kappa < 0.0) || !(input.L > 0.0) || !(input.r > 0.0)) {
        throw DomainError("smallness: need kappa < 0, L > 0, r > 0");
    }
    const double root = std::sqrt(-input.kappa);
    SmallnessResult out;
    out.product = std::tanh(input.L * root) * std::tanh(input.r * root);
    out.ok = out.product <= 0.5;
    out.margin = 0.5 - out.product;
    return out;
}

double conjecture_residual(double radius, const DiscreteMeasure &measure)
{
    const BallGeometry ball = ball_from_radius({4, -1.0}, radius);
    const double t = std::tanh(radius);
    const double lhs = integrate(measure, Functional::croke1, ball.params) -
                       6.0 * t * integrate(measure, Functional::croke2, ball.params) +
                       9.0 * t * t * integrate(measure, Functional::croke3, ball.params);
    const double root = ball.area - 3.0 * t * ball.volume;
    return lhs - root * root;
}

Hyp2Residual hyp2_lemma_residual(double radius, const DiscreteMeasure &measure)
{
    const BallGeometry ball = ball_from_radius({2, -1.0}, radius);
    const double t = std::tanh(radius);
    const double lhs = integrate(measure, Functional::croke2, ball.params) -
                       t * integrate(measure, Functional::croke3, ball.params);
    const double av = ball.area * ball.volume;
    const double vv = ball.volume * ball.volume;
    return {lhs - (av - t * vv), lhs - (av - 2.0 * pi * t * vv)};
}

CandleDeficit candle_deficit(const CurvatureSpectrum &spectrum, double ell)
{
    if (!(ell > 0.0) || !std::isfinite(ell)) {
        throw DomainError("candle_deficit: ell must be positive and finite");
    }
    if (spectrum.kappas.empty()) {
        throw UsageError("candle_deficit: empty curvature spectrum");
    }
    // s_{-1} as the same product of one-dimensional candles, so that the
    // model spectrum gives u = 0 exactly.
    const CurvatureSpectrum comparison{std::vector<double>(spectrum.kappas.size(), -1.0)};
    const auto u = [&](double d) {
        return candle_from_spectrum(spectrum, d).value - candle_from_spectrum(comparison, d).value;
    };
    const double scale = std::abs(candle_from_spectrum(spectrum, ell).value) +
                         candle_from_spectrum(comparison, ell).value;
    const double floor = 1e-14 * scale * ell;

    CandleDeficit out;
    out.at_end = u(ell);
    out.from_start = adaptive([&](double y) { return u(y); }, 0.0, ell, floor);
    out.to_end = adaptive([&](double x) { return u(ell - x); }, 0.0, ell, floor);
    out.double_int = adaptive(
        [&](double y) {
            return adaptive([&](double x) { return u(y - x); }, 0.0, y, 1e-14 * scale * y);
        },
        0.0, ell, floor * ell);
    return out;
}

double question1_margin(const CandleDeficit &deficit, double r, double alpha, double beta)
{
    if (!(r > 0.0)) {
        throw DomainError("question1_margin: r must be positive");
    }
    check_angle(alpha, "alpha");
    check_angle(beta, "beta");
    const double ca = std::cos(alpha);
    const double cb = std::cos(beta);
    const double t = std::tanh(r);
    return deficit.at_end / (ca * cb) - 3.0 * t * (deficit.from_start / ca + deficit.to_end / cb) +
           9.0 * t * t * deficit.double_int;
}

double question1_margin(const CurvatureSpectrum &spectrum, double r, double ell, double alpha,
                        double beta)
{
    return question1_margin(candle_deficit(spectrum, ell), r, alpha, beta);
}

CurvatureSpectrum complex_hyperbolic_spectrum()
{
    return {{-9.0 / 4.0, -9.0 / 16.0, -9.0 / 16.0}};
}

CounterexampleResult ch2_counterexample_search(double ell_max, double r_max, int grid,
                                               const CurvatureSpectrum &spectrum)
{
    if (grid < 1) {
        throw UsageError("counterexample search: grid must be positive");
    }
    if (!(ell_max > 0.0) || !(r_max > 0.0)) {
        throw DomainError("counterexample search: bounds must be positive");
    }
    const auto n = static_cast<std::size_t>(grid);
    std::vector<CounterexampleResult> rows(n);
    parallel_for(n, [&](std::size_t j) {
        const double ell = static_cast<double>(j + 1) * ell_max / grid;
        const CandleDeficit deficit = candle_deficit(spectrum, ell);
        CounterexampleResult best;
        best.margin = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= grid; ++i) {
            const double r = i * r_max / grid;
            const double m = question1_margin(deficit, r, 0.0, 0.0);
            if (m < best.margin) {
                best.r = r;
                best.ell = ell;
                best.margin = m;
            }
        }
        rows[j] = best;
    });
    CounterexampleResult out = rows.front();
    for (const auto &row : rows) {
        if (row.margin < out.margin) {
            out = row;
        }
    }
    out.grid = grid;
    out.r_max = r_max;
    out.ell_max = ell_max;
    return out;
}

void to_json(nlohmann::json &j, const SmallnessInput &input)
{
    j = {{"kappa", input.kappa}, {"L", input.L}, {"r", input.r}};
}

void to_json(nlohmann::json &j, const SmallnessResult &result)
{
    j = {{"product", result.product}, {"ok", result.ok}, {"margin", result.margin}};
}

void to_json(nlohmann::json &j, const Hyp2Residual &residual)
{
    j = {{"bare", residual.bare}, {"two_pi", residual.two_pi}};
}

void to_json(nlohmann::json &j, const CounterexampleResult &result)
{
    j = {{"r", result.r},         {"ell", result.ell},         {"margin", result.margin},
         {"grid", result.grid},   {"r_max", result.r_max},     {"ell_max", result.ell_max}};
}

} // namespace isolp
