#include "isolp/spaceform.hpp"

#include "isolp/errors.hpp"
#include "isolp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace isolp {

namespace {

// Below this value of |kappa| t^2 the primitives are summed from their power
// series; the closed forms lose digits to cancellation there.
constexpr double series_threshold = 1.0;
constexpr int series_terms = 48;
constexpr int max_tabulated_dimension = 16;

using SeriesTable = std::array<double, series_terms>;

// Coefficients c_k with s_kappa(t) = t^{n-1} sum_k c_k (kappa t^2)^k.
SeriesTable compute_candle_series(int n)
{
    SeriesTable base{};
    double factorial = 1.0;
    for (int k = 0; k < series_terms; ++k) {
        if (k > 0) {
            factorial *= (2.0 * k) * (2.0 * k + 1.0);
        }
        base[k] = ((k % 2 == 0) ? 1.0 : -1.0) / factorial;
    }
    SeriesTable power{};
    power[0] = 1.0;
    for (int e = 0; e < n - 1; ++e) {
        SeriesTable next{};
        for (int i = 0; i < series_terms; ++i) {
            for (int j = 0; i + j < series_terms; ++j) {
                next[i + j] += power[i] * base[j];
            }
        }
        power = next;
    }
    return power;
}

const SeriesTable &candle_series(int n)
{
    static const auto tables = [] {
        std::array<SeriesTable, max_tabulated_dimension + 1> out{};
        for (int d = 2; d <= max_tabulated_dimension; ++d) {
            out[d] = compute_candle_series(d);
        }
        return out;
    }();
    if (n <= max_tabulated_dimension) {
        return tables[n];
    }
    thread_local SeriesTable scratch;
    scratch = compute_candle_series(n);
    return scratch;
}

// t^{n-1+order} sum_k c_k z^k / prod(...) with z = kappa t^2, for order 0, 1, 2.
double candle_series_value(int n, double kappa, double t, int order)
{
    const SeriesTable &c = candle_series(n);
    const double z = kappa * t * t;
    double sum = 0.0;
    double zk = 1.0;
    for (int k = 0; k < series_terms; ++k) {
        double term = c[k] * zk;
        const double e = n + 2.0 * k;
        if (order >= 1) {
            term /= e;
        }
        if (order >= 2) {
            term /= (e + 1.0);
        }
        sum += term;
        zk *= z;
        if (std::abs(zk) < 1e-300) {
            break;
        }
    }
    return sum * std::pow(t, n - 1 + order);
}

// Closed forms of s, s^, s^^ for curvature +1 (sign > 0) or -1, n in {2, 4}.
double unit_candle_anti(int n, int sign, double x)
{
    if (n == 2) {
        return sign > 0 ? 1.0 - std::cos(x) : std::cosh(x) - 1.0;
    }
    if (sign > 0) {
        const double s = std::sin(x);
        const double c = std::cos(x);
        return 2.0 / 3.0 - s * s * c / 3.0 - 2.0 * c / 3.0;
    }
    const double s = std::sinh(x);
    const double c = std::cosh(x);
    return 2.0 / 3.0 + s * s * c / 3.0 - 2.0 * c / 3.0;
}

double unit_candle_anti2(int n, int sign, double x)
{
    if (n == 2) {
        return sign > 0 ? x - std::sin(x) : std::sinh(x) - x;
    }
    if (sign > 0) {
        const double s = std::sin(x);
        return 2.0 * x / 3.0 - s * s * s / 9.0 - 2.0 * s / 3.0;
    }
    const double s = std::sinh(x);
    return 2.0 * x / 3.0 + s * s * s / 9.0 - 2.0 * s / 3.0;
}

double anti_below_conjugate(const ModelParams &params, double t, int order)
{
    const double k = params.kappa;
    if (k == 0.0) {
        const double n = params.n;
        return order == 1 ? std::pow(t, n) / n : std::pow(t, n + 1) / (n * (n + 1));
    }
    if (std::abs(k) * t * t <= series_threshold) {
        return candle_series_value(params.n, k, t, order);
    }
    if (params.n == 2 || params.n == 4) {
        const double root = std::sqrt(std::abs(k));
        const int sign = k > 0 ? 1 : -1;
        const double x = root * t;
        if (order == 1) {
            return unit_candle_anti(params.n, sign, x) / std::pow(root, params.n);
        }
        return unit_candle_anti2(params.n, sign, x) / std::pow(root, params.n + 1);
    }
    // Generic dimension: s^(t) = int_0^t s, s^^(t) = int_0^t (t - u) s(u) du.
    // The integrand is entire, so fixed panels of unit width in sqrt|k| u suffice.
    const int panels = 1 + static_cast<int>(std::ceil(std::sqrt(std::abs(k)) * t));
    if (order == 1) {
        return integrate_composite([&](double u) { return candle(params, u); }, 0.0, t, panels);
    }
    return integrate_composite([&](double u) { return (t - u) * candle(params, u); }, 0.0, t,
                               panels);
}

void require_nonnegative_length(double t, const char *what)
{
    if (!(t >= 0.0)) {
        throw DomainError(std::string(what) + ": length must be non-negative");
    }
}

} // namespace

void validate(const ModelParams &params)
{
    if (params.n < 2) {
        throw DomainError("dimension must be at least 2");
    }
    if (!std::isfinite(params.kappa)) {
        throw DomainError("curvature bound must be finite");
    }
}

double sphere_volume(int k)
{
    if (k < 0) {
        throw DomainError("sphere_volume: negative dimension");
    }
    const double h = 0.5 * (k + 1);
    return 2.0 * std::pow(pi, h) / std::tgamma(h);
}

double sn(double kappa, double t)
{
    if (kappa > 0.0) {
        const double root = std::sqrt(kappa);
        return std::sin(root * t) / root;
    }
    if (kappa < 0.0) {
        const double root = std::sqrt(-kappa);
        return std::sinh(root * t) / root;
    }
    return t;
}

double cs(double kappa, double t)
{
    if (kappa > 0.0) {
        return std::cos(std::sqrt(kappa) * t);
    }
    if (kappa < 0.0) {
        return std::cosh(std::sqrt(-kappa) * t);
    }
    return 1.0;
}

double tn(double kappa, double t)
{
    if (kappa > 0.0) {
        const double root = std::sqrt(kappa);
        return std::tan(root * t) / root;
    }
    if (kappa < 0.0) {
        const double root = std::sqrt(-kappa);
        return std::tanh(root * t) / root;
    }
    return t;
}

double atn(double kappa, double y)
{
    if (kappa > 0.0) {
        const double root = std::sqrt(kappa);
        return std::atan(root * y) / root;
    }
    if (kappa < 0.0) {
        const double root = std::sqrt(-kappa);
        return std::atanh(root * y) / root;
    }
    return y;
}

double conjugate_distance(double kappa)
{
    if (kappa > 0.0) {
        return pi / std::sqrt(kappa);
    }
    return std::numeric_limits<double>::infinity();
}

double candle(const ModelParams &params, double t)
{
    require_nonnegative_length(t, "candle");
    if (t >= conjugate_distance(params.kappa)) {
        return 0.0;
    }
    const double base = sn(params.kappa, t);
    if (params.n == 2) {
        return base;
    }
    return std::pow(base, params.n - 1);
}

double candle_derivative(const ModelParams &params, double t)
{
    require_nonnegative_length(t, "candle_derivative");
    if (t >= conjugate_distance(params.kappa)) {
        return 0.0;
    }
    const double c = cs(params.kappa, t);
    if (params.n == 2) {
        return c;
    }
    return (params.n - 1) * std::pow(sn(params.kappa, t), params.n - 2) * c;
}

double candle_anti(const ModelParams &params, double t)
{
    require_nonnegative_length(t, "candle_anti");
    const double limit = conjugate_distance(params.kappa);
    return anti_below_conjugate(params, std::min(t, limit), 1);
}

double candle_anti2(const ModelParams &params, double t)
{
    require_nonnegative_length(t, "candle_anti2");
    const double limit = conjugate_distance(params.kappa);
    if (t <= limit) {
        return anti_below_conjugate(params, t, 2);
    }
    return anti_below_conjugate(params, limit, 2) +
           anti_below_conjugate(params, limit, 1) * (t - limit);
}

double hemisphere_volume(const ModelParams &params)
{
    if (params.kappa <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::pow(params.kappa, -0.5 * params.n) * sphere_volume(params.n) / 2.0;
}

double ball_volume(const ModelParams &params, double radius)
{
    return sphere_volume(params.n - 1) * candle_anti(params, radius);
}

double ball_area(const ModelParams &params, double radius)
{
    return sphere_volume(params.n - 1) * candle(params, radius);
}

BallGeometry ball_from_radius(const ModelParams &params, double radius)
{
    validate(params);
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("ball radius must be positive and finite");
    }
    if (params.kappa > 0.0 && radius > 0.5 * conjugate_distance(params.kappa) * (1.0 + 1e-14)) {
        throw DomainError("ball radius exceeds the hemisphere radius");
    }
    return BallGeometry{params, ball_volume(params, radius), radius, ball_area(params, radius)};
}

BallGeometry ball_from_volume(const ModelParams &params, double volume)
{
    validate(params);
    if (!(volume > 0.0) || !std::isfinite(volume)) {
        throw DomainError("ball volume must be positive and finite");
    }
    const double bound = hemisphere_volume(params);
    if (volume > bound * (1.0 + 1e-12)) {
        throw DomainError("volume exceeds the hemisphere bound kappa^{-n/2} omega_n / 2");
    }
    const double omega = sphere_volume(params.n - 1);
    auto residual = [&](double r) { return omega * candle_anti(params, r) - volume; };

    const double flat_guess = std::pow(params.n * volume / omega, 1.0 / params.n);
    double lo = 0.0;
    double hi = 0.0;
    if (params.kappa > 0.0) {
        hi = 0.5 * conjugate_distance(params.kappa);
        if (volume >= bound) {
            return BallGeometry{params, volume, hi, ball_area(params, hi)};
        }
    } else {
        hi = std::max(flat_guess, 1e-300);
        while (residual(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
        }
    }
    double r = std::clamp(flat_guess, lo, hi);
    if (r <= lo || r >= hi) {
        r = 0.5 * (lo + hi);
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double f = residual(r);
        if (f == 0.0) {
            break;
        }
        if (f < 0.0) {
            lo = r;
        } else {
            hi = r;
        }
        const double slope = omega * candle(params, r);
        double next = slope > 0.0 ? r - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - r);
        r = next;
        if (step <= 1e-15 * r || hi - lo <= 1e-15 * hi) {
            break;
        }
    }
    return BallGeometry{params, volume, r, ball_area(params, r)};
}

namespace {

void check_chord_radius(double kappa, double radius)
{
    if (!(radius > 0.0)) {
        throw DomainError("chord function: radius must be positive");
    }
    if (kappa > 0.0 && std::sqrt(kappa) * radius >= 0.5 * pi) {
        throw DomainError("chord function: ball must be smaller than a hemisphere");
    }
}

double clamp_chord(double radius, double ell)
{
    const double top = 2.0 * radius;
    if (!(ell >= 0.0) || ell > top * (1.0 + 1e-12)) {
        throw DomainError("chord length outside [0, 2r]");
    }
    return std::min(ell, top);
}

} // namespace

double chord_T(double kappa, double radius, double ell)
{
    check_chord_radius(kappa, radius);
    ell = clamp_chord(radius, ell);
    if (ell == 2.0 * radius) {
        return 1.0;
    }
    return tn(kappa, 0.5 * ell) / tn(kappa, radius);
}

double chord_T_derivative(double kappa, double radius, double ell)
{
    check_chord_radius(kappa, radius);
    ell = clamp_chord(radius, ell);
    const double half = tn(kappa, 0.5 * ell);
    return 0.5 * (1.0 + kappa * half * half) / tn(kappa, radius);
}

double chord_length_from_cos(double kappa, double radius, double c)
{
    check_chord_radius(kappa, radius);
    if (!(c >= 0.0) || c > 1.0 + 1e-15) {
        throw DomainError("chord_length_from_cos: cosine outside [0, 1]");
    }
    if (c >= 1.0) {
        return 2.0 * radius;
    }
    return 2.0 * atn(kappa, c * tn(kappa, radius));
}

double delta_weight(int n, double alpha)
{
    if (n < 2) {
        throw DomainError("delta_weight: dimension must be at least 2");
    }
    if (alpha < -1e-15 || alpha > 0.5 * pi + 1e-15) {
        throw DomainError("delta_weight: angle outside [0, pi/2]");
    }
    const double c = std::max(0.0, std::cos(alpha));
    if (n == 2) {
        return 2.0 * c;
    }
    return sphere_volume(n - 2) * std::pow(std::sin(alpha), n - 2) * c;
}

SpectrumCandle candle_from_spectrum(const CurvatureSpectrum &spectrum, double t)
{
    require_nonnegative_length(t, "candle_from_spectrum");
    SpectrumCandle out{1.0, false};
    for (double k : spectrum.kappas) {
        if (!std::isfinite(k)) {
            throw DomainError("curvature spectrum entries must be finite");
        }
        if (t > conjugate_distance(k)) {
            return SpectrumCandle{0.0, true};
        }
        out.value *= sn(k, t);
    }
    return out;
}

} // namespace isolp
