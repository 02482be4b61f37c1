#include "isolp/lemmas.hpp"

#include "isolp/chord_measure.hpp"
#include "isolp/errors.hpp"
#include "isolp/parallel.hpp"
#include "isolp/spaceform.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace isolp {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// Taylor coefficients of S_{-2} at t = 0: t^5, t^7, ..., t^29. The
// hyperbolic series has the same coefficients without the alternating sign.
constexpr double sm2_series[] = {8.0 / 5,      88.0 / 21,   208.0 / 27,  400.0 / 33,
                                 680.0 / 39,   1064.0 / 45, 1568.0 / 51, 736.0 / 19,
                                 1000.0 / 21,  1320.0 / 23, 5104.0 / 75, 6448.0 / 81,
                                 8008.0 / 87};

template <class R>
R sm2_small(R t, R sign)
{
    const R t2 = t * t;
    R sum = 0;
    R alternate = 1;
    R power = t2 * t2 * t;
    for (const double c : sm2_series) {
        sum += alternate * static_cast<R>(c) * power;
        power *= t2;
        alternate *= sign;
    }
    return sum;
}

// S_table in the working precision R. H is evaluated in long double: near
// t = 1 (hyperbolic) the terms of G grow like (1 - t^2)^{-3} and cancel.
template <class R>
std::array<R, 4> s_values(LemmaCase c, R t)
{
    const R t2 = t * t;
    const R t3 = t2 * t;
    const R third = R(1) / 3;
    if (c == LemmaCase::spherical) {
        const R u = 1 + t2;
        const R u3 = u * u * u;
        const R sm2 = t < R(0.15) ? sm2_small(t, R(-1))
                                  : 4 * third * std::atan(t) - 8 * third * third * t3 / u3 -
                                        4 * third * t / u;
        return {12 * t2 * (1 - t2) / u3, 8 * t3 / u3, 4 * third * t2 * t2 * (3 + t2) / u3, sm2};
    }
    const R v = 1 - t2;
    const R v3 = v * v * v;
    const R sm2 = t < R(0.15) ? sm2_small(t, R(1))
                              : 4 * third * std::atanh(t) + 8 * third * third * t3 / v3 -
                                    4 * third * t / v;
    return {12 * t2 * (1 + t2) / v3, 8 * t3 / v3, 4 * third * t2 * t2 * (3 - t2) / v3, sm2};
}

template <class R>
R g_impl(LemmaCase c, R t, R p, R q)
{
    const auto s = s_values(c, t);
    const R lead = R(8) / 3 * (c == LemmaCase::spherical ? std::atan(t) : std::atanh(t));
    const R sign = c == LemmaCase::spherical ? R(-1) : R(1);
    return lead - p * q * s[1] + sign * (p + q) * s[2] - s[3];
}

void check_t(LemmaCase c, double t)
{
    if (!(t >= 0.0) || (c == LemmaCase::hyperbolic && !(t < 1.0))) {
        throw DomainError("lemma variable t outside the case domain");
    }
}

double pq_floor(LemmaCase c)
{
    return c == LemmaCase::spherical ? 0.0 : 1.0 / 3.0;
}

double on_curve(LemmaCase c, double p)
{
    return G(c, 1.0 / (3.0 * p), p, p);
}

Polynomial make(std::initializer_list<Monomial> terms)
{
    return Polynomial{std::vector<Monomial>(terms)};
}

double ipow(double x, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r *= x;
    }
    return r;
}

} // namespace

std::string to_string(LemmaCase c)
{
    return c == LemmaCase::spherical ? "spherical" : "hyperbolic";
}

LemmaCase lemma_case_from_string(const std::string &name)
{
    if (name == "spherical") {
        return LemmaCase::spherical;
    }
    if (name == "hyperbolic") {
        return LemmaCase::hyperbolic;
    }
    throw UsageError("unknown lemma case: " + name);
}

STable S_table(LemmaCase c, double t)
{
    check_t(c, t);
    const auto v = s_values<double>(c, t);
    return {v[0], v[1], v[2], v[3]};
}

LemmaPoint lemma_vars(LemmaCase c, double radius, double ell, double alpha, double beta)
{
    const double kappa = c == LemmaCase::spherical ? 1.0 : -1.0;
    const double tr = tn(kappa, radius);
    const double half = 0.5 * ell;
    return {c == LemmaCase::spherical ? std::tan(half) : std::tanh(half),
            1.0 / (3.0 * tr * std::cos(alpha)), 1.0 / (3.0 * tr * std::cos(beta))};
}

double G(LemmaCase c, double t, double p, double q)
{
    check_t(c, t);
    return g_impl<double>(c, t, p, q);
}

double H(LemmaCase c, double t, double p, double q)
{
    const double floor = pq_floor(c);
    if (!(p > floor && q > floor)) {
        throw DomainError("H: p and q must exceed the case's lower bound");
    }
    check_t(c, t);
    using L = long double;
    const L lp = p;
    const L lq = q;
    const L value = g_impl<L>(c, 1 / (3 * lp), lp, lp) + g_impl<L>(c, 1 / (3 * lq), lq, lq) -
                    2 * g_impl<L>(c, L(t), lp, lq);
    return static_cast<double>(value);
}

double dGdt(LemmaCase c, double t, double p, double q)
{
    check_t(c, t);
    const double t2 = t * t;
    if (c == LemmaCase::spherical) {
        const double u = 1.0 + t2;
        const double poly = 12.0 * p * q * t2 * t2 - 8.0 * (p + q) * t2 * t +
                            (4.0 - 12.0 * p * q) * t2 + 4.0 / 3.0;
        return 2.0 * poly / (u * u * u * u);
    }
    const double v = 1.0 - t2;
    const double poly = 9.0 * p * q * t2 * t2 + 9.0 * p * q * t2 - 6.0 * (p + q) * t2 * t +
                        3.0 * t2 - 1.0;
    return -8.0 / 3.0 * poly / (v * v * v * v);
}

std::array<double, 3> H_gradient(LemmaCase c, double t, double p, double q)
{
    const PolySystem sys = critical_system(c);
    const double nt = sys.equations[0](t, p, q);
    const double np = sys.equations[1](t, p, q);
    const double nq = sys.equations[2](t, p, q);
    const double t2 = t * t;
    if (c == LemmaCase::spherical) {
        const double u = 1.0 + t2;
        const double u3 = u * u * u;
        const double dp = 9.0 * p * p + 1.0;
        const double dq = 9.0 * q * q + 1.0;
        return {-16.0 / 3.0 * nt / (u3 * u), 8.0 * np / (3.0 * dp * dp * u3),
                8.0 * nq / (3.0 * dq * dq * u3)};
    }
    const double v = 1.0 - t2;
    const double v3 = v * v * v;
    const double dp = 9.0 * p * p - 1.0;
    const double dq = 9.0 * q * q - 1.0;
    return {16.0 / 3.0 * nt / (v3 * v), 8.0 * np / (3.0 * dp * dp * v3),
            8.0 * nq / (3.0 * dq * dq * v3)};
}

double check_factorization(double p, double t)
{
    const double t2 = t * t;
    const double lhs = 12.0 * p * p * t2 * t2 - 16.0 * p * t2 * t + (4.0 - 12.0 * p * p) * t2 +
                       4.0 / 3.0;
    const double rhs = 4.0 * (3.0 * p * t - 1.0) * (p * t2 * t - t2 - p * t - 1.0 / 3.0);
    return lhs - rhs;
}

int hyperbolic_slice_sign(double p, double t)
{
    const double v = (1.0 - 3.0 * p * t) * (p * t * t * t - t * t + p * t + 1.0 / 3.0);
    return (v > 0.0) - (v < 0.0);
}

IdentityCheck dGdp_identity(double p)
{
    if (!(p > 0.0)) {
        throw DomainError("dGdp_identity: p must be positive");
    }
    const auto F = [](double x) {
        return on_curve(LemmaCase::spherical, x) + 8.0 / 3.0 * x - 2.0 * pi / 3.0;
    };
    const double h = 1e-4 * p;
    IdentityCheck out;
    // Fourth-order central difference.
    out.derivative = (8.0 * (F(p + h) - F(p - h)) - (F(p + 2 * h) - F(p - 2 * h))) / (12.0 * h);
    const double d = 9.0 * p * p + 1.0;
    out.closed_form = 216.0 * ipow(p, 4) / (d * d);
    out.residual = out.derivative - out.closed_form;
    return out;
}

SliceMax slice_maximizer(LemmaCase c, double p)
{
    if (!(p > pq_floor(c))) {
        throw DomainError("slice_maximizer: p outside the case domain");
    }
    constexpr int nodes = 4000;
    std::vector<double> ts(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double x = (i + 1.0) / (nodes + 1.0);
        ts[static_cast<std::size_t>(i)] = c == LemmaCase::spherical ? std::tan(0.5 * pi * x) : x;
    }
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double v = G(c, ts[i], p, p);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    SliceMax out;
    out.argmax = ts[best];
    out.value = best_value;
    out.expected_argmax = 1.0 / (3.0 * p);
    out.tail_limit = c == LemmaCase::spherical ? 2.0 * pi / 3.0 - 8.0 / 3.0 * p : nan_value;
    if (best > 0 && best + 1 < ts.size()) {
        const double lo = ts[best - 1];
        const double hi = ts[best + 1];
        const auto slope = [&](double x) { return dGdt(c, x, p, p); };
        if (slope(lo) > 0.0 && slope(hi) < 0.0) {
            std::uintmax_t iterations = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(
                slope, lo, hi, boost::math::tools::eps_tolerance<double>(52), iterations);
            out.argmax = 0.5 * (a + b);
            out.value = G(c, out.argmax, p, p);
        }
    }
    return out;
}

double Polynomial::operator()(double t, double p, double q) const
{
    double sum = 0.0;
    for (const auto &m : terms) {
        sum += m.coeff * ipow(t, m.t) * ipow(p, m.p) * ipow(q, m.q);
    }
    return sum;
}

std::array<double, 3> Polynomial::gradient(double t, double p, double q) const
{
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (const auto &m : terms) {
        if (m.t > 0) {
            g[0] += m.coeff * m.t * ipow(t, m.t - 1) * ipow(p, m.p) * ipow(q, m.q);
        }
        if (m.p > 0) {
            g[1] += m.coeff * m.p * ipow(t, m.t) * ipow(p, m.p - 1) * ipow(q, m.q);
        }
        if (m.q > 0) {
            g[2] += m.coeff * m.q * ipow(t, m.t) * ipow(p, m.p) * ipow(q, m.q - 1);
        }
    }
    return g;
}

double Polynomial::magnitude(double t, double p, double q) const
{
    double sum = 0.0;
    for (const auto &m : terms) {
        sum += std::abs(m.coeff * ipow(t, m.t) * ipow(p, m.p) * ipow(q, m.q));
    }
    return sum;
}

int Polynomial::degree(int variable) const
{
    int d = 0;
    for (const auto &m : terms) {
        d = std::max(d, variable == 0 ? m.t : variable == 1 ? m.p : m.q);
    }
    return d;
}

Polynomial Polynomial::swapped_pq() const
{
    Polynomial out = *this;
    for (auto &m : out.terms) {
        std::swap(m.p, m.q);
    }
    return out;
}

bool Box::contains(const LemmaPoint &x) const
{
    return x.t >= lo[0] && x.t <= hi[0] && x.p >= lo[1] && x.p <= hi[1] && x.q >= lo[2] &&
           x.q <= hi[2];
}

PolySystem critical_system(LemmaCase c)
{
    PolySystem sys;
    sys.lemma_case = c;
    Polynomial nt;
    Polynomial np;
    if (c == LemmaCase::spherical) {
        // 9pq t^4 - 6(p+q) t^3 + (3 - 9pq) t^2 + 1
        nt = make({{4, 1, 1, 9.0}, {3, 1, 0, -6.0}, {3, 0, 1, -6.0}, {2, 0, 0, 3.0},
                   {2, 1, 1, -9.0}, {0, 0, 0, 1.0}});
        np = make({{6, 4, 0, 81.0}, {4, 4, 0, 243.0}, {3, 4, 1, 486.0}, {3, 2, 1, 108.0},
                   {3, 0, 1, 6.0}, {2, 2, 0, -54.0}, {2, 0, 0, -3.0}, {0, 2, 0, -18.0},
                   {0, 0, 0, -1.0}});
        sys.box = {{0.01, 0.05, 0.05}, {5.0, 10.0, 10.0}};
    } else {
        // 9pq t^4 + 9pq t^2 - 6(p+q) t^3 + 3t^2 - 1
        nt = make({{4, 1, 1, 9.0}, {2, 1, 1, 9.0}, {3, 1, 0, -6.0}, {3, 0, 1, -6.0},
                   {2, 0, 0, 3.0}, {0, 0, 0, -1.0}});
        np = make({{6, 4, 0, 81.0}, {4, 4, 0, -243.0}, {3, 4, 1, 486.0}, {3, 2, 1, -108.0},
                   {2, 2, 0, 54.0}, {0, 2, 0, -18.0}, {3, 0, 1, 6.0}, {2, 0, 0, -3.0},
                   {0, 0, 0, 1.0}});
        sys.box = {{0.01, 1.0 / 3.0, 1.0 / 3.0}, {0.99, 10.0, 10.0}};
    }
    sys.equations = {nt, np, np.swapped_pq()};
    return sys;
}

double curve_distance(const LemmaPoint &x)
{
    const auto d2 = [&](double s) {
        const double dt = x.t - 1.0 / (3.0 * s);
        return dt * dt + (x.p - s) * (x.p - s) + (x.q - s) * (x.q - s);
    };
    const double lo = std::max(1e-12, std::min({x.p, x.q, 1.0 / (3.0 * x.t)}) / 4.0);
    const double hi = std::max({x.p, x.q, 1.0 / (3.0 * x.t)}) * 4.0;
    constexpr int scan = 400;
    double best_s = lo;
    double best = d2(lo);
    for (int i = 1; i <= scan; ++i) {
        const double s = lo * std::pow(hi / lo, static_cast<double>(i) / scan);
        if (d2(s) < best) {
            best = d2(s);
            best_s = s;
        }
    }
    const double step = std::pow(hi / lo, 1.0 / scan);
    const auto r = boost::math::tools::brent_find_minima(d2, best_s / step, best_s * step, 52);
    return std::sqrt(std::min(best, r.second));
}

namespace {

struct NewtonResult {
    LemmaPoint x;
    double residual = 0.0;
    bool singular = false;
    bool converged = false;
};

NewtonResult gauss_newton(const PolySystem &sys, const Box &box, LemmaPoint x)
{
    const auto clamp = [&](LemmaPoint y) {
        y.t = std::clamp(y.t, box.lo[0], box.hi[0]);
        y.p = std::clamp(y.p, box.lo[1], box.hi[1]);
        y.q = std::clamp(y.q, box.lo[2], box.hi[2]);
        return y;
    };
    const auto scaled = [&](const LemmaPoint &y, const Eigen::Vector3d &w) {
        Eigen::Vector3d f;
        for (int i = 0; i < 3; ++i) {
            f(i) = w(i) * sys.equations[static_cast<std::size_t>(i)](y.t, y.p, y.q);
        }
        return f;
    };
    const auto weights = [&](const LemmaPoint &y) {
        Eigen::Vector3d w;
        for (int i = 0; i < 3; ++i) {
            w(i) = 1.0 / std::max(sys.equations[static_cast<std::size_t>(i)].magnitude(y.t, y.p, y.q),
                                  1e-300);
        }
        return w;
    };

    NewtonResult out;
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::Vector3d w = weights(x);
        const Eigen::Vector3d f = scaled(x, w);
        out.residual = f.cwiseAbs().maxCoeff();
        if (out.residual <= 1e-14) {
            break;
        }
        Eigen::Matrix3d J;
        for (int i = 0; i < 3; ++i) {
            const auto g = sys.equations[static_cast<std::size_t>(i)].gradient(x.t, x.p, x.q);
            J.row(i) << w(i) * g[0], w(i) * g[1], w(i) * g[2];
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix3d> cod;
        cod.setThreshold(1e-10);
        cod.compute(J);
        if (!J.allFinite() || cod.rank() < 2) {
            if (iter == 0) {
                out.singular = true;
                return out;
            }
            break;
        }
        const Eigen::Vector3d step = cod.solve(-f);
        const double merit = f.squaredNorm();
        double lambda = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k, lambda *= 0.5) {
            const LemmaPoint y =
                clamp({x.t + lambda * step(0), x.p + lambda * step(1), x.q + lambda * step(2)});
            if (scaled(y, w).squaredNorm() < merit) {
                moved = std::abs(y.t - x.t) + std::abs(y.p - x.p) + std::abs(y.q - x.q) > 0.0;
                x = y;
                break;
            }
        }
        if (!moved) {
            break;
        }
    }
    out.x = x;
    out.residual = scaled(x, weights(x)).cwiseAbs().maxCoeff();
    out.converged = out.residual <= 1e-12;
    return out;
}

} // namespace

CriticalReport solve_critical_points(const PolySystem &system, const Box &box, int n_starts,
                                     std::uint64_t seed)
{
    if (n_starts < 1 || system.equations.size() != 3) {
        throw UsageError("solve_critical_points: need a 3-equation system and n_starts >= 1");
    }
    const auto count = static_cast<std::size_t>(n_starts);
    std::vector<NewtonResult> runs(count);
    parallel_for(count, [&](std::size_t i) {
        LemmaPoint x0;
        double *coord[3] = {&x0.t, &x0.p, &x0.q};
        for (std::size_t k = 0; k < 3; ++k) {
            const double u = counter_uniform(seed, 3 * i + k);
            *coord[k] = box.lo[k] + u * (box.hi[k] - box.lo[k]);
        }
        runs[i] = gauss_newton(system, box, x0);
    });

    CriticalReport report;
    report.starts = n_starts;
    for (const auto &run : runs) {
        if (run.singular) {
            ++report.singular_starts;
            continue;
        }
        if (!run.converged) {
            ++report.not_converged;
            continue;
        }
        ++report.converged;
        bool merged = false;
        for (auto &root : report.roots) {
            const double d = std::hypot(root.point.t - run.x.t, root.point.p - run.x.p,
                                        root.point.q - run.x.q);
            if (d <= 1e-6) {
                ++root.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) {
            CriticalRoot root;
            root.point = run.x;
            root.residual = run.residual;
            root.curve_distance = curve_distance(run.x);
            root.h_value = H(system.lemma_case, run.x.t, run.x.p, run.x.q);
            report.roots.push_back(root);
        }
    }
    for (const auto &root : report.roots) {
        report.max_curve_distance = std::max(report.max_curve_distance, root.curve_distance);
        report.max_h_value = std::max(report.max_h_value, std::abs(root.h_value));
    }
    return report;
}

HGridSpec default_h_grid(LemmaCase c, int points)
{
    if (c == LemmaCase::spherical) {
        return {points, 0.02, 4.0, 0.05, 6.0};
    }
    return {points, 0.01, 0.99, 0.34, 6.0};
}

std::vector<EscapeRay> escape_rays(LemmaCase c)
{
    using Path = std::function<LemmaPoint(double)>;
    struct Spec {
        const char *name;
        Path path;
        bool to_zero; // parameter s -> 0, else s -> infinity
    };
    std::vector<Spec> specs;
    const double third = 1.0 / 3.0;
    if (c == LemmaCase::spherical) {
        specs = {
            {"t->0 (p=1, q=2)", [](double s) { return LemmaPoint{s, 1.0, 2.0}; }, true},
            {"t->inf (p=1, q=2)", [](double s) { return LemmaPoint{s, 1.0, 2.0}; }, false},
            {"p->0 (t=1, q=1)", [](double s) { return LemmaPoint{1.0, s, 1.0}; }, true},
            {"p->inf (t=1, q=1)", [](double s) { return LemmaPoint{1.0, s, 1.0}; }, false},
            {"curve p=q->0", [](double s) { return LemmaPoint{1.0 / (3.0 * s), s, s}; }, true},
            {"curve p=q->inf", [](double s) { return LemmaPoint{1.0 / (3.0 * s), s, s}; }, false},
            {"t->inf, p->0 (q=1/2)", [](double s) { return LemmaPoint{1.0 / s, s, 0.5}; }, true},
            {"p->inf, q->0 (t=1)", [](double s) { return LemmaPoint{1.0, 1.0 / s, s}; }, true},
        };
    } else {
        specs = {
            {"t->0 (p=1, q=2)", [](double s) { return LemmaPoint{s, 1.0, 2.0}; }, true},
            {"t->1 (p=1, q=2)", [](double s) { return LemmaPoint{1.0 - s, 1.0, 2.0}; }, true},
            {"p->1/3 (t=1/2, q=1)", [=](double s) { return LemmaPoint{0.5, third + s, 1.0}; }, true},
            {"p->inf (t=1/2, q=1)", [](double s) { return LemmaPoint{0.5, s, 1.0}; }, false},
            {"curve p=q->1/3",
             [=](double s) {
                 const double p = third + s;
                 return LemmaPoint{1.0 / (3.0 * p), p, p};
             },
             true},
            {"curve p=q->inf", [](double s) { return LemmaPoint{1.0 / (3.0 * s), s, s}; }, false},
            {"t->1, p->1/3 (q=1)", [=](double s) { return LemmaPoint{1.0 - s, third + s, 1.0}; }, true},
            {"p->inf, q->1/3 (t=1/2)", [=](double s) { return LemmaPoint{0.5, 1.0 / s, third + s}; },
             true},
        };
    }
    constexpr int samples = 24;
    std::vector<EscapeRay> rays;
    for (const auto &spec : specs) {
        EscapeRay ray;
        ray.name = spec.name;
        for (int k = 0; k < samples; ++k) {
            const double s = spec.to_zero ? std::pow(2.0, -0.5 * k) * 0.5
                                          : std::pow(2.0, 0.5 * k) * 2.0;
            const LemmaPoint x = spec.path(s);
            ray.values.push_back(H(c, x.t, x.p, x.q));
        }
        const auto tail = ray.values.begin() + 2 * samples / 3;
        ray.liminf_estimate = *std::min_element(tail, ray.values.end());
        ray.ok = std::all_of(ray.values.begin(), ray.values.end(),
                             [](double v) { return !std::isnan(v); }) &&
                 ray.liminf_estimate >= -1e-9;
        rays.push_back(ray);
    }
    return rays;
}

HScan verify_H_nonneg(LemmaCase c, const HGridSpec &grid)
{
    if (grid.points < 2 || !(grid.t_hi > grid.t_lo) || !(grid.pq_hi > grid.pq_lo)) {
        throw UsageError("verify_H_nonneg: bad grid");
    }
    check_t(c, grid.t_lo);
    check_t(c, grid.t_hi);
    if (!(grid.pq_lo > pq_floor(c))) {
        throw DomainError("verify_H_nonneg: p range outside the case domain");
    }
    const auto n = static_cast<std::size_t>(grid.points);
    const double dt = (grid.t_hi - grid.t_lo) / (grid.points - 1);
    const double dp = (grid.pq_hi - grid.pq_lo) / (grid.points - 1);
    std::vector<double> ps(n);
    std::vector<long double> diag(n);
    for (std::size_t j = 0; j < n; ++j) {
        ps[j] = grid.pq_lo + dp * static_cast<double>(j);
        const long double pj = ps[j];
        diag[j] = g_impl<long double>(c, 1 / (3 * pj), pj, pj);
    }
    struct Best {
        double value = std::numeric_limits<double>::infinity();
        std::size_t j = 0;
        std::size_t k = 0;
    };
    std::vector<Best> per_t(n);
    parallel_for(n, [&](std::size_t i) {
        const double t = grid.t_lo + dt * static_cast<double>(i);
        Best best;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const auto h = static_cast<double>(
                    diag[j] + diag[k] - 2 * g_impl<long double>(c, t, ps[j], ps[k]));
                if (h < best.value) {
                    best = {h, j, k};
                }
            }
        }
        per_t[i] = best;
    });
    HScan scan;
    scan.lemma_case = c;
    scan.grid = grid;
    scan.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (per_t[i].value < scan.min_value) {
            scan.min_value = per_t[i].value;
            scan.argmin = {grid.t_lo + dt * static_cast<double>(i), ps[per_t[i].j], ps[per_t[i].k]};
        }
    }
    scan.argmin_curve_distance = curve_distance(scan.argmin);
    scan.grid_diagonal = std::sqrt(dt * dt + 2.0 * dp * dp);
    scan.rays = escape_rays(c);
    scan.passed = scan.min_value >= -1e-9 && scan.argmin_curve_distance <= 2.0 * scan.grid_diagonal &&
                  std::all_of(scan.rays.begin(), scan.rays.end(),
                              [](const EscapeRay &r) { return r.ok; });
    return scan;
}

void to_json(nlohmann::json &j, const LemmaPoint &x)
{
    j = nlohmann::json{{"t", x.t}, {"p", x.p}, {"q", x.q}};
}

void to_json(nlohmann::json &j, const CriticalRoot &root)
{
    j = nlohmann::json{{"point", root.point},
                       {"residual", root.residual},
                       {"curve_distance", root.curve_distance},
                       {"h_value", root.h_value},
                       {"multiplicity", root.multiplicity}};
}

void to_json(nlohmann::json &j, const CriticalReport &report)
{
    j = nlohmann::json{{"roots", report.roots},
                       {"starts", report.starts},
                       {"converged", report.converged},
                       {"singular_starts", report.singular_starts},
                       {"not_converged", report.not_converged},
                       {"max_curve_distance", report.max_curve_distance},
                       {"max_h_value", report.max_h_value}};
}

void to_json(nlohmann::json &j, const EscapeRay &ray)
{
    j = nlohmann::json{{"name", ray.name},
                       {"liminf_estimate", ray.liminf_estimate},
                       {"ok", ray.ok},
                       {"values", ray.values}};
}

void to_json(nlohmann::json &j, const HScan &scan)
{
    j = nlohmann::json{{"case", to_string(scan.lemma_case)},
                       {"grid",
                        {{"points", scan.grid.points},
                         {"t", {scan.grid.t_lo, scan.grid.t_hi}},
                         {"pq", {scan.grid.pq_lo, scan.grid.pq_hi}}}},
                       {"min_value", scan.min_value},
                       {"argmin", scan.argmin},
                       {"argmin_curve_distance", scan.argmin_curve_distance},
                       {"grid_diagonal", scan.grid_diagonal},
                       {"rays", scan.rays},
                       {"passed", scan.passed}};
}

} // namespace isolp
