#include "isolp/littleprince.hpp"

#include "isolp/errors.hpp"
#include "isolp/quadrature.hpp"
#include "isolp/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace isolp {

namespace {

constexpr double tolerance = 1e-10;

double integrate_pieces(const StarDomain &domain, const std::function<double(double)> &f)
{
    std::vector<double> cuts{-pi / 2};
    for (const double x : domain.breakpoints()) {
        cuts.push_back(x);
    }
    cuts.push_back(pi / 2);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate_adaptive(f, cuts[i], cuts[i + 1], tolerance);
    }
    return total;
}

void require_positive(double x, const char *what)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

} // namespace

std::string to_string(StarShape shape)
{
    switch (shape) {
    case StarShape::disk:
        return "disk";
    case StarShape::ellipse:
        return "ellipse";
    case StarShape::square:
        return "square";
    case StarShape::sampled:
        return "csv";
    }
    return "unknown";
}

StarShape star_shape_from_string(const std::string &name)
{
    for (const StarShape s :
         {StarShape::disk, StarShape::ellipse, StarShape::square, StarShape::sampled}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw UsageError("unknown shape: " + name);
}

StarDomain StarDomain::disk(double r)
{
    require_positive(r, "disk radius");
    StarDomain d;
    d.shape_ = StarShape::disk;
    d.a_ = r;
    d.b_ = r;
    return d;
}

StarDomain StarDomain::ellipse(double a, double b)
{
    require_positive(a, "ellipse semi-axis");
    require_positive(b, "ellipse semi-axis");
    StarDomain d;
    d.shape_ = StarShape::ellipse;
    d.a_ = a;
    d.b_ = b;
    return d;
}

StarDomain StarDomain::square(double side)
{
    require_positive(side, "square side");
    StarDomain d;
    d.shape_ = StarShape::square;
    d.a_ = side;
    return d;
}

StarDomain StarDomain::sampled(std::vector<double> alpha, std::vector<double> length)
{
    if (alpha.size() != length.size() || alpha.size() < 2) {
        throw UsageError("sampled domain: need at least two (alpha, L) pairs");
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!(alpha[i] >= -pi / 2 && alpha[i] <= pi / 2)) {
            throw DomainError("sampled domain: alpha outside [-pi/2, pi/2]");
        }
        if (i > 0 && !(alpha[i] > alpha[i - 1])) {
            throw DomainError("sampled domain: alpha must be strictly increasing");
        }
        if (!(length[i] >= 0.0) || !std::isfinite(length[i])) {
            throw DomainError("sampled domain: L must be finite and nonnegative");
        }
    }
    StarDomain d;
    d.shape_ = StarShape::sampled;
    d.alpha_ = std::move(alpha);
    d.length_ = std::move(length);
    return d;
}

double StarDomain::operator()(double alpha) const
{
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    switch (shape_) {
    case StarShape::disk:
        return 2.0 * a_ * std::max(c, 0.0);
    case StarShape::ellipse: {
        // (ell c - a)^2/a^2 + (ell s)^2/b^2 = 1
        const double denom = c * c / (a_ * a_) + s * s / (b_ * b_);
        return std::max(2.0 * c / a_, 0.0) / denom;
    }
    case StarShape::square: {
        const double half = 0.5 * a_;
        const double to_far_side = c > 0.0 ? a_ / c : INFINITY;
        const double to_wall = std::abs(s) > 0.0 ? half / std::abs(s) : INFINITY;
        return std::min(to_far_side, to_wall);
    }
    case StarShape::sampled: {
        if (alpha < alpha_.front() || alpha > alpha_.back()) {
            return 0.0;
        }
        const auto hi = std::upper_bound(alpha_.begin(), alpha_.end(), alpha);
        if (hi == alpha_.end()) {
            return length_.back();
        }
        const auto k = static_cast<std::size_t>(hi - alpha_.begin());
        const double w = (alpha - alpha_[k - 1]) / (alpha_[k] - alpha_[k - 1]);
        return (1.0 - w) * length_[k - 1] + w * length_[k];
    }
    }
    return 0.0;
}

std::vector<double> StarDomain::breakpoints() const
{
    switch (shape_) {
    case StarShape::square: {
        const double corner = std::atan(0.5);
        return {-corner, corner};
    }
    case StarShape::sampled: {
        std::vector<double> out;
        for (const double x : alpha_) {
            if (x > -pi / 2 && x < pi / 2) {
                out.push_back(x);
            }
        }
        return out;
    }
    default:
        return {};
    }
}

StarDomain StarDomain::scaled(double lambda) const
{
    require_positive(lambda, "scale factor");
    StarDomain out = *this;
    out.a_ *= lambda;
    out.b_ *= lambda;
    for (double &l : out.length_) {
        l *= lambda;
    }
    return out;
}

StarDomain read_star_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw UsageError("star csv: missing header");
    }
    std::vector<double> alpha;
    std::vector<double> length;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::istringstream fields(line);
        fields.imbue(std::locale::classic());
        double a = 0.0;
        double l = 0.0;
        char comma = 0;
        if (!(fields >> a >> comma >> l) || comma != ',') {
            throw UsageError("star csv: cannot parse row " + std::to_string(row));
        }
        alpha.push_back(a);
        length.push_back(l);
    }
    return StarDomain::sampled(std::move(alpha), std::move(length));
}

double gravity(const StarDomain &domain)
{
    return integrate_pieces(domain, [&](double a) { return domain(a) * std::cos(a); }) /
           (2.0 * pi);
}

double area(const StarDomain &domain)
{
    return integrate_pieces(domain, [&](double a) {
        const double l = domain(a);
        return 0.5 * l * l;
    });
}

double disk_gravity(double volume)
{
    if (!(volume >= 0.0)) {
        throw DomainError("disk_gravity: volume must be nonnegative");
    }
    return 0.5 * std::sqrt(volume / pi);
}

PrinceReport verify_pp(const StarDomain &domain)
{
    PrinceReport out;
    out.gravity = gravity(domain);
    out.area = area(domain);
    out.disk_gravity = disk_gravity(out.area);
    out.margin = out.disk_gravity - out.gravity;
    return out;
}

double dual_gap(double a, double alpha, double ell)
{
    require_positive(a, "dual_gap: a");
    const double c = std::cos(alpha);
    // Completed square: (a ell - cos alpha)^2 / (2a), exact zero on the curve.
    const double d = a * ell - c;
    return d * d / (2.0 * a);
}

double dual_bound(const StarDomain &domain, double a)
{
    require_positive(a, "dual_bound: a");
    // int cos^2 over [-pi/2, pi/2] is pi/2.
    return (a * area(domain) + (pi / 2) / (2.0 * a)) / (2.0 * pi);
}

double weil_bound(double volume)
{
    require_positive(volume, "weil_bound: volume");
    return 2.0 * std::sqrt(pi * volume);
}

void to_json(nlohmann::json &j, const PrinceReport &report)
{
    j = {{"gravity", report.gravity},
         {"area", report.area},
         {"disk_gravity", report.disk_gravity},
         {"margin", report.margin}};
}

} // namespace isolp
