#include "isolp/chord_measure.hpp"

#include "isolp/errors.hpp"
#include "isolp/quadrature.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

namespace isolp {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x)
{
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// cos(alpha) below this is treated as a tangent chord.
constexpr double tangent_cos = 1e-15;

double secant(double angle)
{
    const double c = std::cos(angle);
    if (!(c > tangent_cos)) {
        throw InfiniteContribution("functional is infinite at a tangent chord (cos alpha = 0)");
    }
    return 1.0 / c;
}

ChordAtom curve_atom(const BallGeometry &ball, double alpha, double mass)
{
    const double ell = chord_length_from_cos(ball.params.kappa, ball.radius, std::cos(alpha));
    const double a = std::acos(std::min(1.0, chord_T(ball.params.kappa, ball.radius, ell)));
    return {ell, a, a, mass};
}

} // namespace

std::string to_string(MeasureSource source)
{
    switch (source) {
    case MeasureSource::quadrature:
        return "quadrature";
    case MeasureSource::monte_carlo:
        return "monte-carlo";
    case MeasureSource::external:
        return "external";
    }
    return "external";
}

MeasureSource measure_source_from_string(const std::string &name)
{
    if (name == "quadrature") {
        return MeasureSource::quadrature;
    }
    if (name == "monte-carlo") {
        return MeasureSource::monte_carlo;
    }
    if (name == "external") {
        return MeasureSource::external;
    }
    throw UsageError("unknown measure source: " + name);
}

double DiscreteMeasure::total_mass() const
{
    CompensatedSum sum;
    for (const auto &atom : atoms) {
        sum.add(atom.mass);
    }
    return sum.value();
}

double ball_chord_density(const BallGeometry &ball, double ell)
{
    const double r = ball.radius;
    if (!(ell >= 0.0 && ell <= 2.0 * r)) {
        throw DomainError("ball_chord_density: ell outside [0, 2r]");
    }
    const int n = ball.params.n;
    const double k = ball.params.kappa;
    const double T = chord_T(k, r, ell);
    const double sin_alpha = std::sqrt(std::max(0.0, (1.0 - T) * (1.0 + T)));
    const double scale = ball.area * sphere_volume(n - 2) * T * chord_T_derivative(k, r, ell);
    if (n == 2) {
        return sin_alpha > 0.0 ? scale / sin_alpha : std::numeric_limits<double>::infinity();
    }
    return scale * std::pow(sin_alpha, n - 3);
}

double ball_measure_mass(const BallGeometry &ball)
{
    const int n = ball.params.n;
    return ball.area * sphere_volume(n - 2) / (n - 1);
}

DiscreteMeasure discretize_ball_measure(const BallGeometry &ball, int nodes)
{
    if (nodes < 1) {
        throw UsageError("discretize_ball_measure: node count must be positive");
    }
    const GaussRule rule = gauss_legendre(nodes, 0.0, pi / 2);
    DiscreteMeasure measure;
    measure.source = MeasureSource::quadrature;
    measure.atoms.reserve(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double alpha = rule.nodes[i];
        const double mass = rule.weights[i] * ball.area * delta_weight(ball.params.n, alpha);
        measure.atoms.push_back(curve_atom(ball, alpha, mass));
    }
    return measure;
}

double counter_uniform(std::uint64_t seed, std::uint64_t index)
{
    // Element `index` of the SplitMix64 stream whose starting state is derived from the seed.
    constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ULL;
    const std::uint64_t bits = mix64(mix64(seed + gamma) + (index + 1) * gamma);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

DiscreteMeasure sample_chords(const BallGeometry &ball, int count, std::uint64_t seed)
{
    if (count < 1) {
        throw UsageError("sample_chords: count must be positive");
    }
    const double mass = ball_measure_mass(ball) / count;
    const double exponent = 1.0 / (ball.params.n - 1);
    DiscreteMeasure measure;
    measure.source = MeasureSource::monte_carlo;
    measure.seed = seed;
    measure.atoms.reserve(count);
    for (int i = 0; i < count; ++i) {
        // The alpha-marginal has CDF sin^{n-1}(alpha) on [0, pi/2].
        const double u = counter_uniform(seed, static_cast<std::uint64_t>(i));
        const double alpha = std::asin(std::pow(u, exponent));
        measure.atoms.push_back(curve_atom(ball, alpha, mass));
    }
    return measure;
}

double evaluate(Functional which, const ModelParams &params, const ChordAtom &atom)
{
    switch (which) {
    case Functional::croke1:
        return candle(params, atom.ell) * secant(atom.alpha) * secant(atom.beta);
    case Functional::croke2:
        return 0.5 * candle_anti(params, atom.ell) * (secant(atom.alpha) + secant(atom.beta));
    case Functional::croke3:
        return candle_anti2(params, atom.ell);
    case Functional::length:
        return atom.ell;
    }
    throw UsageError("unknown functional");
}

double integrate(const DiscreteMeasure &measure, Functional which, const ModelParams &params)
{
    CompensatedSum sum;
    for (const auto &atom : measure.atoms) {
        if (atom.mass != 0.0) {
            sum.add(atom.mass * evaluate(which, params, atom));
        }
    }
    return sum.value();
}

double integrate(const DiscreteMeasure &measure, const PairFunction &f)
{
    CompensatedSum sum;
    for (const auto &atom : measure.atoms) {
        if (atom.mass != 0.0) {
            sum.add(atom.mass * f(atom.alpha, atom.beta));
        }
    }
    return sum.value();
}

Estimate integrate_with_error(const DiscreteMeasure &measure, Functional which,
                              const ModelParams &params)
{
    const std::size_t count = measure.atoms.size();
    if (count < 2) {
        throw UsageError("integrate_with_error: need at least two atoms");
    }
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = evaluate(which, params, measure.atoms[i]);
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double total = measure.total_mass();
    const double variance = m2 / static_cast<double>(count - 1);
    return {total * mean, total * std::sqrt(variance / static_cast<double>(count))};
}

double santalo_residual(const BallGeometry &ball, const DiscreteMeasure &measure)
{
    return integrate(measure, Functional::length, ball.params) -
           sphere_volume(ball.params.n - 1) * ball.volume;
}

double croke_target(const BallGeometry &ball, int which)
{
    switch (which) {
    case 1:
        return ball.area * ball.area;
    case 2:
        return ball.area * ball.volume;
    case 3:
        return ball.volume * ball.volume;
    default:
        throw UsageError("croke_residual: which must be 1, 2 or 3");
    }
}

double croke_residual(const BallGeometry &ball, const DiscreteMeasure &measure, int which)
{
    const double target = croke_target(ball, which);
    const Functional f = which == 1 ? Functional::croke1
                         : which == 2 ? Functional::croke2
                                      : Functional::croke3;
    return integrate(measure, f, ball.params) - target;
}

void write_csv(std::ostream &out, const DiscreteMeasure &measure)
{
    out << "ell,alpha,beta,mass\n";
    std::ostringstream line;
    line.imbue(std::locale::classic());
    line << std::setprecision(17);
    for (const auto &a : measure.atoms) {
        line.str("");
        line << a.ell << ',' << a.alpha << ',' << a.beta << ',' << a.mass << '\n';
        out << line.str();
    }
}

DiscreteMeasure read_csv(std::istream &in)
{
    DiscreteMeasure measure;
    measure.source = MeasureSource::external;
    std::string line;
    if (!std::getline(in, line)) {
        throw UsageError("measure CSV: missing header");
    }
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::istringstream fields(line);
        fields.imbue(std::locale::classic());
        double values[4];
        for (int i = 0; i < 4; ++i) {
            std::string cell;
            const char sep = i < 3 ? ',' : '\n';
            if (!std::getline(fields, cell, sep)) {
                throw UsageError("measure CSV: too few columns on line " +
                                 std::to_string(line_number));
            }
            try {
                values[i] = std::stod(cell);
            } catch (const std::exception &) {
                throw UsageError("measure CSV: bad number on line " +
                                 std::to_string(line_number));
            }
        }
        if (values[3] < 0.0) {
            throw UsageError("measure CSV: negative mass on line " + std::to_string(line_number));
        }
        measure.atoms.push_back({values[0], values[1], values[2], values[3]});
    }
    return measure;
}

void to_json(nlohmann::json &j, const ChordAtom &atom)
{
    j = nlohmann::json{{"ell", atom.ell}, {"alpha", atom.alpha}, {"beta", atom.beta},
                       {"mass", atom.mass}};
}

void from_json(const nlohmann::json &j, ChordAtom &atom)
{
    j.at("ell").get_to(atom.ell);
    j.at("alpha").get_to(atom.alpha);
    j.at("beta").get_to(atom.beta);
    j.at("mass").get_to(atom.mass);
}

void to_json(nlohmann::json &j, const DiscreteMeasure &measure)
{
    j = nlohmann::json{{"source", to_string(measure.source)}, {"atoms", measure.atoms}};
    j["seed"] = measure.seed ? nlohmann::json(*measure.seed) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json &j, DiscreteMeasure &measure)
{
    measure.source = measure_source_from_string(j.at("source").get<std::string>());
    measure.atoms = j.at("atoms").get<std::vector<ChordAtom>>();
    if (j.contains("seed") && !j.at("seed").is_null()) {
        measure.seed = j.at("seed").get<std::uint64_t>();
    } else {
        measure.seed.reset();
    }
}

} // namespace isolp
