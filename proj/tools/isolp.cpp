// isolp: command-line front end. Every command prints one report (JSON by
// default) and exits 0 when its checks pass, 1 when a check fails and 2 on
// bad input.

#include "isolp/certificate.hpp"
#include "isolp/chord_measure.hpp"
#include "isolp/errors.hpp"
#include "isolp/lemmas.hpp"
#include "isolp/littleprince.hpp"
#include "isolp/lp_builders.hpp"
#include "isolp/negbound.hpp"
#include "isolp/relative.hpp"
#include "isolp/spaceform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef ISOLP_VERSION
#define ISOLP_VERSION "unknown"
#endif

using nlohmann::json;
using namespace isolp;

namespace {

constexpr int schema_version = 1;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Report {
    json config = json::object();
    json tolerances = json::object();
    json result = json::object();
    bool passed = true;
    std::optional<Table> table;
};

struct OutputOptions {
    std::string format = "json";
    std::string path;
};

std::string format_number(double x)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::setprecision(17) << x;
    return out.str();
}

std::string scalar_text(const json &value)
{
    if (value.is_number()) {
        return format_number(value.get<double>());
    }
    if (value.is_string()) {
        return value.get<std::string>();
    }
    return value.dump();
}

std::string render(const std::string &command, const Report &report, const OutputOptions &out)
{
    if (out.format == "json") {
        json doc = {{"schema", schema_version},
                    {"tool", "isolp"},
                    {"version", ISOLP_VERSION},
                    {"command", command},
                    {"config", report.config},
                    {"tolerances", report.tolerances},
                    {"passed", report.passed},
                    {"result", report.result}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream csv;
    csv.imbue(std::locale::classic());
    if (report.table) {
        for (std::size_t i = 0; i < report.table->header.size(); ++i) {
            csv << (i ? "," : "") << report.table->header[i];
        }
        csv << "\n";
        for (const auto &row : report.table->rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                csv << (i ? "," : "") << format_number(row[i]);
            }
            csv << "\n";
        }
        return csv.str();
    }
    csv << "key,value\n";
    const json flat = report.result.flatten();
    for (const auto &[key, value] : flat.items()) {
        csv << key << "," << scalar_text(value) << "\n";
    }
    return csv.str();
}

// Rescaling to unit curvature: lengths multiply by lambda = sqrt|kappa|,
// volumes by lambda^n and boundary areas by lambda^(n-1).
struct Dilation {
    ModelParams unit;
    double lambda = 1.0;

    explicit Dilation(const ModelParams &p) : unit(p)
    {
        validate(p);
        if (p.kappa != 0.0 && std::abs(p.kappa) != 1.0) {
            lambda = std::sqrt(std::abs(p.kappa));
            unit.kappa = p.kappa > 0.0 ? 1.0 : -1.0;
        }
    }
    double length(double l) const { return l * lambda; }
    double volume(double v) const { return v * std::pow(lambda, unit.n); }
    double area_back(double a) const { return a / std::pow(lambda, unit.n - 1); }
    double length_back(double l) const { return l / lambda; }
};

struct CaseOptions {
    int dim = 4;
    double kappa = 0.0;
    std::optional<double> volume;
    std::optional<double> radius;
};

void add_case_options(CLI::App &sub, CaseOptions &o, bool need_size)
{
    sub.add_option("--dim", o.dim, "Dimension n")->capture_default_str();
    sub.add_option("--kappa", o.kappa, "Curvature bound kappa")->capture_default_str();
    if (need_size) {
        auto *v = sub.add_option("--volume", o.volume, "Volume V");
        auto *r = sub.add_option("--radius", o.radius, "Ball radius r");
        v->excludes(r);
        r->excludes(v);
    }
}

ModelParams params_of(const CaseOptions &o)
{
    return {o.dim, o.kappa};
}

json case_config(const CaseOptions &o)
{
    json j = {{"dim", o.dim}, {"kappa", o.kappa}};
    if (o.volume) {
        j["volume"] = *o.volume;
    }
    if (o.radius) {
        j["radius"] = *o.radius;
    }
    return j;
}

/// The ball of the case in unit-curvature units.
BallGeometry unit_ball(const CaseOptions &o, const Dilation &dil)
{
    if (o.volume.has_value() == o.radius.has_value()) {
        throw UsageError("give exactly one of --volume and --radius");
    }
    if (o.volume) {
        return ball_from_volume(dil.unit, dil.volume(*o.volume));
    }
    return ball_from_radius(dil.unit, dil.length(*o.radius));
}

json ball_json(const BallGeometry &ball, const Dilation &dil)
{
    return {{"radius", dil.length_back(ball.radius)},
            {"volume", ball.volume / std::pow(dil.lambda, dil.unit.n)},
            {"area", dil.area_back(ball.area)},
            {"dilation", dil.lambda}};
}

// profile ------------------------------------------------------------------

struct ProfileOptions {
    CaseOptions c;
    double vmin = 1.0;
    double vmax = 1.0;
    int steps = 1;
};

Report run_profile(const ProfileOptions &o)
{
    if (o.steps < 1 || !(o.vmin > 0.0) || !(o.vmax >= o.vmin)) {
        throw UsageError("profile: need 0 < vmin <= vmax and steps >= 1");
    }
    const Dilation dil(params_of(o.c));
    Report r;
    r.config = case_config(o.c);
    r.config["vmin"] = o.vmin;
    r.config["vmax"] = o.vmax;
    r.config["steps"] = o.steps;
    Table t{{"volume", "radius", "area"}, {}};
    json rows = json::array();
    for (int i = 0; i < o.steps; ++i) {
        const double v = o.steps == 1 ? o.vmin : o.vmin + (o.vmax - o.vmin) * i / (o.steps - 1);
        const BallGeometry ball = ball_from_volume(dil.unit, dil.volume(v));
        const double radius = dil.length_back(ball.radius);
        const double area = dil.area_back(ball.area);
        t.rows.push_back({v, radius, area});
        rows.push_back({{"volume", v}, {"radius", radius}, {"area", area}});
    }
    r.result["rows"] = rows;
    r.table = t;
    return r;
}

// certificate --------------------------------------------------------------

struct CertificateOptions {
    CaseOptions c;
    int grid = 50;
    double tol = 1e-8;
    bool allow_negative = false;
};

Report run_certificate(const CertificateOptions &o)
{
    const Dilation dil(params_of(o.c));
    const BallGeometry ball = unit_ball(o.c, dil);
    Report r;
    r.config = case_config(o.c);
    r.config["grid"] = o.grid;
    r.config["allow_negative"] = o.allow_negative;
    r.tolerances = {{"consistency", o.tol}, {"argmax", o.tol}, {"membership_defect", 1e-9}};

    const ConsistencyFit fit = solve_consistency(dil.unit, ball.radius, 64);
    DualCertificate cert;
    std::string source = "closed-form";
    try {
        cert = paper_certificate(dil.unit, ball.radius);
    } catch (const NotImplementedCase &) {
        cert = {dil.unit, ball.radius, fit.coeffs};
        source = "fitted";
    }
    VerifyOptions vo;
    vo.grid = o.grid;
    vo.require_nonnegative = !o.allow_negative;
    vo.consistency_tol = o.tol;
    vo.argmax_tol = o.tol;
    const VerificationReport report = verify_certificate(cert, vo);

    r.result["ball"] = ball_json(ball, dil);
    r.result["source"] = source;
    r.result["coefficients"] = cert.coeffs;
    r.result["fit"] = {{"coefficients", fit.coeffs},
                       {"residual", fit.residual},
                       {"singular_values", fit.singular_values},
                       {"rank_deficient", fit.rank_deficient},
                       {"nonnegative", fit.nonnegative}};
    r.result["verification"] = report;
    r.passed = report.passed();
    if (r.passed) {
        r.result["lower_bound"] = dil.area_back(duality_lower_bound(report, ball.volume));
    }
    return r;
}

// lp -----------------------------------------------------------------------

struct LPOptions {
    CaseOptions c;
    int grid = 40;
    int levels = 1;
    int m = 1;
    std::string variant = "corrected";
    double tol = 1e-9;
};

Report run_lp(const LPOptions &o)
{
    if (o.grid < 2 || o.levels < 1) {
        throw UsageError("lp: need --grid >= 2 and --levels >= 1");
    }
    if (o.m < 1) {
        throw UsageError("lp: --m must be a positive integer");
    }
    const Table2Variant variant = table2_variant_from_string(o.variant);
    const Dilation dil(params_of(o.c));
    const BallGeometry ball = unit_ball(o.c, dil);
    const BallGeometry big = ball_from_volume(dil.unit, o.m * ball.volume);
    const double bound = big.area / o.m;
    const bool table1 = o.m == 1 && variant == Table2Variant::corrected;
    const auto family = default_family(dil.unit, big.radius);

    Report r;
    r.config = case_config(o.c);
    r.config["grid"] = o.grid;
    r.config["levels"] = o.levels;
    r.config["m"] = o.m;
    r.config["variant"] = o.variant;
    r.tolerances = {{"simplex", o.tol}, {"bound_gap", 0.02}};

    GridSpec spec{o.grid, std::max(1, o.grid / 2)};
    json levels = json::array();
    double previous = INFINITY;
    bool monotone = true;
    LPSolution last;
    for (int level = 0; level < o.levels; ++level) {
        const ChordLP problem =
            table1 ? build_isoperimetric_lp(dil.unit, ball.volume, spec, family)
                   : build_relative_lp(dil.unit, ball.volume, o.m, spec, family, variant);
        last = solve(problem.lp, o.tol);
        const double optimum = dil.area_back(last.objective);
        monotone = monotone && last.objective <= previous * (1.0 + 1e-12);
        previous = last.objective;
        levels.push_back({{"ell_nodes", spec.ell_nodes},
                          {"alpha_nodes", spec.alpha_nodes},
                          {"variables", problem.lp.variable_count()},
                          {"rows", problem.lp.row_count()},
                          {"status", to_string(last.status)},
                          {"optimum", optimum},
                          {"iterations", last.iterations},
                          {"duality", last.report}});
        spec = spec.refined();
    }
    const double gap = last.objective / bound - 1.0;
    r.result["table"] = table1 ? 1 : 2;
    r.result["ball"] = ball_json(ball, dil);
    r.result["bound"] = dil.area_back(bound);
    r.result["family"] = json::array();
    for (const auto &f : family) {
        r.result["family"].push_back(f.label);
    }
    r.result["levels"] = levels;
    r.result["relative_gap"] = gap;
    r.result["monotone"] = monotone;
    r.passed = last.status == LPStatus::optimal && std::abs(gap) <= 0.02 && gap >= -1e-9 &&
               monotone;
    return r;
}

// measure-check --------------------------------------------------------------

struct MeasureOptions {
    CaseOptions c;
    int grid = 128;
    std::optional<int> mc_samples;
    std::optional<std::uint64_t> seed;
    std::string input;
    double tol = 1e-7;
};

Report run_measure_check(const MeasureOptions &o)
{
    const Dilation dil(params_of(o.c));
    const BallGeometry ball = unit_ball(o.c, dil);
    Report r;
    r.config = case_config(o.c);
    const double omega = sphere_volume(dil.unit.n - 1);
    struct Target {
        std::string name;
        Functional f;
        double value;
    };
    const Target targets[] = {
        {"santalo", Functional::length, omega * ball.volume},
        {"croke1", Functional::croke1, ball.area * ball.area},
        {"croke2", Functional::croke2, ball.area * ball.volume},
        {"croke3", Functional::croke3, ball.volume * ball.volume},
    };
    r.result["ball"] = ball_json(ball, dil);

    if (o.mc_samples) {
        if (!o.seed) {
            throw UsageError("measure-check: --mc-samples needs --seed");
        }
        r.config["mc_samples"] = *o.mc_samples;
        r.config["seed"] = *o.seed;
        r.tolerances = {{"standard_errors", 3.0}};
        const DiscreteMeasure mu = sample_chords(ball, *o.mc_samples, *o.seed);
        for (const auto &t : targets) {
            const Estimate e = integrate_with_error(mu, t.f, dil.unit);
            const double z = e.standard_error > 0.0 ? (e.value - t.value) / e.standard_error
                                                    : (e.value == t.value ? 0.0 : INFINITY);
            r.result["residuals"][t.name] = {{"relative", (e.value - t.value) / t.value},
                                             {"standard_error", e.standard_error / t.value},
                                             {"z", z}};
            r.passed = r.passed && std::abs(z) <= 3.0;
        }
        return r;
    }

    DiscreteMeasure mu;
    if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) {
            throw UsageError("measure-check: cannot open " + o.input);
        }
        mu = read_csv(in);
        r.config["input"] = o.input;
        r.tolerances = {{"relative", o.tol}};
        r.result["mode"] = "external";
        r.result["note"] = "santalo is an equality, croke1-3 are upper bounds";
    } else {
        mu = discretize_ball_measure(ball, o.grid);
        r.config["grid"] = o.grid;
        r.tolerances = {{"relative", o.tol}};
        r.result["mode"] = "quadrature";
    }
    for (const auto &t : targets) {
        const double rel = (integrate(mu, t.f, dil.unit) - t.value) / t.value;
        r.result["residuals"][t.name] = {{"relative", rel}};
        const bool ok = o.input.empty() || t.name == "santalo" ? std::abs(rel) <= o.tol
                                                               : rel <= o.tol;
        r.passed = r.passed && ok;
    }
    return r;
}

// lemma --------------------------------------------------------------------

struct LemmaOptions {
    std::string lemma_case = "spherical";
    int grid = 120;
    int starts = 1000;
    std::uint64_t seed = 42;
    double tol = 1e-9;
};

Report run_lemma(const LemmaOptions &o)
{
    const LemmaCase c = lemma_case_from_string(o.lemma_case);
    if (o.grid < 2 || o.starts < 1) {
        throw UsageError("lemma: need --grid >= 2 and --starts >= 1");
    }
    Report r;
    r.config = {{"case", o.lemma_case}, {"grid", o.grid}, {"starts", o.starts}, {"seed", o.seed}};
    r.tolerances = {{"min_h", o.tol}, {"curve_distance", 1e-6}, {"root_h", 1e-10}};

    HScan scan = verify_H_nonneg(c, default_h_grid(c, o.grid));
    scan.passed = scan.passed && scan.min_value >= -o.tol;
    const PolySystem system = critical_system(c);
    const CriticalReport roots = solve_critical_points(system, system.box, o.starts, o.seed);
    const bool roots_ok = roots.max_curve_distance <= 1e-6 && roots.max_h_value <= 1e-10;

    r.result["scan"] = scan;
    r.result["critical_points"] = roots;
    r.passed = scan.passed && roots_ok;
    if (c == LemmaCase::spherical) {
        json identity = json::array();
        for (const double p : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const IdentityCheck k = dGdp_identity(p);
            identity.push_back({{"p", p},
                                {"derivative", k.derivative},
                                {"closed_form", k.closed_form},
                                {"residual", k.residual}});
            r.passed = r.passed && std::abs(k.residual) <= 1e-5 * (1.0 + std::abs(k.closed_form));
        }
        r.result["dGdp_identity"] = identity;
        r.tolerances["identity"] = 1e-5;
    }
    return r;
}

// negbound -----------------------------------------------------------------

struct NegboundOptions {
    double kappa = -1.0;
    double radius = 0.5;
    std::optional<double> L;
    int grid = 128;
    int search_grid = 40;
    double ell_max = 10.0;
    double r_max = 5.0;
    double tol = 1e-7;
};

Report run_negbound(const NegboundOptions &o)
{
    if (!(o.kappa < 0.0)) {
        throw DomainError("negbound: kappa must be negative");
    }
    const double scale = std::sqrt(-o.kappa);
    const double r1 = o.radius * scale; // radius in kappa = -1 units
    const double L = o.L.value_or(2.0 * o.radius);

    Report r;
    r.config = {{"kappa", o.kappa},      {"radius", o.radius},   {"L", L},
                {"grid", o.grid},        {"search_grid", o.search_grid},
                {"ell_max", o.ell_max},  {"r_max", o.r_max}};
    r.tolerances = {{"equality", o.tol}};

    const SmallnessInput small{o.kappa, L, o.radius};
    r.result["smallness"] = {{"input", small}, {"result", smallness_ok(small)}};
    json table = json::array();
    for (int i = 1; i <= 8; ++i) {
        const double rr = 0.25 * i;
        const SmallnessResult s = smallness_ok({-1.0, 2.0 * rr, rr});
        table.push_back({{"r", rr}, {"L", 2.0 * rr}, {"product", s.product}, {"ok", s.ok}});
    }
    r.result["smallness_table"] = table;

    const BallGeometry b4 = ball_from_radius({4, -1.0}, r1);
    const double t = std::tanh(r1);
    const double rhs4 = std::pow(b4.area - 3.0 * t * b4.volume, 2);
    const double conj = conjecture_residual(r1, discretize_ball_measure(b4, o.grid)) / rhs4;
    r.result["conjecture"] = {{"radius", r1}, {"relative_residual", conj}};

    const BallGeometry b2 = ball_from_radius({2, -1.0}, r1);
    const Hyp2Residual h2 = hyp2_lemma_residual(r1, discretize_ball_measure(b2, o.grid));
    const double av = b2.area * b2.volume;
    const double vv = b2.volume * b2.volume;
    r.result["planar_lemma"] = {{"residual", h2},
                                {"relative_bare", h2.bare / (av - t * vv)},
                                {"relative_two_pi", h2.two_pi / (av - 2.0 * pi * t * vv)},
                                {"convention", "bare"}};

    const CounterexampleResult ce = ch2_counterexample_search(o.ell_max, o.r_max, o.search_grid);
    const CurvatureSpectrum model{{-1.0, -1.0, -1.0}};
    const double model_margin = question1_margin(model, ce.r, ce.ell, 0.0, 0.0);
    r.result["question1"] = {{"spectrum", complex_hyperbolic_spectrum().kappas},
                             {"counterexample", ce},
                             {"model_margin_at_location", model_margin}};

    r.passed = std::abs(conj) <= o.tol && std::abs(h2.bare / (av - t * vv)) <= o.tol &&
               ce.margin < 0.0;
    return r;
}

// prince -------------------------------------------------------------------

struct PrinceOptions {
    std::string shape = "disk";
    double radius = 1.0;
    double a = 2.0;
    double b = 0.5;
    double side = 1.0;
    std::string input;
    double tol = 1e-10;
};

Report run_prince(const PrinceOptions &o)
{
    const StarShape shape = star_shape_from_string(o.shape);
    Report r;
    r.config = {{"shape", o.shape}};
    r.tolerances = {{"margin", o.tol}, {"quadrature", 1e-10}};
    StarDomain domain = StarDomain::disk(1.0);
    switch (shape) {
    case StarShape::disk:
        domain = StarDomain::disk(o.radius);
        r.config["radius"] = o.radius;
        break;
    case StarShape::ellipse:
        domain = StarDomain::ellipse(o.a, o.b);
        r.config["a"] = o.a;
        r.config["b"] = o.b;
        break;
    case StarShape::square:
        domain = StarDomain::square(o.side);
        r.config["side"] = o.side;
        break;
    case StarShape::sampled: {
        std::ifstream in(o.input);
        if (o.input.empty() || !in) {
            throw UsageError("prince: --shape csv needs a readable --input file");
        }
        domain = read_star_csv(in);
        r.config["input"] = o.input;
        break;
    }
    }
    const PrinceReport report = verify_pp(domain);
    r.result = report;
    if (report.area > 0.0) {
        const double a = 1.0 / (2.0 * std::sqrt(report.area / pi));
        r.result["dual_bound"] = dual_bound(domain, a);
        r.result["perimeter_bound"] = weil_bound(report.area);
    }
    r.passed = report.margin >= -o.tol;
    return r;
}

// relative -----------------------------------------------------------------

struct RelativeOptions {
    CaseOptions c;
    int m = 2;
    int grid = 128;
    int lp_grid = 40;
    bool no_lp = false;
    double tol = 1e-7;
};

Report run_relative(const RelativeOptions &o)
{
    if (!o.c.volume || o.c.radius) {
        throw UsageError("relative: give --volume");
    }
    const Dilation dil(params_of(o.c));
    const RelativeCase c{dil.unit, o.m, dil.volume(*o.c.volume)};
    Report r;
    r.config = case_config(o.c);
    r.config["m"] = o.m;
    r.config["grid"] = o.grid;
    r.config["lp_grid"] = o.no_lp ? json(nullptr) : json(o.lp_grid);
    r.tolerances = {{"equality", o.tol}, {"lp_gap", 0.02}};

    r.result["bound"] = dil.area_back(relative_bound(c));
    r.result["dilation"] = dil.lambda;
    RelativeResiduals res = verify_relative_equality(c, o.grid);
    res.passed = std::max({std::abs(res.croke1), std::abs(res.croke2), std::abs(res.croke3),
                           std::abs(res.santalo)}) <= o.tol;
    res.reference_area = dil.area_back(res.reference_area);
    r.result["equality"] = res;
    r.passed = res.passed;
    if (!o.no_lp) {
        const GridSpec spec{o.lp_grid, std::max(1, o.lp_grid / 2)};
        for (const Table2Variant v : {Table2Variant::corrected, Table2Variant::verbatim}) {
            RelativeLPCheck check = relative_lp_check(c, spec, v);
            check.optimum = dil.area_back(check.optimum);
            check.bound = dil.area_back(check.bound);
            r.result["lp"][to_string(v)] = check;
            if (v == Table2Variant::corrected) {
                r.passed = r.passed && check.status == LPStatus::optimal &&
                           std::abs(check.relative_gap) <= 0.02;
            }
        }
    }
    return r;
}

void add_output_options(CLI::App &sub, OutputOptions &out)
{
    sub.add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub.add_option("--out", out.path, "Write the report to this file");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Isoperimetric bounds via chord-measure linear programming"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ISOLP_VERSION);
    OutputOptions out;

    std::string command;
    std::function<Report()> runner;
    const auto bind = [&](CLI::App *sub, auto run) {
        add_output_options(*sub, out);
        sub->callback([&, sub, run] {
            command = sub->get_name();
            runner = run;
        });
    };

    ProfileOptions profile;
    auto *p = app.add_subcommand("profile", "Tabulate A_B(V) over a volume range");
    add_case_options(*p, profile.c, false);
    p->add_option("--vmin", profile.vmin, "Smallest volume")->capture_default_str();
    p->add_option("--vmax", profile.vmax, "Largest volume")->capture_default_str();
    p->add_option("--steps", profile.steps, "Number of volumes")->capture_default_str();
    bind(p, [&] { return run_profile(profile); });

    CertificateOptions cert;
    auto *c = app.add_subcommand("certificate", "Build and verify a dual certificate");
    add_case_options(*c, cert.c, true);
    c->add_option("--grid", cert.grid, "Membership grid size")->capture_default_str();
    c->add_option("--tol", cert.tol, "Consistency and argmax tolerance")->capture_default_str();
    c->add_flag("--allow-negative", cert.allow_negative,
                "Accept negative coefficients (kappa < 0)");
    bind(c, [&] { return run_certificate(cert); });

    LPOptions lp;
    auto *l = app.add_subcommand("lp", "Build and solve the discretized chord LP");
    add_case_options(*l, lp.c, true);
    l->add_option("--grid", lp.grid, "ell nodes; alpha nodes are half")->capture_default_str();
    l->add_option("--levels", lp.levels, "Refinement levels, each doubling the grid")
        ->capture_default_str();
    l->add_option("--m", lp.m, "Geodesic multiplicity")->capture_default_str();
    l->add_option("--variant", lp.variant, "Relative LP rows: corrected or verbatim")
        ->capture_default_str();
    l->add_option("--tol", lp.tol, "Simplex tolerance")->capture_default_str();
    bind(l, [&] { return run_lp(lp); });

    MeasureOptions measure;
    auto *mc = app.add_subcommand("measure-check", "Santalo and Croke residuals of a measure");
    add_case_options(*mc, measure.c, true);
    mc->add_option("--grid", measure.grid, "Quadrature nodes")->capture_default_str();
    mc->add_option("--mc-samples", measure.mc_samples, "Monte Carlo sample count");
    mc->add_option("--seed", measure.seed, "Monte Carlo seed");
    mc->add_option("--input", measure.input, "Chord measure CSV (ell,alpha,beta,mass)");
    mc->add_option("--tol", measure.tol, "Relative tolerance")->capture_default_str();
    bind(mc, [&] { return run_measure_check(measure); });

    LemmaOptions lemma;
    auto *le = app.add_subcommand("lemma", "Nonnegativity of H for the technical lemmas");
    le->add_option("--case", lemma.lemma_case, "spherical or hyperbolic")->capture_default_str();
    le->add_option("--grid", lemma.grid, "Grid points per axis")->capture_default_str();
    le->add_option("--starts", lemma.starts, "Multistart count")->capture_default_str();
    le->add_option("--seed", lemma.seed, "Multistart seed")->capture_default_str();
    le->add_option("--tol", lemma.tol, "Allowed negative part of min H")->capture_default_str();
    bind(le, [&] { return run_lemma(lemma); });

    NegboundOptions neg;
    auto *n = app.add_subcommand("negbound", "Negative curvature checks");
    n->add_option("--kappa", neg.kappa, "Curvature, must be negative")->capture_default_str();
    n->add_option("--radius", neg.radius, "Ball radius")->capture_default_str();
    n->add_option("--L", neg.L, "Longest geodesic (default: the diameter 2r)");
    n->add_option("--grid", neg.grid, "Quadrature nodes")->capture_default_str();
    n->add_option("--search-grid", neg.search_grid, "Counterexample grid per axis")->capture_default_str();
    n->add_option("--ell-max", neg.ell_max)->capture_default_str();
    n->add_option("--r-max", neg.r_max)->capture_default_str();
    n->add_option("--tol", neg.tol, "Equality tolerance")->capture_default_str();
    bind(n, [&] { return run_negbound(neg); });

    PrinceOptions prince;
    auto *pr = app.add_subcommand("prince", "Gravity of a planar domain against the disk");
    pr->add_option("--shape", prince.shape, "disk, ellipse, square or csv")->capture_default_str();
    pr->add_option("--radius", prince.radius, "Disk radius")->capture_default_str();
    pr->add_option("--a", prince.a, "Ellipse semi-axis along the normal")->capture_default_str();
    pr->add_option("--b", prince.b, "Other ellipse semi-axis")->capture_default_str();
    pr->add_option("--side", prince.side, "Square side")->capture_default_str();
    pr->add_option("--input", prince.input, "CSV with alpha,L rows");
    pr->add_option("--tol", prince.tol)->capture_default_str();
    bind(pr, [&] { return run_prince(prince); });

    RelativeOptions rel;
    auto *re = app.add_subcommand("relative", "Orbifold equality case and relative LP");
    add_case_options(*re, rel.c, true);
    re->add_option("--m", rel.m, "Order of the cyclic group")->capture_default_str();
    re->add_option("--grid", rel.grid, "Quadrature nodes")->capture_default_str();
    re->add_option("--lp-grid", rel.lp_grid, "LP ell nodes")->capture_default_str();
    re->add_flag("--no-lp", rel.no_lp, "Skip the relative LP");
    re->add_option("--tol", rel.tol)->capture_default_str();
    bind(re, [&] { return run_relative(rel); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Report report;
    try {
        report = runner();
    } catch (const UsageError &e) {
        std::cerr << "isolp " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const DomainError &e) {
        std::cerr << "isolp " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const NotImplementedCase &e) {
        std::cerr << "isolp " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "isolp " << command << ": check failed: " << e.what() << "\n";
        return 1;
    }

    const std::string text = render(command, report, out);
    if (out.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out.path, std::ios::binary);
        if (!file || !(file << text)) {
            std::cerr << "isolp: cannot write " << out.path << "\n";
            return 2;
        }
    }
    return report.passed ? 0 : 1;
}
