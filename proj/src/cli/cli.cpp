#include "lk/cli/cli.hpp"

#include "lk/core/errors.hpp"
#include "lk/core/nested.hpp"
#include "lk/expr/parse.hpp"
#include "lk/l2/l2.hpp"
#include "lk/lebesgue/integral.hpp"
#include "lk/lebesgue/probes.hpp"
#include "lk/riemann/riemann.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace lk::cli {
namespace {

using json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A grammar error together with the text it refers to.
struct AnnotatedParseError {
    std::string label;
    std::string text;
    std::string message;
    std::size_t column;
};

FuncExpr func_arg(const std::string& label, const std::string& text, const ParseOptions& po) {
    try {
        return parse_func(text, po);
    } catch (const ParseError& e) {
        throw AnnotatedParseError{label, text, e.message(), e.column()};
    }
}

SetExpr set_arg(const std::string& label, const std::string& text, const ParseOptions& po) {
    try {
        return parse_set(text, po);
    } catch (const ParseError& e) {
        throw AnnotatedParseError{label, text, e.message(), e.column()};
    }
}

Rat rat_arg(const std::string& label, const std::string& text) {
    try {
        return parse_rat(text);
    } catch (const ParseError& e) {
        throw AnnotatedParseError{label, text, e.message(), e.column()};
    }
}

Rat positive_rat_arg(const std::string& label, const std::string& text) {
    Rat q = rat_arg(label, text);
    if (sgn(q) <= 0) throw InputError(label + " must be positive");
    return q;
}

json str(const Rat& q) { return to_string(q); }
json enc(const Enclosure& e) { return {{"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}}; }
std::string dec(const Rat& q) { return to_decimal(q, 12); }

json envelope(const std::string& op, const std::string& input, json value, const std::string& verdict,
              json certificate) {
    json j;
    j["op"] = op;
    j["input"] = input;
    j["value"] = std::move(value);
    j["verdict"] = verdict;
    j["certificate"] = std::move(certificate);
    return j;
}

// ---- shared flags ---------------------------------------------------------

struct Flags {
    std::string format = "json";
    std::string tol = "1/1000000";
    std::string measure = "lebesgue";
    std::string engine = "lebesgue";
    std::string bound = "1000000";
    std::optional<long> depth;
    std::optional<long> n;
    std::string emit_plot;
    unsigned jobs = 1;
    std::string mode = "bounded";
    std::string limit;
    std::string dominator;
    std::string uniform_bound;
    long n_min = 1;
    std::string arg1;
    std::string arg2;
};

void add_format(CLI::App* sub, Flags& f) {
    sub->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_tol(CLI::App* sub, Flags& f, const std::string& help = "tolerance (rational)") {
    sub->add_option("--tol", f.tol, help);
}

void add_jobs(CLI::App* sub, Flags& f) {
    sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::Range(1u, 64u));
}

Measure measure_arg(const std::string& text, const Interval& ambient) {
    if (text == "lebesgue") return Measure::lebesgue();
    if (text.rfind("dirac:", 0) == 0) return Measure::dirac(rat_arg("--measure dirac", text.substr(6)));
    if (text.rfind("density:", 0) == 0) {
        ParseOptions po;
        po.ambient = ambient;
        FuncExpr g = func_arg("--measure density", text.substr(8), po);
        return Measure::density(g, ambient);
    }
    throw InputError("--measure: expected lebesgue, dirac:<rat> or density:<expr>, got '" + text + "'");
}

// ---- measure --------------------------------------------------------------

int cmd_measure(const Flags& fl, std::ostream& out) {
    const std::string& text = fl.arg1;
    Rat tol = positive_rat_arg("--tol", fl.tol);
    Measure m = measure_arg(fl.measure, unit_interval());
    SetExpr parsed = set_arg("set", text, {});
    const IntervalSet& a = eval_set(parsed);

    json value;
    std::string verdict = "exact";
    json cert;
    cert["measure"] = to_string(m);
    cert["components"] = a.size();
    Enclosure e;
    switch (m.kind()) {
    case Measure::Kind::lebesgue:
        e = Enclosure::exact(measure(a));
        value = str(e.lo);
        break;
    case Measure::Kind::dirac:
        e = Enclosure::exact(a.contains(m.point()) ? 1 : 0);
        value = str(e.lo);
        cert["contains_point"] = a.contains(m.point());
        break;
    case Measure::Kind::density: {
        IntegralOptions io;
        io.tol = tol;
        e = density_measure(m.density_function(), a, io);
        value = enc(e);
        verdict = "enclosure";
        cert["tol"] = str(tol);
        break;
    }
    }
    if (fl.format == "csv") {
        out << "lo,hi,decimal\n" << to_string(e.lo) << ',' << to_string(e.hi) << ',' << dec(e.mid()) << '\n';
    } else {
        out << envelope("measure", text, value, verdict, cert).dump(2) << '\n';
    }
    return ok;
}

// ---- integrate ------------------------------------------------------------

struct EngineOut {
    std::string engine;
    std::optional<Enclosure> value;
    std::string verdict;
    json certificate;
    bool negative = false;
};

json to_json(const EngineOut& r) {
    json j;
    j["engine"] = r.engine;
    j["value"] = r.value ? enc(*r.value) : json();
    j["verdict"] = r.verdict;
    j["certificate"] = r.certificate;
    return j;
}

EngineOut not_applicable(const std::string& engine, const std::string& why) {
    EngineOut r;
    r.engine = engine;
    r.verdict = "not_applicable";
    r.certificate = {{"note", why}};
    return r;
}

EngineOut riemann_engine(const FuncExpr& f, const Rat& tol, long depth, const Measure& m) {
    if (m.kind() != Measure::Kind::lebesgue) return not_applicable("riemann", "requires the Lebesgue measure");
    RiemannOptions ro;
    ro.max_depth = depth;
    RiemannVerdict v;
    try {
        v = riemann_integrable(f, tol, ro);
    } catch (const UnboundedError&) {
        return not_applicable("riemann", "integrand is unbounded");
    }
    EngineOut r;
    r.engine = "riemann";
    if (v.cells > 0) r.value = v.enclosure();
    r.verdict = to_string(v.kind);
    r.negative = v.kind == RiemannVerdictKind::non_integrable;
    r.certificate["lower"] = str(v.lower);
    r.certificate["upper"] = str(v.upper);
    r.certificate["depth"] = v.depth;
    r.certificate["cells"] = v.cells;
    if (r.negative) r.certificate["witness_gap"] = str(v.witness_gap);
    if (!v.note.empty()) r.certificate["note"] = v.note;
    return r;
}

json nonneg_summary(const NonnegResult& n) {
    json j;
    j["kind"] = to_string(n.kind);
    j["truncated"] = enc(n.truncated);
    j["tail"] = str(n.tail);
    j["truncation_levels"] = n.table.size();
    if (!n.table.empty()) j["last_level"] = str(n.table.back().n);
    if (!n.note.empty()) j["note"] = n.note;
    return j;
}

EngineOut lebesgue_engine(const FuncExpr& f, const Rat& tol, const Rat& bound, const Measure& m) {
    EngineOut r;
    r.engine = "lebesgue";
    IntegralOptions io;
    io.tol = tol;
    try {
        IntegralResult b = lebesgue_integral_bounded(f, m, io);
        r.value = b.value;
        r.verdict = b.at_tolerance ? "integrable" : "not_at_tolerance";
        r.certificate["route"] = "bounded";
        r.certificate["measure"] = to_string(m);
        r.certificate["cells"] = b.cells;
        r.certificate["at_tolerance"] = b.at_tolerance;
        return r;
    } catch (const UnboundedError&) {
        if (m.kind() != Measure::Kind::lebesgue)
            throw InputError("unbounded integrands are supported for the Lebesgue measure only");
    }
    NonnegOptions no;
    no.tol = tol;
    no.divergence_bound = bound;
    GeneralResult g = lebesgue_integral_general(f, no);
    r.verdict = to_string(g.kind);
    if (g.kind == IntegrabilityKind::integrable) r.value = g.value;
    r.negative = g.kind == IntegrabilityKind::exceeded;
    r.certificate["route"] = "truncation";
    r.certificate["measure"] = to_string(m);
    r.certificate["divergence_bound"] = str(bound);
    r.certificate["positive"] = nonneg_summary(g.positive);
    r.certificate["negative"] = nonneg_summary(g.negative);
    return r;
}

EngineOut regulated_engine(const FuncExpr& f, const Rat& tol, const Measure& m) {
    if (m.kind() != Measure::Kind::lebesgue) return not_applicable("regulated", "requires the Lebesgue measure");
    for (Op op : {Op::indicator, Op::dirichlet, Op::piecewise})
        if (contains_op(f, op)) return not_applicable("regulated", "integrand is not certified continuous");
    const long max_cells = 1L << 16;
    EngineOut r;
    r.engine = "regulated";
    try {
        RegulatedResult g = regulated_integral(f, tol, 0, 1, max_cells);
        r.value = g.enclosure;
        r.verdict = "integrable";
        r.certificate["cells"] = g.n_cells;
        r.certificate["delta"] = str(g.delta);
    } catch (const UnboundedError&) {
        return not_applicable("regulated", "integrand is unbounded");
    } catch (const NotCertifiedError&) {
        // the enclosure at the cell budget is still valid
        RegulatedStep s = regulated_from_continuous(f, max_cells);
        Rat mid = step_integral(s.step);
        r.value = Enclosure{mid - s.delta, mid + s.delta};
        r.verdict = "not_at_tolerance";
        r.certificate["cells"] = max_cells;
        r.certificate["delta"] = str(s.delta);
    }
    return r;
}

void engine_csv(std::ostream& out, const std::vector<EngineOut>& rows) {
    out << "engine,verdict,lo,hi,decimal\n";
    for (const auto& r : rows) {
        out << r.engine << ',' << r.verdict << ',';
        if (r.value)
            out << to_string(r.value->lo) << ',' << to_string(r.value->hi) << ',' << dec(r.value->mid());
        else
            out << ",,";
        out << '\n';
    }
}

int cmd_integrate(const Flags& fl, std::ostream& out) {
    const std::string& text = fl.arg1;
    Rat tol = positive_rat_arg("--tol", fl.tol);
    Rat bound = positive_rat_arg("--bound", fl.bound);
    long depth = fl.depth.value_or(24);
    if (depth < 1 || depth > 40) throw InputError("--depth must lie in [1, 40]");
    Measure m = measure_arg(fl.measure, unit_interval());
    FuncExpr f = func_arg("integrand", text, {});

    std::vector<EngineOut> rows;
    if (fl.engine == "riemann" || fl.engine == "all") rows.push_back(riemann_engine(f, tol, depth, m));
    if (fl.engine == "lebesgue" || fl.engine == "all") rows.push_back(lebesgue_engine(f, tol, bound, m));
    if (fl.engine == "regulated" || fl.engine == "all") rows.push_back(regulated_engine(f, tol, m));

    if (fl.engine != "all") {
        const EngineOut& r = rows.front();
        if (fl.format == "csv") {
            engine_csv(out, rows);
        } else {
            json cert;
            cert["engine"] = r.engine;
            for (const auto& [k, v] : r.certificate.items()) cert[k] = v;
            out << envelope("integrate", text, r.value ? enc(*r.value) : json(), r.verdict, cert).dump(2)
                << '\n';
        }
        return r.negative ? negative : ok;
    }

    // Every enclosure produced must meet every other.
    bool agree = true;
    std::optional<Enclosure> meet;
    for (const auto& r : rows) {
        if (!r.value) continue;
        if (!meet) {
            meet = r.value;
        } else if (!meet->intersects(*r.value)) {
            agree = false;
        } else {
            meet = Enclosure{max(meet->lo, r.value->lo), min(meet->hi, r.value->hi)};
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[i].value && rows[j].value && !rows[i].value->intersects(*rows[j].value)) agree = false;
    if (fl.format == "csv") {
        engine_csv(out, rows);
    } else {
        json engines = json::array();
        for (const auto& r : rows) engines.push_back(to_json(r));
        json value = agree && meet ? enc(*meet) : json();
        out << envelope("integrate", text, value, agree ? "agree" : "disagree", {{"engines", engines}}).dump(2)
            << '\n';
    }
    return agree ? ok : negative;
}

// ---- cantor and cover -----------------------------------------------------

int cmd_cantor(const Flags& fl, std::ostream& out) {
    long depth = fl.depth.value_or(5);
    if (depth < 0 || depth > 24) throw InputError("--depth must lie in [0, 24]");
    LimitReport rep = limit_measure(cantor_family(), depth);
    if (fl.format == "csv") {
        out << "n,components,measure,decimal\n";
        for (long n = 0; n <= depth; ++n)
            out << n << ',' << (1L << n) << ',' << to_string(rep.measures[n]) << ',' << dec(rep.measures[n]) << '\n';
        return ok;
    }
    json levels = json::array();
    for (long n = 0; n <= depth; ++n)
        levels.push_back({{"n", n}, {"components", 1L << n}, {"measure", str(rep.measures[n])}});
    json cert;
    cert["direction"] = to_string(rep.direction);
    cert["strict"] = rep.strict;
    cert["last_step"] = str(rep.last_step);
    cert["levels"] = levels;
    out << envelope("cantor", "cantor(" + std::to_string(depth) + ")", str(rep.last), "exact", cert).dump(2)
        << '\n';
    return ok;
}

int cmd_cover(const Flags& fl, std::ostream& out) {
    Rat eps = positive_rat_arg("--tol", fl.tol);
    // 2^22 components at most
    NullCover nc = null_cover(cantor_family(), eps, 22);
    CoverCheck chk = outer_measure_of_cover(nc.cover, cantor_level(nc.level));
    bool verified = chk.covers && nc.cover.total_length < eps;
    if (fl.format == "csv") {
        out << "lo,hi,lo_decimal,hi_decimal\n";
        for (const auto& i : nc.cover.intervals)
            out << to_string(i.lo) << ',' << to_string(i.hi) << ',' << dec(i.lo) << ',' << dec(i.hi) << '\n';
    } else {
        json cert;
        cert["eps"] = str(eps);
        cert["level"] = nc.level;
        cert["level_measure"] = str(nc.level_measure);
        cert["slack"] = str(nc.slack);
        cert["intervals"] = nc.cover.intervals.size();
        cert["covers_level"] = chk.covers;
        out << envelope("cover", "cantor", str(nc.cover.total_length), verified ? "verified" : "failed", cert)
                   .dump(2)
            << '\n';
    }
    return verified ? ok : negative;
}

// ---- converge -------------------------------------------------------------

int cmd_converge(const Flags& fl, std::ostream& out) {
    const std::string& text = fl.arg1;
    ConvergenceOptions co;
    if (fl.mode == "bounded")
        co.mode = ConvergenceMode::bounded;
    else if (fl.mode == "monotone")
        co.mode = ConvergenceMode::monotone;
    else
        co.mode = ConvergenceMode::dominated;
    co.tol = positive_rat_arg("--tol", fl.tol);
    co.n_min = fl.n_min;
    co.n_max = fl.n.value_or(16);
    if (co.n_min < 1 || co.n_max < co.n_min) throw InputError("need 1 <= --n-min <= --N");
    if (!fl.limit.empty()) co.limit = func_arg("--limit", fl.limit, {});
    if (!fl.dominator.empty()) co.dominator = func_arg("--dominator", fl.dominator, {});
    if (co.mode == ConvergenceMode::dominated && !co.dominator)
        throw InputError("--mode dominated needs --dominator");
    if (!fl.uniform_bound.empty()) co.bound = positive_rat_arg("--M", fl.uniform_bound);

    ConvergenceReport rep;
    try {
        rep = convergence_run(text, co);
    } catch (const ParseError& e) {
        throw AnnotatedParseError{"template", text, e.message(), e.column()};
    }

    if (fl.format == "csv") {
        out << "n,integral_lo,integral_hi,integral,sup_abs,hypothesis\n";
        for (const auto& r : rep.rows)
            out << r.n << ',' << to_string(r.integral.lo) << ',' << to_string(r.integral.hi) << ','
                << dec(r.integral.mid()) << ',' << to_string(r.sup_abs) << ',' << (r.hypothesis ? "holds" : "fails")
                << '\n';
        return ok;
    }
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"n", r.n},
                        {"integral", enc(r.integral)},
                        {"sup_abs", to_string(r.sup_abs)},
                        {"hypothesis", r.hypothesis}});
    json cert;
    cert["mode"] = to_string(rep.mode);
    cert["bound"] = rep.bound ? str(*rep.bound) : json();
    cert["gap"] = rep.gap ? enc(*rep.gap) : json();
    cert["probes"] = {{"closer", rep.probes_closer},
                      {"total", rep.probes_total},
                      {"consistent", rep.probes_consistent},
                      {"distance", str(rep.probe_distance)}};
    cert["rows"] = rows;
    json value = rep.limit_integral ? enc(*rep.limit_integral) : json();
    out << envelope("converge", text, value, rep.hypothesis_flag ? "hypothesis_violated" : "hypothesis_holds", cert)
               .dump(2)
        << '\n';
    return ok;
}

// ---- fourier and l2check --------------------------------------------------

long plot_grid(const std::string& spec) {
    const std::string prefix = "grid=";
    if (spec.rfind(prefix, 0) != 0) throw InputError("--emit-plot: expected grid=<int>, got '" + spec + "'");
    std::string digits = spec.substr(prefix.size());
    if (digits.empty() || digits.size() > 6 || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw InputError("--emit-plot: expected grid=<int>, got '" + spec + "'");
    long k = std::stol(digits);
    if (k < 2) throw InputError("--emit-plot: grid needs at least 2 points");
    return k;
}

ParseOptions l2_parse() {
    ParseOptions po;
    po.ambient = l2_ambient();
    return po;
}

int cmd_fourier(const Flags& fl, std::ostream& out, bool csv) {
    const std::string& text = fl.arg1;
    long n = fl.n.value_or(16);
    if (n < 0 || n > 100000) throw InputError("--N must lie in [0, 100000]");
    std::optional<long> grid;
    if (!fl.emit_plot.empty()) grid = plot_grid(fl.emit_plot);
    FourierOptions fo;
    fo.tol = positive_rat_arg("--tol", fl.tol);
    fo.jobs = fl.jobs;

    L2Element f(func_arg("function", text, l2_parse()), fo.tol);
    BesselParseval bp = bessel_parseval(f, n, fo);
    if (csv) {
        write_coeff_csv(out, bp.coeffs);
        if (grid) {
            out << '\n';
            write_partial_sum_csv(out, f, bp.coeffs, n, *grid);
        }
        return ok;
    }
    json coeffs = json::array();
    coeffs.push_back({{"n", 0}, {"A", enc(bp.coeffs.a0)}});
    for (long k = 1; k <= n; ++k)
        coeffs.push_back({{"n", k}, {"A", enc(bp.coeffs.a[k - 1])}, {"B", enc(bp.coeffs.b[k - 1])}});
    json cert;
    cert["N"] = n;
    cert["tol"] = str(fo.tol);
    cert["norm_sq"] = enc(bp.norm_sq);
    cert["gap"] = enc(bp.gap);
    cert["max_width"] = str(bp.coeffs.max_width());
    cert["coefficients"] = coeffs;
    if (grid) {
        std::ostringstream plot;
        write_partial_sum_csv(plot, f, bp.coeffs, n, *grid);
        json rows = json::array();
        std::istringstream in(plot.str());
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) rows.push_back(line);
        cert["plot_header"] = "x,x_decimal,f,S_N";
        cert["plot"] = rows;
    }
    bool holds = sgn(bp.gap.hi) >= 0;
    out << envelope("fourier", text, enc(bp.bessel_sum), holds ? "bessel_holds" : "bessel_violated", cert).dump(2)
        << '\n';
    return holds ? ok : negative;
}

int cmd_l2check(const Flags& fl, std::ostream& out) {
    const std::string& ft = fl.arg1;
    const std::string& gt = fl.arg2;
    Rat tol = positive_rat_arg("--tol", fl.tol);
    L2Element f(func_arg("f", ft, l2_parse()), tol);
    L2Element g(func_arg("g", gt, l2_parse()), tol);
    InequalityReport rep = inequality_suite(f, g, {}, tol);
    bool pass = rep.all_pass();
    if (fl.format == "csv") {
        out << "name,lhs_lo,lhs_hi,rhs_lo,rhs_hi,residual,allowance,pass,equality\n";
        for (const auto& c : rep.checks)
            out << c.name << ',' << to_string(c.lhs.lo) << ',' << to_string(c.lhs.hi) << ',' << to_string(c.rhs.lo)
                << ',' << to_string(c.rhs.hi) << ',' << to_string(c.residual) << ',' << to_string(c.allowance) << ','
                << (c.pass ? "true" : "false") << ',' << (c.equality ? "true" : "false") << '\n';
        return pass ? ok : negative;
    }
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"lhs", enc(c.lhs)},
                          {"rhs", enc(c.rhs)},
                          {"residual", str(c.residual)},
                          {"allowance", str(c.allowance)},
                          {"pass", c.pass},
                          {"equality", c.equality}});
    json cert;
    cert["tol"] = str(tol);
    cert["checks"] = checks;
    out << envelope("l2check", ft + " ; " + gt, enc(inner(f, g, tol)), pass ? "pass" : "fail", cert).dump(2)
        << '\n';
    return pass ? ok : negative;
}

void annotate(std::ostream& err, const AnnotatedParseError& e) {
    err << "error: " << e.label << ": " << e.message << " at column " << e.column << '\n';
    err << "  " << e.text << '\n';
    err << "  " << std::string(e.column > 0 ? e.column - 1 : 0, ' ') << "^\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact measures, certified integrals and Fourier analysis", "lk"};
    app.require_subcommand(1, 1);
    Flags fl;

    auto* measure = app.add_subcommand("measure", "measure of a set expression");
    measure->add_option("set", fl.arg1, "set expression")->required();
    measure->add_option("--measure", fl.measure, "lebesgue, dirac:<rat> or density:<expr>");
    add_tol(measure, fl, "tolerance for density measures");
    add_format(measure, fl);

    auto* integrate = app.add_subcommand("integrate", "integral of a function over [0,1]");
    integrate->add_option("function", fl.arg1, "function expression")->required();
    integrate->add_option("--engine", fl.engine, "riemann, lebesgue, regulated or all")
        ->check(CLI::IsMember({"riemann", "lebesgue", "regulated", "all"}));
    integrate->add_option("--measure", fl.measure, "lebesgue, dirac:<rat> or density:<expr>");
    integrate->add_option("--depth", fl.depth, "maximal dyadic depth of the Riemann engine");
    integrate->add_option("--bound", fl.bound, "divergence bound of the truncation path");
    add_tol(integrate, fl);
    add_format(integrate, fl);

    auto* cantor = app.add_subcommand("cantor", "measures of the Cantor levels J_0 .. J_depth");
    cantor->add_option("--depth", fl.depth, "last level");
    add_format(cantor, fl);

    auto* cover = app.add_subcommand("cover", "open cover of the Cantor set of total length < tol");
    cover->add_option("--tol", fl.tol, "bound on the total length")->default_str("1/1000");
    add_format(cover, fl);

    auto* converge = app.add_subcommand("converge", "integrals along a family f_n");
    converge->add_option("template", fl.arg1, "function template in n")->required();
    converge->add_option("--mode", fl.mode, "bounded, monotone or dominated")
        ->check(CLI::IsMember({"bounded", "monotone", "dominated"}));
    converge->add_option("--limit", fl.limit, "pointwise limit");
    converge->add_option("--dominator", fl.dominator, "dominating function");
    converge->add_option("--M", fl.uniform_bound, "uniform bound (bounded mode)");
    converge->add_option("--n-min", fl.n_min, "first index");
    converge->add_option("--N", fl.n, "last index");
    add_tol(converge, fl);
    add_format(converge, fl);

    auto* fourier = app.add_subcommand("fourier", "trigonometric coefficients on [-1,1]");
    fourier->add_option("function", fl.arg1, "function expression")->required();
    fourier->add_option("--N", fl.n, "number of cosine/sine pairs");
    fourier->add_option("--emit-plot", fl.emit_plot, "grid=<int>: sample f and S_N");
    add_tol(fourier, fl, "per-coefficient tolerance");
    add_format(fourier, fl);
    add_jobs(fourier, fl);

    auto* l2check = app.add_subcommand("l2check", "L2 inequalities for a pair on [-1,1]");
    l2check->add_option("f", fl.arg1, "first function")->required();
    l2check->add_option("g", fl.arg2, "second function")->required();
    add_tol(l2check, fl);
    add_format(l2check, fl);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    try {
        if (measure->parsed()) return cmd_measure(fl, out);
        if (integrate->parsed()) return cmd_integrate(fl, out);
        if (cantor->parsed()) return cmd_cantor(fl, out);
        if (cover->parsed()) {
            if (cover->count("--tol") == 0) fl.tol = "1/1000";
            return cmd_cover(fl, out);
        }
        if (converge->parsed()) return cmd_converge(fl, out);
        if (fourier->parsed()) return cmd_fourier(fl, out, fourier->count("--format") == 0 || fl.format == "csv");
        if (l2check->parsed()) return cmd_l2check(fl, out);
    } catch (const AnnotatedParseError& e) {
        annotate(err, e);
        return input_error;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const InvariantError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const NotCertifiedError& e) {
        err << "not certified: " << e.what() << '\n';
        return negative;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
    return input_error;
}

}  // namespace lk::cli
