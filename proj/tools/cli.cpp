#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "urn/bounds.hpp"
#include "urn/error.hpp"
#include "urn/grid.hpp"
#include "urn/mc.hpp"
#include "urn/negdep.hpp"
#include "urn/phase.hpp"

namespace urn::cli {
namespace {

using Json = nlohmann::ordered_json;

// Exact laws allocate O(N) per time point; beyond this the tool refuses.
constexpr std::int64_t kMaxExactBalls = 10'000'000;
constexpr std::size_t kMaxTimePoints = 1'000'000;
constexpr std::int64_t kMaxSamples = 1'000'000'000;
constexpr double kSandwichSlack = 1e-9;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::int64_t n_balls = 100;
    std::int64_t heavy = 10;
    double alpha = 0.5;
    std::string initial;
    double t_start = 0.0;
    double t_stop = 10.0;
    std::size_t t_points = 50;
    std::string t_spacing = "linear";
    double epsilon = 0.25;
    std::uint64_t seed = 1;
    std::int64_t samples = 10'000;
    std::string format;
    std::string out;

    bool chain = false;
    bool no_exact = false;
    double t = 1.0;
    std::int64_t max_size = 0;
    std::string sampler = "coupled";

    std::string m_rule;
    std::string alpha_rule;
    std::string sizes;
    std::string mode = "extrapolate";
    std::string gamma_inf, tilde_gamma_inf, ell, m_diverges;
    std::string expect_observable, expect_chain;
    bool ratio = false;
};

std::string real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json num(double x) {
    if (std::isfinite(x)) return x;
    return real(x);
}

template <class T>
Json opt(const std::optional<T>& x) {
    if (!x) return nullptr;
    if constexpr (std::is_floating_point_v<T>) {
        return num(*x);
    } else {
        return *x;
    }
}

double parse_real(const std::string& text, const char* what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (text.empty() || *end != '\0') throw UsageError(std::string("cannot read ") + what + " from '" + text + "'");
    return x;
}

std::int64_t parse_int(const std::string& text, const char* what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long long x = std::strtoll(begin, &end, 10);
    if (text.empty() || *end != '\0') throw UsageError(std::string("cannot read ") + what + " from '" + text + "'");
    return x;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

// --initial: "corners", "scan", or "r,h".
struct InitialChoice {
    std::optional<InitialState> state;
    InitialStrategy strategy = InitialStrategy::corners;
    std::string label;
};

InitialChoice parse_initial(const std::string& text, const ModelParams& params) {
    if (text == "corners") return {std::nullopt, InitialStrategy::corners, "corners"};
    if (text == "scan") return {std::nullopt, InitialStrategy::full_scan, "scan"};
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw UsageError("--initial expects corners, scan, or r,h");
    InitialState s{parse_int(parts[0], "r"), parse_int(parts[1], "h")};
    validate(params, s);
    return {s, InitialStrategy::corners, std::to_string(s.regular_left) + "," + std::to_string(s.heavy_left)};
}

ModelParams make_params(const Options& o) {
    ModelParams p(o.n_balls, o.heavy, o.alpha);
    if (p.total_balls() > kMaxExactBalls)
        throw CapacityError("exact laws are limited to N <= " + std::to_string(kMaxExactBalls));
    return p;
}

std::vector<double> make_grid(const Options& o) {
    if (o.t_points > kMaxTimePoints)
        throw CapacityError("time grid is limited to " + std::to_string(kMaxTimePoints) + " points");
    return make_time_grid(o.t_start, o.t_stop, o.t_points,
                          o.t_spacing == "geometric" ? Spacing::geometric : Spacing::linear);
}

double distance_from(const ModelParams& p, const InitialChoice& init, double t, Target target) {
    if (!init.state) return distance(p, t, target, init.strategy);
    if (target == Target::observable) return tv(observed_law(p, *init.state, t), stationary_observed(p));
    return tv_product(chain_law(p, *init.state, t), stationary_chain(p));
}

// Output: a header echoing the resolved configuration, then the payload.

struct Output {
    std::string command;
    Json config = Json::object();
};

void csv_header(std::ostream& os, const Output& o) {
    os << "# artifact: " << kArtifactVersion << '\n';
    os << "# command: " << o.command << '\n';
    for (const auto& [key, value] : o.config.items())
        os << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
}

Json json_document(const Output& o) {
    Json doc;
    doc["artifact"] = kArtifactVersion;
    doc["command"] = o.command;
    doc["config"] = o.config;
    return doc;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(std::ostream& os, const Output& o, const Table& table, const std::string& format) {
    if (format == "json") {
        Json doc = json_document(o);
        Json rows = Json::array();
        for (const auto& row : table.rows) {
            Json r = Json::object();
            for (std::size_t i = 0; i < row.size(); ++i) r[table.columns[i]] = num(row[i]);
            rows.push_back(std::move(r));
        }
        doc["rows"] = std::move(rows);
        os << doc.dump(2) << '\n';
        return;
    }
    csv_header(os, o);
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << real(row[i]);
        os << '\n';
    }
}

void echo_model(Output& out, const ModelParams& p) {
    out.config["n_balls"] = p.total_balls();
    out.config["heavy"] = p.heavy_count();
    out.config["alpha"] = real(p.heavy_rate());
}

void echo_grid(Output& out, const Options& o) {
    out.config["t_start"] = real(o.t_start);
    out.config["t_stop"] = real(o.t_stop);
    out.config["t_points"] = o.t_points;
    out.config["t_spacing"] = o.t_spacing;
}

std::string resolve_format(const Options& o, const char* fallback, bool csv_allowed) {
    const std::string f = o.format.empty() ? fallback : o.format;
    if (f == "csv" && !csv_allowed) throw UsageError("this command only writes json");
    return f;
}

// Subcommands. Each writes its payload to `os` and returns an exit code.

int cmd_curve(const Options& o, std::ostream& os) {
    const auto p = make_params(o);
    const auto init = parse_initial(o.initial.empty() ? "corners" : o.initial, p);
    const auto grid = make_grid(o);
    const auto format = resolve_format(o, "csv", true);

    Output out{"curve"};
    echo_model(out, p);
    out.config["initial"] = init.label;
    echo_grid(out, o);
    out.config["chain"] = o.chain;
    out.config["format"] = format;

    Table table{{"t", "D_obs"}, {}};
    if (o.chain) table.columns.emplace_back("D_chain");
    for (double t : grid) {
        std::vector<double> row{t, distance_from(p, init, t, Target::observable)};
        if (o.chain) row.push_back(distance_from(p, init, t, Target::chain));
        table.rows.push_back(std::move(row));
    }
    write_table(os, out, table, format);
    return kOk;
}

int cmd_bounds(const Options& o, std::ostream& os, std::ostream& err) {
    const auto p = make_params(o);
    const auto init = parse_initial(o.initial.empty() ? "corners" : o.initial, p);
    const auto grid = make_grid(o);
    const auto format = resolve_format(o, "csv", true);

    Output out{"bounds"};
    echo_model(out, p);
    out.config["initial"] = init.label;
    echo_grid(out, o);
    out.config["exact"] = !o.no_exact;
    out.config["format"] = format;

    // Lower bounds are for the all-right start; they bound the worst case and, by
    // symmetry, the all-left start, but say nothing about other explicit starts.
    const bool lower_applies =
        !init.state || (init.state->regular_left == 0 && init.state->heavy_left == 0) ||
        (init.state->regular_left == p.regular_count() && init.state->heavy_left == p.heavy_count());

    Table table{{"t", "lb_cheb", "lb_kolm", "lb_clt"}, {}};
    if (!o.no_exact) table.columns.emplace_back("exact");
    table.columns.emplace_back("ub_l2");
    table.columns.emplace_back("ub_coupling_raw");

    const auto coupling = evaluate_bound(BoundKind::coupling_ub, p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double cheb = chebyshev_lower_bound(p, t);
        const double kolm = kolmogorov_lower_bound(p, t);
        const double clt = clt_lower_bound(p, t);
        const double ub = l2_upper_bound(p, t);
        std::vector<double> row{t, cheb, kolm, clt};
        if (!o.no_exact) {
            const double exact = distance_from(p, init, t, Target::observable);
            const double lb = std::max(cheb, kolm);
            if ((lower_applies && exact < lb - kSandwichSlack) || exact > ub + kSandwichSlack) {
                err << "INVARIANT VIOLATION at t=" << real(t) << ": exact " << real(exact)
                    << " outside certified [" << real(lower_applies ? lb : 0.0) << ", " << real(ub)
                    << "]. Either the implementation is wrong or a certified bound fails; "
                       "this is not a usage problem.\n";
                return kInvariant;
            }
            row.push_back(exact);
        }
        row.push_back(ub);
        row.push_back(coupling.points[i].raw);
        table.rows.push_back(std::move(row));
    }
    write_table(os, out, table, format);
    return kOk;
}

HeavyRule parse_heavy_rule(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--m-rule expects const:K, power:E or sqrtexp:S,L");
    const auto kind = text.substr(0, colon);
    const auto args = split(text.substr(colon + 1), ',');
    if (kind == "const" && args.size() == 1) return FixedHeavy{parse_int(args[0], "--m-rule count")};
    if (kind == "power" && args.size() == 1) return PowerHeavy{parse_real(args[0], "--m-rule exponent")};
    if (kind == "sqrtexp" && args.size() == 2)
        return SqrtExpHeavy{parse_real(args[0], "--m-rule scale"), parse_real(args[1], "--m-rule ell")};
    throw UsageError("--m-rule expects const:K, power:E or sqrtexp:S,L");
}

RateRule parse_rate_rule(const std::string& text) {
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const auto kind = text.substr(0, colon);
        const auto arg = text.substr(colon + 1);
        if (kind == "const") return ConstantRate{parse_real(arg, "--alpha-rule value")};
        if (kind == "overlog") return RateOverLog{parse_real(arg, "--alpha-rule numerator")};
    }
    throw UsageError("--alpha-rule expects const:A or overlog:C");
}

std::vector<std::int64_t> parse_sizes(const std::string& text) {
    std::vector<std::int64_t> sizes;
    for (const auto& s : split(text, ',')) sizes.push_back(parse_int(s, "--sizes"));
    if (sizes.size() < 2) throw UsageError("--sizes needs at least two sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw UsageError("--sizes must be strictly increasing");
    if (sizes.back() > kMaxExactBalls)
        throw CapacityError("family sizes are limited to N <= " + std::to_string(kMaxExactBalls));
    return sizes;
}

std::optional<Regime> parse_label(const std::string& text, const char* flag) {
    if (text.empty()) return std::nullopt;
    const auto r = parse_regime(text);
    if (!r) throw UsageError(std::string(flag) + " must be Insensitivity, DelayedCutoff or NoCutoff");
    return r;
}

int cmd_classify(const Options& o, std::ostream& os) {
    const auto format = resolve_format(o, "json", false);
    if (o.m_rule.empty() || o.alpha_rule.empty() || o.sizes.empty())
        throw UsageError("classify needs --m-rule, --alpha-rule and --sizes");
    const ParamFamily family(parse_heavy_rule(o.m_rule), parse_rate_rule(o.alpha_rule),
                             parse_sizes(o.sizes));

    const bool declared_mode = o.mode == "declared";
    std::optional<DeclaredLimits> declared;
    if (declared_mode) {
        if (o.gamma_inf.empty() || o.tilde_gamma_inf.empty() || o.ell.empty() || o.m_diverges.empty())
            throw UsageError(
                "--mode declared needs --gamma-inf, --tilde-gamma-inf, --ell and --m-diverges");
        if (o.m_diverges != "true" && o.m_diverges != "false")
            throw UsageError("--m-diverges expects true or false");
        declared = DeclaredLimits{parse_real(o.gamma_inf, "--gamma-inf"),
                                  parse_real(o.tilde_gamma_inf, "--tilde-gamma-inf"),
                                  parse_real(o.ell, "--ell"),
                                  o.m_diverges == "true",
                                  parse_label(o.expect_observable, "--expect-observable"),
                                  parse_label(o.expect_chain, "--expect-chain")};
    }

    auto report = classify(family, declared_mode ? ClassifyMode::declared_limits : ClassifyMode::extrapolate,
                           declared, false);
    if (o.ratio) report.product_condition_ratio =
        product_condition_ratio(family.at(family.sizes().back()), o.epsilon);

    Output out{"classify"};
    out.config["m_rule"] = o.m_rule;
    out.config["alpha_rule"] = o.alpha_rule;
    out.config["sizes"] = family.sizes();
    out.config["mode"] = declared_mode ? "declared" : "extrapolate";
    if (declared) {
        out.config["gamma_inf"] = num(declared->gamma_inf);
        out.config["tilde_gamma_inf"] = num(declared->tilde_gamma_inf);
        out.config["ell"] = num(declared->ell);
        out.config["m_diverges"] = declared->m_diverges;
    }
    out.config["ratio"] = o.ratio;
    if (o.ratio) out.config["epsilon"] = real(o.epsilon);
    out.config["format"] = format;

    Json doc = json_document(out);
    Json r;
    r["schema"] = "regime-report/1";
    r["mode"] = declared_mode ? "declared_limits" : "extrapolate";
    Json samples = Json::array();
    for (const auto& s : report.samples) {
        samples.push_back({{"total_balls", s.total_balls},
                           {"heavy_count", s.heavy_count},
                           {"alpha", num(s.alpha)},
                           {"beta", num(s.beta)},
                           {"gamma", num(s.gamma)},
                           {"tilde_gamma", num(s.tilde_gamma)},
                           {"ell", num(s.ell)}});
    }
    r["samples"] = std::move(samples);
    r["gamma_inf"] = opt(report.gamma_inf);
    r["tilde_gamma_inf"] = opt(report.tilde_gamma_inf);
    r["ell"] = opt(report.ell);
    r["m_diverges"] = opt(report.m_diverges);
    r["observable_regime"] = to_string(report.observable_regime);
    r["chain_regime"] = to_string(report.chain_regime);
    r["predicted"] = {{"t_regular", num(report.predicted.t_regular)},
                      {"t_heavy", num(report.predicted.t_heavy)},
                      {"t_delayed", num(report.predicted.t_delayed)}};
    r["relaxation_time"] = num(report.relaxation_time);
    r["product_condition_ratio"] = opt(report.product_condition_ratio);
    doc["report"] = std::move(r);
    os << doc.dump(2) << '\n';
    return kOk;
}

int cmd_negdep(const Options& o, std::ostream& os, std::ostream& err) {
    const auto p = make_params(o);
    const auto format = resolve_format(o, "json", false);
    const std::int64_t max_size = o.max_size == 0 ? p.total_balls() : o.max_size;
    if (max_size < 1 || max_size > p.total_balls())
        throw UsageError("--max-size must lie in [1, N]");
    const auto report = verify_negative_dependence(p, o.t, max_size);

    Output out{"negdep"};
    echo_model(out, p);
    out.config["t"] = real(o.t);
    out.config["max_size"] = max_size;
    out.config["format"] = format;

    Json doc = json_document(out);
    Json r;
    r["t"] = num(report.t);
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"size", row.size},
                        {"joint_moment", num(row.joint_moment)},
                        {"product_moment", num(row.product_moment)},
                        {"slack", num(row.slack)},
                        {"brute_force", num(row.brute_force)}});
    }
    r["rows"] = std::move(rows);
    r["min_slack"] = num(report.min_slack);
    r["brute_force_checked"] = report.brute_force_checked;
    r["pass"] = report.pass;
    doc["report"] = std::move(r);
    os << doc.dump(2) << '\n';

    if (!report.pass) {
        err << "INVARIANT VIOLATION: negative dependence check failed (min slack "
            << real(report.min_slack) << "). Either the implementation is wrong or the "
               "inequality fails for this instance.\n";
        return kInvariant;
    }
    return kOk;
}

int cmd_simulate(const Options& o, std::ostream& os) {
    const auto p = make_params(o);
    const std::string init_text = o.initial.empty() ? "0,0" : o.initial;
    if (init_text == "corners" || init_text == "scan")
        throw UsageError("simulate needs an explicit --initial r,h");
    const auto init = parse_initial(init_text, p);
    if (o.samples < 1) throw UsageError("--samples must be at least 1");
    if (o.samples > kMaxSamples)
        throw CapacityError("--samples is limited to " + std::to_string(kMaxSamples));
    const auto format = resolve_format(o, "csv", true);
    const Sampler sampler = o.sampler == "ctmc" ? Sampler::ctmc : Sampler::coupled;

    const auto batch = generate_batch(p, *init.state, o.t, o.seed, o.samples, sampler);

    Output out{"simulate"};
    echo_model(out, p);
    out.config["initial"] = init.label;
    out.config["t"] = real(o.t);
    out.config["seed"] = o.seed;
    out.config["samples"] = o.samples;
    out.config["sampler"] = o.sampler;
    out.config["format"] = format;

    if (format == "csv") {
        csv_header(os, out);
        os << "index,R,H,W\n";
        for (std::size_t i = 0; i < batch.outcomes.size(); ++i) {
            const auto& d = batch.outcomes[i];
            os << i << ',' << d.regular << ',' << d.heavy << ',' << d.balls() << '\n';
        }
        return kOk;
    }

    double mean = 0.0;
    for (const auto& d : batch.outcomes) mean += static_cast<double>(d.balls());
    mean /= static_cast<double>(o.samples);
    double var = 0.0;
    for (const auto& d : batch.outcomes) {
        const double x = static_cast<double>(d.balls()) - mean;
        var += x * x;
    }
    var = o.samples > 1 ? var / static_cast<double>(o.samples - 1) : 0.0;

    const auto exact = observed_law(p, *init.state, o.t);
    const double exact_sd = std::sqrt(exact.variance() / static_cast<double>(o.samples));
    const double empirical_tv = tv(empirical_pmf(batch, Projection::W), exact);
    const double bias = std::sqrt(static_cast<double>(p.total_balls() + 1) / static_cast<double>(o.samples));

    Json doc = json_document(out);
    Json s;
    s["mean_W"] = num(mean);
    s["variance_W"] = num(var);
    s["exact_mean_W"] = num(exact.mean());
    s["exact_variance_W"] = num(exact.variance());
    s["standard_error"] = num(exact_sd);
    s["z_score"] = exact_sd > 0.0 ? num((mean - exact.mean()) / exact_sd) : Json(nullptr);
    s["empirical_tv"] = num(empirical_tv);
    s["bias_bound"] = num(bias);
    s["note"] = "empirical_tv compares the empirical law of W with the exact law at t; it is "
                "biased upward by up to about bias_bound = sqrt((N+1)/samples)";
    doc["summary"] = std::move(s);
    os << doc.dump(2) << '\n';
    return kOk;
}

void add_model(CLI::App* sub, Options& o) {
    sub->add_option("--n-balls", o.n_balls, "total number of balls N")->capture_default_str();
    sub->add_option("--heavy", o.heavy, "number of heavy balls m")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "refresh rate of heavy balls")->capture_default_str();
}

void add_grid(CLI::App* sub, Options& o) {
    sub->add_option("--t-start", o.t_start)->capture_default_str();
    sub->add_option("--t-stop", o.t_stop)->capture_default_str();
    sub->add_option("--t-points", o.t_points)->capture_default_str();
    sub->add_option("--t-spacing", o.t_spacing)
        ->check(CLI::IsMember({"linear", "geometric"}))
        ->capture_default_str();
}

void add_io(CLI::App* sub, Options& o) {
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "write results here instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact and simulated mixing of the two-species Ehrenfest urn", "urnlab"};
    app.set_version_flag("--version", kArtifactVersion);
    app.require_subcommand(1);

    auto* curve = app.add_subcommand("curve", "worst-case distance to equilibrium over a time grid");
    add_model(curve, o);
    curve->add_option("--initial", o.initial, "corners, scan, or r,h");
    add_grid(curve, o);
    curve->add_flag("--chain", o.chain, "also report the distance of the full chain");
    add_io(curve, o);

    auto* bounds = app.add_subcommand("bounds", "certified lower and upper bounds beside the exact distance");
    add_model(bounds, o);
    bounds->add_option("--initial", o.initial, "corners, scan, or r,h");
    add_grid(bounds, o);
    bounds->add_flag("--no-exact", o.no_exact, "omit the exact column and the sandwich check");
    add_io(bounds, o);

    auto* cls = app.add_subcommand("classify", "regime labels of a parameter family");
    cls->add_option("--m-rule", o.m_rule, "const:K, power:E or sqrtexp:S,L");
    cls->add_option("--alpha-rule", o.alpha_rule, "const:A or overlog:C");
    cls->add_option("--sizes", o.sizes, "strictly increasing sizes, e.g. 1000,10000,100000");
    cls->add_option("--mode", o.mode)->check(CLI::IsMember({"extrapolate", "declared"}))->capture_default_str();
    cls->add_option("--gamma-inf", o.gamma_inf, "declared limit of gamma (inf allowed)");
    cls->add_option("--tilde-gamma-inf", o.tilde_gamma_inf, "declared limit of tilde gamma");
    cls->add_option("--ell", o.ell, "declared limit of (2 beta - 1) log N (inf allowed)");
    cls->add_option("--m-diverges", o.m_diverges, "true or false");
    cls->add_option("--expect-observable", o.expect_observable, "expected observable regime");
    cls->add_option("--expect-chain", o.expect_chain, "expected chain regime");
    cls->add_flag("--ratio", o.ratio, "compute the product-condition ratio at the largest size");
    cls->add_option("--epsilon", o.epsilon, "threshold for the mixing time in the ratio")->capture_default_str();
    add_io(cls, o);

    auto* neg = app.add_subcommand("negdep", "negative dependence of the heavy-ball indicators");
    add_model(neg, o);
    neg->add_option("--t", o.t)->capture_default_str();
    neg->add_option("--max-size", o.max_size, "largest subset size (default N)");
    add_io(neg, o);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo draws of (R_t, H_t)");
    add_model(sim, o);
    sim->add_option("--initial", o.initial, "r,h (default 0,0)");
    sim->add_option("--t", o.t)->capture_default_str();
    sim->add_option("--seed", o.seed)->capture_default_str();
    sim->add_option("--samples", o.samples)->capture_default_str();
    sim->add_option("--sampler", o.sampler)->check(CLI::IsMember({"coupled", "ctmc"}))->capture_default_str();
    add_io(sim, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            err << "error: cannot open " << o.out << " for writing\n";
            return kUsage;
        }
    }
    // Buffer so a failing run never leaves a partial result behind.
    std::ostringstream buffer;
    int code = kOk;
    try {
        if (curve->parsed()) code = cmd_curve(o, buffer);
        else if (bounds->parsed()) code = cmd_bounds(o, buffer, err);
        else if (cls->parsed()) code = cmd_classify(o, buffer);
        else if (neg->parsed()) code = cmd_negdep(o, buffer, err);
        else code = cmd_simulate(o, buffer);
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << '\n';
        return kCapacity;
    } catch (const ValidationError& e) {
        err << "contradiction: " << e.what() << '\n';
        return kContradiction;
    } catch (const InvariantViolation& e) {
        err << "INVARIANT VIOLATION: " << e.what() << '\n';
        return kInvariant;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "usage: " << e.what() << '\n';
        return kUsage;
    }
    if (code == kOk || code == kInvariant) (o.out.empty() ? out : file) << buffer.str();
    return code;
}

}  // namespace urn::cli
