#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "urn/bounds.hpp"
#include "urn/dist.hpp"

using urn::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

// Data lines of a CSV output: header comments and the column line removed.
std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::string* columns = nullptr) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool seen_columns = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) continue;
        if (!seen_columns) {
            seen_columns = true;
            if (columns) *columns = line;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("curve at t = 0") {
    const auto r = invoke({"curve", "--n-balls", "12", "--heavy", "3", "--t-points", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# artifact: urnlab", 0) == 0);
    CHECK(r.out.find("# n_balls: 12") != std::string::npos);
    std::string columns;
    const auto rows = csv_rows(r.out, &columns);
    CHECK(columns == "t,D_obs");
    REQUIRE(rows.size() == 1);
    CHECK(std::stod(rows[0][1]) == doctest::Approx(1.0 - std::ldexp(1.0, -12)).epsilon(1e-15));
}

TEST_CASE("single-point grids agree across spacings") {
    const auto lin = invoke({"curve", "--t-start", "0", "--t-points", "1", "--t-spacing", "linear"});
    const auto geo = invoke({"curve", "--t-start", "0", "--t-points", "1", "--t-spacing", "geometric"});
    REQUIRE(lin.code == 0);
    REQUIRE(geo.code == 0);
    CHECK(csv_rows(lin.out) == csv_rows(geo.out));
}

TEST_CASE("reals carry 17 significant digits") {
    const auto r = invoke({"curve", "--n-balls", "50", "--heavy", "5", "--t-start", "1", "--t-stop", "1",
                           "--t-points", "1", "--chain"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    const urn::ModelParams p(50, 5, 0.5);
    CHECK(std::stod(rows[0][1]) == urn::observed_tv(p, 1.0));
    CHECK(std::stod(rows[0][2]) == urn::chain_tv(p, 1.0));
}

TEST_CASE("classical instance reproduces both certified values") {
    const auto r = invoke({"curve", "--n-balls", "10000", "--heavy", "1", "--alpha", "1", "--t-start",
                           std::to_string(0.5 * std::log(1e4) - 4), "--t-stop",
                           std::to_string(0.5 * std::log(1e4) + 4), "--t-points", "2"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    CHECK(std::stod(rows[0][1]) >= 0.98);
    CHECK(std::stod(rows[1][1]) <= 0.02);
}

TEST_CASE("bounds columns and sandwich") {
    const auto r = invoke({"bounds", "--n-balls", "300", "--heavy", "40", "--alpha", "0.3", "--t-start",
                           "0.05", "--t-stop", "40", "--t-points", "25", "--t-spacing", "geometric"});
    REQUIRE(r.code == 0);
    std::string columns;
    const auto rows = csv_rows(r.out, &columns);
    CHECK(columns == "t,lb_cheb,lb_kolm,lb_clt,exact,ub_l2,ub_coupling_raw");
    REQUIRE(rows.size() == 25);
    for (const auto& row : rows) {
        const double cheb = std::stod(row[1]), kolm = std::stod(row[2]), exact = std::stod(row[4]),
                     ub = std::stod(row[5]);
        CHECK(cheb <= ub);
        CHECK(kolm <= exact + 1e-9);
        CHECK(exact <= ub + 1e-9);
    }
    const auto bare = invoke({"bounds", "--no-exact", "--t-points", "3"});
    REQUIRE(bare.code == 0);
    csv_rows(bare.out, &columns);
    CHECK(columns == "t,lb_cheb,lb_kolm,lb_clt,ub_l2,ub_coupling_raw");
}

TEST_CASE("delayed instance bounds rows") {
    const double t_dc = 1.25 * std::log(1e4);
    const auto r = invoke({"bounds", "--n-balls", "10000", "--heavy", "1000", "--alpha", "0.2",
                           "--t-start", "0", "--t-stop", std::to_string(t_dc + 20), "--t-points", "2"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    CHECK(std::stod(rows[0][4]) >= 0.98);
    CHECK(std::stod(rows[1][4]) <= 0.02);
}

TEST_CASE("classify families") {
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
        {{"--m-rule", "power:0.25", "--alpha-rule", "const:0.9"}, "Insensitivity"},
        {{"--m-rule", "power:0.75", "--alpha-rule", "const:0.2"}, "DelayedCutoff"},
        {{"--m-rule", "sqrtexp:1,2", "--alpha-rule", "overlog:1"}, "NoCutoff"},
    };
    for (const auto& [flags, label] : cases) {
        std::vector<std::string> args{"classify", "--sizes", "1000,10000,100000"};
        args.insert(args.end(), flags.begin(), flags.end());
        const auto r = invoke(args);
        REQUIRE(r.code == 0);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["report"]["schema"] == "regime-report/1");
        CHECK(doc["report"]["observable_regime"] == label);
        CHECK(doc["report"]["samples"].size() == 3);
        CHECK(doc["report"]["product_condition_ratio"].is_null());
    }
}

TEST_CASE("classify in declared mode") {
    const std::vector<std::string> base{"classify", "--m-rule", "power:0.75", "--alpha-rule", "const:0.2",
                                        "--sizes", "1000,10000", "--mode", "declared"};
    CHECK(invoke(base).code == 64);

    auto ok = base;
    ok.insert(ok.end(), {"--gamma-inf", "1.5", "--tilde-gamma-inf", "0.55", "--ell", "inf", "--m-diverges",
                         "true", "--expect-observable", "DelayedCutoff"});
    const auto r = invoke(ok);
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["report"]["ell"] == "inf");
    CHECK(doc["report"]["chain_regime"] == "DelayedCutoff");

    auto bad = base;
    bad.insert(bad.end(), {"--gamma-inf", "1.5", "--tilde-gamma-inf", "-0.3", "--ell", "inf", "--m-diverges",
                           "false"});
    const auto c = invoke(bad);
    CHECK(c.code == 65);
    CHECK(c.err.find("m -> infinity") != std::string::npos);
    CHECK(c.out.empty());

    auto wrong = ok;
    wrong.back() = "NoCutoff";
    CHECK(invoke(wrong).code == 65);
}

TEST_CASE("negdep command") {
    const auto eq = invoke({"negdep", "--n-balls", "8", "--heavy", "3", "--alpha", "1", "--t", "0.7"});
    REQUIRE(eq.code == 0);
    const auto doc = nlohmann::json::parse(eq.out);
    for (const auto& row : doc["report"]["rows"]) CHECK(std::abs(row["slack"].get<double>()) <= 1e-12);

    const auto full = invoke({"negdep", "--n-balls", "10", "--heavy", "5", "--alpha", "0.3", "--t", "1"});
    REQUIRE(full.code == 0);
    const auto d = nlohmann::json::parse(full.out);
    CHECK(d["report"]["pass"] == true);
    CHECK(d["report"]["brute_force_checked"] == true);
    CHECK(d["report"]["rows"].size() == 10);

    CHECK(invoke({"negdep", "--n-balls", "10", "--heavy", "5", "--max-size", "11"}).code == 64);
    CHECK(invoke({"negdep", "--format", "csv"}).code == 64);
}

TEST_CASE("simulate is reproducible") {
    const std::vector<std::string> args{"simulate", "--n-balls", "40", "--heavy", "6", "--alpha", "0.4",
                                        "--t", "0.8", "--samples", "2000", "--seed", "11"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(csv_rows(a.out).size() == 2000);

    auto other = args;
    other.back() = "12";
    CHECK(invoke(other).out != a.out);

    CHECK(invoke({"simulate", "--samples", "0"}).code == 64);
    CHECK(invoke({"simulate", "--initial", "corners"}).code == 64);
}

TEST_CASE("simulate summary matches the exact mean") {
    const auto r = invoke({"simulate", "--n-balls", "500", "--heavy", "50", "--alpha", "0.3", "--t", "3",
                           "--samples", "200000", "--seed", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto s = nlohmann::json::parse(r.out)["summary"];
    const double sd = std::sqrt(s["exact_variance_W"].get<double>() / 2e5);
    CHECK(std::abs(s["mean_W"].get<double>() - s["exact_mean_W"].get<double>()) <= 4 * sd);
    CHECK(s["empirical_tv"].get<double>() <= s["bias_bound"].get<double>());
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == 64);
    CHECK(invoke({"curve", "--bogus"}).code == 64);
    CHECK(invoke({"curve", "--heavy", "500", "--n-balls", "100"}).code == 64);
    CHECK(invoke({"curve", "--t-points", "0"}).code == 64);
    CHECK(invoke({"bounds", "--t-points", "0"}).code == 64);
    CHECK(invoke({"curve", "--t-spacing", "geometric", "--t-start", "0", "--t-points", "5"}).code == 64);
    CHECK(invoke({"curve", "--initial", "3"}).code == 64);
    const auto cap = invoke({"curve", "--n-balls", "100000", "--heavy", "40", "--initial", "scan",
                             "--t-points", "1"});
    CHECK(cap.code == 2);
    CHECK(cap.out.empty());
    CHECK(invoke({"curve", "--n-balls", "20000000", "--t-points", "1"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("--out writes the same bytes to a file") {
    const auto path = std::filesystem::temp_directory_path() / "urnlab_cli_test.csv";
    const std::vector<std::string> args{"curve", "--n-balls", "20", "--heavy", "4", "--t-points", "5"};
    const auto direct = invoke(args);
    auto with_file = args;
    with_file.insert(with_file.end(), {"--out", path.string()});
    const auto r = invoke(with_file);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == direct.out);
    std::filesystem::remove(path);
}
