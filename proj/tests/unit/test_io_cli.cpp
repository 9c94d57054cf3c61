#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "biasforge/cli.hpp"
#include "biasforge/errors.hpp"
#include "biasforge/io.hpp"

using namespace biasforge;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

const std::string kUniform = R"({"family":"uniform","params":{"lo":-1,"hi":1}})";

}  // namespace

TEST_CASE("distribution JSON") {
    CHECK(parse_distribution(kUniform).describe() == uniform(-1, 1).describe());
    const auto d = parse_distribution(R"({"atoms": [[-1, 0.25], [2, 0.75]]})");
    CHECK(d.is_discrete());
    CHECK(moment(d, 1) == doctest::Approx(1.25));
    const auto m = parse_distribution(
        R"({"mixture": [{"weight": 0.5, "dist": {"family": "half_normal", "params": {"sigma": 1}}},
                        {"weight": 0.5, "dist": {"family": "negative_half_normal", "params": {"sigma": 1}}}]})");
    CHECK(m.density(0.7) == doctest::Approx(normal(0, 1).density(0.7)).epsilon(1e-12));

    const std::string path = "biasforge_samples_test.csv";
    std::ofstream(path) << "x\n1.5\n-0.5\n2\n";
    CHECK(moment(parse_distribution(R"({"csv": ")" + path + R"("})"), 1) == doctest::Approx(1.0));
    std::remove(path.c_str());

    for (const char* bad : {"{", R"({"family":"cauchy"})", R"({"family":"normal","params":{"mean":0}})",
                            R"({"atoms":[[0, 0.5]]})", "[1, 2]"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_distribution(bad), Error);
    }
}

TEST_CASE("bias names and pieces") {
    const Distribution X = parse_distribution(R"({"atoms": [[0, 0.5], [3, 0.5]]})");
    CHECK(parse_bias("identity")(-4.0) == 1.0);
    CHECK(parse_bias("x")(-4.0) == -4.0);
    CHECK(parse_bias("x-plus")(-4.0) == 0.0);
    CHECK(parse_bias("x-plus")(2.5) == 2.5);
    CHECK(parse_bias("x-plus(1)")(2.5) == 1.5);
    CHECK(parse_bias("sign(x-0.5)")(0.4) == -1.0);
    CHECK(parse_bias("sign(x-0.5)")(0.6) == 1.0);
    CHECK(parse_bias("sign(x+2)")(-1.0) == 1.0);
    CHECK(parse_bias("x-1.5")(1.0) == -0.5);
    CHECK(parse_bias("x-mean", &X)(1.0) == -0.5);
    CHECK_THROWS_AS(parse_bias("x-mean"), Error);
    CHECK_THROWS_AS(parse_bias("cosine"), Error);

    const auto p = parse_bias(R"({"pieces": [{"interval": [null, 0], "coeffs": [0]},
                                             {"interval": [0, null], "coeffs": [0, 1, 1]}]})");
    CHECK(p(-2.0) == 0.0);
    CHECK(p(2.0) == doctest::Approx(6.0));
    CHECK(parse_nodes("[0, 1.5]") == std::vector<double>{0.0, 1.5});
    CHECK_THROWS_AS(parse_nodes("{}"), Error);

    const auto op = parse_operator(R"({"m": 2, "B": [{"bias": "identity"}, {"bias": "x", "nodes": [0]}]})");
    CHECK(op.m == 2);
    CHECK(op.B.size() == 2);
    CHECK_THROWS_AS(parse_operator(R"({"m": 2, "B": [{"bias": "x", "nodes": [0]}, {"bias": "x", "nodes": [0]}]})"),
                    Error);
}

TEST_CASE("catalog and exit codes") {
    const auto c = cli({"catalog"});
    CHECK(c.code == 0);
    CHECK(c.out.find("\"uniform\"") != std::string::npos);
    CHECK(c.out.find("x-plus") != std::string::npos);

    const auto none = cli({});
    CHECK(none.code == 2);
    CHECK(none.err.find("\"error\"") != std::string::npos);
    CHECK(cli({"transform", "--dist", kUniform, "--bias", "x", "--nodes", "[5]"}).code == 2);
    const auto parity = cli({"bias-km", "--dist", kUniform, "--bias", "x", "--nodes", "[0]", "--k", "1", "--m", "2"});
    CHECK(parity.code == 2);
    CHECK(parity.err.find("ParityMismatch") != std::string::npos);
    CHECK(cli({"bias-km", "--dist", kUniform, "--bias", "x", "--nodes", "[0]", "--k", "2", "--m", "3"}).code == 2);
    CHECK(cli({"density", "--dist", kUniform, "--grid", "0", "1", "1"}).code == 2);
    CHECK(cli({"sample", "--dist", kUniform, "--n", "0"}).code == 2);
    CHECK(cli({"verify", "--suite", "everything"}).code == 2);
}

TEST_CASE("density table for the x-plus example") {
    const auto r = cli({"density", "--dist", kUniform, "--bias", "x-plus", "--nodes", "[0]", "--m", "1", "--grid", "-1",
                        "1", "201"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 201);
    for (const auto& row : rows) {
        const double t = row[0];
        const double want = t >= 0 && t <= 1 ? 1.5 * (1 - t * t) : 0.0;
        CHECK(std::abs(row[1] - want) <= 1e-8);
    }
}

TEST_CASE("transform and bias-km reports") {
    const auto r = cli({"bias-km", "--dist", R"({"atoms":[[-1,0.5],[2,0.5]]})", "--bias", "x", "--nodes", "[0]",
                        "--k", "1", "--m", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"hat_0 #1\"") != std::string::npos);
    CHECK(r.out.find("\"beta\"") != std::string::npos);
    const auto v = cli({"verify", "--suite", "ambi"});
    CHECK(v.code == 0);
    CHECK(v.out.find("0.41666666666666") != std::string::npos);
}

TEST_CASE("sampling is seeded and agrees with the density") {
    const std::vector<std::string> base = {"sample", "--dist", R"({"family":"exponential","params":{"rate":1}})",
                                           "--bias", "x", "--nodes", "[0]", "--n", "20000"};
    auto with_seed = base;
    with_seed.insert(with_seed.end(), {"--seed", "17"});
    const auto a = cli(with_seed);
    const auto b = cli(with_seed);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    setenv("BIASFORGE_SEED", "17", 1);
    CHECK(cli(base).out == a.out);
    setenv("BIASFORGE_SEED", "18", 1);
    CHECK(cli(base).out != a.out);
    setenv("BIASFORGE_SEED", "x", 1);
    CHECK(cli(base).code == 2);
    unsetenv("BIASFORGE_SEED");

    // Round trip: empirical CDF of the draws against the tabulated density (size-biased Exp(1) is Gamma(2, 1)).
    std::vector<double> xs;
    for (const auto& row : parse_csv(a.out)) xs.push_back(row[0]);
    const auto d = cli({"density", "--dist", R"({"family":"exponential","params":{"rate":1}})", "--bias", "x",
                        "--nodes", "[0]", "--grid", "0", "40", "8001"});
    const auto table = parse_csv(d.out);
    std::vector<double> t, cdf{0.0};
    for (const auto& row : table) t.push_back(row[0]);
    for (std::size_t i = 1; i < table.size(); ++i)
        cdf.push_back(cdf.back() + 0.5 * (table[i][1] + table[i - 1][1]) * (t[i] - t[i - 1]));
    CHECK(cdf.back() == doctest::Approx(1.0).epsilon(1e-4));
    const auto F = [&](double x) {
        if (x <= t.front()) return 0.0;
        if (x >= t.back()) return 1.0;
        const auto i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
        const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
        return cdf[i - 1] + w * (cdf[i] - cdf[i - 1]);
    };
    CHECK(ks_statistic(xs, F) < ks_critical_1pct(xs.size()));
}

TEST_CASE("distance experiment") {
    const std::string spec = R"({"target": {"family":"normal","params":{"mean":0,"sd":1}},
        "test_distribution": {"family":"normal","params":{"mean":0,"sd":1}},
        "operator": {"order": 1, "bias": "x", "nodes": [0]},
        "constants": [1, 1, 1], "n_samples": 5000, "seed": 9, "coupling": "self"})";
    const std::string csv = "biasforge_distance_test.csv";
    const auto r = cli({"distance", "--spec", spec, "--csv", csv});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"target_fixed_point\"") != std::string::npos);
    CHECK(r.out == cli({"distance", "--spec", spec, "--csv", csv}).out);
    std::ifstream in(csv);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().rfind("ingredient,value,se\ncoupling_gap,0,0\n", 0) == 0);
    std::remove(csv.c_str());

    const std::string second = R"({"test_distribution": {"family":"uniform","params":{"lo":-1,"hi":1}},
        "operator": {"order": 2, "B0": "identity", "B1": "x", "a": 0},
        "constants": {"c0": 1, "c1": 1, "c2": 1, "c3": 1}, "n_samples": 2000, "seed": 2})";
    const auto s = cli({"distance", "--spec", second});
    CHECK(s.code == 0);
    CHECK(s.out.find("\"order\": 2") != std::string::npos);
    CHECK(cli({"distance", "--spec", R"({"operator": {}})"}).code == 2);
    CHECK(cli({"distance", "--spec", "/nonexistent/spec.json"}).code == 2);
}
