#include <doctest.h>

#include <cli.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "test_util.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = steerkit::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

const std::string HEADER = "theta,phi,alpha,beta,nu1,concurrence,c_lhs,w_max,margin,i3,verdict";
const double PI = std::numbers::pi;

std::string s(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

// Every number in a JSON document has at most 15 significant digits.
void check_digits(const json& j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        char b[64];
        std::snprintf(b, sizeof b, "%.15g", v);
        CHECK(std::strtod(b, nullptr) == v);
    } else if (j.is_structured()) {
        for (const auto& x : j) check_digits(x);
    }
}

}  // namespace

TEST_CASE("concurrence: Bell state and separable case") {
    auto r = run({"concurrence", "--theta", "0.7854", "--phi", "0", "--alpha", "0.7854", "--nu1", "1"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["schema"] == "steerkit/1");
    CHECK(j["c_closed"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(j["c_wootters"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    for (auto k : {"s1", "s2", "c_closed", "c_wootters", "defect"}) CHECK(j.contains(k));
    check_digits(j);

    auto z = run({"concurrence", "--theta", "0.6", "--alpha", "0.6", "--phi", "0", "--nu1", "0.5"});
    REQUIRE(z.code == 0);
    CHECK(json::parse(z.out)["c_closed"].get<double>() < 1e-7);
}

TEST_CASE("usage errors exit 2 with nothing on stdout") {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"concurrence", "--theta"}, {"concurrence", "--theta", "abc"},
          {"concurrence", "--bogus", "1", "--theta", "0.1"}, {}, {"nosuch"}, {"concurrence"},
          {"steer", "--theta", "0.1", "--csv", "--json"}}) {
        auto r = run(args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    }
}

TEST_CASE("out-of-range values name the flag") {
    struct Case {
        std::vector<std::string> args;
        std::string flag;
    };
    for (const auto& c : std::vector<Case>{{{"concurrence", "--theta", "2"}, "--theta"},
                                           {{"concurrence", "--theta", "0.1", "--phi", "-0.5"}, "--phi"},
                                           {{"steer", "--theta", "0.1", "--alpha", "1.6"}, "--alpha"},
                                           {{"steer", "--theta", "0.1", "--beta", "7"}, "--beta"},
                                           {{"concurrence", "--theta", "0.1", "--nu1", "1.5"}, "--nu1"}}) {
        auto r = run(c.args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK_MESSAGE(r.err.find(c.flag) != std::string::npos, r.err);
    }
}

TEST_CASE("help mentions radians and exits 0") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("radians") != std::string::npos);
    auto sub = run({"steer", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("radians") != std::string::npos);
}

TEST_CASE("steer: Bell state is violated with the known values") {
    auto r = run({"steer", "--theta", s(PI / 4), "--alpha", s(PI / 4), "--phi", "0", "--nu1", "1"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["violated"] == true);
    CHECK(j["verdict"] == "steerable");
    CHECK(j["c_lhs"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(j["w_max"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["schema"] == "steerkit/1");
    CHECK(j["bob"]["n"].size() == 3);
    CHECK(j["vectors"]["h"].size() == 3);
    CHECK(j["frames"].size() >= 1);
    check_digits(j);
}

TEST_CASE("steer: separable states are not violated") {
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> q(0.05, PI / 2 - 0.05), b(0, 2 * PI);
    for (int k = 0; k < 40; ++k) {
        const double th = q(g), al = q(g), nu = std::sin(2 * al) / (std::sin(2 * al) + std::sin(2 * th));
        for (auto args : {std::vector<std::string>{"steer", "--theta", s(th), "--phi", "0", "--alpha", s(al),
                                                   "--beta", s(b(g)), "--nu1", s(nu)},
                          std::vector<std::string>{"steer", "--theta", s(th), "--phi", s(PI / 2), "--alpha", s(al),
                                                   "--nu1", "0.5"}}) {
            auto r = run(args);
            REQUIRE(r.code == 0);
            auto j = json::parse(r.out);
            CHECK(j["violated"] == false);
            CHECK(std::abs(j["margin"].get<double>()) < 1e-9);
        }
    }
}

TEST_CASE("steer --csv uses the frozen column order") {
    auto r = run({"steer", "--csv", "--theta", "0.3", "--phi", "0.2", "--alpha", "0.9", "--beta", "1", "--nu1", "0.7"});
    REQUIRE(r.code == 0);
    auto rows = csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(r.out.substr(0, r.out.find('\n')) == HEADER);
    REQUIRE(rows[1].size() == 11);
    CHECK(std::stod(rows[1][0]) == 0.3);
    CHECK(std::stod(rows[1][4]) == 0.7);
    auto j = json::parse(run({"steer", "--theta", "0.3", "--phi", "0.2", "--alpha", "0.9", "--beta", "1", "--nu1", "0.7"}).out);
    CHECK(std::stod(rows[1][5]) == j["concurrence"].get<double>());
    CHECK(std::stod(rows[1][6]) == j["c_lhs"].get<double>());
    CHECK(std::stod(rows[1][7]) == j["w_max"].get<double>());
    CHECK(std::stod(rows[1][8]) == j["margin"].get<double>());
    CHECK(std::stod(rows[1][9]) == j["i3"].get<double>());
    CHECK(rows[1][10] == j["verdict"].get<std::string>());
}

TEST_CASE("scan: pure-state sweep") {
    auto r = run({"scan", "--grid", "theta=0:" + s(PI / 2) + ":25", "--alpha", s(PI / 4), "--nu1", "1"});
    REQUIRE(r.code == 0);
    auto rows = csv(r.out);
    REQUIRE(rows.size() == 26);
    CHECK(r.out.substr(0, r.out.find('\n')) == HEADER);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double th = std::stod(rows[i][0]), margin = std::stod(rows[i][8]);
        CHECK(th == doctest::Approx((i - 1) * (PI / 2) / 24));
        if (i == 1 || i == 25)
            CHECK(std::abs(margin) < 1e-9);
        else {
            CHECK(margin > 0);
            CHECK(rows[i][10] == "steerable");
        }
    }
}

TEST_CASE("scan: equal-weight phi = pi/2 family is separable everywhere") {
    auto r = run({"scan", "--grid", "theta=0:" + s(PI / 2) + ":9,alpha=0:" + s(PI / 2) + ":9,beta=0:6.28:3", "--phi",
                  s(PI / 2), "--nu1", "0.5"});
    REQUIRE(r.code == 0);
    auto rows = csv(r.out);
    REQUIRE(rows.size() == 1 + 9 * 9 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][10] == "separable");
}

TEST_CASE("scan: lexicographic order, identical for any --jobs") {
    const std::string grid = "theta=0.1:1.4:5,phi=0:1.5:3,alpha=0.2:1.2:3,beta=0:6:2,nu1=0:1:4";
    auto one = run({"scan", "--grid", grid, "--jobs", "1"});
    auto eight = run({"scan", "--grid", grid, "--jobs", "8"});
    REQUIRE(one.code == 0);
    REQUIRE(eight.code == 0);
    CHECK(one.out == eight.out);
    auto rows = csv(one.out);
    REQUIRE(rows.size() == 1 + 5 * 3 * 3 * 2 * 4);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        std::vector<double> a, b;
        for (int k = 0; k < 5; ++k) {
            a.push_back(std::stod(rows[i - 1][k]));
            b.push_back(std::stod(rows[i][k]));
        }
        CHECK(a < b);
    }
}

TEST_CASE("scan: malformed grids are usage errors") {
    for (std::string g : {"", "theta", "theta=0:1", "theta=0:1:0", "theta=0:1:x", "gamma=0:1:3", "theta=0:1:3,theta=0:1:3",
                          "theta=0:2:3", "nu1=-1:1:3", "theta=a:1:3", "theta=0:1:3,"}) {
        auto r = run({"scan", "--grid", g});
        CHECK_MESSAGE(r.code == 2, g);
        CHECK(r.out.empty());
        CHECK(r.err.find("--grid") != std::string::npos);
    }
    CHECK(run({"scan", "--grid", "theta=0:1:3", "--jobs", "0"}).code == 2);
}

TEST_CASE("scan --out writes the file atomically and cleans up on failure") {
    const fs::path dir = fs::temp_directory_path() / "steerkit_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path file = dir / "scan.csv";

    auto r = run({"scan", "--grid", "theta=0:1.5:7,nu1=0:1:3", "--out", file.string(), "--jobs", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(file);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == run({"scan", "--grid", "theta=0:1.5:7,nu1=0:1:3"}).out);
    CHECK_FALSE(fs::exists(dir / "scan.csv.tmp"));

    // Bad grid: existing output is left untouched.
    CHECK(run({"scan", "--grid", "theta=0:9:7", "--out", file.string()}).code == 2);
    std::ifstream f2(file);
    std::stringstream ss2;
    ss2 << f2.rdbuf();
    CHECK(ss2.str() == ss.str());

    // Target is a directory: rename fails, temp file is removed.
    fs::create_directories(dir / "sub");
    auto bad = run({"scan", "--grid", "theta=0:1:3", "--out", (dir / "sub").string()});
    CHECK(bad.code != 0);
    CHECK_FALSE(fs::exists(dir / "sub.tmp"));
    CHECK(run({"scan", "--grid", "theta=0:1:3", "--out", (dir / "missing" / "x.csv").string()}).code != 0);
    CHECK_FALSE(fs::exists(dir / "missing"));
    fs::remove_all(dir);
}

TEST_CASE("verify --quick passes and prints one line per criterion") {
    auto r = run({"verify", "--quick", "--n", "1000"});
    CHECK(r.code == 0);
    int lines = 0;
    for (int i = 1; i <= 12; ++i) {
        const std::string tag = "A" + std::to_string(i) + (i < 10 ? "   " : "  ") + "PASS";
        lines += r.out.find(tag) != std::string::npos;
    }
    CHECK(lines == 12);
    CHECK(r.out.find("n 100,") != std::string::npos);
}

TEST_CASE("verify seed: flag beats environment, environment beats default") {
    auto flag = run({"verify", "--quick", "--n", "200", "--seed", "99"});
    CHECK(flag.out.find("seed 99,") != std::string::npos);
    ::setenv("STEERKIT_SEED", "4242", 1);
    auto env = run({"verify", "--quick", "--n", "200"});
    auto both = run({"verify", "--quick", "--n", "200", "--seed", "7"});
    ::setenv("STEERKIT_SEED", "not-a-number", 1);
    auto bad = run({"verify", "--quick", "--n", "200"});
    ::unsetenv("STEERKIT_SEED");
    auto def = run({"verify", "--quick", "--n", "200"});
    CHECK(env.code == 0);
    CHECK(env.out.find("seed 4242,") != std::string::npos);
    CHECK(both.out.find("seed 7,") != std::string::npos);
    CHECK(bad.code == 2);
    CHECK(bad.out.empty());
    CHECK(def.out.find("seed 2718281828,") != std::string::npos);
    CHECK(run({"verify", "--n", "3"}).code == 2);
}

TEST_CASE("schmidt: known states and residuals") {
    auto bell = run({"schmidt", "--amps", "0.70710678118654752,0;0,0;0,0;0.70710678118654752,0"});
    REQUIRE(bell.code == 0);
    auto j = json::parse(bell.out);
    CHECK(j["kappa1"].get<double>() == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(j["kappa2"].get<double>() == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(j["uA"].size() == 2);
    CHECK(j["uA"][0][0].size() == 2);
    CHECK(j["schema"] == "steerkit/1");

    auto prod = json::parse(run({"schmidt", "--amps", "1,0;0,0;0,0;0,0"}).out);
    CHECK(prod["kappa1"].get<double>() == doctest::Approx(1.0));
    CHECK(prod["kappa2"].get<double>() == doctest::Approx(0.0));

    std::mt19937_64 g(5);
    for (int k = 0; k < 50; ++k) {
        auto psi = testutil::random_pure(g);
        std::string a;
        for (int i = 0; i < 4; ++i) a += (i ? ";" : "") + s(psi[i].real()) + "," + s(psi[i].imag());
        auto r = run({"schmidt", "--amps", a});
        REQUIRE(r.code == 0);
        auto jj = json::parse(r.out);
        CHECK(jj["residual"].get<double>() < 1e-9);
        check_digits(jj);
    }
}

TEST_CASE("schmidt: norm policy and malformed amplitudes") {
    auto r = run({"schmidt", "--amps", "1,0;1,0;0,0;0,0"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("--renorm") != std::string::npos);

    auto ok = run({"schmidt", "--amps", "1,0;1,0;0,0;0,0", "--renorm"});
    REQUIRE(ok.code == 0);
    auto j = json::parse(ok.out);
    CHECK(j["kappa1"].get<double>() == doctest::Approx(1.0));
    CHECK(j["input_norm"].get<double>() == doctest::Approx(std::sqrt(2.0)));

    CHECK(run({"schmidt", "--amps", "1.0000005,0;0,0;0,0;0,0"}).code == 0);
    CHECK(run({"schmidt", "--amps", "1.000002,0;0,0;0,0;0,0"}).code == 2);
    for (std::string a : {"1,0;0,0;0,0", "1;0;0;0", "1,0;0,0;0,0;x,0", "0,0;0,0;0,0;0,0", "1,0;0,0;0,0;0,0;0,0"})
        CHECK_MESSAGE(run({"schmidt", "--amps", a, "--renorm"}).code == 2, a);
}
