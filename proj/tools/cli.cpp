#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "steerkit/acceptance.hpp"
#include "steerkit/entangle.hpp"
#include "steerkit/states.hpp"
#include "steerkit/steer.hpp"

namespace steerkit::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* SCHEMA = "steerkit/1";
constexpr const char* CSV_HEADER = "theta,phi,alpha,beta,nu1,concurrence,c_lhs,w_max,margin,i3,verdict";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(g15(v).c_str(), nullptr);
}

json vec(const Vec3& v) { return json::array({num(v[0]), num(v[1]), num(v[2])}); }

json cmat(const Mat2& m) {
    json rows = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int j = 0; j < 2; ++j) row.push_back(json::array({num(m(i, j).real()), num(m(i, j).imag())}));
        rows.push_back(row);
    }
    return rows;
}

json params_json(const Rank2Params& p) {
    return {{"theta", num(p.theta)}, {"phi", num(p.phi)}, {"alpha", num(p.alpha)}, {"beta", num(p.beta)},
            {"nu1", num(p.nu1)}};
}

// validate() names the offending field first; report it as the flag.
void check_params(const Rank2Params& p) {
    try {
        validate(p);
    } catch (const std::out_of_range& e) {
        throw UsageError(std::string("--") + e.what());
    }
}

void add_param_flags(CLI::App* sub, Rank2Params& p, bool theta_required) {
    auto* t = sub->add_option("--theta", p.theta, "theta in [0, pi/2] (radians)");
    if (theta_required) t->required();
    sub->add_option("--phi", p.phi, "phi in [0, pi/2] (radians)")->capture_default_str();
    sub->add_option("--alpha", p.alpha, "alpha in [0, pi/2] (radians)")->capture_default_str();
    sub->add_option("--beta", p.beta, "beta in [0, 2pi] (radians)")->capture_default_str();
    sub->add_option("--nu1", p.nu1, "weight of psi1, in [0, 1]")->capture_default_str();
}

const char* verdict_of(const SteeringCertificate& c) {
    if (c.indeterminate) return "indeterminate";
    return c.violated ? "steerable" : "separable";
}

double i3_of(const Rank2Params& p) {
    return linear_i3_value(rank2_density(p), optimal_linear_settings(theta3_mixed(p.theta, p.nu1)));
}

std::string csv_row(const Rank2Params& p) {
    const auto c = steer_certificate(p);
    std::string row;
    for (double v : {p.theta, p.phi, p.alpha, p.beta, p.nu1, c.concurrence, c.c_lhs, c.best_w, c.margin, i3_of(p)})
        row += g15(v) + ",";
    return row + verdict_of(c);
}

// ---- concurrence / steer

int cmd_concurrence(const Rank2Params& p, std::ostream& out) {
    check_params(p);
    const auto r = concurrence_report(p);
    json j = {{"schema", SCHEMA},
              {"params", params_json(p)},
              {"s1", num(r.s1)},
              {"s2", num(r.s2)},
              {"c_closed", num(r.c_closed)},
              {"c_wootters", num(r.c_wootters)},
              {"defect", num(r.defect)}};
    out << j.dump(2) << "\n";
    return EXIT_OK;
}

int cmd_steer(const Rank2Params& p, bool csv, std::ostream& out) {
    check_params(p);
    if (csv) {
        out << CSV_HEADER << "\n" << csv_row(p) << "\n";
        return EXIT_OK;
    }
    const auto c = steer_certificate(p);
    json frames = json::array();
    for (const auto& f : c.frames)
        frames.push_back({{"tau", num(f.tau)}, {"w1_max", num(f.w1_max)}, {"w2_max", num(f.w2_max)}});
    json j = {{"schema", SCHEMA},
              {"params", params_json(p)},
              {"concurrence", num(c.concurrence)},
              {"c_lhs", num(c.c_lhs)},
              {"w1_max", num(c.w1_max)},
              {"w2_max", num(c.w2_max)},
              {"w_max", num(c.best_w)},
              {"margin", num(c.margin)},
              {"violated", c.violated},
              {"indeterminate", c.indeterminate},
              {"verdict", verdict_of(c)},
              {"tau", num(c.tau)},
              {"delta", num(c.delta)},
              {"bob",
               {{"n", vec(c.bob.n)},
                {"thetaB", num(c.bob.thetaB)},
                {"phiB", num(c.bob.phiB)},
                {"degenerate", c.bob.degenerate}}},
              {"vectors",
               {{"f", vec(c.vectors.f)},
                {"h", vec(c.vectors.h)},
                {"h0", num(c.vectors.h0)},
                {"tau_used", num(c.vectors.tau_used)}}},
              {"i3", num(i3_of(p))},
              {"frames", frames}};
    out << j.dump(2) << "\n";
    return EXIT_OK;
}

// ---- scan

struct Axis {
    double lo = 0, hi = 0;
    int n = 1;
    double at(int k) const { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); }
};

constexpr const char* AXES[5] = {"theta", "phi", "alpha", "beta", "nu1"};

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw UsageError("--grid: bad number '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

// "theta=0:1.5708:25,nu1=0.5:0.5:1"; axes not named are fixed at `base`.
std::array<Axis, 5> parse_grid(const std::string& spec, const Rank2Params& base) {
    const double fixed[5] = {base.theta, base.phi, base.alpha, base.beta, base.nu1};
    std::array<Axis, 5> axes;
    bool seen[5] = {};
    for (int i = 0; i < 5; ++i) axes[i] = {fixed[i], fixed[i], 1};
    if (spec.empty()) throw UsageError("--grid: empty grid spec");
    for (const auto& item : split(spec, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--grid: expected name=lo:hi:n, got '" + item + "'");
        const std::string name = item.substr(0, eq);
        int idx = -1;
        for (int i = 0; i < 5; ++i)
            if (name == AXES[i]) idx = i;
        if (idx < 0) throw UsageError("--grid: unknown parameter '" + name + "'");
        if (seen[idx]) throw UsageError("--grid: parameter '" + name + "' given twice");
        seen[idx] = true;
        const auto f = split(item.substr(eq + 1), ':');
        if (f.size() != 3) throw UsageError("--grid: expected lo:hi:n for '" + name + "'");
        Axis a{parse_double(f[0], name), parse_double(f[1], name), 0};
        try {
            std::size_t used = 0;
            a.n = std::stoi(f[2], &used);
            if (used != f[2].size()) a.n = 0;
        } catch (const std::exception&) {
            a.n = 0;
        }
        if (a.n < 1) throw UsageError("--grid: point count for '" + name + "' must be a positive integer");
        axes[idx] = a;
    }
    // Endpoints carry the range check for the whole axis.
    for (int i = 0; i < 5; ++i)
        for (double v : {axes[i].lo, axes[i].hi}) {
            Rank2Params p = base;
            double* field[5] = {&p.theta, &p.phi, &p.alpha, &p.beta, &p.nu1};
            *field[i] = v;
            for (int k = 0; k < 5; ++k)
                if (k != i) *field[k] = axes[k].lo;
            try {
                validate(p);
            } catch (const std::out_of_range& e) {
                throw UsageError(std::string("--grid: ") + e.what());
            }
        }
    return axes;
}

std::vector<std::string> scan_rows(const std::array<Axis, 5>& axes, int jobs) {
    std::size_t total = 1;
    for (const auto& a : axes) total *= static_cast<std::size_t>(a.n);
    if (total > 50'000'000) throw UsageError("--grid: too many points");
    std::vector<std::string> rows(total);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < total;) {
            // theta varies slowest, nu1 fastest.
            std::size_t r = i;
            int k[5];
            for (int d = 4; d >= 0; --d) {
                k[d] = static_cast<int>(r % axes[d].n);
                r /= axes[d].n;
            }
            rows[i] = csv_row({axes[0].at(k[0]), axes[1].at(k[1]), axes[2].at(k[2]), axes[3].at(k[3]),
                               axes[4].at(k[4])});
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

void write_atomic(const std::string& path, const std::vector<std::string>& rows) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    try {
        {
            std::ofstream f(tmp, std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
            f << CSV_HEADER << "\n";
            for (const auto& r : rows) f << r << "\n";
            f.flush();
            if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
        }
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

int cmd_scan(const std::string& grid, const Rank2Params& base, const std::string& out_path, int jobs,
             std::ostream& out) {
    if (jobs < 1) throw UsageError("--jobs must be >= 1");
    const auto rows = scan_rows(parse_grid(grid, base), jobs);
    if (!out_path.empty()) {
        write_atomic(out_path, rows);
        return EXIT_OK;
    }
    out << CSV_HEADER << "\n";
    for (const auto& r : rows) out << r << "\n";
    return EXIT_OK;
}

// ---- verify

std::uint64_t seed_from_env() {
    const char* env = std::getenv("STEERKIT_SEED");
    if (!env || !*env) return DEFAULT_SEED;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || errno == ERANGE || env[0] == '-')
        throw UsageError(std::string("STEERKIT_SEED: not an unsigned integer: '") + env + "'");
    return v;
}

int cmd_verify(std::optional<std::uint64_t> seed, int n, bool quick, std::ostream& out) {
    if (n < 10) throw UsageError("--n must be >= 10");
    AcceptanceOptions o;
    o.seed = seed ? *seed : seed_from_env();
    o.n = quick ? n / 10 : n;
    const auto r = run_acceptance(o);
    out << format_report(r);
    return r.all_pass() ? EXIT_OK : EXIT_VERIFY_FAILED;
}

// ---- schmidt

int cmd_schmidt(const std::string& amps, bool renorm, std::ostream& out) {
    const auto parts = split(amps, ';');
    if (parts.size() != 4) throw UsageError("--amps: expected four 're,im' pairs separated by ';'");
    PureState2Q psi;
    for (int k = 0; k < 4; ++k) {
        const auto ri = split(parts[k], ',');
        if (ri.size() != 2) throw UsageError("--amps: amplitude " + std::to_string(k) + " is not 're,im'");
        auto value = [&](const std::string& s) {
            try {
                return parse_double(s, "amplitude");
            } catch (const UsageError&) {
                throw UsageError("--amps: bad number '" + s + "'");
            }
        };
        psi.amplitudes[k] = {value(ri[0]), value(ri[1])};
    }
    const double nrm = norm(psi.amplitudes);
    if (nrm == 0) throw UsageError("--amps: zero vector");
    if (std::abs(nrm - 1) > 1e-6 && !renorm)
        throw UsageError("--amps: norm " + g15(nrm) + " differs from 1 by more than 1e-6 (use --renorm)");
    for (auto& a : psi.amplitudes) a /= nrm;
    const auto r = schmidt_decompose(psi);
    json j = {{"schema", SCHEMA},
              {"input_norm", num(nrm)},
              {"kappa1", num(r.kappa1)},
              {"kappa2", num(r.kappa2)},
              {"uA", cmat(r.uA)},
              {"uB", cmat(r.uB)},
              {"residual", num(r.residual)}};
    out << j.dump(2) << "\n";
    return EXIT_OK;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"steerkit: steering certificates for rank-2 two-qubit states.\nAll angles are in radians."};
    app.name("steerkit");
    app.require_subcommand(1);

    Rank2Params conc_p, steer_p, scan_p;
    auto* conc = app.add_subcommand("concurrence", "closed-form and Wootters concurrence (JSON)");
    add_param_flags(conc, conc_p, true);

    bool as_csv = false, as_json = false;
    auto* steer = app.add_subcommand("steer", "steering certificate (JSON, or CSV with --csv)");
    add_param_flags(steer, steer_p, true);
    auto* f_json = steer->add_flag("--json", as_json, "JSON output (default)");
    steer->add_flag("--csv", as_csv, "one CSV row with header")->excludes(f_json);

    std::string grid, out_path;
    int jobs = 1;
    auto* scan = app.add_subcommand("scan", "certificate over a parameter grid (CSV)");
    scan->add_option("--grid", grid, "e.g. theta=0:1.5708:25,nu1=0.5:0.5:1 (radians)")->required();
    scan->add_option("--out", out_path, "write CSV here (atomically) instead of stdout");
    scan->add_option("--jobs", jobs, "worker threads")->capture_default_str();
    add_param_flags(scan, scan_p, false);

    std::optional<std::uint64_t> seed;
    int n = 10000;
    bool quick = false;
    auto* verify = app.add_subcommand("verify", "run acceptance criteria A1-A12");
    verify->add_option("--seed", seed, "RNG seed (default: $STEERKIT_SEED or built-in)");
    verify->add_option("--n", n, "base sample count")->capture_default_str();
    verify->add_flag("--quick", quick, "divide sample counts by ten");

    std::string amps;
    bool renorm = false;
    auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a pure two-qubit state (JSON)");
    schmidt->add_option("--amps", amps, "amplitudes of |00>,|01>,|10>,|11> as 're,im;re,im;re,im;re,im'")
        ->required();
    schmidt->add_flag("--renorm", renorm, "normalise instead of rejecting a non-unit norm");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return EXIT_OK;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return EXIT_OK;
    } catch (const CLI::ParseError& e) {
        err << "steerkit: " << e.what() << "\n";
        return EXIT_USAGE;
    }

    try {
        if (*conc) return cmd_concurrence(conc_p, out);
        if (*steer) return cmd_steer(steer_p, as_csv, out);
        if (*scan) return cmd_scan(grid, scan_p, out_path, jobs, out);
        if (*verify) return cmd_verify(seed, n, quick, out);
        if (*schmidt) return cmd_schmidt(amps, renorm, out);
    } catch (const UsageError& e) {
        err << "steerkit: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const std::exception& e) {
        err << "steerkit: error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    return EXIT_USAGE;
}

}  // namespace steerkit::cli
