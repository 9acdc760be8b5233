// One line per acceptance criterion; exit status is non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "primecvp/angle_bank.hpp"
#include "primecvp/experiment.hpp"
#include "primecvp/factoring.hpp"
#include "primecvp/pretrain.hpp"
#include "primecvp/random.hpp"
#include "primecvp/verify.hpp"

namespace fs = std::filesystem;
using namespace primecvp;

namespace {

constexpr std::uint64_t kSeed = 20240601;

// Sizes, limits and tolerances of each criterion.
constexpr int kSimulatorDraws = 100;
constexpr double kSimulatorSeconds = 10.0;
constexpr int kLllInstances = 500;
constexpr double kLllSeconds = 60.0;
constexpr int kBabaiInstances = 200;
constexpr double kBabaiSeconds = 120.0;
constexpr int kQuboInstances = 50;
constexpr int kScaleInstancesPerN = 150;
constexpr int kScaleMLo = 8;
constexpr int kScaleMHi = 64;
constexpr double kScaleSeconds = 4.0 * 3600.0;
constexpr double kGroverAlpha = 0.5;
// Exponential trend through alpha(2) = 0.5 and alpha(10) = 0.225 levelling at
// 0.1; evaluated at p = 5. Reported, not asserted.
constexpr double kTrendAlpha5 = 0.3586;
constexpr double kTrendBand = 0.10;
constexpr double kFactorSeconds = 60.0;
constexpr int kDegenerateDraws = 100;
constexpr int kHeatmapResolution = 50;
constexpr double kHeatmapSeconds = 60.0;

struct Line {
    int id;
    std::string title;
    bool passed;
    std::string detail;
};

std::vector<Line> g_lines;

void report(int id, const std::string& title, bool passed, const std::string& detail) {
    g_lines.push_back({id, title, passed, detail});
    std::printf("[%s] C%d %s: %s\n", passed ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

void timed_check(int id, const std::string& title, const CheckResult& r, double limit_seconds) {
    const bool in_time = limit_seconds <= 0.0 || r.seconds < limit_seconds;
    std::string detail = r.detail + ", " + fmt(r.seconds, 3) + " s";
    if (limit_seconds > 0.0) detail += " (limit " + fmt(limit_seconds, 3) + " s)";
    report(id, title, r.passed && in_time, detail);
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "primecvp");
    std::ostringstream o, e;
    const int code = cli::cli_main(args, o, e);
    if (out) *out = o.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Pre-trains every depth into `banks` and runs the scaling sweep.
void scaling_trend(const fs::path& banks) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths{1, 2, 3, 5};
    std::map<int, AngleSchedule> schedules;
    std::string train_detail;
    for (int p : depths) {
        TrainConfig cfg;
        cfg.epochs = 3;
        cfg.s_t = 3;
        cfg.s_v = 8;
        cfg.p = p;
        cfg.master_seed = derive_seed(kSeed, {static_cast<std::uint64_t>(p)});
        const PretrainResult r = pretrain(cfg);
        save_angle_bank(angle_bank_path(banks, p), make_angle_bank(r, cfg));
        schedules[p] = r.angles;
        train_detail += (train_detail.empty() ? "" : " ") + std::string("p") + std::to_string(p) +
                        ":" + fmt(r.alpha, 3);
    }
    ExperimentConfig ec;
    ec.m_lo = kScaleMLo;
    ec.m_hi = kScaleMHi;
    ec.instances_per_n = kScaleInstancesPerN;
    ec.p_list = depths;
    ec.master_seed = kSeed;
    ec.angle_bank_dir = banks;
    ec.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto loaded = load_angle_schedules(ec);
    const auto records = run_scaling_experiment(ec, loaded);
    const auto fits = fit_records(records);
    const double seconds = seconds_since(t0);

    auto alpha = [&](int p) { return fits.contains(p) ? fits.at(p).alpha : 1e9; };
    const bool improves = alpha(3) < alpha(1);
    const bool sub_grover = alpha(3) < kGroverAlpha && alpha(5) < kGroverAlpha;
    std::string detail = "alpha(p) =";
    for (int p : depths) detail += " p" + std::to_string(p) + ":" + fmt(alpha(p));
    detail += "; validation alpha* " + train_detail + "; " + fmt(seconds, 3) + " s";
    report(5, "scaling trend", improves && sub_grover && seconds < kScaleSeconds, detail);

    const double gap = std::abs(alpha(5) - kTrendAlpha5);
    std::printf("       stretch (reported only): alpha(5) = %s vs trend %s, |diff| %s %s %s\n",
                fmt(alpha(5)).c_str(), fmt(kTrendAlpha5).c_str(), fmt(gap, 3).c_str(),
                gap <= kTrendBand ? "<=" : ">", fmt(kTrendBand, 2).c_str());
    std::printf("       alpha(10) = 0.225 needs full-scale training; not attempted here\n");
}

void factoring_smoke(const fs::path& out) {
    bool ok = true;
    std::string detail;
    for (long n : {15L, 21L, 33L, 35L}) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string text;
        const int code = cli({"factor", "--n", std::to_string(n), "--no-shortcut", "--seed",
                              std::to_string(kSeed), "--out", out.string()},
                             &text);
        const double secs = seconds_since(t0);
        // Lines 2 and 3 of the output are the two factors.
        std::istringstream in(text);
        std::string first, a, b;
        std::getline(in, first);
        std::getline(in, a);
        std::getline(in, b);
        bool split = false;
        if (code == 0 && !a.empty() && !b.empty()) {
            const mpz_class p(a), q(b);
            split = p > 1 && q > 1 && p * q == n;
        }
        // Re-check every relation the run collected against the identity.
        FactorDemoConfig cfg;
        cfg.gcd_shortcut = false;
        cfg.seed = kSeed;
        const FactorDemoResult r = factor_demo(n, cfg);
        bool pairs_ok = !r.relations.pairs.empty();
        for (const SrPair& pair : r.relations.pairs) {
            pairs_ok = pairs_ok && verify_sr_pair(pair, n, build_factor_base(pair.e.size()));
        }
        const bool this_ok = split && pairs_ok && secs < kFactorSeconds;
        ok = ok && this_ok;
        detail += (detail.empty() ? "" : "; ") + std::to_string(n) + "=" + a + "*" + b + " [" +
                  std::to_string(r.relations.pairs.size()) + " pairs" + (pairs_ok ? "" : ", BAD") + ", " +
                  fmt(secs, 3) + " s]";
    }
    report(7, "factoring smoke", ok, detail);
}

void scale_determinism(const fs::path& banks, const fs::path& root) {
    const std::vector<std::string> common{"--p", "1,2,3,5", "--m-range", "8:48", "--instances", "40",
                                          "--seed", std::to_string(kSeed), "scale", "--banks",
                                          banks.string()};
    auto run_into = [&](const fs::path& dir, int workers) {
        std::vector<std::string> args = common;
        args.insert(args.begin(), {"--workers", std::to_string(workers)});
        args.push_back("--out");
        args.push_back(dir.string());
        return cli(args);
    };
    const int a = run_into(root / "det_a", 1);
    const int b = run_into(root / "det_b", 1);
    const int c = run_into(root / "det_c", 4);
    const std::string ca = slurp(root / "det_a" / "scaling.csv");
    const bool same = a == 0 && b == 0 && c == 0 && !ca.empty() &&
                      ca == slurp(root / "det_b" / "scaling.csv") &&
                      ca == slurp(root / "det_c" / "scaling.csv");
    report(9, "scale determinism", same,
           std::to_string(ca.size()) + " bytes, runs with 1, 1 and 4 workers " +
               (same ? "byte-identical" : "differ"));
}

}  // namespace

int main() {
    const fs::path root = fs::current_path() / "acceptance_out";
    fs::remove_all(root);
    fs::create_directories(root / "banks");

    timed_check(1, "simulator correctness", check_simulator(kSimulatorDraws, kSeed), kSimulatorSeconds);
    timed_check(2, "LLL property suite", check_lll(kLllInstances, kSeed), kLllSeconds);
    timed_check(3, "Babai guarantee", check_babai(kBabaiInstances, kSeed), kBabaiSeconds);
    timed_check(4, "QUBO consistency", check_qubo(kQuboInstances, kSeed), 0.0);
    scaling_trend(root / "banks");
    timed_check(6, "fit recovery", check_fits(), 0.0);
    factoring_smoke(root);
    timed_check(8, "degenerate schedules", check_degenerate_runs(kDegenerateDraws, kSeed), 0.0);
    scale_determinism(root / "banks", root);
    timed_check(10, "p=1 heatmap", check_heatmap(kHeatmapResolution, kSeed), kHeatmapSeconds);

    int failed = 0;
    for (const Line& l : g_lines) failed += l.passed ? 0 : 1;
    std::printf("%zu criteria, %d failed\n", g_lines.size(), failed);
    return failed == 0 ? 0 : 1;
}
