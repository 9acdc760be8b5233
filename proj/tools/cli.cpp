#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "primecvp/angle_bank.hpp"
#include "primecvp/config_file.hpp"
#include "primecvp/errors.hpp"
#include "primecvp/experiment.hpp"
#include "primecvp/factoring.hpp"
#include "primecvp/pretrain.hpp"
#include "primecvp/random.hpp"
#include "primecvp/verify.hpp"

namespace fs = std::filesystem;

namespace primecvp::cli {

namespace {

struct Range {
    int lo = 0;
    int hi = 0;
};

struct Settings {
    std::uint64_t seed = 1;
    std::string out = "out";
    std::vector<int> p{1};
    double c = 1.5;
    Range m_range{8, 64};
    int instances = 100;
    int workers = 1;
    double delta = kDefaultLllDelta;
    int cap = kDefaultEnumerationCap;
    std::string normalize = "minmax";

    // pretrain
    int epochs = 5;
    int s_t = 4;
    int s_v = 12;
    Range train_range{8, 24};
    Range val_range{16, 40};
    double tol = 1e-6;
    int max_iter = -1;

    // scale
    std::string banks;  // defaults to the output directory

    // heatmap
    int resolution = 50;
    int heatmap_m = 12;

    // factor
    std::string composite;
    int dim = 0;
    bool no_shortcut = false;
    std::string angles;
    double budget = 60.0;
    int max_instances = 500;
};

template <class T>
T parse_number(const std::string& s, const std::string& key) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("bad value '" + s + "' for " + key);
    }
    return v;
}

Range parse_range(const std::string& s, const std::string& key) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError(key + " expects lo:hi, got '" + s + "'");
    Range r{parse_number<int>(s.substr(0, colon), key), parse_number<int>(s.substr(colon + 1), key)};
    if (r.hi < r.lo) throw ConfigError(key + " has hi < lo");
    return r;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& key) {
    std::vector<int> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_number<int>(item, key));
    if (out.empty()) throw ConfigError(key + " is empty");
    return out;
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("bad boolean '" + s + "' for " + key);
}

NormalizeMode normalize_mode(const std::string& s) {
    if (s == "minmax") return NormalizeMode::MinMax;
    if (s == "off") return NormalizeMode::Off;
    throw ConfigError("normalize must be minmax or off");
}

// Applies `key = value` entries as defaults; command-line flags parsed later win.
void apply_config(const ConfigMap& cfg, Settings& s) {
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
        {"seed", [&](auto& v, auto& k) { s.seed = parse_number<std::uint64_t>(v, k); }},
        {"out", [&](auto& v, auto&) { s.out = v; }},
        {"p", [&](auto& v, auto& k) { s.p = parse_int_list(v, k); }},
        {"c", [&](auto& v, auto& k) { s.c = parse_number<double>(v, k); }},
        {"m_range", [&](auto& v, auto& k) { s.m_range = parse_range(v, k); }},
        {"instances", [&](auto& v, auto& k) { s.instances = parse_number<int>(v, k); }},
        {"workers", [&](auto& v, auto& k) { s.workers = parse_number<int>(v, k); }},
        {"delta", [&](auto& v, auto& k) { s.delta = parse_number<double>(v, k); }},
        {"cap", [&](auto& v, auto& k) { s.cap = parse_number<int>(v, k); }},
        {"normalize", [&](auto& v, auto&) { s.normalize = v; }},
        {"epochs", [&](auto& v, auto& k) { s.epochs = parse_number<int>(v, k); }},
        {"s_t", [&](auto& v, auto& k) { s.s_t = parse_number<int>(v, k); }},
        {"s_v", [&](auto& v, auto& k) { s.s_v = parse_number<int>(v, k); }},
        {"train_range", [&](auto& v, auto& k) { s.train_range = parse_range(v, k); }},
        {"val_range", [&](auto& v, auto& k) { s.val_range = parse_range(v, k); }},
        {"tol", [&](auto& v, auto& k) { s.tol = parse_number<double>(v, k); }},
        {"max_iter", [&](auto& v, auto& k) { s.max_iter = parse_number<int>(v, k); }},
        {"banks", [&](auto& v, auto&) { s.banks = v; }},
        {"resolution", [&](auto& v, auto& k) { s.resolution = parse_number<int>(v, k); }},
        {"heatmap_m", [&](auto& v, auto& k) { s.heatmap_m = parse_number<int>(v, k); }},
        {"dim", [&](auto& v, auto& k) { s.dim = parse_number<int>(v, k); }},
        {"shortcut", [&](auto& v, auto& k) { s.no_shortcut = !parse_bool(v, k); }},
        {"angles", [&](auto& v, auto&) { s.angles = v; }},
        {"budget", [&](auto& v, auto& k) { s.budget = parse_number<double>(v, k); }},
        {"max_instances", [&](auto& v, auto& k) { s.max_instances = parse_number<int>(v, k); }},
    };
    for (const auto& [key, value] : cfg) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
        it->second(value, key);
    }
}

std::string find_config_arg(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

fs::path output_dir(const Settings& s) {
    fs::path dir(s.out);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

TrainConfig train_config(const Settings& s, int p) {
    TrainConfig cfg;
    cfg.epochs = s.epochs;
    cfg.s_t = s.s_t;
    cfg.s_v = s.s_v;
    cfg.p = p;
    cfg.c = s.c;
    cfg.train_dist = {s.train_range.lo, s.train_range.hi};
    cfg.val_dist = {s.val_range.lo, s.val_range.hi};
    cfg.optimizer.tol = s.tol;
    cfg.optimizer.max_iter = s.max_iter;
    cfg.normalize = normalize_mode(s.normalize);
    cfg.delta = s.delta;
    cfg.cap = s.cap;
    cfg.master_seed = s.seed;
    cfg.workers = s.workers;
    return cfg;
}

int run_pretrain(const Settings& s, std::ostream& out) {
    const fs::path dir = output_dir(s);
    for (int p : s.p) {
        const TrainConfig cfg = train_config(s, p);
        const PretrainResult result = pretrain(cfg);
        const fs::path bank_path = angle_bank_path(dir, p);
        save_angle_bank(bank_path, make_angle_bank(result, cfg));

        const fs::path hist_path = dir / ("history_p" + std::to_string(p) + ".csv");
        std::ofstream hist(hist_path);
        hist << "epoch,alpha_best,alpha_refine,accepted,alpha_star,candidate_alphas\n";
        for (const EpochRecord& rec : result.history) {
            hist << rec.epoch << ',' << rec.best_alpha << ',' << rec.best_alpha_refine << ','
                 << (rec.accepted ? 1 : 0) << ',' << rec.alpha_star << ',';
            for (std::size_t i = 0; i < rec.candidate_alphas.size(); ++i) {
                hist << (i ? ";" : "") << rec.candidate_alphas[i];
            }
            hist << '\n';
        }
        out << "p=" << p << " alpha*=" << fmt(result.alpha) << " gamma=[";
        for (std::size_t k = 0; k < result.angles.gamma().size(); ++k) {
            out << (k ? " " : "") << fmt(result.angles.gamma()[k], 6);
        }
        out << "] beta=[";
        for (std::size_t k = 0; k < result.angles.beta().size(); ++k) {
            out << (k ? " " : "") << fmt(result.angles.beta()[k], 6);
        }
        out << "]\n  wrote " << bank_path.string() << " and " << hist_path.string() << '\n';
    }
    return 0;
}

int run_scale(const Settings& s, std::ostream& out) {
    ExperimentConfig cfg;
    cfg.m_lo = s.m_range.lo;
    cfg.m_hi = s.m_range.hi;
    cfg.instances_per_n = s.instances;
    cfg.p_list = s.p;
    cfg.c = s.c;
    cfg.angle_bank_dir = s.banks.empty() ? fs::path(s.out) : fs::path(s.banks);
    cfg.master_seed = s.seed;
    cfg.out_dir = s.out;
    cfg.cap = s.cap;
    cfg.delta = s.delta;
    cfg.normalize = normalize_mode(s.normalize);
    cfg.workers = s.workers;
    cfg.validate();

    const auto schedules = load_angle_schedules(cfg);
    const auto records = run_scaling_experiment(cfg, schedules);
    const fs::path dir = output_dir(s);
    {
        std::ofstream csv(dir / "scaling.csv");
        write_records_csv(csv, records);
    }

    std::ofstream fits(dir / "fits.csv");
    fits << "p,alpha_refine,r2_refine,points_refine,zero_refine,alpha_best,r2_best\n";
    const auto refine = fit_records(records, FitColumn::Refine);
    const auto best = fit_records(records, FitColumn::Best);
    std::vector<AlphaPoint> alpha_points;
    out << "p   alpha(refine)  r2        alpha(best)  points\n";
    for (int p : cfg.p_list) {
        if (!refine.contains(p) || !best.contains(p)) {
            out << std::left << std::setw(4) << p << "insufficient data (fewer than two usable points)\n";
            continue;
        }
        const ScalingFit& f = refine.at(p);
        const ScalingFit& b = best.at(p);
        fits << p << ',' << f.alpha << ',' << f.r2 << ',' << f.points.size() << ',' << f.excluded_zero
             << ',' << b.alpha << ',' << b.r2 << '\n';
        out << std::left << std::setw(4) << p << std::setw(15) << fmt(f.alpha) << std::setw(10)
            << fmt(f.r2, 3) << std::setw(13) << fmt(b.alpha) << f.points.size() << '\n';
        if (p > 0) alpha_points.push_back({static_cast<double>(p), f.alpha});
    }
    out << "wrote " << (dir / "scaling.csv").string() << " and " << (dir / "fits.csv").string() << '\n';

    if (alpha_points.size() >= 3) {
        const ExponentialFit e = extrapolate_alpha_p(alpha_points);
        std::ofstream ex(dir / "extrapolation.csv");
        ex << "# alpha(p) = a*exp(-b*p) + c; a=" << e.a << " b=" << e.b << " c=" << e.c
           << " rss=" << e.rss << " converged=" << (e.converged ? 1 : 0) << '\n';
        ex << "p,alpha\n";
        for (int p : {1, 2, 3, 5, 10, 15, 20, 30}) ex << p << ',' << e(p) << '\n';
        out << "alpha(p) ~ " << fmt(e.a) << "*exp(-" << fmt(e.b) << "p) + " << fmt(e.c)
            << (e.converged ? "" : "  [fit did not converge]") << "; alpha(10) ~ " << fmt(e(10.0))
            << ", alpha(20) ~ " << fmt(e(20.0)) << '\n';
    }
    return 0;
}

int run_heatmap(const Settings& s, std::ostream& out) {
    // An instance whose Babai point is already optimal would give an all-zero map.
    const RefinementProblem prob = find_improvable_instance(s.heatmap_m, s.c, s.seed, s.delta, s.cap);
    const RefinementProblem* problem = &prob;
    const Heatmap map = heatmap_p1(*problem, s.resolution, normalize_mode(s.normalize));
    const fs::path dir = output_dir(s);
    {
        std::ofstream csv(dir / "heatmap_p1.csv");
        write_heatmap_csv(csv, map);
        std::ofstream svg(dir / "heatmap_p1.svg");
        write_heatmap_svg(svg, map);
    }
    double vmax = 0.0;
    std::size_t br = 0, bc = 0;
    for (std::size_t r = 0; r < map.values.size(); ++r) {
        for (std::size_t c = 0; c < map.values[r].size(); ++c) {
            if (map.values[r][c] > vmax) {
                vmax = map.values[r][c];
                br = r;
                bc = c;
            }
        }
    }
    out << "N=" << problem->instance.N.get_str() << " n=" << problem->n() << '\n'
        << "uniform refinement probability " << fmt(map.uniform_value) << ", best " << fmt(vmax)
        << " at gamma=" << fmt(map.gammas[bc]) << " beta=" << fmt(map.betas[br]) << '\n'
        << "wrote " << (dir / "heatmap_p1.csv").string() << " and " << (dir / "heatmap_p1.svg").string()
        << '\n';
    return 0;
}

int run_factor(const Settings& s, std::ostream& out) {
    mpz_class N;
    if (N.set_str(s.composite, 10) != 0) throw InvalidArgument("--n expects a decimal integer");
    FactorDemoConfig cfg;
    cfg.n = s.dim;
    cfg.c = s.c;
    cfg.delta = s.delta;
    cfg.normalize = normalize_mode(s.normalize);
    cfg.max_instances = s.max_instances;
    cfg.time_budget_seconds = s.budget;
    cfg.gcd_shortcut = !s.no_shortcut;
    cfg.seed = s.seed;
    if (!s.angles.empty()) cfg.angles = load_angle_bank(s.angles).angles;

    const FactorDemoResult r = factor_demo(N, cfg);
    if (!r.factored) {
        out << "no factorisation of " << N.get_str() << " after " << r.instances_tried << " lattices, "
            << r.relations.pairs.size() << " relations\n";
        return kExitCheckFailed;
    }
    if (r.factors->p * r.factors->q != N) throw std::logic_error("factor product mismatch");
    out << N.get_str() << " = " << r.factors->p.get_str() << " * " << r.factors->q.get_str() << '\n';
    out << r.factors->p.get_str() << '\n' << r.factors->q.get_str() << '\n';
    out << "method " << r.factors->method << ", " << r.relations.pairs.size() << " relations, "
        << r.instances_tried << " lattices, " << r.candidates_checked << " candidates\n";
    if (!r.relations.pairs.empty()) {
        const fs::path dir = output_dir(s);
        std::ofstream rel(dir / ("relations_" + N.get_str() + ".txt"));
        write_relations(rel, r.relations.pairs);
    }
    return 0;
}

int run_validate(const Settings& s, std::ostream& out) {
    SuiteOptions opts;
    opts.seed = s.seed;
    bool ok = true;
    for (const CheckResult& c : run_property_suite(opts)) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << " ("
            << fmt(c.seconds, 3) << " s)\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : kExitCheckFailed;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Fixed-angle QAOA refinement of Babai CVP solutions on prime lattices", "primecvp"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key = value settings file (flags override it)");
    app.add_option("--seed", s.seed, "master seed");
    app.add_option("--out", s.out, "output directory")->envname("PRIMECVP_OUT");
    app.add_option("--p", s.p, "QAOA depth(s), comma separated")->delimiter(',');
    app.add_option("--c", s.c, "lattice precision parameter");
    std::string m_range;
    app.add_option("--m-range", m_range, "bit-length range lo:hi");
    app.add_option("--instances", s.instances, "instances per lattice rank");
    app.add_option("--workers", s.workers, "worker threads")->check(CLI::PositiveNumber);

    auto* pre = app.add_subcommand("pretrain", "pre-train fixed angles and write angle banks");
    pre->add_option("--epochs", s.epochs, "training epochs");
    pre->add_option("--s-t", s.s_t, "training candidates per epoch");
    pre->add_option("--s-v", s.s_v, "validation instances per candidate");
    std::string train_range, val_range;
    pre->add_option("--train-range", train_range, "training bit lengths lo:hi");
    pre->add_option("--val-range", val_range, "validation bit lengths lo:hi");
    pre->add_option("--max-iter", s.max_iter, "Nelder-Mead iteration cap (-1: 400*2p)");

    auto* scale = app.add_subcommand("scale", "scaling experiment and alpha fits");
    scale->add_option("--banks", s.banks, "angle bank directory (default: --out)");

    auto* heat = app.add_subcommand("heatmap", "p = 1 refinement probability over (gamma, beta)");
    heat->add_option("--resolution", s.resolution, "grid cells per axis")->check(CLI::Range(2, 1000));
    heat->add_option("--bits", s.heatmap_m, "bit length of the instance");

    auto* fac = app.add_subcommand("factor", "toy factoring through smooth relations");
    fac->add_option("--n", s.composite, "odd composite to factor")->required();
    fac->add_option("--dim", s.dim, "lattice rank (default from bit length)");
    fac->add_flag("--no-shortcut", s.no_shortcut, "skip the factor-base gcd check");
    fac->add_option("--angles", s.angles, "angle bank to use instead of the built-in schedule");
    fac->add_option("--budget", s.budget, "time budget in seconds");
    fac->add_option("--max-lattices", s.max_instances, "number of lattices to sample");

    auto* val = app.add_subcommand("validate", "run the property suite");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        const std::string pre_config = find_config_arg(args);
        if (!pre_config.empty()) apply_config(load_config(pre_config), s);
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (!m_range.empty()) s.m_range = parse_range(m_range, "--m-range");
        if (!train_range.empty()) s.train_range = parse_range(train_range, "--train-range");
        if (!val_range.empty()) s.val_range = parse_range(val_range, "--val-range");
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (*pre) return run_pretrain(s, out);
        if (*scale) return run_scale(s, out);
        if (*heat) return run_heatmap(s, out);
        if (*fac) return run_factor(s, out);
        if (*val) return run_validate(s, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return kExitRuntimeError;
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace primecvp::cli
