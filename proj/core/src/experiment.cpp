#include "primecvp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "primecvp/angle_bank.hpp"
#include "primecvp/errors.hpp"
#include "primecvp/parallel.hpp"
#include "primecvp/random.hpp"

namespace primecvp {

namespace {

constexpr const char* kCsvHeader =
    "seed,m,n_exact,n_rank,p,c,q_refine,q_best,improvement,omitted,babai_dist2,best_dist2";

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

template <class T>
T parse_field(const std::string& s, const char* what) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError(std::string("csv: bad ") + what + " '" + s + "'");
    }
    return v;
}

struct Job {
    int n = 0;
    int m = 0;
    int replicate = 0;
};

}  // namespace

void ExperimentConfig::validate() const {
    if (m_lo < 4 || m_hi < m_lo) throw ConfigError("m range must satisfy 4 <= lo <= hi");
    if (instances_per_n < 1) throw ConfigError("instances per n must be >= 1");
    if (p_list.empty()) throw ConfigError("p list is empty");
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        if (p_list[i] < 0) throw ConfigError("negative depth in p list");
        for (std::size_t j = 0; j < i; ++j) {
            if (p_list[j] == p_list[i]) throw ConfigError("repeated depth in p list");
        }
    }
    if (!(c >= 0.0) || c > 4.0) throw ConfigError("c must lie in [0, 4]");
    if (cap < 1 || cap > kDefaultEnumerationCap) throw ConfigError("enumeration cap out of range");
    if (!(delta > 0.25 && delta <= 1.0)) throw ConfigError("delta must lie in (1/4, 1]");
}

std::map<int, AngleSchedule> load_angle_schedules(const ExperimentConfig& cfg) {
    std::map<int, AngleSchedule> out;
    for (int p : cfg.p_list) {
        if (out.contains(p)) continue;
        if (p == 0) {
            out.emplace(0, AngleSchedule{});
            continue;
        }
        const auto path = angle_bank_path(cfg.angle_bank_dir, p);
        if (!std::filesystem::exists(path)) {
            throw ConfigError("missing angle bank for p=" + std::to_string(p) + ": " + path.string());
        }
        AngleBank bank = load_angle_bank(path);
        if (bank.angles.depth() != p) {
            throw ConfigError("angle bank " + path.string() + " has the wrong depth");
        }
        out.emplace(p, std::move(bank.angles));
    }
    return out;
}

std::map<int, std::vector<int>> bit_lengths_by_rank(int m_lo, int m_hi) {
    std::map<int, std::vector<int>> out;
    for (int m = m_lo; m <= m_hi; ++m) out[dimension_for_bits(m)].push_back(m);
    return out;
}

RefinementProblem find_improvable_instance(int m, double c, std::uint64_t seed, double delta, int cap,
                                           int max_tries) {
    for (int r = 0; r < max_tries; ++r) {
        RefinementProblem p = prepare_refinement(
            random_instance(m, c, derive_seed(seed, {static_cast<std::uint64_t>(r)})), delta, cap);
        if (p.diag.has_improvement()) return p;
    }
    throw InvalidArgument("no improvable " + std::to_string(m) + "-bit instance in " +
                          std::to_string(max_tries) + " tries");
}

double quality_metric(double babai_dist2, double best_dist2) {
    if (babai_dist2 < 0.0 || best_dist2 < 0.0) throw InvalidArgument("negative squared distance");
    if (babai_dist2 == 0.0) return 0.0;
    const double rb = std::sqrt(babai_dist2);
    const double v = (rb - std::sqrt(best_dist2)) / rb;
    return std::clamp(v, 0.0, std::nextafter(1.0, 0.0));
}

std::vector<RefinementRecord> run_scaling_experiment(const ExperimentConfig& cfg,
                                                     const std::map<int, AngleSchedule>& schedules) {
    cfg.validate();
    for (int p : cfg.p_list) {
        auto it = schedules.find(p);
        if (it == schedules.end()) {
            throw ConfigError("no angle schedule for p=" + std::to_string(p));
        }
        if (it->second.depth() != p) throw ConfigError("schedule depth does not match p");
    }

    std::vector<Job> jobs;
    for (const auto& [n, ms] : bit_lengths_by_rank(cfg.m_lo, cfg.m_hi)) {
        for (int r = 0; r < cfg.instances_per_n; ++r) {
            jobs.push_back({n, ms[static_cast<std::size_t>(r) % ms.size()], r});
        }
    }

    const std::size_t np = cfg.p_list.size();
    std::vector<RefinementRecord> grid(jobs.size() * np);
    parallel_for(jobs.size(), cfg.workers, [&](std::size_t k) {
        const Job& job = jobs[k];
        const std::uint64_t seed =
            derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(job.m),
                                          static_cast<std::uint64_t>(job.replicate)});
        const RefinementProblem problem =
            prepare_refinement(random_instance(job.m, cfg.c, seed), cfg.delta, cfg.cap);
        const CostDiagonal norm = normalize_diagonal(problem.diag, cfg.normalize);

        RefinementRecord base;
        base.seed = seed;
        base.m = job.m;
        base.n_exact = exact_dimension(problem.instance.N);
        base.n_rank = problem.n();
        base.c = cfg.c;
        base.omitted = !problem.diag.has_improvement();
        base.babai_dist2 = problem.diag.baseline;
        base.best_dist2 = problem.diag.e_min;
        base.improvement = quality_metric(base.babai_dist2, base.best_dist2);

        for (std::size_t ip = 0; ip < np; ++ip) {
            const int p = cfg.p_list[ip];
            const OutcomeDistribution dist = probabilities(run_qaoa(norm, schedules.at(p)));
            RefinementRecord rec = base;
            rec.p = p;
            rec.q_refine = refinement_probability(dist, problem.diag);
            rec.q_best = best_solution_probability(dist, problem.diag);
            grid[ip * jobs.size() + k] = rec;
        }
    });
    return grid;
}

void write_records_csv(std::ostream& out, std::span<const RefinementRecord> records) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.seed << ',' << r.m << ',' << fmt_double(r.n_exact) << ',' << r.n_rank << ','
            << r.p << ',' << fmt_double(r.c) << ',' << fmt_double(r.q_refine) << ','
            << fmt_double(r.q_best) << ',' << fmt_double(r.improvement) << ','
            << (r.omitted ? 1 : 0) << ',' << fmt_double(r.babai_dist2) << ','
            << fmt_double(r.best_dist2) << '\n';
    }
}

std::vector<RefinementRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("csv: missing or unknown header");
    std::vector<RefinementRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 12) throw ConfigError("csv: expected 12 fields, got " + std::to_string(f.size()));
        RefinementRecord r;
        r.seed = parse_field<std::uint64_t>(f[0], "seed");
        r.m = parse_field<int>(f[1], "m");
        r.n_exact = parse_field<double>(f[2], "n_exact");
        r.n_rank = parse_field<int>(f[3], "n_rank");
        r.p = parse_field<int>(f[4], "p");
        r.c = parse_field<double>(f[5], "c");
        r.q_refine = parse_field<double>(f[6], "q_refine");
        r.q_best = parse_field<double>(f[7], "q_best");
        r.improvement = parse_field<double>(f[8], "improvement");
        r.omitted = parse_field<int>(f[9], "omitted") != 0;
        r.babai_dist2 = parse_field<double>(f[10], "babai_dist2");
        r.best_dist2 = parse_field<double>(f[11], "best_dist2");
        out.push_back(r);
    }
    return out;
}

std::map<int, ScalingFit> fit_records(std::span<const RefinementRecord> records, FitColumn column) {
    std::map<int, std::vector<ScalingPoint>> by_p;
    for (const auto& r : records) {
        auto& pts = by_p[r.p];
        if (r.omitted) continue;
        pts.push_back({r.n_exact, column == FitColumn::Refine ? r.q_refine : r.q_best});
    }
    std::map<int, ScalingFit> out;
    for (const auto& [p, pts] : by_p) {
        try {
            out.emplace(p, fit_alpha(pts));
        } catch (const InsufficientData&) {
            // reported by the caller as a missing depth
        }
    }
    return out;
}

double ExponentialFit::operator()(double p) const { return a * std::exp(-b * p) + c; }

namespace {

struct LinearPart {
    double a = 0.0;
    double c = 0.0;
    double rss = 0.0;
};

// For fixed b the model is linear in (a, c); solve the 2x2 normal equations.
LinearPart solve_linear(std::span<const AlphaPoint> pts, double b) {
    double s_ee = 0.0, s_e = 0.0, s_y = 0.0, s_ey = 0.0;
    const double k = static_cast<double>(pts.size());
    for (const auto& pt : pts) {
        const double e = std::exp(-b * pt.p);
        s_ee += e * e;
        s_e += e;
        s_y += pt.alpha;
        s_ey += e * pt.alpha;
    }
    LinearPart lp;
    const double det = k * s_ee - s_e * s_e;
    if (std::abs(det) < 1e-300) {
        lp.a = 0.0;
        lp.c = s_y / k;
    } else {
        lp.a = (k * s_ey - s_e * s_y) / det;
        lp.c = (s_ee * s_y - s_e * s_ey) / det;
    }
    for (const auto& pt : pts) {
        const double r = pt.alpha - (lp.a * std::exp(-b * pt.p) + lp.c);
        lp.rss += r * r;
    }
    return lp;
}

}  // namespace

ExponentialFit extrapolate_alpha_p(std::span<const AlphaPoint> points) {
    if (points.size() < 3) throw InsufficientData("exponential fit needs at least 3 points");
    for (const auto& pt : points) {
        if (!std::isfinite(pt.p) || !std::isfinite(pt.alpha)) throw InvalidArgument("non-finite point");
    }
    ExponentialFit fit;
    double y_mean = 0.0;
    for (const auto& pt : points) y_mean += pt.alpha;
    y_mean /= static_cast<double>(points.size());
    double spread = 0.0;
    for (const auto& pt : points) spread = std::max(spread, std::abs(pt.alpha - y_mean));

    if (spread <= 1e-12 * (1.0 + std::abs(y_mean))) {
        fit.c = y_mean;
        fit.residuals.assign(points.size(), 0.0);
        for (std::size_t i = 0; i < points.size(); ++i) fit.residuals[i] = points[i].alpha - y_mean;
        fit.degenerate = true;
        return fit;
    }

    // Variable projection: scan b on a log grid, then polish with Brent.
    constexpr double kLogLo = -8.0;
    constexpr double kLogHi = 3.0;
    constexpr int kGrid = 221;
    auto rss_at = [&](double log_b) { return solve_linear(points, std::exp(log_b)).rss; };
    int best = 0;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double x = kLogLo + (kLogHi - kLogLo) * i / (kGrid - 1);
        const double r = rss_at(x);
        if (r < best_rss) {
            best_rss = r;
            best = i;
        }
    }
    const double step = (kLogHi - kLogLo) / (kGrid - 1);
    const double lo = kLogLo + step * std::max(0, best - 1);
    const double hi = kLogLo + step * std::min(kGrid - 1, best + 1);
    std::uintmax_t max_iter = 500;
    const auto [log_b, rss] = boost::math::tools::brent_find_minima(
        rss_at, lo, hi, std::numeric_limits<double>::digits, max_iter);

    const LinearPart lp = solve_linear(points, std::exp(log_b));
    fit.a = lp.a;
    fit.b = std::exp(log_b);
    fit.c = lp.c;
    fit.rss = lp.rss;
    for (const auto& pt : points) fit.residuals.push_back(pt.alpha - fit(pt.p));

    const bool interior = best > 0 && best < kGrid - 1;
    fit.degenerate = !(lp.a > 1e-9 * (1.0 + std::abs(lp.c)));
    fit.converged = interior && !fit.degenerate && max_iter < 500 && std::isfinite(rss);
    return fit;
}

Heatmap heatmap_p1(const RefinementProblem& problem, int resolution, NormalizeMode mode) {
    if (resolution < 2) throw InvalidArgument("heatmap resolution must be >= 2");
    Heatmap map;
    const auto r = static_cast<std::size_t>(resolution);
    for (std::size_t i = 0; i < r; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(r - 1);
        map.gammas.push_back(2.0 * std::numbers::pi * frac);
        map.betas.push_back(std::numbers::pi * frac);
    }
    const CostDiagonal norm = normalize_diagonal(problem.diag, mode);
    map.uniform_value =
        refinement_probability(probabilities(run_qaoa(norm, AngleSchedule{})), problem.diag);
    map.values.assign(r, std::vector<double>(r, 0.0));
    for (std::size_t row = 0; row < r; ++row) {
        for (std::size_t col = 0; col < r; ++col) {
            const AngleSchedule angles({map.gammas[col]}, {map.betas[row]});
            map.values[row][col] =
                refinement_probability(probabilities(run_qaoa(norm, angles)), problem.diag);
        }
    }
    return map;
}

void write_heatmap_csv(std::ostream& out, const Heatmap& map) {
    out << "beta\\gamma";
    for (double g : map.gammas) out << ',' << fmt_double(g);
    out << '\n';
    for (std::size_t row = 0; row < map.betas.size(); ++row) {
        out << fmt_double(map.betas[row]);
        for (double v : map.values[row]) out << ',' << fmt_double(v);
        out << '\n';
    }
}

void write_heatmap_svg(std::ostream& out, const Heatmap& map) {
    constexpr int kCell = 8;
    constexpr int kMargin = 40;
    const int cols = static_cast<int>(map.gammas.size());
    const int rows = static_cast<int>(map.betas.size());
    double vmax = 0.0;
    for (const auto& row : map.values) {
        for (double v : row) vmax = std::max(vmax, v);
    }
    if (vmax <= 0.0) vmax = 1.0;
    const int w = cols * kCell + 2 * kMargin;
    const int h = rows * kCell + 2 * kMargin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int row = 0; row < rows; ++row) {
        for (int col = 0; col < cols; ++col) {
            const double t = map.values[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] / vmax;
            // dark blue -> yellow
            const int red = static_cast<int>(std::lround(30 + 225 * t));
            const int green = static_cast<int>(std::lround(20 + 210 * t));
            const int blue = static_cast<int>(std::lround(110 * (1.0 - t)));
            // beta grows upwards
            const int y = kMargin + (rows - 1 - row) * kCell;
            out << "<rect x=\"" << kMargin + col * kCell << "\" y=\"" << y << "\" width=\"" << kCell
                << "\" height=\"" << kCell << "\" fill=\"rgb(" << red << ',' << green << ',' << blue
                << ")\"/>\n";
        }
    }
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">gamma [0, 2pi]</text>\n";
    out << "<text x=\"14\" y=\"" << h / 2 << "\" font-size=\"12\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 14 " << h / 2 << ")\">beta [0, pi]</text>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"24\" font-size=\"12\" text-anchor=\"middle\">"
        << "refinement probability, max " << fmt_double(vmax) << "</text>\n";
    out << "</svg>\n";
}

}  // namespace primecvp
