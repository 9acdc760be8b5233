#include "primecvp/pretrain.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "primecvp/errors.hpp"
#include "primecvp/parallel.hpp"

namespace primecvp {

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kValidateStream = 2;

NelderMeadOptions resolved_optimizer(const TrainConfig& cfg) {
    NelderMeadOptions o = cfg.optimizer;
    if (o.max_iter < 0) o.max_iter = 400 * 2 * cfg.p;
    return o;
}

// Bit-length draw and instance for one (stream, index) slot.
PrimeLatticeInstance draw_instance(const InstanceDistribution& dist, double c, std::uint64_t seed) {
    Rng rng(derive_seed(seed, {0x6d}));
    return random_instance(dist.draw(rng), c, seed);
}

void append_field(std::string& s, const char* key, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    s += key;
    s += '=';
    s.append(buf, res.ptr);
    s += ';';
}

void append_field(std::string& s, const char* key, long long v) {
    s += key;
    s += '=';
    s += std::to_string(v);
    s += ';';
}

void append_field(std::string& s, const char* key, int v) {
    append_field(s, key, static_cast<long long>(v));
}

}  // namespace

void InstanceDistribution::validate() const {
    if (m_lo < 4 || m_hi < m_lo) throw ConfigError("instance distribution needs 4 <= m_lo <= m_hi");
}

int InstanceDistribution::draw(Rng& rng) const {
    std::uniform_int_distribution<int> d(m_lo, m_hi);
    return d(rng);
}

void TrainConfig::validate() const {
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (s_t < 1 || s_v < 1) throw ConfigError("s_t and s_v must be >= 1");
    if (p < 1) throw ConfigError("p must be >= 1");
    if (!(c >= 0.0)) throw ConfigError("c must be >= 0");
    train_dist.validate();
    val_dist.validate();
}

std::uint64_t TrainConfig::hash() const {
    std::string s;
    append_field(s, "epochs", epochs);
    append_field(s, "s_t", s_t);
    append_field(s, "s_v", s_v);
    append_field(s, "p", p);
    append_field(s, "c", c);
    append_field(s, "t_lo", train_dist.m_lo);
    append_field(s, "t_hi", train_dist.m_hi);
    append_field(s, "v_lo", val_dist.m_lo);
    append_field(s, "v_hi", val_dist.m_hi);
    append_field(s, "tol", optimizer.tol);
    append_field(s, "xtol", optimizer.xtol);
    append_field(s, "max_iter", optimizer.max_iter);
    append_field(s, "step", optimizer.initial_step);
    append_field(s, "normalize", normalize == NormalizeMode::MinMax ? 1 : 0);
    append_field(s, "delta", delta);
    append_field(s, "cap", cap);
    append_field(s, "seed", static_cast<long long>(master_seed));
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ScalingFit fit_alpha(std::span<const ScalingPoint> points, std::size_t min_points) {
    ScalingFit fit;
    for (const auto& pt : points) {
        if (pt.q > 0.0) fit.points.push_back(pt);
        else ++fit.excluded_zero;
    }
    if (fit.points.size() < std::max<std::size_t>(min_points, 1)) {
        throw InsufficientData("fit_alpha: need at least " + std::to_string(min_points) +
                               " points with q > 0, have " + std::to_string(fit.points.size()));
    }
    long double sxy = 0.0L;
    long double sxx = 0.0L;
    long double ysum = 0.0L;
    for (const auto& pt : fit.points) {
        const long double y = -std::log2(static_cast<long double>(pt.q));
        sxy += pt.n * y;
        sxx += static_cast<long double>(pt.n) * pt.n;
        ysum += y;
    }
    if (!(sxx > 0.0L)) throw InsufficientData("fit_alpha: all abscissae are zero");
    const long double alpha = sxy / sxx;
    const long double ymean = ysum / static_cast<long double>(fit.points.size());
    long double ss_res = 0.0L;
    long double ss_tot = 0.0L;
    long double syy = 0.0L;
    for (const auto& pt : fit.points) {
        const long double y = -std::log2(static_cast<long double>(pt.q));
        ss_res += (y - alpha * pt.n) * (y - alpha * pt.n);
        ss_tot += (y - ymean) * (y - ymean);
        syy += y * y;
    }
    // Sums below rounding level of the data count as exact zeros.
    const long double floor = 1e-15L * syy;
    if (ss_res <= floor) ss_res = 0.0L;
    if (ss_tot <= floor) ss_tot = 0.0L;
    fit.alpha = static_cast<double>(alpha);
    if (ss_tot > 0.0L) {
        fit.r2 = static_cast<double>(1.0L - ss_res / ss_tot);
    } else {
        fit.r2 = ss_res > 0.0L ? -std::numeric_limits<double>::infinity() : 1.0;
    }
    return fit;
}

TrainedAngles train_angles_on_diagonal(const CostDiagonal& normalized, const AngleSchedule& init,
                                       const NelderMeadOptions& options) {
    auto objective = [&normalized](std::span<const double> x) {
        return expectation(run_qaoa(normalized, AngleSchedule::from_flat(x)), normalized);
    };
    TrainedAngles out;
    out.initial_objective = objective(init.flat());
    const NelderMeadResult r = nelder_mead(objective, init.flat(), options);
    out.angles = AngleSchedule::from_flat(r.x);
    out.objective = r.f;
    out.iterations = r.iterations;
    return out;
}

AngleSchedule train_angles_on_instance(const RefinementProblem& problem, const AngleSchedule& init,
                                       const TrainConfig& cfg) {
    if (init.depth() != cfg.p) throw InvalidArgument("initial schedule depth differs from cfg.p");
    const CostDiagonal norm = normalize_diagonal(problem.diag, cfg.normalize);
    return train_angles_on_diagonal(norm, init, resolved_optimizer(cfg)).angles;
}

ValidationResult validate_angles(const AngleSchedule& angles, const TrainConfig& cfg,
                                 std::uint64_t stream_seed) {
    ValidationResult out;
    out.samples.resize(static_cast<std::size_t>(cfg.s_v));
    parallel_for(out.samples.size(), cfg.workers, [&](std::size_t j) {
        const RefinementProblem problem =
            prepare_refinement(draw_instance(cfg.val_dist, cfg.c, derive_seed(stream_seed, {j})),
                               cfg.delta, cfg.cap);
        const CostDiagonal norm = normalize_diagonal(problem.diag, cfg.normalize);
        const OutcomeDistribution dist = probabilities(run_qaoa(norm, angles));
        ValidationSample& s = out.samples[j];
        s.m = problem.instance.m;
        s.n = problem.n();
        s.q_best = best_solution_probability(dist, problem.diag);
        s.q_refine = refinement_probability(dist, problem.diag);
        s.omitted = !problem.diag.has_improvement();
    });

    std::vector<ScalingPoint> best_pts;
    std::vector<ScalingPoint> refine_pts;
    for (const auto& s : out.samples) {
        best_pts.push_back({static_cast<double>(s.n), s.q_best});
        if (!s.omitted) refine_pts.push_back({static_cast<double>(s.n), s.q_refine});
    }
    out.best = fit_alpha(best_pts, 1);
    try {
        out.refine = fit_alpha(refine_pts, 1);
    } catch (const InsufficientData&) {
        out.refine.reset();
    }
    return out;
}

PretrainResult pretrain(const TrainConfig& cfg) {
    cfg.validate();
    PretrainResult result;
    result.angles = AngleSchedule::zeros(cfg.p);
    result.alpha = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto ue = static_cast<std::uint64_t>(epoch);
        std::vector<AngleSchedule> candidates(static_cast<std::size_t>(cfg.s_t));
        parallel_for(candidates.size(), cfg.workers, [&](std::size_t i) {
            const RefinementProblem problem = prepare_refinement(
                draw_instance(cfg.train_dist, cfg.c, derive_seed(cfg.master_seed, {kTrainStream, ue, i})),
                cfg.delta, cfg.cap);
            candidates[i] = train_angles_on_instance(problem, result.angles, cfg);
        });

        EpochRecord rec;
        rec.epoch = epoch + 1;
        rec.best_alpha = std::numeric_limits<double>::infinity();
        rec.best_alpha_refine = std::numeric_limits<double>::quiet_NaN();
        // Validation of one candidate already fans out over its instances.
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const ValidationResult v = validate_angles(
                candidates[i], cfg, derive_seed(cfg.master_seed, {kValidateStream, ue, i}));
            rec.candidate_alphas.push_back(v.best.alpha);
            if (v.best.alpha < rec.best_alpha) {
                rec.best_alpha = v.best.alpha;
                rec.best_candidate = static_cast<int>(i);
                rec.best_alpha_refine =
                    v.refine ? v.refine->alpha : std::numeric_limits<double>::quiet_NaN();
            }
        }
        if (rec.best_candidate >= 0 && rec.best_alpha < result.alpha) {
            result.alpha = rec.best_alpha;
            result.angles = candidates[static_cast<std::size_t>(rec.best_candidate)];
            rec.accepted = true;
        }
        rec.alpha_star = result.alpha;
        result.history.push_back(std::move(rec));
    }
    return result;
}

AngleSchedule baseline_single_instance(int m, const TrainConfig& cfg, std::uint64_t seed) {
    const RefinementProblem problem =
        prepare_refinement(random_instance(m, cfg.c, seed), cfg.delta, cfg.cap);
    return train_angles_on_instance(problem, AngleSchedule::zeros(cfg.p), cfg);
}

PerInstanceBaseline baseline_per_instance(const RefinementProblem& problem, const TrainConfig& cfg) {
    const CostDiagonal norm = normalize_diagonal(problem.diag, cfg.normalize);
    const TrainedAngles trained =
        train_angles_on_diagonal(norm, AngleSchedule::zeros(cfg.p), resolved_optimizer(cfg));
    PerInstanceBaseline out;
    out.angles = trained.angles;
    out.objective = trained.objective;
    out.uniform_objective = trained.initial_objective;
    const OutcomeDistribution dist = probabilities(run_qaoa(norm, trained.angles));
    out.q_refine = refinement_probability(dist, problem.diag);
    out.q_best = best_solution_probability(dist, problem.diag);
    out.omitted = !problem.diag.has_improvement();
    return out;
}

}  // namespace primecvp
