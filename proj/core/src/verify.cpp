#include "primecvp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "primecvp/errors.hpp"
#include "primecvp/factoring.hpp"
#include "primecvp/pretrain.hpp"
#include "primecvp/qaoa.hpp"
#include "primecvp/qubo.hpp"
#include "primecvp/random.hpp"
#include "primecvp/refinement.hpp"

namespace primecvp {

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

CostDiagonal random_diagonal(int n, Rng& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> e(std::size_t{1} << n);
    for (double& x : e) x = u(rng);
    return CostDiagonal::from_energies(std::move(e));
}

AngleSchedule random_angles(int p, Rng& rng) {
    std::uniform_real_distribution<double> g(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> b(0.0, std::numbers::pi);
    std::vector<double> gamma(static_cast<std::size_t>(p));
    std::vector<double> beta(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) {
        gamma[static_cast<std::size_t>(k)] = g(rng);
        beta[static_cast<std::size_t>(k)] = b(rng);
    }
    return {std::move(gamma), std::move(beta)};
}

// Prime lattice of a chosen rank over a random semiprime.
PrimeLatticeInstance lattice_of_rank(int n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, {0x4e}));
    std::uniform_int_distribution<int> bits(16, 40);
    const mpz_class N = sample_semiprime(bits(rng), rng);
    return build_prime_lattice(N, n, 1.5, derive_seed(seed, {0x66}));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

mpz_class exact_determinant(const IntMatrix& square) {
    const std::size_t n = square.rows();
    if (square.cols() != n) throw InvalidArgument("determinant of a non-square matrix");
    if (n == 0) return 1;
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(square(i, j));
    }
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

LllAudit audit_lll(const IntMatrix& original, const ReducedBasis& reduced) {
    const IntMatrix& d = reduced.D;
    const std::size_t n = d.cols();
    LllAudit audit;

    std::vector<std::vector<long double>> g(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            long double s = 0.0L;
            for (std::size_t k = 0; k < d.rows(); ++k) {
                s += static_cast<long double>(d(k, i)) * static_cast<long double>(d(k, j));
            }
            g[i][j] = g[j][i] = s;
        }
    }
    // Upper-triangular R with R^T R = G.
    std::vector<std::vector<long double>> r(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
        long double diag = g[i][i];
        for (std::size_t k = 0; k < i; ++k) diag -= r[k][i] * r[k][i];
        if (diag <= 0.0L) return audit;
        r[i][i] = std::sqrt(diag);
        for (std::size_t j = i + 1; j < n; ++j) {
            long double s = g[i][j];
            for (std::size_t k = 0; k < i; ++k) s -= r[k][i] * r[k][j];
            r[i][j] = s / r[i][i];
        }
    }
    constexpr long double kTol = 1e-9L;
    audit.size_reduced = true;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const long double mu = std::abs(r[i][j] / r[i][i]);
            audit.max_abs_mu = std::max(audit.max_abs_mu, static_cast<double>(mu));
            if (mu > 0.5L + kTol) audit.size_reduced = false;
        }
    }
    audit.lovasz = true;
    audit.worst_lovasz_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const long double lhs = reduced.delta * r[i][i] * r[i][i];
        const long double rhs = r[i][i + 1] * r[i][i + 1] + r[i + 1][i + 1] * r[i + 1][i + 1];
        const long double slack = (rhs - lhs) / std::max(lhs, 1.0L);
        audit.worst_lovasz_slack = std::min(audit.worst_lovasz_slack, static_cast<double>(slack));
        if (slack < -kTol) audit.lovasz = false;
    }
    if (n < 2) audit.worst_lovasz_slack = 0.0;

    if (reduced.U.rows() == n && reduced.U.cols() == n) {
        const mpz_class det = exact_determinant(reduced.U);
        audit.same_lattice = multiply(original, reduced.U) == d && abs(det) == 1;
    }
    return audit;
}

CheckResult check_simulator(int draws, std::uint64_t seed) {
    Stopwatch sw;
    Rng rng(derive_seed(seed, {0x51}));
    std::uniform_int_distribution<int> dn(1, 4);
    std::uniform_int_distribution<int> dp(0, 3);
    double max_dev = 0.0;
    double max_norm_err = 0.0;
    for (int k = 0; k < draws; ++k) {
        const int n = dn(rng);
        const int p = dp(rng);
        const CostDiagonal diag = random_diagonal(n, rng);
        const AngleSchedule angles = random_angles(p, rng);
        const StateVector fast = run_qaoa(diag, angles);
        const StateVector dense = dense_oracle(diag, angles);
        for (std::size_t z = 0; z < fast.amplitudes.size(); ++z) {
            max_dev = std::max(max_dev, std::abs(fast.amplitudes[z] - dense.amplitudes[z]));
        }
        max_norm_err = std::max(max_norm_err, std::abs(fast.norm2() - 1.0));
    }
    CheckResult res{"simulator vs dense oracle", max_dev < 1e-9 && max_norm_err <= 1e-12, {}, 0.0};
    res.detail = std::to_string(draws) + " draws, max amplitude deviation " + fmt(max_dev) +
                 ", max norm error " + fmt(max_norm_err);
    res.seconds = sw.seconds();
    return res;
}

CheckResult check_lll(int instances, std::uint64_t seed) {
    Stopwatch sw;
    Rng rng(derive_seed(seed, {0x4c}));
    std::uniform_int_distribution<int> dn(3, 12);
    int failures = 0;
    double max_mu = 0.0;
    for (int k = 0; k < instances; ++k) {
        const int n = dn(rng);
        const PrimeLatticeInstance inst = lattice_of_rank(n, derive_seed(seed, {0x4c, static_cast<std::uint64_t>(k)}));
        const ReducedBasis red = lll_reduce(inst.B, kDefaultLllDelta);
        const LllAudit a = audit_lll(inst.B, red);
        max_mu = std::max(max_mu, a.max_abs_mu);
        if (!(a.size_reduced && a.lovasz && a.same_lattice)) ++failures;
    }
    CheckResult res{"LLL postconditions", failures == 0, {}, 0.0};
    res.detail = std::to_string(instances) + " lattices, " + std::to_string(failures) +
                 " failures, max |mu| " + fmt(max_mu);
    res.seconds = sw.seconds();
    return res;
}

CheckResult check_babai(int instances, std::uint64_t seed) {
    Stopwatch sw;
    Rng rng(derive_seed(seed, {0x42}));
    std::uniform_int_distribution<int> dn(3, 6);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int k = 0; k < instances; ++k) {
        const int n = dn(rng);
        const RefinementProblem prob =
            prepare_refinement(lattice_of_rank(n, derive_seed(seed, {0x42, static_cast<std::uint64_t>(k)})));
        const std::vector<double> target = prob.instance.target_as_double();
        int bound = 2;
        CvpSolution exact = exact_cvp_small(prob.reduced.D, target, bound);
        while (exact.on_box_boundary) {
            const int next = bound + 2;
            if (std::pow(2.0 * next + 1.0, n) > 1e7) break;
            bound = next;
            exact = exact_cvp_small(prob.reduced.D, target, bound);
        }
        const double factor = 2.0 * std::pow(2.0 / std::sqrt(3.0), n);
        const double ratio = std::sqrt(prob.babai.dist2) / std::sqrt(exact.dist2);
        worst_ratio = std::max(worst_ratio, ratio / factor);
        if (std::sqrt(prob.babai.dist2) > factor * std::sqrt(exact.dist2) * (1.0 + 1e-12)) ++violations;
    }
    CheckResult res{"Babai approximation bound", violations == 0, {}, 0.0};
    res.detail = std::to_string(instances) + " instances, " + std::to_string(violations) +
                 " violations, worst ratio/bound " + fmt(worst_ratio);
    res.seconds = sw.seconds();
    return res;
}

CheckResult check_qubo(int instances, std::uint64_t seed) {
    Stopwatch sw;
    Rng rng(derive_seed(seed, {0x51, 0x55}));
    std::uniform_int_distribution<int> dn(3, 10);
    double worst = 0.0;
    std::size_t strings = 0;
    for (int k = 0; k < instances; ++k) {
        const int n = dn(rng);
        const RefinementProblem prob =
            prepare_refinement(lattice_of_rank(n, derive_seed(seed, {0x55, static_cast<std::uint64_t>(k)})));
        const QuboCoefficients q =
            to_qubo_coefficients(prob.instance, prob.babai, prob.reduced);
        for (Bitstring z = 0; z < prob.diag.size(); ++z) {
            const double naive =
                cost(z, prob.instance.t, prob.babai.b_op, prob.kappa.kappa, prob.reduced.D);
            const double scale = std::max(1.0, std::abs(naive));
            worst = std::max(worst, std::abs(prob.diag.energies[z] - naive) / scale);
            worst = std::max(worst, std::abs(q.evaluate(z) - naive) / scale);
            ++strings;
        }
    }
    CheckResult res{"QUBO expansion = Gray-code diagonal = naive cost", worst <= 1e-9, {}, 0.0};
    res.detail = std::to_string(instances) + " instances, " + std::to_string(strings) +
                 " strings, max relative error " + fmt(worst);
    res.seconds = sw.seconds();
    return res;
}

CheckResult check_fits() {
    Stopwatch sw;
    std::vector<ScalingPoint> pts;
    for (double n : {3.0, 3.7, 4.4, 5.0, 6.2, 7.9, 9.0, 11.5}) pts.push_back({n, std::exp2(-0.3 * n)});
    const ScalingFit f = fit_alpha(pts);
    const double alpha_err = std::abs(f.alpha - 0.3);

    std::vector<AlphaPoint> ap;
    for (int p = 1; p <= 10; ++p) ap.push_back({double(p), 0.4 * std::exp(-0.2 * p) + 0.1});
    const ExponentialFit e = extrapolate_alpha_p(ap);
    const double param_err =
        std::max({std::abs(e.a - 0.4), std::abs(e.b - 0.2), std::abs(e.c - 0.1)});

    CheckResult res{"fit recovery", alpha_err <= 1e-9 && param_err <= 1e-6 && e.converged, {}, 0.0};
    res.detail = "alpha error " + fmt(alpha_err) + ", exponential parameter error " + fmt(param_err);
    res.seconds = sw.seconds();
    return res;
}

CheckResult check_factoring(const std::vector<long>& composites, double budget_seconds,
                            std::uint64_t seed) {
    Stopwatch sw;
    bool ok = true;
    std::string detail;
    for (long value : composites) {
        const mpz_class N = value;
        FactorDemoConfig cfg;
        cfg.gcd_shortcut = false;
        cfg.time_budget_seconds = budget_seconds;
        cfg.seed = seed;
        Stopwatch one;
        const FactorDemoResult r = factor_demo(N, cfg);
        const double t = one.seconds();
        const FactorBase base = build_factor_base(static_cast<std::size_t>(
            r.relations.pairs.empty() ? 1 : r.relations.pairs.front().e.size()));
        bool pairs_ok = true;
        for (const SrPair& pair : r.relations.pairs) pairs_ok = pairs_ok && verify_sr_pair(pair, N, base);
        const bool split = r.factored && r.factors && r.factors->p * r.factors->q == N &&
                           r.factors->p > 1 && r.factors->q > 1;
        const bool this_ok = split && pairs_ok && t < budget_seconds;
        ok = ok && this_ok;
        if (!detail.empty()) detail += "; ";
        detail += std::to_string(value) + (split ? " = " + r.factors->p.get_str() + "*" +
                                                      r.factors->q.get_str() + " (" +
                                                      r.factors->method + ")"
                                                : std::string(" not split"));
        detail += ", " + std::to_string(r.relations.pairs.size()) + " pairs" +
                  (pairs_ok ? "" : " (identity FAILED)") + ", " + fmt(t) + " s";
    }
    CheckResult res{"factoring smoke", ok, detail, sw.seconds()};
    return res;
}

CheckResult check_degenerate_runs(int draws, std::uint64_t seed) {
    Stopwatch sw;
    Rng rng(derive_seed(seed, {0x30}));
    std::uniform_int_distribution<int> dn(1, 8);
    std::uniform_int_distribution<int> dp(1, 4);
    double worst = 0.0;
    for (int k = 0; k < draws; ++k) {
        const int n = dn(rng);
        const CostDiagonal diag = random_diagonal(n, rng);
        const int p = dp(rng);
        const AngleSchedule base = random_angles(p, rng);
        const std::vector<AngleSchedule> cases{
            AngleSchedule{},
            AngleSchedule(base.gamma(), std::vector<double>(static_cast<std::size_t>(p), 0.0)),
            AngleSchedule(std::vector<double>(static_cast<std::size_t>(p), 0.0), base.beta())};
        const double uniform = std::ldexp(1.0, -n);
        for (const auto& angles : cases) {
            const OutcomeDistribution d = probabilities(run_qaoa(diag, angles));
            for (double q : d.probs) worst = std::max(worst, std::abs(q - uniform));
        }
    }
    CheckResult res{"p=0 / beta=0 / gamma=0 runs are uniform", worst <= 1e-12, {}, 0.0};
    res.detail = std::to_string(draws) + " diagonals x 3 cases, max deviation " + fmt(worst);
    res.seconds = sw.seconds();
    return res;
}

CheckResult check_scale_determinism(const ExperimentConfig& cfg,
                                    const std::map<int, AngleSchedule>& schedules) {
    Stopwatch sw;
    auto render = [&](int workers) {
        ExperimentConfig c = cfg;
        c.workers = workers;
        std::ostringstream os;
        write_records_csv(os, run_scaling_experiment(c, schedules));
        return os.str();
    };
    const std::string a = render(1);
    const std::string b = render(1);
    const std::string c = render(std::max(2, cfg.workers));
    CheckResult res{"scale CSV determinism", a == b && a == c, {}, 0.0};
    res.detail = std::to_string(a.size()) + " bytes; repeat " + (a == b ? "identical" : "DIFFERS") +
                 ", " + std::to_string(std::max(2, cfg.workers)) + " workers " +
                 (a == c ? "identical" : "DIFFERS");
    res.seconds = sw.seconds();
    return res;
}

CheckResult check_heatmap(int resolution, std::uint64_t seed) {
    Stopwatch sw;
    // 12-bit semiprimes give rank 3.
    const RefinementProblem prob = find_improvable_instance(12, 1.5, seed);
    const Heatmap map = heatmap_p1(prob, resolution);
    bool in_range = true;
    double beta0_dev = 0.0;
    double vmax = 0.0;
    for (std::size_t row = 0; row < map.values.size(); ++row) {
        for (double v : map.values[row]) {
            in_range = in_range && v >= 0.0 && v <= 1.0;
            vmax = std::max(vmax, v);
            if (row == 0) beta0_dev = std::max(beta0_dev, std::abs(v - map.uniform_value));
        }
    }
    const double seconds = sw.seconds();
    CheckResult res{"p=1 heatmap", prob.n() == 3 && in_range && beta0_dev <= 1e-12 && vmax >= map.uniform_value,
                    {}, seconds};
    res.detail = std::to_string(resolution) + "x" + std::to_string(resolution) + " grid, n=" +
                 std::to_string(prob.n()) + ", uniform " + fmt(map.uniform_value) + ", max " +
                 fmt(vmax) + ", beta=0 deviation " + fmt(beta0_dev);
    return res;
}

std::vector<CheckResult> run_property_suite(const SuiteOptions& opts) {
    std::vector<CheckResult> out;
    out.push_back(check_simulator(opts.simulator_draws, opts.seed));
    out.push_back(check_lll(opts.lll_instances, opts.seed));
    out.push_back(check_babai(opts.babai_instances, opts.seed));
    out.push_back(check_qubo(opts.qubo_instances, opts.seed));
    out.push_back(check_fits());
    out.push_back(check_degenerate_runs(opts.degenerate_draws, opts.seed));
    if (opts.factoring) out.push_back(check_factoring({15, 21, 33, 35}, 60.0, opts.seed));
    out.push_back(check_heatmap(opts.heatmap_resolution, opts.seed));

    ExperimentConfig cfg;
    cfg.m_lo = 8;
    cfg.m_hi = 20;
    cfg.instances_per_n = 4;
    cfg.p_list = {0, 1};
    cfg.master_seed = opts.seed;
    std::map<int, AngleSchedule> schedules{{0, AngleSchedule{}}, {1, AngleSchedule({0.8}, {0.35})}};
    out.push_back(check_scale_determinism(cfg, schedules));
    return out;
}

}  // namespace primecvp
