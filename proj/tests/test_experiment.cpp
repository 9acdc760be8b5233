#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "primecvp/config_file.hpp"
#include "primecvp/errors.hpp"
#include "primecvp/experiment.hpp"
#include "primecvp/random.hpp"

using namespace primecvp;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.m_lo = 8;
    cfg.m_hi = 24;
    cfg.instances_per_n = 6;
    cfg.p_list = {0, 1};
    cfg.master_seed = 3;
    return cfg;
}

const std::map<int, AngleSchedule> kSchedules{{0, AngleSchedule{}}, {1, AngleSchedule({0.8}, {0.35})}};

std::string render(const std::vector<RefinementRecord>& recs) {
    std::ostringstream os;
    write_records_csv(os, recs);
    return os.str();
}

}  // namespace

TEST_CASE("quality metric") {
    CHECK(quality_metric(9.0, 9.0) == 0.0);
    CHECK(quality_metric(8.0, 2.0) == doctest::Approx(0.5));
    CHECK(quality_metric(0.0, 0.0) == 0.0);
    CHECK(quality_metric(4.0, 0.0) < 1.0);
    CHECK_THROWS(quality_metric(-1.0, 0.0));
}

TEST_CASE("quality metric against neighbourhood enumeration") {
    const auto p = prepare_refinement(random_instance(16, 1.5, 12));
    REQUIRE(p.n() == 4);
    const auto entries = enumerate_neighborhood(p.babai.b_op, p.reduced.D, p.kappa.kappa,
                                                p.instance.target_as_double());
    double best = entries.front().dist2;
    for (const auto& e : entries) best = std::min(best, e.dist2);
    const double want = (std::sqrt(entries.front().dist2) - std::sqrt(best)) / std::sqrt(entries.front().dist2);
    CHECK(quality_metric(p.diag.baseline, p.diag.e_min) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("bit lengths grouped by rank") {
    const auto groups = bit_lengths_by_rank(8, 24);
    CHECK(groups.begin()->first == 3);
    CHECK(groups.at(4) == std::vector<int>{13, 14, 15, 16, 17, 18, 19});
    for (const auto& [n, ms] : groups)
        for (int m : ms) CHECK(dimension_for_bits(m) == n);
}

TEST_CASE("scaling records") {
    const ExperimentConfig cfg = tiny_config();
    const auto recs = run_scaling_experiment(cfg, kSchedules);
    const std::size_t ranks = bit_lengths_by_rank(cfg.m_lo, cfg.m_hi).size();
    REQUIRE(recs.size() == ranks * 6 * 2);
    for (const auto& r : recs) {
        CHECK(r.q_refine >= 0.0);
        CHECK(r.q_refine <= 1.0);
        CHECK(r.q_best >= 0.0);
        CHECK(r.q_best <= 1.0 + 1e-15);
        CHECK(r.improvement >= 0.0);
        CHECK(r.improvement < 1.0);
        if (r.omitted) {
            CHECK(r.q_refine == 0.0);
            CHECK(r.best_dist2 == r.babai_dist2);
        }
        CHECK(r.q_best <= r.q_refine + (r.omitted ? 1.0 : 0.0) + 1e-12);
        CHECK(r.n_rank == dimension_for_bits(r.m));
        CHECK(r.c == cfg.c);
    }
    // p = 0 gives the improving fraction of the neighbourhood.
    for (const auto& r : recs) {
        if (r.p != 0) continue;
        const auto prob = prepare_refinement(random_instance(r.m, r.c, r.seed));
        int improving = 0;
        for (double e : prob.diag.energies) improving += e < prob.diag.baseline;
        CHECK(r.q_refine == doctest::Approx(improving / double(prob.diag.size())).epsilon(1e-12));
    }
}

TEST_CASE("scaling CSV is deterministic across runs and worker counts") {
    ExperimentConfig cfg = tiny_config();
    const std::string a = render(run_scaling_experiment(cfg, kSchedules));
    const std::string b = render(run_scaling_experiment(cfg, kSchedules));
    cfg.workers = 4;
    const std::string c = render(run_scaling_experiment(cfg, kSchedules));
    CHECK(a == b);
    CHECK(a == c);
    cfg.master_seed = 4;
    CHECK(render(run_scaling_experiment(cfg, kSchedules)) != a);
}

TEST_CASE("CSV round trip keeps fits identical") {
    const auto recs = run_scaling_experiment(tiny_config(), kSchedules);
    std::stringstream ss;
    write_records_csv(ss, recs);
    CHECK(ss.str().rfind("seed,m,n_exact,n_rank,p,c,q_refine,q_best,improvement,omitted,babai_dist2,best_dist2\n", 0) == 0);
    const auto back = read_records_csv(ss);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].q_refine == recs[i].q_refine);
        CHECK(back[i].n_exact == recs[i].n_exact);
        CHECK(back[i].seed == recs[i].seed);
        CHECK(back[i].omitted == recs[i].omitted);
    }
    const auto f1 = fit_records(recs);
    const auto f2 = fit_records(back);
    for (int p : {0, 1}) CHECK(f1.at(p).alpha == f2.at(p).alpha);
    std::istringstream bad("seed,m\n1,2\n");
    CHECK_THROWS_AS(read_records_csv(bad), ConfigError);
}

TEST_CASE("missing angle banks") {
    ExperimentConfig cfg = tiny_config();
    cfg.p_list = {0, 2};
    cfg.angle_bank_dir = "/nonexistent-bank-dir";
    CHECK_THROWS_AS(load_angle_schedules(cfg), ConfigError);
    CHECK_THROWS_AS(run_scaling_experiment(cfg, kSchedules), ConfigError);
    cfg.p_list = {0};
    CHECK(load_angle_schedules(cfg).at(0).depth() == 0);
}

TEST_CASE("experiment config checks") {
    ExperimentConfig cfg = tiny_config();
    cfg.instances_per_n = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_config();
    cfg.m_hi = 6;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_config();
    cfg.p_list.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("exponential alpha(p) fit") {
    SUBCASE("planted parameters") {
        std::vector<AlphaPoint> pts;
        for (int p = 1; p <= 10; ++p) pts.push_back({double(p), 0.4 * std::exp(-0.2 * p) + 0.1});
        const ExponentialFit f = extrapolate_alpha_p(pts);
        CHECK(f.converged);
        CHECK_FALSE(f.degenerate);
        CHECK(std::abs(f.a - 0.4) <= 1e-6);
        CHECK(std::abs(f.b - 0.2) <= 1e-6);
        CHECK(std::abs(f.c - 0.1) <= 1e-6);
        CHECK(f(25.0) == doctest::Approx(0.4 * std::exp(-5.0) + 0.1).epsilon(1e-6));
    }
    SUBCASE("constant data") {
        const std::vector<AlphaPoint> pts{{1, 0.3}, {2, 0.3}, {3, 0.3}, {5, 0.3}};
        const ExponentialFit f = extrapolate_alpha_p(pts);
        CHECK(f.degenerate);
        CHECK_FALSE(f.converged);
        CHECK(f.c == doctest::Approx(0.3));
    }
    SUBCASE("a decay to 0.225 at p = 10 that levels off near 0.1 is representable") {
        // a e^{-10 b} + c = 0.225 with c = 0.1 and b = 0.15.
        const double b = 0.15, c = 0.1, a = 0.125 / std::exp(-10 * b);
        std::vector<AlphaPoint> pts;
        for (int p : {1, 2, 3, 5, 10}) pts.push_back({double(p), a * std::exp(-b * p) + c});
        const ExponentialFit f = extrapolate_alpha_p(pts);
        CHECK(f.converged);
        CHECK(f(10.0) == doctest::Approx(0.225).epsilon(1e-6));
        CHECK(f(40.0) < 0.11);
    }
    SUBCASE("too few points") {
        const std::vector<AlphaPoint> pts{{1, 0.5}, {2, 0.4}};
        CHECK_THROWS_AS(extrapolate_alpha_p(pts), InsufficientData);
    }
    SUBCASE("growing data cannot be fitted") {
        const std::vector<AlphaPoint> pts{{1, 0.1}, {2, 0.2}, {3, 0.3}, {4, 0.4}};
        const ExponentialFit f = extrapolate_alpha_p(pts);
        CHECK_FALSE(f.converged);
        CHECK(f.residuals.size() == 4);
    }
}

TEST_CASE("p = 1 heatmap") {
    const auto prob = prepare_refinement(random_instance(12, 1.5, 2));
    REQUIRE(prob.n() == 3);
    const Heatmap map = heatmap_p1(prob, 12);
    REQUIRE(map.values.size() == 12);
    CHECK(map.gammas.back() == doctest::Approx(2 * std::numbers::pi));
    CHECK(map.betas.back() == doctest::Approx(std::numbers::pi));
    double vmax = 0.0;
    for (std::size_t r = 0; r < 12; ++r) {
        for (double v : map.values[r]) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            vmax = std::max(vmax, v);
            if (r == 0) CHECK(std::abs(v - map.uniform_value) <= 1e-12);
        }
    }
    CHECK(vmax >= map.uniform_value);

    std::ostringstream csv, svg;
    write_heatmap_csv(csv, map);
    write_heatmap_svg(svg, map);
    const std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 13);
    CHECK(svg.str().find("<svg") == 0);
    CHECK_THROWS(heatmap_p1(prob, 1));
}

TEST_CASE("config file") {
    std::istringstream in("# comment\nseed = 7\n  p=3 # trailing\n\nm_range = 8:64\n");
    const ConfigMap m = parse_config(in);
    CHECK(m.at("seed") == "7");
    CHECK(m.at("p") == "3");
    CHECK(m.at("m_range") == "8:64");
    CHECK(m.size() == 3);
    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(parse_config(dup), ConfigError);
    std::istringstream junk("just words\n");
    CHECK_THROWS_AS(parse_config(junk), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), ConfigError);
}
