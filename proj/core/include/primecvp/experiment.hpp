#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "primecvp/pretrain.hpp"
#include "primecvp/qaoa.hpp"
#include "primecvp/qubo.hpp"
#include "primecvp/refinement.hpp"

namespace primecvp {

struct ExperimentConfig {
    int m_lo = 8;
    int m_hi = 64;
    int instances_per_n = 100;
    std::vector<int> p_list{1};
    double c = 1.5;
    std::filesystem::path angle_bank_dir;  // holds angles_p<p>.txt for every p > 0
    std::uint64_t master_seed = 1;
    std::filesystem::path out_dir = "out";
    int cap = kDefaultEnumerationCap;
    double delta = kDefaultLllDelta;
    NormalizeMode normalize = NormalizeMode::MinMax;
    int workers = 1;

    void validate() const;
};

struct RefinementRecord {
    std::uint64_t seed = 0;
    int m = 0;
    double n_exact = 0.0;  // ln N / ln ln N
    int n_rank = 0;
    int p = 0;
    double c = 0.0;
    double q_refine = 0.0;
    double q_best = 0.0;
    double improvement = 0.0;
    bool omitted = false;  // Babai point already optimal in the neighbourhood
    double babai_dist2 = 0.0;
    double best_dist2 = 0.0;
};

/// Schedules for every p in cfg.p_list: p = 0 is the empty schedule, other
/// depths are read from the bank directory (ConfigError when missing).
std::map<int, AngleSchedule> load_angle_schedules(const ExperimentConfig& cfg);

/// Bit-lengths in [m_lo, m_hi] grouped by lattice rank, ascending.
std::map<int, std::vector<int>> bit_lengths_by_rank(int m_lo, int m_hi);

/// Fixed-angle refinement statistics, ordered by (p, n_rank, replicate).
/// Replicate r of rank n uses bit-length ms[r % ms.size()] and instance seed
/// derive_seed(master_seed, {m, r}); the same instances are reused for every p.
std::vector<RefinementRecord> run_scaling_experiment(const ExperimentConfig& cfg,
                                                     const std::map<int, AngleSchedule>& schedules);

/// First replicate r = 0, 1, ... (instance seed derive_seed(seed, {r})) whose
/// Babai point is not already the neighbourhood optimum.
RefinementProblem find_improvable_instance(int m, double c, std::uint64_t seed,
                                           double delta = kDefaultLllDelta,
                                           int cap = kDefaultEnumerationCap, int max_tries = 1000);

/// (sqrt(babai) - sqrt(best)) / sqrt(babai), clamped to [0, 1); 0 if babai == 0.
double quality_metric(double babai_dist2, double best_dist2);

void write_records_csv(std::ostream& out, std::span<const RefinementRecord> records);
std::vector<RefinementRecord> read_records_csv(std::istream& in);

enum class FitColumn { Refine, Best };

/// Per-depth alpha fit over non-omitted records, abscissa n_exact. Depths
/// with fewer than two usable points are left out of the map.
std::map<int, ScalingFit> fit_records(std::span<const RefinementRecord> records,
                                      FitColumn column = FitColumn::Refine);

/// alpha(p) = a exp(-b p) + c with a, b > 0.
struct ExponentialFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double rss = 0.0;
    std::vector<double> residuals;
    bool converged = false;
    bool degenerate = false;  // data carry no decay (a ~ 0 or non-positive)

    double operator()(double p) const;
};

struct AlphaPoint {
    double p = 0.0;
    double alpha = 0.0;
};

ExponentialFit extrapolate_alpha_p(std::span<const AlphaPoint> points);

struct Heatmap {
    std::vector<double> gammas;               // columns
    std::vector<double> betas;                // rows
    std::vector<std::vector<double>> values;  // values[row][col]
    double uniform_value = 0.0;               // refinement probability of |s>
};

/// Refinement probability of a p = 1 circuit over a (gamma, beta) grid
/// spanning [0, 2pi] x [0, pi].
Heatmap heatmap_p1(const RefinementProblem& problem, int resolution,
                   NormalizeMode mode = NormalizeMode::MinMax);

void write_heatmap_csv(std::ostream& out, const Heatmap& map);
void write_heatmap_svg(std::ostream& out, const Heatmap& map);

}  // namespace primecvp
