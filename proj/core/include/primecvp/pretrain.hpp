#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primecvp/optimize.hpp"
#include "primecvp/qaoa.hpp"
#include "primecvp/qubo.hpp"
#include "primecvp/refinement.hpp"

namespace primecvp {

/// Bit-lengths drawn uniformly from [m_lo, m_hi].
struct InstanceDistribution {
    int m_lo = 8;
    int m_hi = 24;

    void validate() const;
    int draw(Rng& rng) const;
};

struct TrainConfig {
    int epochs = 5;
    int s_t = 4;
    int s_v = 12;
    int p = 1;
    double c = 1.5;
    InstanceDistribution train_dist{8, 24};
    InstanceDistribution val_dist{16, 40};
    NelderMeadOptions optimizer{};  // max_iter -1 resolves to 400 * 2p
    NormalizeMode normalize = NormalizeMode::MinMax;
    double delta = kDefaultLllDelta;
    int cap = kDefaultEnumerationCap;
    std::uint64_t master_seed = 1;
    int workers = 1;  // parallelism only; never changes results

    void validate() const;
    /// Stable FNV-1a digest of every field that influences results.
    std::uint64_t hash() const;
};

struct ScalingPoint {
    double n = 0.0;
    double q = 0.0;
};

/// q(n) = 2^(-alpha n), least squares on -log2 q through the origin.
struct ScalingFit {
    double alpha = 0.0;
    double r2 = 0.0;
    std::vector<ScalingPoint> points;  // the points actually fitted (q > 0)
    std::size_t excluded_zero = 0;     // points dropped because q == 0
};

ScalingFit fit_alpha(std::span<const ScalingPoint> points, std::size_t min_points = 2);

struct TrainedAngles {
    AngleSchedule angles;
    double objective = 0.0;          // normalised expectation at the result
    double initial_objective = 0.0;  // same at the starting angles
    int iterations = 0;
};

/// Minimises the expectation of `normalized` starting from `init`.
TrainedAngles train_angles_on_diagonal(const CostDiagonal& normalized, const AngleSchedule& init,
                                       const NelderMeadOptions& options);

AngleSchedule train_angles_on_instance(const RefinementProblem& problem, const AngleSchedule& init,
                                       const TrainConfig& cfg);

struct ValidationSample {
    int m = 0;
    int n = 0;
    double q_best = 0.0;
    double q_refine = 0.0;
    bool omitted = false;  // Babai point already optimal in its neighbourhood
};

struct ValidationResult {
    ScalingFit best;                   // fit over (n, best-solution probability)
    std::optional<ScalingFit> refine;  // fit over non-omitted (n, refinement probability)
    std::vector<ValidationSample> samples;
};

/// Scores a schedule on s_v fresh validation instances derived from `stream_seed`.
ValidationResult validate_angles(const AngleSchedule& angles, const TrainConfig& cfg,
                                 std::uint64_t stream_seed);

struct EpochRecord {
    int epoch = 0;
    std::vector<double> candidate_alphas;
    int best_candidate = -1;
    double best_alpha = 0.0;
    double best_alpha_refine = 0.0;  // NaN when the refine fit had too few points
    bool accepted = false;
    double alpha_star = 0.0;         // best validated alpha so far in the run
};

struct PretrainResult {
    AngleSchedule angles;
    double alpha = 0.0;  // +inf if nothing was ever accepted
    std::vector<EpochRecord> history;
};

/// Population pre-training with validation-based selection of the schedule
/// whose best-solution probability decays slowest with lattice rank.
PretrainResult pretrain(const TrainConfig& cfg);

/// Angles trained once, from zeros, on a single random m-bit instance.
AngleSchedule baseline_single_instance(int m, const TrainConfig& cfg, std::uint64_t seed);

struct PerInstanceBaseline {
    AngleSchedule angles;
    double objective = 0.0;
    double uniform_objective = 0.0;
    double q_refine = 0.0;
    double q_best = 0.0;
    bool omitted = false;
};

/// Full optimisation from zeros on this instance alone.
PerInstanceBaseline baseline_per_instance(const RefinementProblem& problem, const TrainConfig& cfg);

}  // namespace primecvp
