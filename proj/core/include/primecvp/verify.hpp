#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "primecvp/experiment.hpp"
#include "primecvp/int_matrix.hpp"
#include "primecvp/reduction.hpp"

namespace primecvp {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Exact determinant by fraction-free elimination.
mpz_class exact_determinant(const IntMatrix& square);

struct LllAudit {
    bool size_reduced = false;
    bool lovasz = false;
    bool same_lattice = false;  // B * U == D and det U = +-1
    double max_abs_mu = 0.0;
    double worst_lovasz_slack = 0.0;  // min over i of rhs - delta * lhs, relative
};

/// Re-derives the GSO of `reduced.D` from its Gram matrix (Cholesky in long
/// double) and checks both LLL conditions, plus the unimodular witness.
LllAudit audit_lll(const IntMatrix& original, const ReducedBasis& reduced);

// Each check draws its instances from `seed` and reports one line.
CheckResult check_simulator(int draws, std::uint64_t seed);
CheckResult check_lll(int instances, std::uint64_t seed);
CheckResult check_babai(int instances, std::uint64_t seed);
CheckResult check_qubo(int instances, std::uint64_t seed);
CheckResult check_fits();
CheckResult check_factoring(const std::vector<long>& composites, double budget_seconds,
                            std::uint64_t seed);
CheckResult check_degenerate_runs(int draws, std::uint64_t seed);
CheckResult check_scale_determinism(const ExperimentConfig& cfg,
                                    const std::map<int, AngleSchedule>& schedules);
CheckResult check_heatmap(int resolution, std::uint64_t seed);

struct SuiteOptions {
    int simulator_draws = 100;
    int lll_instances = 100;
    int babai_instances = 50;
    int qubo_instances = 20;
    int degenerate_draws = 20;
    int heatmap_resolution = 20;
    bool factoring = true;
    std::uint64_t seed = 1;
};

/// Reduced-size property suite behind `validate`.
std::vector<CheckResult> run_property_suite(const SuiteOptions& opts);

}  // namespace primecvp
