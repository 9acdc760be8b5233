#pragma once

#include <complex>
#include <span>
#include <vector>

#include "primecvp/qubo.hpp"

namespace primecvp {

/// Fixed-angle schedule gamma[0..p), beta[0..p). Values are folded into
/// [0, 2pi] and [0, pi] on construction (reflection at the ends, so nearby
/// out-of-range inputs stay nearby).
class AngleSchedule {
public:
    AngleSchedule() = default;
    AngleSchedule(std::vector<double> gamma, std::vector<double> beta);

    /// All-zero schedule of depth p.
    static AngleSchedule zeros(int p);
    /// Interprets x as (gamma_1..gamma_p, beta_1..beta_p).
    static AngleSchedule from_flat(std::span<const double> x);

    int depth() const noexcept { return static_cast<int>(gamma_.size()); }
    const std::vector<double>& gamma() const noexcept { return gamma_; }
    const std::vector<double>& beta() const noexcept { return beta_; }
    std::vector<double> flat() const;

    friend bool operator==(const AngleSchedule&, const AngleSchedule&) = default;

private:
    std::vector<double> gamma_;
    std::vector<double> beta_;
};

/// Reflects x into [0, period_end].
double fold_into_range(double x, double period_end);

using Amplitude = std::complex<double>;

struct StateVector {
    int n = 0;
    std::vector<Amplitude> amplitudes;

    double norm2() const;
};

struct OutcomeDistribution {
    std::vector<double> probs;
};

OutcomeDistribution probabilities(const StateVector& sv);

/// p-layer QAOA on the uniform superposition: per layer a diagonal phase
/// exp(-i gamma E(z)) followed by exp(i pi beta X_j / 2) on every qubit.
StateVector run_qaoa(const CostDiagonal& diag, const AngleSchedule& angles);

/// Same state built from explicit 2^n x 2^n layer matrices (n <= 4).
StateVector dense_oracle(const CostDiagonal& diag, const AngleSchedule& angles);

/// sum_z |a_z|^2 E(z) over whichever diagonal is passed in.
double expectation(const StateVector& sv, const CostDiagonal& diag);
double expectation(const OutcomeDistribution& dist, const CostDiagonal& diag);

/// Mass on outcomes strictly better than the Babai baseline E(0).
double refinement_probability(const OutcomeDistribution& dist, const CostDiagonal& diag);

/// Mass on the whole argmin set.
double best_solution_probability(const OutcomeDistribution& dist, const CostDiagonal& diag);

}  // namespace primecvp
