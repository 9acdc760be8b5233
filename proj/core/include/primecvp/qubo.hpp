#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "primecvp/cvp.hpp"
#include "primecvp/int_matrix.hpp"
#include "primecvp/lattice.hpp"
#include "primecvp/reduction.hpp"

namespace primecvp {

/// kappa_j = sign(mu_j - c_j) in {+1, -1}; a zero residual maps to +1.
struct SignVector {
    std::vector<int> kappa;
    std::size_t size() const noexcept { return kappa.size(); }
};

SignVector compute_kappa(std::span<const double> residuals);

/// The 2^n energies of the neighbourhood cost, indexed little-endian by z.
struct CostDiagonal {
    int n = 0;
    std::vector<double> energies;
    double e_min = 0.0;
    double e_max = 0.0;
    std::vector<Bitstring> argmin_set;
    double baseline = 0.0;  // energies[0]

    /// Fills extremes, argmin set and baseline from raw energies (size must
    /// be a power of two).
    static CostDiagonal from_energies(std::vector<double> energies);

    std::size_t size() const noexcept { return energies.size(); }
    /// True when some z has energy strictly below the baseline.
    bool has_improvement() const noexcept { return e_min < baseline; }
};

/// |t - b_op - sum_j kappa_j z_j d_j|^2.
double cost(Bitstring z, std::span<const std::int64_t> target, std::span<const std::int64_t> b_op,
            std::span<const int> kappa, const IntMatrix& D);

/// Energies for every z, built in Gray-code order with one column update per step.
CostDiagonal build_diagonal(std::span<const std::int64_t> target, std::span<const std::int64_t> b_op,
                            std::span<const int> kappa, const IntMatrix& D,
                            int cap = kDefaultEnumerationCap);

CostDiagonal build_diagonal(const PrimeLatticeInstance& instance, const BabaiResult& babai,
                            const ReducedBasis& reduced, int cap = kDefaultEnumerationCap);

/// C(z) = constant + sum_j linear[j] z_j + sum_{j<k} J(j,k) z_j z_k.
struct QuboCoefficients {
    int n = 0;
    double constant = 0.0;
    std::vector<double> linear;
    std::vector<double> quadratic;  // packed upper triangle, row-major over j<k

    double coupling(int j, int k) const;
    double evaluate(Bitstring z) const;
};

QuboCoefficients to_qubo_coefficients(std::span<const std::int64_t> target,
                                      std::span<const std::int64_t> b_op,
                                      std::span<const int> kappa, const IntMatrix& D);

QuboCoefficients to_qubo_coefficients(const PrimeLatticeInstance& instance, const BabaiResult& babai,
                                      const ReducedBasis& reduced);

/// Spin form under z_j = (1 - s_j)/2: offset + sum h_j s_j + sum_{j<k} J_jk s_j s_k.
struct IsingModel {
    int n = 0;
    double offset = 0.0;
    std::vector<double> field;
    std::vector<double> coupling;  // same packing as QuboCoefficients::quadratic

    double evaluate(Bitstring z) const;
};

IsingModel to_ising(const QuboCoefficients& qubo);

enum class NormalizeMode { MinMax, Off };

/// MinMax maps energies affinely onto [0, 1]; a constant diagonal becomes
/// all zeros. Off returns the input unchanged.
CostDiagonal normalize_diagonal(const CostDiagonal& diag, NormalizeMode mode = NormalizeMode::MinMax);

/// One line per z in index order: "<z_0 z_1 ... z_{n-1}> <value>".
void write_diagonal(std::ostream& out, int n, std::span<const double> values);

}  // namespace primecvp
