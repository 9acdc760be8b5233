#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "primecvp/int_matrix.hpp"
#include "primecvp/reduction.hpp"

namespace primecvp {

struct BabaiResult {
    std::vector<std::int64_t> b_op;    // sum_j coeffs[j] * d_j, exact
    std::vector<std::int64_t> coeffs;  // c_j in the reduced basis
    std::vector<double> residuals;     // mu_j - c_j at the step that fixed c_j
    double dist2 = 0.0;                // |t - b_op|^2 in the ambient space
};

/// Babai's nearest plane on a (reduced) basis. The target may lie outside the
/// span; only its projection drives the rounding.
BabaiResult babai_nearest_plane(const IntMatrix& D, const GsoData& gso,
                                std::span<const double> target);

/// Outcome bits are little-endian: bit j of `z` is z_j.
using Bitstring = std::uint64_t;

struct NeighborEntry {
    Bitstring z = 0;
    std::vector<std::int64_t> v;
    double dist2 = 0.0;
};

inline constexpr int kDefaultEnumerationCap = 24;

/// All 2^n points b_op + sum_j kappa_j z_j d_j, indexed by z.
std::vector<NeighborEntry> enumerate_neighborhood(std::span<const std::int64_t> b_op,
                                                  const IntMatrix& D,
                                                  std::span<const int> kappa,
                                                  std::span<const double> target,
                                                  int cap = kDefaultEnumerationCap);

struct CvpSolution {
    std::vector<std::int64_t> coeffs;
    std::vector<std::int64_t> vector;
    double dist2 = 0.0;
    /// True when some optimal coordinate sits on the edge of the box, i.e.
    /// a larger box could still hold a closer point.
    bool on_box_boundary = false;
};

/// Closest lattice vector over the box centre +- coeff_bound, where the centre
/// is Babai's coefficient vector. Ties go to the lexicographically smallest
/// coefficient vector. Throws ResourceLimit above 1e7 box points.
CvpSolution exact_cvp_small(const IntMatrix& basis, std::span<const double> target,
                            int coeff_bound = 2);

/// Shortest non-zero vector by Fincke-Pohst enumeration (n <= 6).
struct SvpSolution {
    std::vector<std::int64_t> coeffs;
    std::vector<std::int64_t> vector;
    double norm2 = 0.0;
};
SvpSolution shortest_vector_small(const IntMatrix& basis);

struct MinkowskiDiagnostics {
    double lambda1_sq = 0.0;
    double det = 0.0;              // sqrt(det(B^T B))
    double minkowski_bound = 0.0;  // sqrt(n) * det^(1/n), bound on lambda1
    bool minkowski_satisfied = false;
    double hermite_estimate = 0.0; // gamma_n ~ n
    double rd = 0.0;
    double rd_bound = 0.0;         // (e*pi / 2n)^(1/4)
    bool rd_satisfied = false;
    bool satisfied = false;        // both of the above
};

MinkowskiDiagnostics minkowski_rd_diagnostics(const IntMatrix& basis);

}  // namespace primecvp
