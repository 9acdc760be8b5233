#pragma once

#include <vector>

#include "primecvp/int_matrix.hpp"

namespace primecvp {

/// Unnormalised Gram-Schmidt data of a column basis: d_j = dtilde_j +
/// sum_{i<j} mu[j][i] * dtilde_i.
struct GsoData {
    std::vector<std::vector<double>> dtilde;
    std::vector<std::vector<double>> mu;  // mu[j][i], i < j; mu[j][j] == 1
    std::vector<double> norms;            // |dtilde_j|^2

    std::size_t rank() const noexcept { return dtilde.size(); }
};

/// Throws DegenerateBasis if the columns are linearly dependent.
GsoData gram_schmidt(const IntMatrix& basis);

struct ReducedBasis {
    IntMatrix D;
    double delta = 0.75;
    IntMatrix U;  // unimodular, B * U == D
};

inline constexpr double kDefaultLllDelta = 0.75;

/// delta-LLL reduction with floating-point GSO and exact integer column
/// operations. Requires 1/4 < delta <= 1.
ReducedBasis lll_reduce(const IntMatrix& basis, double delta = kDefaultLllDelta);

}  // namespace primecvp
