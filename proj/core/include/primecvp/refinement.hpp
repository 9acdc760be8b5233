#pragma once

#include <cstdint>

#include "primecvp/cvp.hpp"
#include "primecvp/lattice.hpp"
#include "primecvp/qubo.hpp"
#include "primecvp/reduction.hpp"

namespace primecvp {

/// Everything the quantum refinement step needs for one CVP instance:
/// reduced basis, Babai point, signs and the raw cost diagonal.
struct RefinementProblem {
    PrimeLatticeInstance instance;
    ReducedBasis reduced;
    GsoData gso;
    BabaiResult babai;
    SignVector kappa;
    CostDiagonal diag;  // pre-normalisation, lattice units

    int n() const noexcept { return instance.n; }
    /// Neighbourhood point for outcome z.
    std::vector<std::int64_t> neighbor(Bitstring z) const;
    /// Original-basis coefficients of neighbour z (B * e == neighbor(z)).
    std::vector<std::int64_t> original_coefficients(Bitstring z) const;
};

RefinementProblem prepare_refinement(PrimeLatticeInstance instance,
                                     double delta = kDefaultLllDelta,
                                     int cap = kDefaultEnumerationCap);

/// Samples an m-bit semiprime and builds its lattice at rank
/// dimension_for_bits(m); every random choice flows from `seed`.
PrimeLatticeInstance random_instance(int m, double c, std::uint64_t seed);

}  // namespace primecvp
