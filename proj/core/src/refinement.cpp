#include "primecvp/refinement.hpp"

#include "primecvp/errors.hpp"

namespace primecvp {

std::vector<std::int64_t> RefinementProblem::neighbor(Bitstring z) const {
    std::vector<std::int64_t> v = babai.b_op;
    for (std::size_t j = 0; j < reduced.D.cols(); ++j) {
        if (((z >> j) & 1U) == 0) continue;
        auto col = reduced.D.column(j);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += kappa.kappa[j] * col[i];
    }
    return v;
}

std::vector<std::int64_t> RefinementProblem::original_coefficients(Bitstring z) const {
    std::vector<std::int64_t> c = babai.coeffs;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if ((z >> j) & 1U) c[j] += kappa.kappa[j];
    }
    return multiply(reduced.U, std::span<const std::int64_t>(c));
}

RefinementProblem prepare_refinement(PrimeLatticeInstance instance, double delta, int cap) {
    RefinementProblem p;
    p.reduced = lll_reduce(instance.B, delta);
    p.gso = gram_schmidt(p.reduced.D);
    const std::vector<double> target = instance.target_as_double();
    p.babai = babai_nearest_plane(p.reduced.D, p.gso, target);
    p.kappa = compute_kappa(p.babai.residuals);
    p.diag = build_diagonal(instance.t, p.babai.b_op, p.kappa.kappa, p.reduced.D, cap);
    p.instance = std::move(instance);
    return p;
}

PrimeLatticeInstance random_instance(int m, double c, std::uint64_t seed) {
    Rng rng(derive_seed(seed, {0x4e}));
    const mpz_class N = sample_semiprime(m, rng);
    return build_prime_lattice(N, dimension_for_bits(m), c, derive_seed(seed, {0x66}));
}

}  // namespace primecvp
