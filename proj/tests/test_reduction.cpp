#include <doctest.h>

#include <cmath>

#include "primecvp/cvp.hpp"
#include "primecvp/errors.hpp"
#include "primecvp/lattice.hpp"
#include "primecvp/random.hpp"
#include "primecvp/reduction.hpp"
#include "primecvp/refinement.hpp"
#include "primecvp/verify.hpp"

using namespace primecvp;

namespace {

PrimeLatticeInstance lattice(int n, std::uint64_t seed) {
    Rng rng(seed);
    return build_prime_lattice(sample_semiprime(28, rng), n, 1.5, seed);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_CASE("Gram-Schmidt is orthogonal and reconstructs the basis") {
    for (int n = 2; n <= 10; ++n) {
        const auto inst = lattice(n, 100 + static_cast<std::uint64_t>(n));
        const GsoData g = gram_schmidt(inst.B);
        for (int j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            CHECK(g.norms[uj] == doctest::Approx(dot(g.dtilde[uj], g.dtilde[uj])));
            for (int i = 0; i < j; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                const double scale = std::sqrt(g.norms[ui] * g.norms[uj]);
                CHECK(std::abs(dot(g.dtilde[ui], g.dtilde[uj])) <= 1e-9 * scale);
            }
            for (std::size_t r = 0; r < inst.B.rows(); ++r) {
                double v = g.dtilde[uj][r];
                for (int i = 0; i < j; ++i) {
                    v += g.mu[uj][static_cast<std::size_t>(i)] * g.dtilde[static_cast<std::size_t>(i)][r];
                }
                const double want = static_cast<double>(inst.B(r, uj));
                CHECK(std::abs(v - want) <= 1e-9 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("Gram-Schmidt rejects dependent columns") {
    const IntMatrix b = IntMatrix::from_columns({{1, 2, 3}, {2, 4, 6}});
    CHECK_THROWS_AS(gram_schmidt(b), DegenerateBasis);
}

TEST_CASE("LLL output passes an independent audit") {
    for (int k = 0; k < 60; ++k) {
        const int n = 3 + k % 10;
        const auto inst = lattice(n, 500 + static_cast<std::uint64_t>(k));
        for (double delta : {0.75, 0.99}) {
            const ReducedBasis red = lll_reduce(inst.B, delta);
            const LllAudit a = audit_lll(inst.B, red);
            CHECK(a.size_reduced);
            CHECK(a.lovasz);
            CHECK(a.same_lattice);
        }
    }
}

TEST_CASE("LLL reduces a textbook basis") {
    const IntMatrix b = IntMatrix::from_columns({{1, 1, 1}, {-1, 0, 2}, {3, 5, 6}});
    const ReducedBasis red = lll_reduce(b, 0.75);
    const LllAudit a = audit_lll(b, red);
    CHECK(a.size_reduced);
    CHECK(a.lovasz);
    CHECK(a.same_lattice);
    // Known reduced basis: (0,1,0), (1,0,1), (-1,0,2).
    std::int64_t n0 = 0;
    for (auto x : red.D.column(0)) n0 += x * x;
    CHECK(n0 == 1);
}

TEST_CASE("LLL parameter range") {
    const auto inst = lattice(4, 1);
    CHECK_THROWS_AS(lll_reduce(inst.B, 0.25), InvalidArgument);
    CHECK_THROWS_AS(lll_reduce(inst.B, 1.01), InvalidArgument);
    CHECK_NOTHROW(lll_reduce(inst.B, 1.0));
}

TEST_CASE("exact determinant") {
    CHECK(exact_determinant(IntMatrix::from_columns({{2, 1}, {1, 1}})) == 1);
    CHECK(exact_determinant(IntMatrix::from_columns({{0, 1}, {1, 0}})) == -1);
    CHECK(exact_determinant(IntMatrix::from_columns({{1, 2}, {2, 4}})) == 0);
    CHECK(exact_determinant(IntMatrix::from_columns({{2, 0, 1}, {1, 3, 2}, {1, 1, 2}})) == 6);
    CHECK(exact_determinant(IntMatrix::from_columns({{0, 0, 3}, {0, 2, 0}, {5, 0, 0}})) == -30);
}

TEST_CASE("Babai returns lattice points unchanged") {
    Rng rng(9);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int n = 3; n <= 10; ++n) {
        const auto inst = lattice(n, 900 + static_cast<std::uint64_t>(n));
        const ReducedBasis red = lll_reduce(inst.B);
        const GsoData g = gram_schmidt(red.D);
        std::vector<std::int64_t> k(static_cast<std::size_t>(n));
        for (auto& x : k) x = coef(rng);
        const auto v = multiply(red.D, std::span<const std::int64_t>(k));
        const std::vector<double> vd(v.begin(), v.end());
        const BabaiResult r = babai_nearest_plane(red.D, g, vd);
        CHECK(r.coeffs == k);
        CHECK(r.b_op == v);
        CHECK(r.dist2 == 0.0);
        for (double res : r.residuals) CHECK(std::abs(res) <= 1e-9);
    }
}

TEST_CASE("Babai postconditions on prime lattices") {
    for (int k = 0; k < 40; ++k) {
        const auto p = prepare_refinement(lattice(3 + k % 9, 1300 + static_cast<std::uint64_t>(k)));
        CHECK(multiply(p.reduced.D, std::span<const std::int64_t>(p.babai.coeffs)) == p.babai.b_op);
        for (double res : p.babai.residuals) CHECK(std::abs(res) <= 0.5 + 1e-12);
        double d2 = 0.0;
        for (std::size_t i = 0; i < p.babai.b_op.size(); ++i) {
            const double diff = static_cast<double>(p.instance.t[i] - p.babai.b_op[i]);
            d2 += diff * diff;
        }
        CHECK(p.babai.dist2 == doctest::Approx(d2).epsilon(1e-12));
    }
}

TEST_CASE("Babai stays within its approximation factor") {
    for (int k = 0; k < 30; ++k) {
        const int n = 3 + k % 4;
        const auto p = prepare_refinement(lattice(n, 1700 + static_cast<std::uint64_t>(k)));
        const auto target = p.instance.target_as_double();
        const CvpSolution exact = exact_cvp_small(p.reduced.D, target, 3);
        CHECK(exact.dist2 <= p.babai.dist2 * (1 + 1e-12));
        CHECK(std::sqrt(p.babai.dist2) <= 2.0 * std::pow(2.0 / std::sqrt(3.0), n) * std::sqrt(exact.dist2));
    }
}

TEST_CASE("exact CVP on a hand example") {
    const IntMatrix b = IntMatrix::from_columns({{1, 0, 0}, {0, 1, 0}});
    const std::vector<double> t{0.4, 1.6, 5.0};
    const CvpSolution s = exact_cvp_small(b, t, 2);
    CHECK(s.coeffs == std::vector<std::int64_t>{0, 2});
    CHECK(s.dist2 == doctest::Approx(0.16 + 0.16 + 25.0));
    CHECK_FALSE(s.on_box_boundary);
    CHECK_THROWS_AS(exact_cvp_small(b, t, -1), InvalidArgument);
}

TEST_CASE("exact CVP ties go to the smallest coefficient vector") {
    const IntMatrix b = IntMatrix::from_columns({{1, 0}, {0, 1}});
    const std::vector<double> t{0.5, 0.0};
    const CvpSolution s = exact_cvp_small(b, t, 2);
    CHECK(s.coeffs == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("neighbourhood enumeration") {
    const auto p = prepare_refinement(lattice(4, 77));
    const auto entries = enumerate_neighborhood(p.babai.b_op, p.reduced.D, p.kappa.kappa,
                                                p.instance.target_as_double());
    REQUIRE(entries.size() == 16);
    for (const auto& e : entries) {
        CHECK(e.v == p.neighbor(e.z));
        CHECK(e.dist2 == doctest::Approx(p.diag.energies[e.z]).epsilon(1e-12));
    }
}

TEST_CASE("neighbour coefficients map back through the witness") {
    const auto p = prepare_refinement(lattice(6, 31));
    for (Bitstring z = 0; z < 64; z += 5) {
        CHECK(multiply(p.instance.B, std::span<const std::int64_t>(p.original_coefficients(z))) ==
              p.neighbor(z));
    }
}

TEST_CASE("shortest vector") {
    CHECK(shortest_vector_small(IntMatrix::from_columns({{2, 0}, {1, 2}})).norm2 == 4.0);
    CHECK(shortest_vector_small(IntMatrix::from_columns({{5, 0, 0}, {3, 1, 0}, {0, 0, 7}})).norm2 == 5.0);
    const auto inst = lattice(7, 3);
    CHECK_THROWS_AS(shortest_vector_small(inst.B), ResourceLimit);
}

TEST_CASE("Minkowski and density diagnostics") {
    for (int n = 2; n <= 6; ++n) {
        const auto inst = lattice(n, 40 + static_cast<std::uint64_t>(n));
        const MinkowskiDiagnostics d = minkowski_rd_diagnostics(inst.B);
        CHECK(d.minkowski_satisfied);
        CHECK(d.rd_bound == doctest::Approx(std::pow(std::exp(1.0) * M_PI / (2.0 * n), 0.25)));
        CHECK(d.rd == doctest::Approx(std::sqrt(d.lambda1_sq) / d.minkowski_bound));
    }
}
