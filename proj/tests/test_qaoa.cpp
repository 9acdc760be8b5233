#include <doctest.h>

#include <cmath>
#include <numbers>

#include "primecvp/errors.hpp"
#include "primecvp/qaoa.hpp"
#include "primecvp/random.hpp"
#include "primecvp/refinement.hpp"

using namespace primecvp;
using std::numbers::pi;

namespace {

CostDiagonal random_diag(int n, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> e(std::size_t{1} << n);
    for (auto& x : e) x = u(rng);
    return CostDiagonal::from_energies(std::move(e));
}

AngleSchedule random_angles(int p, Rng& rng) {
    std::uniform_real_distribution<double> g(0.0, 2 * pi);
    std::uniform_real_distribution<double> b(0.0, pi);
    std::vector<double> gamma, beta;
    for (int k = 0; k < p; ++k) {
        gamma.push_back(g(rng));
        beta.push_back(b(rng));
    }
    return {gamma, beta};
}

double max_dev(const StateVector& a, const StateVector& b) {
    double m = 0.0;
    for (std::size_t z = 0; z < a.amplitudes.size(); ++z) {
        m = std::max(m, std::abs(a.amplitudes[z] - b.amplitudes[z]));
    }
    return m;
}

}  // namespace

TEST_CASE("angle folding") {
    CHECK(fold_into_range(0.5, pi) == doctest::Approx(0.5));
    CHECK(fold_into_range(-0.1, pi) == doctest::Approx(0.1));
    CHECK(fold_into_range(pi + 0.1, pi) == doctest::Approx(pi - 0.1));
    CHECK(fold_into_range(7.0, 2 * pi) == doctest::Approx(4 * pi - 7.0));
    const AngleSchedule s({-0.2, 7.0}, {4.0, 0.3});
    CHECK(s.depth() == 2);
    for (double g : s.gamma()) CHECK((g >= 0.0 && g <= 2 * pi));
    for (double b : s.beta()) CHECK((b >= 0.0 && b <= pi));
    CHECK(AngleSchedule::from_flat(s.flat()) == s);
    CHECK_THROWS(AngleSchedule({0.1}, {}));
}

TEST_CASE("degenerate schedules leave the distribution uniform") {
    Rng rng(1);
    for (int n = 1; n <= 8; ++n) {
        const CostDiagonal d = random_diag(n, rng);
        const double u = std::ldexp(1.0, -n);
        const AngleSchedule a = random_angles(3, rng);
        for (const AngleSchedule& s : {AngleSchedule{}, AngleSchedule(a.gamma(), {0, 0, 0}),
                                       AngleSchedule({0, 0, 0}, a.beta())}) {
            const StateVector sv = run_qaoa(d, s);
            CHECK(std::abs(sv.norm2() - 1.0) <= 1e-12);
            for (double q : probabilities(sv).probs) CHECK(std::abs(q - u) <= 1e-12);
        }
    }
}

TEST_CASE("uniform start amplitudes") {
    Rng rng(2);
    const StateVector sv = run_qaoa(random_diag(3, rng), AngleSchedule{});
    for (const auto& a : sv.amplitudes) {
        CHECK(a.real() == doctest::Approx(1.0 / std::sqrt(8.0)));
        CHECK(a.imag() == 0.0);
    }
}

TEST_CASE("state vector matches the dense oracle") {
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        const int n = 1 + k % 4;
        const int p = k % 4;
        const CostDiagonal d = random_diag(n, rng);
        const AngleSchedule s = random_angles(p, rng);
        CHECK(max_dev(run_qaoa(d, s), dense_oracle(d, s)) < 1e-9);
    }
    CHECK_THROWS_AS(dense_oracle(random_diag(5, rng), AngleSchedule{}), ResourceLimit);
}

TEST_CASE("single qubit by hand") {
    const CostDiagonal d = CostDiagonal::from_energies({0.0, 1.0});
    const double gamma = 0.7;
    const double beta = 0.4;
    const double c = std::cos(pi * beta / 2);
    const double s = std::sin(pi * beta / 2);
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> a0 = 1.0 / std::sqrt(2.0);
    const std::complex<double> a1 = std::exp(-i * gamma) / std::sqrt(2.0);
    const std::complex<double> want0 = c * a0 + i * s * a1;
    const std::complex<double> want1 = i * s * a0 + c * a1;
    const StateVector sv = run_qaoa(d, AngleSchedule({gamma}, {beta}));
    CHECK(std::abs(sv.amplitudes[0] - want0) < 1e-14);
    CHECK(std::abs(sv.amplitudes[1] - want1) < 1e-14);
}

TEST_CASE("expectations") {
    Rng rng(4);
    const CostDiagonal d = random_diag(4, rng);
    const StateVector uni = run_qaoa(d, AngleSchedule{});
    double mean = 0.0;
    for (double e : d.energies) mean += e;
    CHECK(expectation(uni, d) == doctest::Approx(mean / 16.0));

    StateVector basis{4, std::vector<Amplitude>(16, 0.0)};
    basis.amplitudes[d.argmin_set.front()] = 1.0;
    CHECK(expectation(basis, d) == d.e_min);

    const StateVector sv = run_qaoa(d, random_angles(2, rng));
    const OutcomeDistribution dist = probabilities(sv);
    double direct = 0.0;
    for (std::size_t z = 0; z < 16; ++z) direct += std::norm(sv.amplitudes[z]) * d.energies[z];
    CHECK(expectation(sv, d) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(expectation(dist, d) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("refinement and best-solution probabilities") {
    const CostDiagonal d = CostDiagonal::from_energies({2.0, 1.0, 3.0, 1.0, 5.0, 0.5, 2.0, 4.0});
    const OutcomeDistribution uni{std::vector<double>(8, 0.125)};
    CHECK(refinement_probability(uni, d) == doctest::Approx(3.0 / 8.0));
    CHECK(best_solution_probability(uni, d) == doctest::Approx(1.0 / 8.0));

    const CostDiagonal optimal = CostDiagonal::from_energies({0.0, 1.0, 0.0, 2.0});
    const OutcomeDistribution u4{std::vector<double>(4, 0.25)};
    CHECK(refinement_probability(u4, optimal) == 0.0);
    CHECK(best_solution_probability(u4, optimal) == 0.5);
}

TEST_CASE("refinement probability matches neighbourhood enumeration") {
    Rng rng(5);
    const auto p = prepare_refinement(build_prime_lattice(sample_semiprime(20, rng), 3, 1.5, 5));
    const CostDiagonal norm = normalize_diagonal(p.diag);
    const OutcomeDistribution dist = probabilities(run_qaoa(norm, AngleSchedule({1.1}, {0.6})));
    const auto entries = enumerate_neighborhood(p.babai.b_op, p.reduced.D, p.kappa.kappa,
                                                p.instance.target_as_double());
    double want = 0.0;
    for (const auto& e : entries) {
        if (e.dist2 < entries.front().dist2) want += dist.probs[e.z];
    }
    CHECK(refinement_probability(dist, p.diag) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("size mismatch") {
    const CostDiagonal d = CostDiagonal::from_energies({0.0, 1.0});
    const OutcomeDistribution wrong{std::vector<double>(4, 0.25)};
    CHECK_THROWS_AS(refinement_probability(wrong, d), InvalidArgument);
}
