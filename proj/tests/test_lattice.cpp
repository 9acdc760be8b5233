#include <doctest.h>

#include <set>
#include <sstream>

#include "primecvp/errors.hpp"
#include "primecvp/lattice.hpp"
#include "primecvp/random.hpp"

using namespace primecvp;

namespace {

std::vector<std::int64_t> last_row(const PrimeLatticeInstance& inst) {
    std::vector<std::int64_t> r;
    for (std::size_t j = 0; j < inst.B.cols(); ++j) r.push_back(inst.B(inst.B.rows() - 1, j));
    return r;
}

}  // namespace

TEST_CASE("factor base starts at 2 with the sign sentinel") {
    const FactorBase fb = build_factor_base(6);
    CHECK(fb.size() == 6);
    CHECK(fb.prime(0) == -1);
    CHECK(fb.with_sentinel() == std::vector<std::int64_t>{-1, 2, 3, 5, 7, 11, 13});
    CHECK(fb.smooth_bound() == 13);
    CHECK_THROWS_AS(build_factor_base(0), InvalidArgument);
    const FactorBase big = build_factor_base(100);
    CHECK(big.prime(100) == 541);
    for (std::size_t i = 2; i <= 100; ++i) CHECK(big.prime(i) > big.prime(i - 1));
}

TEST_CASE("rank from bit length") {
    // max(3, round(m / log2 m))
    const std::vector<std::pair<int, int>> table{{4, 3},   {8, 3},   {16, 4},  {24, 5},
                                                 {32, 6},  {40, 8},  {64, 11}, {128, 18}};
    for (auto [m, n] : table) CHECK(dimension_for_bits(m) == n);
    CHECK_THROWS(dimension_for_bits(1));
}

TEST_CASE("round half away from zero") {
    CHECK(round_half_away(2.5L) == 3);
    CHECK(round_half_away(-2.5L) == -3);
    CHECK(round_half_away(2.4999L) == 2);
    CHECK(round_half_away(0.0L) == 0);
}

TEST_CASE("scaled log rows") {
    SUBCASE("c = 1, rank 3") {
        const std::vector<int> f{1, 1, 2};
        CHECK(last_row(build_prime_lattice(15, 3, 1.0, f)) == std::vector<std::int64_t>{7, 11, 16});
        CHECK(build_prime_lattice(15, 3, 1.0, f).t.back() == 27);
        CHECK(build_prime_lattice(21, 3, 1.0, f).t.back() == 30);
        CHECK(build_prime_lattice(35, 3, 1.0, f).t.back() == 36);
    }
    SUBCASE("c = 0") {
        const auto inst = build_prime_lattice(15, 3, 0.0, {2, 1, 1});
        CHECK(last_row(inst) == std::vector<std::int64_t>{1, 1, 2});
        CHECK(inst.t.back() == 3);
    }
    SUBCASE("c = 1.5, rank 6") {
        const auto inst = build_prime_lattice(15, 6, 1.5, 7);
        CHECK(last_row(inst) == std::vector<std::int64_t>{22, 35, 51, 62, 76, 81});
        CHECK(inst.t.back() == 86);
        CHECK(build_prime_lattice(21, 6, 1.5, 7).t.back() == 96);
        CHECK(build_prime_lattice(35, 6, 1.5, 7).t.back() == 112);
    }
}

TEST_CASE("lattice shape invariants") {
    Rng rng(3);
    for (int n = 1; n <= 14; ++n) {
        const mpz_class N = sample_semiprime(20, rng);
        const auto inst = build_prime_lattice(N, n, 1.5, static_cast<std::uint64_t>(n));
        REQUIRE(inst.B.rows() == static_cast<std::size_t>(n + 1));
        REQUIRE(inst.B.cols() == static_cast<std::size_t>(n));
        std::multiset<int> want;
        for (int i = 1; i <= n; ++i) want.insert((i + 1) / 2);
        CHECK(std::multiset<int>(inst.f.begin(), inst.f.end()) == want);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                CHECK(inst.B(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) ==
                      (i == j ? inst.f[static_cast<std::size_t>(i)] : 0));
            }
            CHECK(inst.B(static_cast<std::size_t>(n), static_cast<std::size_t>(i)) > 0);
            CHECK(inst.t[static_cast<std::size_t>(i)] == 0);
        }
        CHECK(inst.t.back() > 0);
    }
}

TEST_CASE("lattice construction is deterministic in the seed") {
    const auto a = build_prime_lattice(3 * 1009, 8, 1.5, 42);
    const auto b = build_prime_lattice(3 * 1009, 8, 1.5, 42);
    CHECK(a.B == b.B);
    CHECK(a.f == b.f);
    CHECK(a.t == b.t);
}

TEST_CASE("invalid composites are rejected") {
    CHECK_THROWS_AS(build_prime_lattice(16, 3, 1.5, 1), InvalidInstance);
    CHECK_THROWS_AS(build_prime_lattice(13, 3, 1.5, 1), InvalidInstance);
    CHECK_THROWS_AS(build_prime_lattice(1, 3, 1.5, 1), InvalidInstance);
    CHECK_THROWS(build_prime_lattice(15, 3, 1.5, std::vector<int>{1, 2, 2}));
    CHECK_THROWS(build_prime_lattice(15, 0, 1.5, 1));
}

TEST_CASE("semiprime sampling") {
    Rng rng(11);
    for (int m = 4; m <= 64; m += 3) {
        const mpz_class N = sample_semiprime(m, rng);
        CHECK(bit_length(N) == static_cast<std::size_t>(m));
        CHECK(mpz_odd_p(N.get_mpz_t()));
        CHECK(mpz_probab_prime_p(N.get_mpz_t(), 30) == 0);
    }
    CHECK_THROWS(sample_semiprime(3, rng));
}

TEST_CASE("exact dimension and big logs") {
    CHECK(log_big(15) == doctest::Approx(2.70805020110221).epsilon(1e-14));
    const double ln15 = 2.70805020110221;
    CHECK(exact_dimension(15) == doctest::Approx(ln15 / std::log(ln15)).epsilon(1e-12));
    mpz_class big = 1;
    big <<= 200;
    CHECK(static_cast<double>(log_big(big)) == doctest::Approx(200 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("instance text round trip") {
    Rng rng(5);
    const auto inst = build_prime_lattice(sample_semiprime(30, rng), 6, 1.5, 9);
    std::stringstream ss;
    write_instance(ss, inst);
    const std::string text = ss.str();
    CHECK(text.find('.') != std::string::npos);  // only c is non-integral
    const auto back = read_instance(ss);
    CHECK(back.N == inst.N);
    CHECK(back.B == inst.B);
    CHECK(back.t == inst.t);
    CHECK(back.f == inst.f);
    CHECK(back.seed == inst.seed);
    CHECK(back.c == inst.c);

    std::string broken = text;
    broken.replace(broken.find("target"), 6, "targex");
    std::istringstream bad(broken);
    CHECK_THROWS(read_instance(bad));
}
