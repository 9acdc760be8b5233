#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "primecvp/int_matrix.hpp"
#include "primecvp/random.hpp"

namespace primecvp {

/// The sign sentinel -1 followed by the first n primes.
class FactorBase {
public:
    explicit FactorBase(std::vector<std::int64_t> primes_with_sentinel)
        : primes_(std::move(primes_with_sentinel)) {}

    /// Number of actual primes (the sentinel is not counted).
    std::size_t size() const noexcept { return primes_.size() - 1; }
    /// prime(0) == -1, prime(i) is the i-th prime for 1 <= i <= size().
    std::int64_t prime(std::size_t i) const { return primes_.at(i); }
    std::int64_t smooth_bound() const { return primes_.back(); }
    const std::vector<std::int64_t>& with_sentinel() const noexcept { return primes_; }

private:
    std::vector<std::int64_t> primes_;
};

FactorBase build_factor_base(std::size_t n);

std::size_t bit_length(const mpz_class& x);

/// Natural log of a positive big integer in extended precision.
long double log_big(const mpz_class& x);

/// Draws N = p*q for distinct odd primes with bit_length(N) == m exactly.
mpz_class sample_semiprime(int m, Rng& rng);

/// Lattice rank used for an m-bit composite: max(3, round(m / log2 m)).
int dimension_for_bits(int m);

/// Real-valued dimension log N / log log N (natural logs).
double exact_dimension(const mpz_class& n);

/// Nearest-integer rounding with ties away from zero.
std::int64_t round_half_away(long double x);

struct PrimeLatticeInstance {
    mpz_class N;
    int m = 0;
    int n = 0;
    double c = 0.0;
    std::vector<int> f;               // diagonal entries, length n
    IntMatrix B;                      // (n+1) x n, columns are basis vectors
    std::vector<std::int64_t> t;      // length n+1
    std::uint64_t seed = 0;

    std::vector<double> target_as_double() const { return {t.begin(), t.end()}; }
};

/// Builds the scaled prime lattice and log-N target for a composite N. The
/// diagonal permutation is drawn from a generator seeded with `seed`.
PrimeLatticeInstance build_prime_lattice(const mpz_class& N, int n, double c, std::uint64_t seed);

/// Same as above with an explicit diagonal (must be a permutation of the
/// multiset {ceil(i/2) : i = 1..n}).
PrimeLatticeInstance build_prime_lattice(const mpz_class& N, int n, double c, std::vector<int> f,
                                         std::uint64_t seed = 0);

/// Line-oriented text form: header, basis rows, target row. Integers only
/// except for c, written in shortest round-trip decimal.
void write_instance(std::ostream& out, const PrimeLatticeInstance& inst);
PrimeLatticeInstance read_instance(std::istream& in);

}  // namespace primecvp
