#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "primecvp/gf2.hpp"
#include "primecvp/lattice.hpp"
#include "primecvp/qaoa.hpp"
#include "primecvp/qubo.hpp"

namespace primecvp {

/// u = prod_{i>=1} p_i^e_i and u - vN = prod_{i>=0} p_i^e'_i with p_0 = -1.
struct SrPair {
    mpz_class u;
    mpz_class v;
    std::vector<int> e;        // length n, e[i-1] is the exponent of p_i
    std::vector<int> e_prime;  // length n+1, index 0 is the sign
};

/// Exponents over the base with the sign in slot 0, or nullopt if a
/// cofactor above the smooth bound remains. Throws on x == 0.
std::optional<std::vector<int>> smooth_factor(const mpz_class& x, const FactorBase& base);

/// Splits a signed exponent vector into coprime (u, v).
std::pair<mpz_class, mpz_class> vector_to_uv(std::span<const std::int64_t> e, const FactorBase& base);

/// |sum_j e_j ln p_j - ln N|.
long double epsilon_of(std::span<const std::int64_t> e, const mpz_class& N, const FactorBase& base);

enum class SrRejection { USmoothFails, DifferenceZero, DifferenceSmoothFails };

std::variant<SrPair, SrRejection> check_sr_pair(const mpz_class& u, const mpz_class& v,
                                                const mpz_class& N, const FactorBase& base);

/// Re-multiplies both products and compares them to u and u - vN.
bool verify_sr_pair(const SrPair& pair, const mpz_class& N, const FactorBase& base);

/// Parity of e'_i - e_i for i = 0..n (index 0 is the sign).
BitRow parity_row(const SrPair& pair);

struct RelationSystem {
    std::vector<SrPair> pairs;
    std::vector<BitRow> rows;

    /// Adds the pair unless (u, v) is already present; returns true if added.
    bool add(SrPair pair);
};

struct FactorPair {
    mpz_class p;
    mpz_class q;
    std::string method;  // "congruence", "non-invertible-prime", "factor-base-gcd"
};

struct TrivialCongruence {
    mpz_class x;  // X == +-1 mod N
};

/// Builds X from the selected pairs and splits N with gcd(X -+ 1, N).
std::variant<FactorPair, TrivialCongruence> extract_factors(const BitRow& selection,
                                                           std::span<const SrPair> pairs,
                                                           const mpz_class& N,
                                                           const FactorBase& base);

struct FactorDemoConfig {
    int n = 0;  // 0: dimension_for_bits(bit_length(N))
    double c = 1.5;
    double delta = 0.75;
    AngleSchedule angles = AngleSchedule({0.8}, {0.35});
    NormalizeMode normalize = NormalizeMode::MinMax;
    int top_k = 0;  // outcomes inspected per instance, 0: all 2^n
    int max_instances = 500;
    double time_budget_seconds = 60.0;
    bool gcd_shortcut = true;  // report factor-base gcd hits before any lattice work
    std::uint64_t seed = 1;
};

struct FactorDemoResult {
    bool factored = false;
    std::optional<FactorPair> factors;
    RelationSystem relations;
    int instances_tried = 0;
    std::size_t candidates_checked = 0;
    long double min_epsilon = 0.0L;  // smallest epsilon among inspected candidates
};

/// Repeats lattice sampling, Babai, fixed-angle QAOA and sr-pair screening
/// until a congruence of squares splits N or the budget runs out.
FactorDemoResult factor_demo(const mpz_class& N, const FactorDemoConfig& cfg);

/// Text rows "u v e_1 .. e_n | e'_0 .. e'_n".
void write_relations(std::ostream& out, std::span<const SrPair> pairs);
/// Reads rows written by write_relations and re-verifies each identity.
std::vector<SrPair> read_relations(std::istream& in, const mpz_class& N, const FactorBase& base);

}  // namespace primecvp
