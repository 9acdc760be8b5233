#include "primecvp/factoring.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "primecvp/errors.hpp"
#include "primecvp/refinement.hpp"

namespace primecvp {

namespace {

mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

mpz_class pow_ui(std::int64_t base, unsigned long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), mpz_class(static_cast<long>(base)).get_mpz_t(), exp);
    return r;
}

FactorPair ordered(mpz_class a, mpz_class b, std::string method) {
    if (a > b) std::swap(a, b);
    return {std::move(a), std::move(b), std::move(method)};
}

}  // namespace

std::optional<std::vector<int>> smooth_factor(const mpz_class& x, const FactorBase& base) {
    if (x == 0) throw InvalidArgument("smooth_factor: zero has no factorisation");
    std::vector<int> exps(base.size() + 1, 0);
    mpz_class rest = x;
    if (rest < 0) {
        exps[0] = 1;
        rest = -rest;
    }
    for (std::size_t i = 1; i <= base.size(); ++i) {
        const auto p = static_cast<unsigned long>(base.prime(i));
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++exps[i];
        }
    }
    if (rest != 1) return std::nullopt;
    return exps;
}

std::pair<mpz_class, mpz_class> vector_to_uv(std::span<const std::int64_t> e, const FactorBase& base) {
    if (e.size() > base.size()) throw InvalidArgument("vector_to_uv: more exponents than primes");
    mpz_class u = 1;
    mpz_class v = 1;
    for (std::size_t j = 0; j < e.size(); ++j) {
        const std::int64_t p = base.prime(j + 1);
        if (e[j] >= 0) u *= pow_ui(p, static_cast<unsigned long>(e[j]));
        else v *= pow_ui(p, static_cast<unsigned long>(-e[j]));
    }
    return {u, v};
}

long double epsilon_of(std::span<const std::int64_t> e, const mpz_class& N, const FactorBase& base) {
    if (e.size() > base.size()) throw InvalidArgument("epsilon_of: more exponents than primes");
    long double s = 0.0L;
    for (std::size_t j = 0; j < e.size(); ++j) {
        s += static_cast<long double>(e[j]) * std::log(static_cast<long double>(base.prime(j + 1)));
    }
    return std::fabs(s - log_big(N));
}

std::variant<SrPair, SrRejection> check_sr_pair(const mpz_class& u, const mpz_class& v,
                                                const mpz_class& N, const FactorBase& base) {
    if (u < 1 || v < 1) throw InvalidArgument("check_sr_pair: u and v must be positive");
    auto ue = smooth_factor(u, base);
    if (!ue) return SrRejection::USmoothFails;
    const mpz_class w = u - v * N;
    if (w == 0) return SrRejection::DifferenceZero;
    auto we = smooth_factor(w, base);
    if (!we) return SrRejection::DifferenceSmoothFails;
    SrPair pair;
    pair.u = u;
    pair.v = v;
    pair.e.assign(ue->begin() + 1, ue->end());
    pair.e_prime = std::move(*we);
    return pair;
}

bool verify_sr_pair(const SrPair& pair, const mpz_class& N, const FactorBase& base) {
    if (pair.e.size() != base.size() || pair.e_prime.size() != base.size() + 1) return false;
    mpz_class u = 1;
    mpz_class w = pair.e_prime[0] % 2 ? -1 : 1;
    for (std::size_t i = 1; i <= base.size(); ++i) {
        if (pair.e[i - 1] < 0 || pair.e_prime[i] < 0) return false;
        u *= pow_ui(base.prime(i), static_cast<unsigned long>(pair.e[i - 1]));
        w *= pow_ui(base.prime(i), static_cast<unsigned long>(pair.e_prime[i]));
    }
    return u == pair.u && w == pair.u - pair.v * N;
}

BitRow parity_row(const SrPair& pair) {
    BitRow row(pair.e_prime.size());
    row[0] = (pair.e_prime[0] & 1) != 0;
    for (std::size_t i = 1; i < pair.e_prime.size(); ++i) {
        row[i] = ((pair.e_prime[i] - pair.e[i - 1]) & 1) != 0;
    }
    return row;
}

bool RelationSystem::add(SrPair pair) {
    for (const auto& existing : pairs) {
        if (existing.u == pair.u && existing.v == pair.v) return false;
    }
    rows.push_back(parity_row(pair));
    pairs.push_back(std::move(pair));
    return true;
}

std::variant<FactorPair, TrivialCongruence> extract_factors(const BitRow& selection,
                                                           std::span<const SrPair> pairs,
                                                           const mpz_class& N,
                                                           const FactorBase& base) {
    if (selection.size() != pairs.size()) throw InvalidArgument("extract_factors: selection size");
    const std::size_t width = base.size() + 1;
    std::vector<long> sums(width, 0);
    std::vector<bool> involved(width, false);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (!selection.test(j)) continue;
        const SrPair& pr = pairs[j];
        sums[0] += pr.e_prime[0];
        for (std::size_t i = 1; i < width; ++i) {
            sums[i] += pr.e_prime[i] - pr.e[i - 1];
            involved[i] = involved[i] || pr.e_prime[i] != 0 || pr.e[i - 1] != 0;
        }
    }
    for (std::size_t i = 1; i < width; ++i) {
        if (!involved[i]) continue;
        const mpz_class g = gcd(mpz_class(static_cast<long>(base.prime(i))), N);
        if (g > 1 && g < N) return ordered(g, N / g, "non-invertible-prime");
    }

    mpz_class x = 1;
    for (std::size_t i = 0; i < width; ++i) {
        if (sums[i] % 2 != 0) {
            throw std::logic_error("extract_factors: selection does not sum to an even vector");
        }
        const long half = sums[i] / 2;
        if (half == 0) continue;
        mpz_class factor = i == 0 ? mpz_class(N - 1) : mpz_class(static_cast<long>(base.prime(i)));
        if (half < 0 && i > 0) {
            if (mpz_invert(factor.get_mpz_t(), factor.get_mpz_t(), N.get_mpz_t()) == 0) {
                throw std::logic_error("extract_factors: unexpected non-invertible prime");
            }
        }
        mpz_class term;
        mpz_powm_ui(term.get_mpz_t(), factor.get_mpz_t(), static_cast<unsigned long>(std::labs(half)),
                    N.get_mpz_t());
        x = (x * term) % N;
    }
    if (x == 1 || x == N - 1) return TrivialCongruence{x};
    const mpz_class p = gcd(x - 1, N);
    const mpz_class q = gcd(x + 1, N);
    if (p > 1 && p < N) return ordered(p, N / p, "congruence");
    if (q > 1 && q < N) return ordered(q, N / q, "congruence");
    return TrivialCongruence{x};
}

FactorDemoResult factor_demo(const mpz_class& N, const FactorDemoConfig& cfg) {
    if (N <= 2 || mpz_even_p(N.get_mpz_t())) throw InvalidArgument("factor_demo: N must be odd and > 2");
    if (mpz_probab_prime_p(N.get_mpz_t(), 30) != 0) throw InvalidArgument("factor_demo: N is prime");
    const int m = static_cast<int>(bit_length(N));
    const int n = cfg.n > 0 ? cfg.n : dimension_for_bits(std::max(m, 4));
    const FactorBase base = build_factor_base(static_cast<std::size_t>(n));

    FactorDemoResult result;
    result.min_epsilon = std::numeric_limits<long double>::infinity();
    if (cfg.gcd_shortcut) {
        for (std::size_t i = 1; i <= base.size(); ++i) {
            const mpz_class g = gcd(mpz_class(static_cast<long>(base.prime(i))), N);
            if (g > 1) {
                result.factored = true;
                result.factors = ordered(g, N / g, "factor-base-gcd");
                return result;
            }
        }
    }

    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 0; attempt < cfg.max_instances; ++attempt) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        if (elapsed.count() > cfg.time_budget_seconds) break;
        ++result.instances_tried;

        const RefinementProblem problem = prepare_refinement(
            build_prime_lattice(N, n, cfg.c, derive_seed(cfg.seed, {static_cast<std::uint64_t>(attempt)})),
            cfg.delta);
        const CostDiagonal norm = normalize_diagonal(problem.diag, cfg.normalize);
        const OutcomeDistribution dist = probabilities(run_qaoa(norm, cfg.angles));

        std::vector<Bitstring> order(dist.probs.size());
        std::iota(order.begin(), order.end(), Bitstring{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Bitstring a, Bitstring b) { return dist.probs[a] > dist.probs[b]; });
        const std::size_t take = cfg.top_k > 0 ? std::min<std::size_t>(order.size(), cfg.top_k) : order.size();

        for (std::size_t k = 0; k < take; ++k) {
            const std::vector<std::int64_t> e = problem.original_coefficients(order[k]);
            ++result.candidates_checked;
            result.min_epsilon = std::min(result.min_epsilon, epsilon_of(e, N, base));
            const auto [u, v] = vector_to_uv(e, base);
            auto checked = check_sr_pair(u, v, N, base);
            auto* pair = std::get_if<SrPair>(&checked);
            if (pair == nullptr || !result.relations.add(std::move(*pair))) continue;

            for (const BitRow& sel : gf2_nullspace(result.relations.rows)) {
                auto got = extract_factors(sel, result.relations.pairs, N, base);
                if (auto* f = std::get_if<FactorPair>(&got)) {
                    result.factored = true;
                    result.factors = std::move(*f);
                    return result;
                }
            }
        }
    }
    return result;
}

void write_relations(std::ostream& out, std::span<const SrPair> pairs) {
    for (const auto& p : pairs) {
        out << p.u.get_str() << ' ' << p.v.get_str();
        for (int x : p.e) out << ' ' << x;
        out << " |";
        for (int x : p.e_prime) out << ' ' << x;
        out << '\n';
    }
}

std::vector<SrPair> read_relations(std::istream& in, const mpz_class& N, const FactorBase& base) {
    std::vector<SrPair> out;
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto bar = line.find('|');
        if (bar == std::string::npos) throw InvalidArgument("relations: missing '|' on line " + std::to_string(lineno));
        std::istringstream left(line.substr(0, bar));
        std::istringstream right(line.substr(bar + 1));
        SrPair p;
        std::string u;
        std::string v;
        left >> u >> v;
        p.u = mpz_class(u);
        p.v = mpz_class(v);
        for (int x; left >> x;) p.e.push_back(x);
        for (int x; right >> x;) p.e_prime.push_back(x);
        if (!verify_sr_pair(p, N, base)) {
            throw InvalidArgument("relations: line " + std::to_string(lineno) + " fails the sr-pair identity");
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace primecvp
