#include "primecvp/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

bool is_prime_small(std::int64_t x) {
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    for (std::int64_t d = 3; d * d <= x; d += 2) {
        if (x % d == 0) return false;
    }
    return true;
}

// Uniform integer with exactly `bits` bits (top bit set).
mpz_class random_with_bits(std::size_t bits, Rng& rng) {
    mpz_class x = 0;
    std::size_t filled = 0;
    while (filled < bits) {
        const std::uint64_t word = rng();
        const std::size_t take = std::min<std::size_t>(32, bits - filled);
        x <<= take;
        x += static_cast<unsigned long>(word & ((1ULL << take) - 1));
        filled += take;
    }
    mpz_setbit(x.get_mpz_t(), bits - 1);
    return x;
}

// Random odd prime with exactly `bits` bits; bits >= 2.
mpz_class random_odd_prime(std::size_t bits, Rng& rng) {
    if (bits == 2) return 3;
    for (;;) {
        mpz_class x = random_with_bits(bits, rng);
        mpz_class p;
        mpz_nextprime(p.get_mpz_t(), mpz_class(x - 1).get_mpz_t());
        if (bit_length(p) == bits && p != 2) return p;
    }
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void expect_token(std::istream& in, const std::string& want) {
    std::string tok;
    if (!(in >> tok) || tok != want) {
        throw InvalidArgument("instance file: expected '" + want + "', got '" + tok + "'");
    }
}

}  // namespace

FactorBase build_factor_base(std::size_t n) {
    if (n == 0) throw InvalidArgument("factor base needs at least one prime");
    std::vector<std::int64_t> primes{-1};
    primes.reserve(n + 1);
    for (std::int64_t x = 2; primes.size() < n + 1; ++x) {
        if (is_prime_small(x)) primes.push_back(x);
    }
    return FactorBase(std::move(primes));
}

std::size_t bit_length(const mpz_class& x) {
    if (x == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

long double log_big(const mpz_class& x) {
    if (x <= 0) throw InvalidArgument("log of non-positive integer");
    if (x.fits_ulong_p()) return std::log(static_cast<long double>(x.get_ui()));
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(static_cast<long double>(mant)) +
           static_cast<long double>(exp) * std::log(2.0L);
}

mpz_class sample_semiprime(int m, Rng& rng) {
    if (m < 4) throw InvalidArgument("sample_semiprime: bit-length must be >= 4");
    // bits(p) + bits(q) is m or m + 1 for an m-bit product.
    const int half = m / 2;
    std::uniform_int_distribution<int> split(std::max(2, half - 1), std::min(m - 1, half + 1));
    std::uniform_int_distribution<int> carry(0, 1);
    for (;;) {
        const int a = split(rng);
        const int b = m - a + carry(rng);
        if (b < 2) continue;
        const mpz_class p = random_odd_prime(static_cast<std::size_t>(a), rng);
        const mpz_class q = random_odd_prime(static_cast<std::size_t>(b), rng);
        if (p == q) continue;
        mpz_class N = p * q;
        if (bit_length(N) == static_cast<std::size_t>(m)) return N;
    }
}

int dimension_for_bits(int m) {
    if (m < 4) throw InvalidArgument("dimension_for_bits: bit-length must be >= 4");
    const long double ratio = static_cast<long double>(m) / std::log2(static_cast<long double>(m));
    return std::max(3, static_cast<int>(round_half_away(ratio)));
}

double exact_dimension(const mpz_class& n) {
    const long double ln = log_big(n);
    return static_cast<double>(ln / std::log(ln));
}

std::int64_t round_half_away(long double x) {
    return static_cast<std::int64_t>(std::round(x));
}

PrimeLatticeInstance build_prime_lattice(const mpz_class& N, int n, double c, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("lattice rank must be >= 1");
    std::vector<int> f(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) f[static_cast<std::size_t>(i - 1)] = (i + 1) / 2;
    Rng rng(seed);
    std::shuffle(f.begin(), f.end(), rng);
    return build_prime_lattice(N, n, c, std::move(f), seed);
}

PrimeLatticeInstance build_prime_lattice(const mpz_class& N, int n, double c, std::vector<int> f,
                                         std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("lattice rank must be >= 1");
    if (!(c >= 0.0)) throw InvalidArgument("precision parameter c must be >= 0");
    if (N <= 2 || mpz_even_p(N.get_mpz_t())) throw InvalidInstance("N must be odd and > 2");
    if (mpz_probab_prime_p(N.get_mpz_t(), 30) != 0) throw InvalidInstance("N must be composite");
    if (f.size() != static_cast<std::size_t>(n)) throw InvalidArgument("diagonal length != n");
    {
        std::vector<int> sorted = f;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 1; i <= n; ++i) {
            if (sorted[static_cast<std::size_t>(i - 1)] != (i + 1) / 2) {
                throw InvalidArgument("diagonal is not a permutation of {ceil(i/2)}");
            }
        }
    }

    PrimeLatticeInstance inst;
    inst.N = N;
    inst.m = static_cast<int>(bit_length(N));
    inst.n = n;
    inst.c = c;
    inst.f = std::move(f);
    inst.seed = seed;

    const FactorBase base = build_factor_base(static_cast<std::size_t>(n));
    const long double scale = std::pow(10.0L, static_cast<long double>(c));
    const auto un = static_cast<std::size_t>(n);
    inst.B = IntMatrix(un + 1, un);
    for (std::size_t j = 0; j < un; ++j) {
        inst.B(j, j) = inst.f[j];
        inst.B(un, j) = round_half_away(scale * std::log(static_cast<long double>(base.prime(j + 1))));
    }
    inst.t.assign(un + 1, 0);
    inst.t[un] = round_half_away(scale * log_big(N));
    return inst;
}

void write_instance(std::ostream& out, const PrimeLatticeInstance& inst) {
    out << "primecvp-instance 1\n";
    out << "N " << inst.N.get_str() << '\n';
    out << "m " << inst.m << '\n';
    out << "n " << inst.n << '\n';
    out << "c " << format_double(inst.c) << '\n';
    out << "seed " << inst.seed << '\n';
    out << "basis " << inst.B.rows() << ' ' << inst.B.cols() << '\n';
    for (std::size_t r = 0; r < inst.B.rows(); ++r) {
        for (std::size_t col = 0; col < inst.B.cols(); ++col) {
            out << (col ? " " : "") << inst.B(r, col);
        }
        out << '\n';
    }
    out << "target";
    for (auto v : inst.t) out << ' ' << v;
    out << '\n';
}

PrimeLatticeInstance read_instance(std::istream& in) {
    expect_token(in, "primecvp-instance");
    int version = 0;
    in >> version;
    if (version != 1) throw InvalidArgument("instance file: unsupported version");

    std::string nstr;
    int m = 0;
    int n = 0;
    std::string cstr;
    std::uint64_t seed = 0;
    expect_token(in, "N");
    in >> nstr;
    expect_token(in, "m");
    in >> m;
    expect_token(in, "n");
    in >> n;
    expect_token(in, "c");
    in >> cstr;
    expect_token(in, "seed");
    in >> seed;
    std::size_t rows = 0;
    std::size_t cols = 0;
    expect_token(in, "basis");
    in >> rows >> cols;
    if (!in || n < 1 || rows != static_cast<std::size_t>(n) + 1 || cols != static_cast<std::size_t>(n)) {
        throw InvalidArgument("instance file: malformed header");
    }
    IntMatrix B(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t col = 0; col < cols; ++col) in >> B(r, col);
    }
    expect_token(in, "target");
    std::vector<std::int64_t> t(rows);
    for (auto& v : t) in >> v;
    if (!in) throw InvalidArgument("instance file: truncated");

    double c = 0.0;
    if (auto res = std::from_chars(cstr.data(), cstr.data() + cstr.size(), c); res.ec != std::errc{}) {
        throw InvalidArgument("instance file: bad c");
    }
    std::vector<int> f(cols);
    for (std::size_t j = 0; j < cols; ++j) f[j] = static_cast<int>(B(j, j));

    PrimeLatticeInstance inst = build_prime_lattice(mpz_class(nstr), n, c, std::move(f), seed);
    if (inst.m != m || !(inst.B == B) || inst.t != t) {
        throw InvalidArgument("instance file: basis/target inconsistent with N, n, c");
    }
    return inst;
}

}  // namespace primecvp
