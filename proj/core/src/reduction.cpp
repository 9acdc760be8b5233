#include "primecvp/reduction.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

constexpr double kSizeSlack = 1e-9;

double dot(const std::vector<double>& a, std::span<const std::int64_t> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * static_cast<double>(b[i]);
    return s;
}

// Size-reduces column k against columns k-1..0. Returns true if anything changed.
bool size_reduce(IntMatrix& D, IntMatrix& U, GsoData& gso, std::size_t k) {
    bool changed = false;
    for (std::size_t jj = k; jj-- > 0;) {
        const double m = gso.mu[k][jj];
        if (std::abs(m) <= 0.5 + kSizeSlack) continue;
        const double q = std::round(m);
        const auto qi = static_cast<std::int64_t>(q);
        D.add_column_multiple(k, jj, -qi);
        U.add_column_multiple(k, jj, -qi);
        for (std::size_t i = 0; i < jj; ++i) gso.mu[k][i] -= q * gso.mu[jj][i];
        gso.mu[k][jj] -= q;
        changed = true;
    }
    return changed;
}

}  // namespace

GsoData gram_schmidt(const IntMatrix& basis) {
    const std::size_t n = basis.cols();
    const std::size_t rows = basis.rows();
    GsoData g;
    g.dtilde.assign(n, std::vector<double>(rows, 0.0));
    g.mu.assign(n, std::vector<double>(n, 0.0));
    g.norms.assign(n, 0.0);

    for (std::size_t j = 0; j < n; ++j) {
        auto col = basis.column(j);
        auto& v = g.dtilde[j];
        double raw_norm = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            v[r] = static_cast<double>(col[r]);
            raw_norm += v[r] * v[r];
        }
        // Coefficients against the original column; subtraction is done
        // on the running vector (modified Gram-Schmidt) for stability.
        for (std::size_t i = 0; i < j; ++i) {
            const double coeff = dot(g.dtilde[i], col) / g.norms[i];
            g.mu[j][i] = coeff;
            for (std::size_t r = 0; r < rows; ++r) v[r] -= coeff * g.dtilde[i][r];
        }
        g.mu[j][j] = 1.0;
        const double nn = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
        if (!(nn > 1e-12 * raw_norm) || raw_norm == 0.0) {
            throw DegenerateBasis("gram_schmidt: column " + std::to_string(j) +
                                  " is linearly dependent on its predecessors");
        }
        g.norms[j] = nn;
    }
    return g;
}

ReducedBasis lll_reduce(const IntMatrix& basis, double delta) {
    if (!(delta > 0.25 && delta <= 1.0)) {
        throw InvalidArgument("lll_reduce: delta must lie in (1/4, 1]");
    }
    ReducedBasis out{basis, delta, IntMatrix::identity(basis.cols())};
    const std::size_t n = basis.cols();
    if (n == 0) return out;

    GsoData gso = gram_schmidt(out.D);
    std::size_t k = 1;
    while (k < n) {
        if (size_reduce(out.D, out.U, gso, k)) {
            // Refresh from the exact integer basis so rounding error cannot accumulate.
            gso = gram_schmidt(out.D);
            size_reduce(out.D, out.U, gso, k);
            gso = gram_schmidt(out.D);
        }
        const double m = gso.mu[k][k - 1];
        if (delta * gso.norms[k - 1] > gso.norms[k] + m * m * gso.norms[k - 1]) {
            out.D.swap_columns(k, k - 1);
            out.U.swap_columns(k, k - 1);
            gso = gram_schmidt(out.D);
            k = (k > 1) ? k - 1 : 1;
        } else {
            ++k;
        }
    }
    return out;
}

}  // namespace primecvp
