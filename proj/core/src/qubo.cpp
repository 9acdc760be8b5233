#include "primecvp/qubo.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <ostream>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

std::size_t packed_index(int n, int j, int k) {
    // Rows j = 0..n-2, each holding k = j+1..n-1.
    const auto uj = static_cast<std::size_t>(j);
    const auto un = static_cast<std::size_t>(n);
    return uj * un - uj * (uj + 1) / 2 + static_cast<std::size_t>(k - j - 1);
}

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_shapes(std::span<const std::int64_t> target, std::span<const std::int64_t> b_op,
                  std::span<const int> kappa, const IntMatrix& D) {
    if (target.size() != D.rows() || b_op.size() != D.rows() || kappa.size() != D.cols()) {
        throw InvalidArgument("qubo: dimension mismatch");
    }
}

}  // namespace

SignVector compute_kappa(std::span<const double> residuals) {
    SignVector s;
    s.kappa.reserve(residuals.size());
    for (double r : residuals) s.kappa.push_back(r >= 0.0 ? 1 : -1);
    return s;
}

CostDiagonal CostDiagonal::from_energies(std::vector<double> energies) {
    if (energies.empty() || !std::has_single_bit(energies.size())) {
        throw InvalidArgument("cost diagonal length must be a power of two");
    }
    CostDiagonal d;
    d.n = std::countr_zero(energies.size());
    d.energies = std::move(energies);
    const auto [lo, hi] = std::minmax_element(d.energies.begin(), d.energies.end());
    d.e_min = *lo;
    d.e_max = *hi;
    for (std::size_t z = 0; z < d.energies.size(); ++z) {
        if (d.energies[z] == d.e_min) d.argmin_set.push_back(z);
    }
    d.baseline = d.energies[0];
    return d;
}

double cost(Bitstring z, std::span<const std::int64_t> target, std::span<const std::int64_t> b_op,
            std::span<const int> kappa, const IntMatrix& D) {
    check_shapes(target, b_op, kappa, D);
    std::vector<std::int64_t> r(target.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = target[i] - b_op[i];
    for (std::size_t j = 0; j < D.cols(); ++j) {
        if (((z >> j) & 1U) == 0) continue;
        auto col = D.column(j);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= kappa[j] * col[i];
    }
    return static_cast<double>(dot(r, r));
}

CostDiagonal build_diagonal(std::span<const std::int64_t> target, std::span<const std::int64_t> b_op,
                            std::span<const int> kappa, const IntMatrix& D, int cap) {
    check_shapes(target, b_op, kappa, D);
    const std::size_t n = D.cols();
    if (static_cast<int>(n) > cap || n >= 63) {
        throw ResourceLimit("build_diagonal: rank " + std::to_string(n) + " exceeds cap");
    }
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> energies(count);

    std::vector<std::int64_t> r(target.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = target[i] - b_op[i];
    energies[0] = static_cast<double>(dot(r, r));

    Bitstring z = 0;
    for (std::size_t step = 1; step < count; ++step) {
        const int j = std::countr_zero(step);
        z ^= Bitstring{1} << j;
        const std::int64_t sign = ((z >> j) & 1U) ? -kappa[static_cast<std::size_t>(j)]
                                                   : kappa[static_cast<std::size_t>(j)];
        auto col = D.column(static_cast<std::size_t>(j));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += sign * col[i];
        energies[z] = static_cast<double>(dot(r, r));
    }
    return CostDiagonal::from_energies(std::move(energies));
}

CostDiagonal build_diagonal(const PrimeLatticeInstance& instance, const BabaiResult& babai,
                            const ReducedBasis& reduced, int cap) {
    const SignVector s = compute_kappa(babai.residuals);
    return build_diagonal(instance.t, babai.b_op, s.kappa, reduced.D, cap);
}

double QuboCoefficients::coupling(int j, int k) const {
    if (j > k) std::swap(j, k);
    return quadratic.at(packed_index(n, j, k));
}

double QuboCoefficients::evaluate(Bitstring z) const {
    double s = constant;
    for (int j = 0; j < n; ++j) {
        if (((z >> j) & 1U) == 0) continue;
        s += linear[static_cast<std::size_t>(j)];
        for (int k = j + 1; k < n; ++k) {
            if ((z >> k) & 1U) s += quadratic[packed_index(n, j, k)];
        }
    }
    return s;
}

QuboCoefficients to_qubo_coefficients(std::span<const std::int64_t> target,
                                      std::span<const std::int64_t> b_op,
                                      std::span<const int> kappa, const IntMatrix& D) {
    check_shapes(target, b_op, kappa, D);
    const int n = static_cast<int>(D.cols());
    std::vector<std::int64_t> r0(target.size());
    for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = target[i] - b_op[i];

    std::vector<std::vector<std::int64_t>> w(D.cols());
    for (std::size_t j = 0; j < D.cols(); ++j) {
        auto col = D.column(j);
        w[j].resize(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) w[j][i] = kappa[j] * col[i];
    }

    QuboCoefficients q;
    q.n = n;
    q.constant = static_cast<double>(dot(r0, r0));
    q.linear.resize(D.cols());
    q.quadratic.assign(D.cols() * (D.cols() - (D.cols() ? 1 : 0)) / 2, 0.0);
    for (int j = 0; j < n; ++j) {
        const auto& wj = w[static_cast<std::size_t>(j)];
        // z_j^2 = z_j folds the square into the linear term.
        q.linear[static_cast<std::size_t>(j)] = static_cast<double>(dot(wj, wj) - 2 * dot(r0, wj));
        for (int k = j + 1; k < n; ++k) {
            q.quadratic[packed_index(n, j, k)] =
                static_cast<double>(2 * dot(wj, w[static_cast<std::size_t>(k)]));
        }
    }
    return q;
}

QuboCoefficients to_qubo_coefficients(const PrimeLatticeInstance& instance, const BabaiResult& babai,
                                      const ReducedBasis& reduced) {
    const SignVector s = compute_kappa(babai.residuals);
    return to_qubo_coefficients(instance.t, babai.b_op, s.kappa, reduced.D);
}

double IsingModel::evaluate(Bitstring z) const {
    auto spin = [z](int j) { return ((z >> j) & 1U) ? -1.0 : 1.0; };
    double s = offset;
    for (int j = 0; j < n; ++j) {
        s += field[static_cast<std::size_t>(j)] * spin(j);
        for (int k = j + 1; k < n; ++k) s += coupling[packed_index(n, j, k)] * spin(j) * spin(k);
    }
    return s;
}

IsingModel to_ising(const QuboCoefficients& qubo) {
    IsingModel m;
    m.n = qubo.n;
    m.offset = qubo.constant;
    m.field.assign(static_cast<std::size_t>(qubo.n), 0.0);
    m.coupling.assign(qubo.quadratic.size(), 0.0);
    for (int j = 0; j < qubo.n; ++j) {
        const double h = qubo.linear[static_cast<std::size_t>(j)];
        m.offset += h / 2.0;
        m.field[static_cast<std::size_t>(j)] -= h / 2.0;
        for (int k = j + 1; k < qubo.n; ++k) {
            const double J = qubo.quadratic[packed_index(qubo.n, j, k)];
            m.offset += J / 4.0;
            m.field[static_cast<std::size_t>(j)] -= J / 4.0;
            m.field[static_cast<std::size_t>(k)] -= J / 4.0;
            m.coupling[packed_index(qubo.n, j, k)] = J / 4.0;
        }
    }
    return m;
}

CostDiagonal normalize_diagonal(const CostDiagonal& diag, NormalizeMode mode) {
    if (mode == NormalizeMode::Off) return diag;
    CostDiagonal out = diag;
    const double span = diag.e_max - diag.e_min;
    if (!(span > 0.0)) {
        std::fill(out.energies.begin(), out.energies.end(), 0.0);
    } else {
        for (double& e : out.energies) e = (e - diag.e_min) / span;
    }
    out.e_min = 0.0;
    out.e_max = span > 0.0 ? 1.0 : 0.0;
    out.baseline = out.energies.front();
    return out;
}

void write_diagonal(std::ostream& out, int n, std::span<const double> values) {
    char buf[64];
    for (std::size_t z = 0; z < values.size(); ++z) {
        for (int j = 0; j < n; ++j) out << (((z >> j) & 1U) ? '1' : '0');
        auto res = std::to_chars(buf, buf + sizeof buf, values[z]);
        out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
}

}  // namespace primecvp
