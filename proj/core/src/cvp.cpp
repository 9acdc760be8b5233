#include "primecvp/cvp.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

long double ambient_dist2(std::span<const double> target, std::span<const std::int64_t> v) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const long double d = static_cast<long double>(target[i]) - static_cast<long double>(v[i]);
        s += d * d;
    }
    return s;
}

}  // namespace

BabaiResult babai_nearest_plane(const IntMatrix& D, const GsoData& gso,
                                std::span<const double> target) {
    const std::size_t n = D.cols();
    if (target.size() != D.rows() || gso.rank() != n) {
        throw InvalidArgument("babai_nearest_plane: dimension mismatch");
    }
    BabaiResult res;
    res.coeffs.assign(n, 0);
    res.residuals.assign(n, 0.0);

    std::vector<double> r(target.begin(), target.end());
    for (std::size_t j = n; j-- > 0;) {
        const auto& dt = gso.dtilde[j];
        double proj = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) proj += r[i] * dt[i];
        const double mu = proj / gso.norms[j];
        const double c = std::round(mu);
        res.coeffs[j] = static_cast<std::int64_t>(c);
        res.residuals[j] = mu - c;
        auto col = D.column(j);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * static_cast<double>(col[i]);
    }
    res.b_op = multiply(D, std::span<const std::int64_t>(res.coeffs));
    res.dist2 = static_cast<double>(ambient_dist2(target, res.b_op));
    return res;
}

std::vector<NeighborEntry> enumerate_neighborhood(std::span<const std::int64_t> b_op,
                                                  const IntMatrix& D,
                                                  std::span<const int> kappa,
                                                  std::span<const double> target, int cap) {
    const std::size_t n = D.cols();
    if (static_cast<int>(n) > cap || n >= 63) {
        throw ResourceLimit("enumerate_neighborhood: rank " + std::to_string(n) +
                            " exceeds enumeration cap");
    }
    if (kappa.size() != n || b_op.size() != D.rows() || target.size() != D.rows()) {
        throw InvalidArgument("enumerate_neighborhood: dimension mismatch");
    }
    const Bitstring count = Bitstring{1} << n;
    std::vector<NeighborEntry> out;
    out.reserve(count);
    for (Bitstring z = 0; z < count; ++z) {
        NeighborEntry e;
        e.z = z;
        e.v.assign(b_op.begin(), b_op.end());
        for (std::size_t j = 0; j < n; ++j) {
            if ((z >> j) & 1U) {
                auto col = D.column(j);
                for (std::size_t i = 0; i < e.v.size(); ++i) e.v[i] += kappa[j] * col[i];
            }
        }
        e.dist2 = static_cast<double>(ambient_dist2(target, e.v));
        out.push_back(std::move(e));
    }
    return out;
}

CvpSolution exact_cvp_small(const IntMatrix& basis, std::span<const double> target,
                            int coeff_bound) {
    const std::size_t n = basis.cols();
    if (coeff_bound < 0) throw InvalidArgument("exact_cvp_small: negative coefficient bound");
    const double side = 2.0 * coeff_bound + 1.0;
    if (std::pow(side, static_cast<double>(n)) > 1e7) {
        throw ResourceLimit("exact_cvp_small: coefficient box exceeds 1e7 points");
    }
    const GsoData gso = gram_schmidt(basis);
    const BabaiResult babai = babai_nearest_plane(basis, gso, target);

    std::vector<std::int64_t> offset(n, -coeff_bound);
    std::vector<std::int64_t> coeffs(n);
    CvpSolution best;
    long double best_d = std::numeric_limits<long double>::infinity();
    for (;;) {
        for (std::size_t j = 0; j < n; ++j) coeffs[j] = babai.coeffs[j] + offset[j];
        auto v = multiply(basis, std::span<const std::int64_t>(coeffs));
        const long double d = ambient_dist2(target, v);
        if (d < best_d) {
            best_d = d;
            best.coeffs = coeffs;
            best.vector = std::move(v);
        }
        // Odometer with coordinate 0 most significant, giving lexicographic order.
        bool done = true;
        for (std::size_t pos = n; pos-- > 0;) {
            if (offset[pos] < coeff_bound) {
                ++offset[pos];
                done = false;
                break;
            }
            offset[pos] = -coeff_bound;
        }
        if (done) break;
    }
    best.dist2 = static_cast<double>(best_d);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(best.coeffs[j] - babai.coeffs[j]) == coeff_bound && coeff_bound > 0) {
            best.on_box_boundary = true;
        }
    }
    return best;
}

SvpSolution shortest_vector_small(const IntMatrix& basis) {
    const std::size_t n = basis.cols();
    if (n == 0) throw InvalidArgument("shortest_vector_small: empty basis");
    if (n > 6) throw ResourceLimit("shortest_vector_small: rank above 6");

    const ReducedBasis red = lll_reduce(basis);
    const GsoData gso = gram_schmidt(red.D);

    auto exact_norm = [&](std::span<const std::int64_t> v) {
        long double s = 0.0L;
        for (auto x : v) s += static_cast<long double>(x) * static_cast<long double>(x);
        return s;
    };

    SvpSolution best;
    best.coeffs.assign(n, 0);
    best.coeffs[0] = 1;
    best.vector.assign(red.D.column(0).begin(), red.D.column(0).end());
    long double radius2 = exact_norm(best.vector);

    std::vector<std::int64_t> x(n, 0);
    std::vector<double> partial(n + 1, 0.0);
    std::function<void(std::size_t)> descend = [&](std::size_t level) {
        double centre = 0.0;
        for (std::size_t j = level + 1; j < n; ++j) centre -= static_cast<double>(x[j]) * gso.mu[j][level];
        const double room = static_cast<double>(radius2) * (1.0 + 1e-9) - partial[level + 1];
        if (room < 0.0) return;
        const double half_width = std::sqrt(room / gso.norms[level]);
        const auto lo = static_cast<std::int64_t>(std::ceil(centre - half_width));
        const auto hi = static_cast<std::int64_t>(std::floor(centre + half_width));
        for (std::int64_t xi = lo; xi <= hi; ++xi) {
            x[level] = xi;
            const double diff = static_cast<double>(xi) - centre;
            partial[level] = partial[level + 1] + diff * diff * gso.norms[level];
            if (level > 0) {
                descend(level - 1);
                continue;
            }
            bool zero = true;
            for (auto c : x) zero = zero && c == 0;
            if (zero) continue;
            auto v = multiply(red.D, std::span<const std::int64_t>(x));
            const long double nn = exact_norm(v);
            if (nn < radius2) {
                radius2 = nn;
                best.vector = std::move(v);
                best.coeffs = multiply(red.U, std::span<const std::int64_t>(x));
            }
        }
        x[level] = 0;
    };
    descend(n - 1);
    best.norm2 = static_cast<double>(radius2);
    return best;
}

MinkowskiDiagnostics minkowski_rd_diagnostics(const IntMatrix& basis) {
    const std::size_t n = basis.cols();
    if (n > 6) throw ResourceLimit("minkowski_rd_diagnostics: rank above 6");
    const GsoData gso = gram_schmidt(basis);
    long double log_det2 = 0.0L;
    for (double nn : gso.norms) log_det2 += std::log(static_cast<long double>(nn));

    MinkowskiDiagnostics out;
    const auto dn = static_cast<double>(n);
    out.det = static_cast<double>(std::exp(log_det2 / 2.0L));
    out.hermite_estimate = dn;
    const double det_root = static_cast<double>(std::exp(log_det2 / (2.0L * n)));
    out.minkowski_bound = std::sqrt(dn) * det_root;
    out.lambda1_sq = shortest_vector_small(basis).norm2;
    const double lambda1 = std::sqrt(out.lambda1_sq);
    out.minkowski_satisfied = out.lambda1_sq <= dn * det_root * det_root * (1.0 + 1e-12);
    out.rd = lambda1 / (std::sqrt(out.hermite_estimate) * det_root);
    out.rd_bound = std::pow(std::numbers::e * std::numbers::pi / (2.0 * dn), 0.25);
    out.rd_satisfied = out.rd <= out.rd_bound;
    out.satisfied = out.minkowski_satisfied && out.rd_satisfied;
    return out;
}

}  // namespace primecvp
