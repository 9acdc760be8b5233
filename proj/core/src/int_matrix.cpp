#include "primecvp/int_matrix.hpp"

#include <algorithm>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

std::int64_t checked_mul_add(std::int64_t acc, std::int64_t a, std::int64_t b) {
    std::int64_t prod = 0;
    std::int64_t sum = 0;
    if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(acc, prod, &sum)) {
        throw ResourceLimit("integer overflow in lattice arithmetic");
    }
    return sum;
}

}  // namespace

IntMatrix IntMatrix::from_columns(const std::vector<std::vector<std::int64_t>>& cols) {
    if (cols.empty()) return {};
    IntMatrix m(cols.front().size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != m.rows()) {
            throw InvalidArgument("from_columns: ragged column lengths");
        }
        std::copy(cols[c].begin(), cols[c].end(), m.column(c).begin());
    }
    return m;
}

void IntMatrix::add_column_multiple(std::size_t c, std::size_t src, std::int64_t k) {
    if (k == 0) return;
    auto dst = column(c);
    auto from = column(src);
    for (std::size_t r = 0; r < rows_; ++r) dst[r] = checked_mul_add(dst[r], k, from[r]);
}

void IntMatrix::swap_columns(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(column(a).begin(), column(a).end(), column(b).begin());
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("multiply: shape mismatch");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::int64_t bkj = b(k, j);
            if (bkj == 0) continue;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                out(i, j) = checked_mul_add(out(i, j), a(i, k), bkj);
            }
        }
    }
    return out;
}

std::vector<std::int64_t> multiply(const IntMatrix& a, std::span<const std::int64_t> x) {
    if (a.cols() != x.size()) throw InvalidArgument("multiply: shape mismatch");
    std::vector<std::int64_t> out(a.rows(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
        if (x[k] == 0) continue;
        for (std::size_t i = 0; i < a.rows(); ++i) out[i] = checked_mul_add(out[i], a(i, k), x[k]);
    }
    return out;
}

}  // namespace primecvp
