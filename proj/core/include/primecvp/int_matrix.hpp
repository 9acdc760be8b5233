#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace primecvp {

/// Dense integer matrix stored column-major, so each lattice basis vector is
/// a contiguous span.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    /// Builds a matrix from a list of columns; all columns must share a length.
    static IntMatrix from_columns(const std::vector<std::vector<std::int64_t>>& cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<std::int64_t> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const std::int64_t> column(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }

    /// Column c <- column c + k * column src.
    void add_column_multiple(std::size_t c, std::size_t src, std::int64_t k);
    void swap_columns(std::size_t a, std::size_t b);

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> data_;
};

/// Product A * B with overflow detection (throws ResourceLimit on overflow).
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

/// A * x for an integer coefficient vector.
std::vector<std::int64_t> multiply(const IntMatrix& a, std::span<const std::int64_t> x);

}  // namespace primecvp
