#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace msflow::gf2 {

/// Dense matrix over the two-element field, rows bit-packed into 64-bit words.
///
/// Values are immutable once handed out by the free functions below; the
/// mutators exist for construction only.
class MatrixGF2 {
public:
    MatrixGF2() = default;
    MatrixGF2(std::size_t rows, std::size_t cols);

    /// Builds a matrix from nested 0/1 rows. Throws std::invalid_argument on
    /// ragged input or an entry other than 0 or 1.
    static MatrixGF2 from_rows(const std::vector<std::vector<int>>& rows);
    static MatrixGF2 from_rows(std::initializer_list<std::initializer_list<int>> rows);
    static MatrixGF2 identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);
    void flip(std::size_t r, std::size_t c);

    bool is_zero() const noexcept;
    bool row_is_zero(std::size_t r) const;
    bool col_is_zero(std::size_t c) const;

    std::vector<std::vector<int>> to_rows() const;
    std::string shape() const;

    friend bool operator==(const MatrixGF2&, const MatrixGF2&) = default;

private:
    friend MatrixGF2 multiply(const MatrixGF2& a, const MatrixGF2& b);
    friend std::size_t rank(const MatrixGF2& m);
    friend MatrixGF2 rref(const MatrixGF2& m);

    std::size_t words_per_row() const noexcept { return (cols_ + 63) / 64; }
    const std::uint64_t* row_ptr(std::size_t r) const { return words_.data() + r * words_per_row(); }
    std::uint64_t* row_ptr(std::size_t r) { return words_.data() + r * words_per_row(); }
    void check_bounds(std::size_t r, std::size_t c) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Matrix product with addition mod 2. Throws DimensionMismatch naming both
/// shapes when a.cols() != b.rows().
MatrixGF2 multiply(const MatrixGF2& a, const MatrixGF2& b);

std::size_t rank(const MatrixGF2& m);

/// Reduced row-echelon form; zero rows are moved to the bottom.
MatrixGF2 rref(const MatrixGF2& m);

/// Pivot columns of a matrix already in reduced row-echelon form.
std::vector<std::size_t> pivot_columns(const MatrixGF2& reduced);

/// Nullity, i.e. cols - rank.
std::size_t kernel_dim(const MatrixGF2& m);

MatrixGF2 transpose(const MatrixGF2& m);

} // namespace msflow::gf2
