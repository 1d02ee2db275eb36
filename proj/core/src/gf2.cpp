#include "msflow/gf2.hpp"

#include "msflow/error.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace msflow::gf2 {

namespace {

constexpr std::uint64_t bit(std::size_t c) { return std::uint64_t{1} << (c % 64); }

} // namespace

MatrixGF2::MatrixGF2(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_(rows * ((cols + 63) / 64), 0) {}

MatrixGF2 MatrixGF2::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    MatrixGF2 m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw std::invalid_argument("ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const int v = rows[r][c];
            if (v != 0 && v != 1) {
                throw std::invalid_argument("matrix entry is not 0 or 1");
            }
            m.set(r, c, v == 1);
        }
    }
    return m;
}

MatrixGF2 MatrixGF2::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<int>> copy;
    copy.reserve(rows.size());
    for (const auto& row : rows) {
        copy.emplace_back(row);
    }
    return from_rows(copy);
}

MatrixGF2 MatrixGF2::identity(std::size_t n) {
    MatrixGF2 m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, true);
    }
    return m;
}

void MatrixGF2::check_bounds(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
        throw std::out_of_range("index (" + std::to_string(r) + ", " + std::to_string(c) +
                                ") outside " + shape() + " matrix");
    }
}

bool MatrixGF2::get(std::size_t r, std::size_t c) const {
    check_bounds(r, c);
    return (row_ptr(r)[c / 64] & bit(c)) != 0;
}

void MatrixGF2::set(std::size_t r, std::size_t c, bool value) {
    check_bounds(r, c);
    if (value) {
        row_ptr(r)[c / 64] |= bit(c);
    } else {
        row_ptr(r)[c / 64] &= ~bit(c);
    }
}

void MatrixGF2::flip(std::size_t r, std::size_t c) {
    check_bounds(r, c);
    row_ptr(r)[c / 64] ^= bit(c);
}

bool MatrixGF2::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool MatrixGF2::row_is_zero(std::size_t r) const {
    if (r >= rows_) {
        throw std::out_of_range("row outside matrix");
    }
    const auto* p = row_ptr(r);
    return std::all_of(p, p + words_per_row(), [](std::uint64_t w) { return w == 0; });
}

bool MatrixGF2::col_is_zero(std::size_t c) const {
    if (c >= cols_) {
        throw std::out_of_range("column outside matrix");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        if (get(r, c)) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> MatrixGF2::to_rows() const {
    std::vector<std::vector<int>> out(rows_, std::vector<int>(cols_, 0));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out[r][c] = get(r, c) ? 1 : 0;
        }
    }
    return out;
}

std::string MatrixGF2::shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

MatrixGF2 multiply(const MatrixGF2& a, const MatrixGF2& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("cannot multiply " + a.shape() + " by " + b.shape());
    }
    MatrixGF2 out(a.rows(), b.cols());
    const std::size_t wpr = out.words_per_row();
    // Row r of the product is the XOR of the rows of b selected by row r of a.
    for (std::size_t r = 0; r < a.rows(); ++r) {
        std::uint64_t* dst = out.row_ptr(r);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.get(r, k)) {
                const std::uint64_t* src = b.row_ptr(k);
                for (std::size_t w = 0; w < wpr; ++w) {
                    dst[w] ^= src[w];
                }
            }
        }
    }
    return out;
}

MatrixGF2 rref(const MatrixGF2& m) {
    MatrixGF2 out = m;
    const std::size_t wpr = out.words_per_row();
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < out.cols() && pivot_row < out.rows(); ++c) {
        std::size_t found = pivot_row;
        while (found < out.rows() && !out.get(found, c)) {
            ++found;
        }
        if (found == out.rows()) {
            continue;
        }
        if (found != pivot_row) {
            std::swap_ranges(out.row_ptr(found), out.row_ptr(found) + wpr, out.row_ptr(pivot_row));
        }
        const std::uint64_t* pivot = out.row_ptr(pivot_row);
        for (std::size_t r = 0; r < out.rows(); ++r) {
            if (r != pivot_row && out.get(r, c)) {
                std::uint64_t* dst = out.row_ptr(r);
                for (std::size_t w = 0; w < wpr; ++w) {
                    dst[w] ^= pivot[w];
                }
            }
        }
        ++pivot_row;
    }
    return out;
}

namespace {

// Forward elimination in place; returns the number of pivots.
std::size_t eliminate(std::uint64_t* words, std::size_t rows, std::size_t cols, std::size_t wpr) {
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        const std::size_t w = c / 64;
        const std::uint64_t mask = bit(c);
        std::size_t found = pivot_row;
        while (found < rows && !(words[found * wpr + w] & mask)) {
            ++found;
        }
        if (found == rows) {
            continue;
        }
        if (found != pivot_row) {
            std::swap_ranges(words + found * wpr, words + (found + 1) * wpr, words + pivot_row * wpr);
        }
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            if (words[r * wpr + w] & mask) {
                for (std::size_t k = w; k < wpr; ++k) {
                    words[r * wpr + k] ^= words[pivot_row * wpr + k];
                }
            }
        }
        ++pivot_row;
    }
    return pivot_row;
}

} // namespace

std::size_t rank(const MatrixGF2& m) {
    if (m.empty()) {
        return 0;
    }
    constexpr std::size_t small = 64;
    if (m.words_.size() <= small) {
        std::array<std::uint64_t, small> buffer;
        std::copy(m.words_.begin(), m.words_.end(), buffer.begin());
        return eliminate(buffer.data(), m.rows(), m.cols(), m.words_per_row());
    }
    std::vector<std::uint64_t> words = m.words_;
    return eliminate(words.data(), m.rows(), m.cols(), m.words_per_row());
}

std::vector<std::size_t> pivot_columns(const MatrixGF2& reduced) {
    std::vector<std::size_t> pivots;
    for (std::size_t r = 0; r < reduced.rows(); ++r) {
        for (std::size_t c = 0; c < reduced.cols(); ++c) {
            if (reduced.get(r, c)) {
                pivots.push_back(c);
                break;
            }
        }
    }
    return pivots;
}

std::size_t kernel_dim(const MatrixGF2& m) {
    return m.cols() - rank(m);
}

MatrixGF2 transpose(const MatrixGF2& m) {
    MatrixGF2 out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (m.get(r, c)) {
                out.set(c, r, true);
            }
        }
    }
    return out;
}

} // namespace msflow::gf2
