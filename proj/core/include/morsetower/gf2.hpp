#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace morse {

/// Dense matrix over GF(2). One byte per entry; every matrix in this project
/// is desk-scale, so packing would buy nothing.
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

    static Gf2Matrix identity(std::size_t n);
    static Gf2Matrix zero(std::size_t rows, std::size_t cols) { return Gf2Matrix(rows, cols); }
    /// Build from 0/1 initializer rows; throws on ragged input.
    static Gf2Matrix from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint8_t operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, int v) { bits_[i * cols_ + j] = static_cast<std::uint8_t>(v & 1); }
    void flip(std::size_t i, std::size_t j) { bits_[i * cols_ + j] ^= 1; }

    bool operator==(const Gf2Matrix& o) const = default;
    bool is_zero() const;
    bool is_identity() const;

    Gf2Matrix operator+(const Gf2Matrix& o) const; // entrywise xor
    Gf2Matrix operator*(const Gf2Matrix& o) const; // product mod 2; throws on shape mismatch
    Gf2Matrix transposed() const;

    void swap_rows(std::size_t a, std::size_t b);
    void xor_row(std::size_t dst, std::size_t src); // row[dst] += row[src]

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Row-reduced echelon form. `pivot_cols[k]` is the pivot column of row k.
struct Gf2Rref {
    Gf2Matrix mat;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank() const { return pivot_cols.size(); }
};

Gf2Rref gf2_rref(const Gf2Matrix& m);
std::size_t gf2_rank(const Gf2Matrix& m);

/// Basis of the null space {x : m x = 0}, one column vector per basis element,
/// ordered by free column index (deterministic).
std::vector<std::vector<std::uint8_t>> gf2_kernel_basis(const Gf2Matrix& m);

/// Solve m x = b. Returns false if inconsistent; x gets the particular
/// solution with free variables set to zero.
bool gf2_solve(const Gf2Matrix& m, const std::vector<std::uint8_t>& b, std::vector<std::uint8_t>& x);

std::vector<std::uint8_t> gf2_apply(const Gf2Matrix& m, const std::vector<std::uint8_t>& v);

} // namespace morse
