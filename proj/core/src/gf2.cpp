#include "morsetower/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace morse {

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Gf2Matrix Gf2Matrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows[0].size() : 0;
    Gf2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("Gf2Matrix::from_rows: ragged rows");
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

bool Gf2Matrix::is_zero() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

bool Gf2Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

Gf2Matrix Gf2Matrix::operator+(const Gf2Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("Gf2Matrix::operator+: shape mismatch");
    Gf2Matrix r(rows_, cols_);
    for (std::size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] ^ o.bits_[k];
    return r;
}

Gf2Matrix Gf2Matrix::operator*(const Gf2Matrix& o) const {
    if (cols_ != o.rows_)
        throw std::invalid_argument("Gf2Matrix::operator*: inner dimension mismatch");
    Gf2Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if ((*this)(i, k))
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (o(k, j)) r.flip(i, j);
    return r;
}

Gf2Matrix Gf2Matrix::transposed() const {
    Gf2Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j)) r.set(j, i, 1);
    return r;
}

void Gf2Matrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j)
        std::swap(bits_[a * cols_ + j], bits_[b * cols_ + j]);
}

void Gf2Matrix::xor_row(std::size_t dst, std::size_t src) {
    for (std::size_t j = 0; j < cols_; ++j)
        bits_[dst * cols_ + j] ^= bits_[src * cols_ + j];
}

std::string Gf2Matrix::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) ? '1' : '0';
        s += '\n';
    }
    return s;
}

Gf2Rref gf2_rref(const Gf2Matrix& m) {
    Gf2Rref out{m, {}};
    Gf2Matrix& a = out.mat;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t piv = row;
        while (piv < a.rows() && !a(piv, col)) ++piv;
        if (piv == a.rows()) continue;
        a.swap_rows(row, piv);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != row && a(r, col)) a.xor_row(r, row);
        out.pivot_cols.push_back(col);
        ++row;
    }
    return out;
}

std::size_t gf2_rank(const Gf2Matrix& m) { return gf2_rref(m).rank(); }

std::vector<std::vector<std::uint8_t>> gf2_kernel_basis(const Gf2Matrix& m) {
    const Gf2Rref r = gf2_rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : r.pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<std::uint8_t>> basis;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<std::uint8_t> v(m.cols(), 0);
        v[free_col] = 1;
        for (std::size_t k = 0; k < r.pivot_cols.size(); ++k)
            if (r.mat(k, free_col)) v[r.pivot_cols[k]] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

bool gf2_solve(const Gf2Matrix& m, const std::vector<std::uint8_t>& b, std::vector<std::uint8_t>& x) {
    if (b.size() != m.rows()) throw std::invalid_argument("gf2_solve: rhs size mismatch");
    Gf2Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug.set(i, j, m(i, j));
        aug.set(i, m.cols(), b[i]);
    }
    const Gf2Rref r = gf2_rref(aug);
    x.assign(m.cols(), 0);
    for (std::size_t k = 0; k < r.pivot_cols.size(); ++k) {
        if (r.pivot_cols[k] == m.cols()) return false; // pivot in rhs column
        x[r.pivot_cols[k]] = r.mat(k, m.cols());
    }
    return true;
}

std::vector<std::uint8_t> gf2_apply(const Gf2Matrix& m, const std::vector<std::uint8_t>& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("gf2_apply: vector size mismatch");
    std::vector<std::uint8_t> out(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::uint8_t acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc ^= static_cast<std::uint8_t>(m(i, j) & v[j]);
        out[i] = acc;
    }
    return out;
}

} // namespace morse
