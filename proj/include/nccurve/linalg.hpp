/*
   Copyright 2026 The nccurve authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nccurve/base.hpp"
#include "nccurve/scalar.hpp"

namespace nccurve {

/// Dense row-major matrix over an exact field scalar.
template <field_scalar K>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n, const K& one) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    K& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const K& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<K> row(std::size_t r) const {
        return std::vector<K>(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_);
    }
    void set_row(std::size_t r, const std::vector<K>& v) {
        for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
    }

    bool operator==(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t t = 0; t < a_.size(); ++t)
            if (!(a_[t] == o.a_[t])) return false;
        return true;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw InternalError("matrix product shape mismatch");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const K& x = at(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + x * o.at(k, j);
            }
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InternalError("matrix sum shape mismatch");
        Matrix r = *this;
        for (std::size_t t = 0; t < a_.size(); ++t) r.a_[t] = r.a_[t] + o.a_[t];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InternalError("matrix diff shape mismatch");
        Matrix r = *this;
        for (std::size_t t = 0; t < a_.size(); ++t) r.a_[t] = r.a_[t] - o.a_[t];
        return r;
    }

    Matrix scaled(const K& c) const {
        Matrix r = *this;
        for (auto& x : r.a_) x = x * c;
        return r;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (v.size() != cols_) throw InternalError("matrix apply shape mismatch");
        std::vector<K> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            K acc = r[i];
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero()) acc = acc + at(i, j) * v[j];
            r[i] = acc;
        }
        return r;
    }

    Matrix transposed() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    /// Evaluates a polynomial (base-field coefficients) at this square matrix.
    std::vector<K> poly_eval_times(const std::vector<K>& coeffs, const std::vector<K>& v) const {
        std::vector<K> acc(v.size());
        std::vector<K> pow = v;  // this^t * v
        for (std::size_t t = 0; t < coeffs.size(); ++t) {
            if (!coeffs[t].is_zero())
                for (std::size_t s = 0; s < acc.size(); ++s) acc[s] = acc[s] + coeffs[t] * pow[s];
            if (t + 1 < coeffs.size()) pow = apply(pow);
        }
        return acc;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<K> a_;
};

template <field_scalar K>
struct RrefResult {
    Matrix<K> mat;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
template <field_scalar K>
RrefResult<K> rref(Matrix<K> m) {
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t sel = rank;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != rank)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(rank, c));
        K inv = m.at(rank, col).one_like() / m.at(rank, col);
        for (std::size_t c = col; c < m.cols(); ++c) m.at(rank, c) = m.at(rank, c) * inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == rank || m.at(r, col).is_zero()) continue;
            K f = m.at(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                m.at(r, c) = m.at(r, c) - f * m.at(rank, c);
        }
        pivots.push_back(col);
        ++rank;
    }
    return {std::move(m), rank, std::move(pivots)};
}

/// A subspace of k^ambient in canonical form: the basis matrix is the RREF of
/// any spanning set, so two subspaces are equal iff their bases are equal.
template <field_scalar K>
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

    /// Canonicalizes the row span of `spanning`.
    static Subspace span(const Matrix<K>& spanning) {
        auto r = rref(spanning);
        Subspace s(spanning.cols());
        Matrix<K> b(r.rank, spanning.cols());
        for (std::size_t i = 0; i < r.rank; ++i) b.set_row(i, r.mat.row(i));
        s.basis_ = std::move(b);
        s.pivots_ = std::move(r.pivot_cols);
        return s;
    }

    static Subspace span_of_vectors(std::size_t ambient, const std::vector<std::vector<K>>& vecs) {
        Matrix<K> m(vecs.size(), ambient);
        for (std::size_t i = 0; i < vecs.size(); ++i) m.set_row(i, vecs[i]);
        return span(m);
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix<K>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivot_cols() const { return pivots_; }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    /// Residue of v after eliminating pivot coordinates with the basis rows.
    std::vector<K> reduce(std::vector<K> v) const {
        if (v.size() != ambient_) throw AmbientMismatch("vector/subspace ambient mismatch");
        for (std::size_t r = 0; r < basis_.rows(); ++r) {
            K c = v[pivots_[r]];  // copy: the loop below zeroes this slot
            if (c.is_zero()) continue;
            for (std::size_t j = 0; j < ambient_; ++j) v[j] = v[j] - c * basis_.at(r, j);
        }
        return v;
    }

    bool contains(const std::vector<K>& v) const {
        for (const auto& x : reduce(v))
            if (!x.is_zero()) return false;
        return true;
    }

    bool contains(const Subspace& o) const {
        if (o.ambient_ != ambient_) throw AmbientMismatch("subspace containment ambient mismatch");
        for (std::size_t r = 0; r < o.basis_.rows(); ++r)
            if (!contains(o.basis_.row(r))) return false;
        return true;
    }

private:
    std::size_t ambient_ = 0;
    Matrix<K> basis_;
    std::vector<std::size_t> pivots_;
};

template <field_scalar K>
Subspace<K> subspace_sum(const Subspace<K>& a, const Subspace<K>& b) {
    if (a.ambient() != b.ambient()) throw AmbientMismatch("sum of subspaces of different spaces");
    Matrix<K> stack(a.dim() + b.dim(), a.ambient());
    for (std::size_t r = 0; r < a.dim(); ++r) stack.set_row(r, a.basis().row(r));
    for (std::size_t r = 0; r < b.dim(); ++r) stack.set_row(a.dim() + r, b.basis().row(r));
    return Subspace<K>::span(stack);
}

/// Canonical kernel {v : m v = 0} of the column action of m.
template <field_scalar K>
Subspace<K> kernel(const Matrix<K>& m, const K& one) {
    auto r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : r.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<K>> vecs;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<K> v(m.cols());
        v[f] = one;
        for (std::size_t t = 0; t < r.rank; ++t)
            v[r.pivot_cols[t]] = v[r.pivot_cols[t]] - r.mat.at(t, f);
        vecs.push_back(std::move(v));
    }
    return Subspace<K>::span_of_vectors(m.cols(), vecs);
}

/// Intersection via the kernel of the stacked coefficient system.
template <field_scalar K>
Subspace<K> subspace_intersect(const Subspace<K>& a, const Subspace<K>& b, const K& one) {
    if (a.ambient() != b.ambient())
        throw AmbientMismatch("intersection of subspaces of different spaces");
    // columns: coefficients (x, y) with x*basisA - y*basisB = 0
    Matrix<K> sys(a.ambient(), a.dim() + b.dim());
    for (std::size_t c = 0; c < a.dim(); ++c)
        for (std::size_t r = 0; r < a.ambient(); ++r) sys.at(r, c) = a.basis().at(c, r);
    for (std::size_t c = 0; c < b.dim(); ++c)
        for (std::size_t r = 0; r < a.ambient(); ++r)
            sys.at(r, a.dim() + c) = sys.at(r, a.dim() + c) - b.basis().at(c, r);
    Subspace<K> coef = kernel(sys, one);
    std::vector<std::vector<K>> vecs;
    for (std::size_t t = 0; t < coef.dim(); ++t) {
        std::vector<K> v(a.ambient());
        for (std::size_t c = 0; c < a.dim(); ++c) {
            const K& x = coef.basis().at(t, c);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < a.ambient(); ++j)
                v[j] = v[j] + x * a.basis().at(c, j);
        }
        vecs.push_back(std::move(v));
    }
    return Subspace<K>::span_of_vectors(a.ambient(), vecs);
}

/// Quotient data for ambient/sub: representatives are the standard basis
/// vectors at the non-pivot columns of sub, `proj` sends an ambient vector to
/// its representative coordinates and `lift` includes them back. proj∘lift=id.
template <field_scalar K>
struct QuotientMaps {
    std::vector<std::size_t> rep_cols;
    Matrix<K> proj;  // (ambient - dim sub) x ambient
    Matrix<K> lift;  // ambient x (ambient - dim sub)
};

template <field_scalar K>
QuotientMaps<K> quotient_maps(const Subspace<K>& sub, const K& one) {
    std::size_t n = sub.ambient();
    std::vector<bool> is_pivot(n, false);
    for (auto c : sub.pivot_cols()) is_pivot[c] = true;
    QuotientMaps<K> q;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) q.rep_cols.push_back(c);
    std::size_t m = q.rep_cols.size();
    q.proj = Matrix<K>(m, n);
    q.lift = Matrix<K>(n, m);
    for (std::size_t t = 0; t < m; ++t) {
        q.lift.at(q.rep_cols[t], t) = one;
        q.proj.at(t, q.rep_cols[t]) = one;
    }
    // pivot coordinates reduce to minus the tail of their basis row
    for (std::size_t r = 0; r < sub.dim(); ++r) {
        std::size_t pc = sub.pivot_cols()[r];
        for (std::size_t t = 0; t < m; ++t)
            q.proj.at(t, pc) = q.proj.at(t, pc) - sub.basis().at(r, q.rep_cols[t]);
    }
    return q;
}

/// One exact solution of m x = rhs (columnwise), or nullopt if inconsistent.
template <field_scalar K>
std::optional<Matrix<K>> solve(const Matrix<K>& m, const Matrix<K>& rhs) {
    if (m.rows() != rhs.rows()) throw InternalError("solve shape mismatch");
    Matrix<K> aug(m.rows(), m.cols() + rhs.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        for (std::size_t c = 0; c < rhs.cols(); ++c) aug.at(r, m.cols() + c) = rhs.at(r, c);
    }
    auto red = rref(aug);
    // any pivot in the rhs block signals inconsistency
    for (auto c : red.pivot_cols)
        if (c >= m.cols()) return std::nullopt;
    Matrix<K> x(m.cols(), rhs.cols());
    for (std::size_t t = 0; t < red.pivot_cols.size(); ++t)
        for (std::size_t c = 0; c < rhs.cols(); ++c)
            x.at(red.pivot_cols[t], c) = red.mat.at(t, m.cols() + c);
    return x;
}

/// Inverse of a square matrix; nullopt when singular.
template <field_scalar K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m, const K& one) {
    if (m.rows() != m.cols()) throw InternalError("inverse of non-square matrix");
    auto x = solve(m, Matrix<K>::identity(m.rows(), one));
    if (!x) return std::nullopt;
    // solve() leaves free coordinates zero; verify invertibility via rank
    if (rref(m).rank != m.rows()) return std::nullopt;
    return x;
}

template <field_scalar K>
std::size_t rank_of(const Matrix<K>& m) {
    return rref(m).rank;
}

/// v ⊗ w under the row-major pair indexing (i_left * dim_right + i_right).
template <field_scalar K>
std::vector<K> tensor_vec(const std::vector<K>& v, const std::vector<K>& w) {
    std::vector<K> r(v.size() * w.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        for (std::size_t j = 0; j < w.size(); ++j) r[i * w.size() + j] = v[i] * w[j];
    }
    return r;
}

}  // namespace nccurve
