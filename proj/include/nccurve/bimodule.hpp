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

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nccurve/base.hpp"
#include "nccurve/fields.hpp"
#include "nccurve/linalg.hpp"
#include "nccurve/poly.hpp"
#include "nccurve/scalar.hpp"

namespace nccurve {

// ---------------------------------------------------------------------------
// k-central K-L bimodules in pure-k form: one k-space of dimension dim and
// the two commuting generator-action matrices. Everything else (duals,
// tensors, quotients) reduces to kernel/quotient computations over k.
// ---------------------------------------------------------------------------

template <field_scalar K>
struct Bimodule {
    ExtFieldPtr<K> left_field;   // K, acting through left_gen
    ExtFieldPtr<K> right_field;  // L, acting through right_gen
    std::size_t dim = 0;         // dimension over the base field k
    Matrix<K> left_gen;
    Matrix<K> right_gen;
    std::string label;
};

/// Matrix of multiplication by `a` on its own field, in the coefficient basis.
template <field_scalar K>
Matrix<K> regular_rep(const FieldElem<K>& a) {
    const auto& f = a.field();
    Matrix<K> m(f->degree, f->degree);
    FieldElem<K> col = a;
    for (int j = 0; j < f->degree; ++j) {
        for (int i = 0; i < f->degree; ++i) m.at(i, j) = col.coeffs()[i];
        if (j + 1 < f->degree) col = col * FieldElem<K>::gen(f);
    }
    return m;
}

/// Evaluates the field's modulus-shaped polynomial at a square matrix.
template <field_scalar K>
Matrix<K> eval_poly_at_matrix(const std::vector<K>& coeffs, const Matrix<K>& m, const K& one) {
    Matrix<K> acc(m.rows(), m.rows());
    Matrix<K> pw = Matrix<K>::identity(m.rows(), one);
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        if (!coeffs[t].is_zero()) acc = acc + pw.scaled(coeffs[t]);
        if (t + 1 < coeffs.size()) pw = m * pw;
    }
    return acc;
}

/// Action matrix of an arbitrary element of the (left or right) field, as the
/// corresponding polynomial in the generator action.
template <field_scalar K>
Matrix<K> action_matrix(const Matrix<K>& gen_action, const FieldElem<K>& a) {
    K one = scalar_one<K>(a.field()->base);
    return eval_poly_at_matrix(a.coeffs(), gen_action, one);
}

/// Construction-time invariants: generator actions commute, satisfy their
/// moduli, and both field degrees divide dim.
template <field_scalar K>
void validate_bimodule(const Bimodule<K>& n) {
    if (n.left_gen.rows() != n.dim || n.left_gen.cols() != n.dim ||
        n.right_gen.rows() != n.dim || n.right_gen.cols() != n.dim)
        throw ValidationError("generator action shape mismatch in " + n.label);
    if (n.dim == 0) return;
    K one = scalar_one<K>(n.left_field->base);
    if (!(n.left_gen * n.right_gen == n.right_gen * n.left_gen))
        throw ValidationError("generator actions of " + n.label + " do not commute");
    if (!eval_poly_at_matrix(n.left_field->modulus, n.left_gen, one).is_zero())
        throw ValidationError("left action of " + n.label + " violates the field modulus");
    if (!eval_poly_at_matrix(n.right_field->modulus, n.right_gen, one).is_zero())
        throw ValidationError("right action of " + n.label + " violates the field modulus");
    if (n.dim % n.left_field->degree != 0 || n.dim % n.right_field->degree != 0)
        throw ValidationError("field degrees do not divide dim_k of " + n.label);
}

/// (m, n) = (dim over the left field, dim over the right field).
template <field_scalar K>
std::pair<long long, long long> dims(const Bimodule<K>& n) {
    if (n.dim == 0) return {0, 0};
    return {static_cast<long long>(n.dim) / n.left_field->degree,
            static_cast<long long>(n.dim) / n.right_field->degree};
}

/// K_sigma: underlying set K, left action by multiplication, right action by
/// multiplication after applying the automorphism.
template <field_scalar K>
Bimodule<K> twist_bimodule(const ExtFieldPtr<K>& f, const FieldHom<K>& sigma,
                           std::string label = "") {
    if (sigma.source() != f || sigma.target() != f)
        throw InvalidAutomorphism("twist requires an automorphism of the field itself");
    Bimodule<K> n;
    n.left_field = f;
    n.right_field = f;
    n.dim = static_cast<std::size_t>(f->degree);
    n.left_gen = regular_rep(FieldElem<K>::gen(f));
    n.right_gen = regular_rep(sigma.apply(FieldElem<K>::gen(f)));
    n.label = label.empty() ? f->label + "_twist" : std::move(label);
    validate_bimodule(n);
    return n;
}

template <field_scalar K>
Bimodule<K> direct_sum(const Bimodule<K>& a, const Bimodule<K>& b) {
    if (a.left_field != b.left_field || a.right_field != b.right_field)
        throw FieldMismatch("direct sum needs matching field pairs");
    Bimodule<K> n;
    n.left_field = a.left_field;
    n.right_field = a.right_field;
    n.dim = a.dim + b.dim;
    n.left_gen = Matrix<K>(n.dim, n.dim);
    n.right_gen = Matrix<K>(n.dim, n.dim);
    for (std::size_t r = 0; r < a.dim; ++r)
        for (std::size_t c = 0; c < a.dim; ++c) {
            n.left_gen.at(r, c) = a.left_gen.at(r, c);
            n.right_gen.at(r, c) = a.right_gen.at(r, c);
        }
    for (std::size_t r = 0; r < b.dim; ++r)
        for (std::size_t c = 0; c < b.dim; ++c) {
            n.left_gen.at(a.dim + r, a.dim + c) = b.left_gen.at(r, c);
            n.right_gen.at(a.dim + r, a.dim + c) = b.right_gen.at(r, c);
        }
    n.label = a.label + "+" + b.label;
    validate_bimodule(n);
    return n;
}

/// K itself as a K-L bimodule along a base-fixing embedding L -> K.
template <field_scalar K>
Bimodule<K> field_as_bimodule(const ExtFieldPtr<K>& big, const ExtFieldPtr<K>& small,
                              const FieldHom<K>& embed, std::string label = "") {
    if (embed.source() != small || embed.target() != big)
        throw InvalidEmbedding("embedding must map the right field into the left field");
    Bimodule<K> n;
    n.left_field = big;
    n.right_field = small;
    n.dim = static_cast<std::size_t>(big->degree);
    n.left_gen = regular_rep(FieldElem<K>::gen(big));
    n.right_gen = regular_rep(embed.apply(FieldElem<K>::gen(small)));
    n.label = label.empty() ? big->label + "_over_" + small->label : std::move(label);
    validate_bimodule(n);
    return n;
}

/// V(lambda): underlying space a relative extension E of K, left action by
/// multiplication inside E, right action v.x = v*lambda(x). The basis is
/// x^s y^t with flat index t*[K:k] + s.
template <field_scalar K>
Bimodule<K> simple_from_embedding(const ExtFieldPtr<K>& field, const RelExtension<K>& ext,
                                  const typename RelExtension<K>::Elem& lambda_image,
                                  std::string label = "") {
    if (ext.over != field) throw InvalidEmbedding("extension is not presented over the field");
    if (!ext.is_zero(ext.eval_lifted(
            [&] {
                std::vector<FieldElem<K>> lifted;
                for (const auto& c : field->modulus)
                    lifted.push_back(FieldElem<K>(field, std::vector<K>{c}));
                return lifted;
            }(),
            lambda_image)))
        throw InvalidEmbedding("lambda image is not a root of the field modulus");

    int dk = field->degree, de = ext.rel_degree;
    std::size_t dim = static_cast<std::size_t>(dk) * de;
    auto flatten = [&](const typename RelExtension<K>::Elem& e) {
        std::vector<K> v(dim, scalar_zero<K>(field->base));
        for (int t = 0; t < de; ++t)
            for (int s = 0; s < dk; ++s) v[static_cast<std::size_t>(t) * dk + s] = e[t].coeffs()[s];
        return v;
    };
    auto basis_elem = [&](int t, int s) {
        auto e = ext.zero();
        std::vector<K> c(dk, scalar_zero<K>(field->base));
        c[s] = scalar_one<K>(field->base);
        e[t] = FieldElem<K>(field, std::move(c));
        return e;
    };

    Bimodule<K> n;
    n.left_field = field;
    n.right_field = field;
    n.dim = dim;
    n.left_gen = Matrix<K>(dim, dim);
    n.right_gen = Matrix<K>(dim, dim);
    auto gen_in_ext = ext.from_base(FieldElem<K>::gen(field));
    for (int t = 0; t < de; ++t)
        for (int s = 0; s < dk; ++s) {
            std::size_t col = static_cast<std::size_t>(t) * dk + s;
            auto b = basis_elem(t, s);
            auto lcol = flatten(ext.mul(gen_in_ext, b));
            auto rcol = flatten(ext.mul(b, lambda_image));
            for (std::size_t r = 0; r < dim; ++r) {
                n.left_gen.at(r, col) = lcol[r];
                n.right_gen.at(r, col) = rcol[r];
            }
        }
    n.label = label.empty() ? "V(" + ext.label + ")" : std::move(label);
    validate_bimodule(n);
    return n;
}

template <field_scalar K>
Bimodule<K> raw_bimodule(ExtFieldPtr<K> left, ExtFieldPtr<K> right, std::size_t dim,
                         Matrix<K> left_gen, Matrix<K> right_gen, std::string label) {
    Bimodule<K> n{std::move(left), std::move(right), dim,
                  std::move(left_gen), std::move(right_gen), std::move(label)};
    validate_bimodule(n);
    return n;
}

// ---------------------------------------------------------------------------
// Free one-sided bases. The greedy scan picks the first standard basis vector
// outside the span of the orbits of the vectors already chosen, so the result
// is deterministic; a permutation can reorder the scan for the
// basis-independence checks.
// ---------------------------------------------------------------------------

template <field_scalar K>
struct FreeBasis {
    Matrix<K> vectors;    // one basis vector per row, n rows
    Matrix<K> to_coords;  // dim x dim: k-iso splitting N into field-coordinate blocks
};

namespace detail {

template <field_scalar K>
FreeBasis<K> one_sided_basis(const Bimodule<K>& n, const Matrix<K>& gen_action, int field_degree,
                             const std::vector<std::size_t>& scan_order) {
    std::size_t count = n.dim / static_cast<std::size_t>(field_degree);
    K one = scalar_one<K>(n.left_field->base);
    Subspace<K> span(n.dim);
    std::vector<std::vector<K>> chosen;
    for (std::size_t idx : scan_order) {
        if (chosen.size() == count) break;
        std::vector<K> e(n.dim);
        e[idx] = one;
        if (span.contains(e)) continue;
        chosen.push_back(e);
        // absorb the full field orbit of the new vector
        Matrix<K> stack(span.dim() + static_cast<std::size_t>(field_degree), n.dim);
        for (std::size_t r = 0; r < span.dim(); ++r) stack.set_row(r, span.basis().row(r));
        std::vector<K> orbit = e;
        for (int t = 0; t < field_degree; ++t) {
            stack.set_row(span.dim() + static_cast<std::size_t>(t), orbit);
            if (t + 1 < field_degree) orbit = gen_action.apply(orbit);
        }
        span = Subspace<K>::span(stack);
    }
    if (chosen.size() != count || span.dim() != n.dim)
        throw InternalError("free basis extraction failed for " + n.label);
    FreeBasis<K> fb;
    fb.vectors = Matrix<K>(count, n.dim);
    for (std::size_t j = 0; j < count; ++j) fb.vectors.set_row(j, chosen[j]);
    Matrix<K> iso(n.dim, n.dim);  // columns (j,t): gen^t * v_j
    for (std::size_t j = 0; j < count; ++j) {
        std::vector<K> v = chosen[j];
        for (int t = 0; t < field_degree; ++t) {
            std::size_t col = j * static_cast<std::size_t>(field_degree) + static_cast<std::size_t>(t);
            for (std::size_t r = 0; r < n.dim; ++r) iso.at(r, col) = v[r];
            if (t + 1 < field_degree) v = gen_action.apply(v);
        }
    }
    auto inv = inverse(iso, one);
    if (!inv) throw InternalError("free-basis coordinate map is singular for " + n.label);
    fb.to_coords = std::move(*inv);
    return fb;
}

inline std::vector<std::size_t> default_scan(std::size_t dim) {
    std::vector<std::size_t> s(dim);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

}  // namespace detail

/// N = ⊕ v_j · L: a free basis for the right field action.
template <field_scalar K>
FreeBasis<K> right_basis(const Bimodule<K>& n, const std::vector<std::size_t>& scan = {}) {
    return detail::one_sided_basis(n, n.right_gen, n.right_field->degree,
                                   scan.empty() ? detail::default_scan(n.dim) : scan);
}

/// N = ⊕ K · w_j: a free basis for the left field action.
template <field_scalar K>
FreeBasis<K> left_basis(const Bimodule<K>& n, const std::vector<std::size_t>& scan = {}) {
    return detail::one_sided_basis(n, n.left_gen, n.left_field->degree,
                                   scan.empty() ? detail::default_scan(n.dim) : scan);
}

/// Reads off the field-coordinate blocks of v relative to a free basis.
template <field_scalar K>
std::vector<FieldElem<K>> basis_coordinates(const FreeBasis<K>& fb, const ExtFieldPtr<K>& f,
                                            const std::vector<K>& v) {
    std::vector<K> flat = fb.to_coords.apply(v);
    std::size_t count = flat.size() / static_cast<std::size_t>(f->degree);
    std::vector<FieldElem<K>> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        std::vector<K> c(flat.begin() + j * f->degree, flat.begin() + (j + 1) * f->degree);
        out.emplace_back(f, std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Duals. Coordinates of a functional are its values on the free basis,
// blockwise over the value field.
// ---------------------------------------------------------------------------

template <field_scalar K>
struct DualData {
    Bimodule<K> dual;
    FreeBasis<K> host_basis;  // the free basis of the host the coordinates refer to
};

/// Right dual Hom_L(N_L, L) with (a.psi.b)(v) = a psi(b v), an L-K bimodule.
template <field_scalar K>
DualData<K> right_dual_full(const Bimodule<K>& n, const std::vector<std::size_t>& scan = {}) {
    const auto& l = n.right_field;
    const auto& kf = n.left_field;
    FreeBasis<K> fb = right_basis(n, scan);
    std::size_t count = n.dim / static_cast<std::size_t>(l->degree);

    Bimodule<K> d;
    d.left_field = l;
    d.right_field = kf;
    d.dim = n.dim;
    d.label = n.label + "*";
    // left action of L: post-multiply each value
    d.left_gen = Matrix<K>(n.dim, n.dim);
    Matrix<K> reg_l = regular_rep(FieldElem<K>::gen(l));
    for (std::size_t j = 0; j < count; ++j)
        for (int r = 0; r < l->degree; ++r)
            for (int c = 0; c < l->degree; ++c)
                d.left_gen.at(j * l->degree + r, j * l->degree + c) = reg_l.at(r, c);
    // right action of K: pre-compose with the left action on the host
    d.right_gen = Matrix<K>(n.dim, n.dim);
    for (std::size_t j = 0; j < count; ++j) {
        auto moved = n.left_gen.apply(fb.vectors.row(j));
        auto coords = basis_coordinates(fb, l, moved);  // g_K . v_j = sum_t v_t c_tj
        for (std::size_t t = 0; t < count; ++t) {
            Matrix<K> blk = regular_rep(coords[t]);
            for (int r = 0; r < l->degree; ++r)
                for (int c = 0; c < l->degree; ++c)
                    d.right_gen.at(j * l->degree + r, t * l->degree + c) = blk.at(r, c);
        }
    }
    validate_bimodule(d);
    return {std::move(d), std::move(fb)};
}

/// Left dual Hom_K(N, K) with (a.phi.b)(v) = b phi(v a), an L-K bimodule.
template <field_scalar K>
DualData<K> left_dual_full(const Bimodule<K>& n, const std::vector<std::size_t>& scan = {}) {
    const auto& l = n.right_field;
    const auto& kf = n.left_field;
    FreeBasis<K> fb = left_basis(n, scan);
    std::size_t count = n.dim / static_cast<std::size_t>(kf->degree);

    Bimodule<K> d;
    d.left_field = l;
    d.right_field = kf;
    d.dim = n.dim;
    d.label = "*" + n.label;
    // right action of K: post-multiply each value
    d.right_gen = Matrix<K>(n.dim, n.dim);
    Matrix<K> reg_k = regular_rep(FieldElem<K>::gen(kf));
    for (std::size_t j = 0; j < count; ++j)
        for (int r = 0; r < kf->degree; ++r)
            for (int c = 0; c < kf->degree; ++c)
                d.right_gen.at(j * kf->degree + r, j * kf->degree + c) = reg_k.at(r, c);
    // left action of L: pre-compose with the right action on the host
    d.left_gen = Matrix<K>(n.dim, n.dim);
    for (std::size_t j = 0; j < count; ++j) {
        auto moved = n.right_gen.apply(fb.vectors.row(j));
        auto coords = basis_coordinates(fb, kf, moved);  // v_j . g_L = sum_t c_tj v_t
        for (std::size_t t = 0; t < count; ++t) {
            Matrix<K> blk = regular_rep(coords[t]);
            for (int r = 0; r < kf->degree; ++r)
                for (int c = 0; c < kf->degree; ++c)
                    d.left_gen.at(j * kf->degree + r, t * kf->degree + c) = blk.at(r, c);
        }
    }
    validate_bimodule(d);
    return {std::move(d), std::move(fb)};
}

template <field_scalar K>
Bimodule<K> right_dual(const Bimodule<K>& n) {
    return right_dual_full(n).dual;
}

template <field_scalar K>
Bimodule<K> left_dual(const Bimodule<K>& n) {
    return left_dual_full(n).dual;
}

/// Memoized chain of iterated duals N^{i*}: right duals rightward (i > 0),
/// left duals leftward (i < 0).
template <field_scalar K>
class DualChain {
public:
    explicit DualChain(Bimodule<K> n) { cache_.emplace(0, std::move(n)); }

    const Bimodule<K>& at(int i) const {
        std::lock_guard<std::mutex> lock(m_);
        return at_locked(i);
    }

private:
    const Bimodule<K>& at_locked(int i) const {
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
        Bimodule<K> next = i > 0 ? right_dual(at_locked(i - 1)) : left_dual(at_locked(i + 1));
        next.label = "N^{" + std::to_string(i) + "*}";
        return cache_.emplace(i, std::move(next)).first->second;
    }

    mutable std::map<int, Bimodule<K>> cache_;
    mutable std::mutex m_;
};

// ---------------------------------------------------------------------------
// Tensor products over the middle field: (A ⊗_k B) / balancing relations,
// with explicit projection and section for the quotient coordinates.
// ---------------------------------------------------------------------------

template <field_scalar K>
struct TensorResult {
    Bimodule<K> space;
    Matrix<K> proj;  // dim(space) x dim(A)*dim(B)
    Matrix<K> lift;  // dim(A)*dim(B) x dim(space), proj*lift = id
};

template <field_scalar K>
TensorResult<K> tensor_full(const Bimodule<K>& a, const Bimodule<K>& b) {
    if (a.right_field != b.left_field)
        throw FieldMismatch("tensor middle fields disagree: " + a.label + " vs " + b.label);
    const auto& mid = a.right_field;
    K one = scalar_one<K>(mid->base);
    std::size_t amb = a.dim * b.dim;

    // balancing relations v.g ⊗ w - v ⊗ g.w over all standard basis pairs
    Matrix<K> rel(amb, amb);
    for (std::size_t s = 0; s < a.dim; ++s) {
        std::vector<K> es(a.dim);
        es[s] = one;
        std::vector<K> vs = a.right_gen.apply(es);
        for (std::size_t t = 0; t < b.dim; ++t) {
            std::vector<K> et(b.dim);
            et[t] = one;
            std::vector<K> wt = b.left_gen.apply(et);
            std::vector<K> row = tensor_vec(vs, et);
            std::vector<K> sub = tensor_vec(es, wt);
            for (std::size_t c = 0; c < amb; ++c) row[c] = row[c] - sub[c];
            rel.set_row(s * b.dim + t, row);
        }
    }
    Subspace<K> balance = Subspace<K>::span(rel);
    auto q = quotient_maps(balance, one);

    TensorResult<K> r;
    r.proj = std::move(q.proj);
    r.lift = std::move(q.lift);
    Bimodule<K>& c = r.space;
    c.left_field = a.left_field;
    c.right_field = b.right_field;
    c.dim = amb - balance.dim();
    c.label = a.label + "(x)" + b.label;
    if (mid->degree > 0 && (a.dim * b.dim) % static_cast<std::size_t>(mid->degree) != 0)
        throw InternalError("tensor dimension law violated");
    if (c.dim != a.dim * b.dim / static_cast<std::size_t>(mid->degree))
        throw InternalError("balanced tensor has unexpected dimension for " + c.label);

    // descend the outer actions through the quotient
    Matrix<K> left_amb(amb, amb), right_amb(amb, amb);
    for (std::size_t s = 0; s < a.dim; ++s)
        for (std::size_t t = 0; t < b.dim; ++t) {
            std::size_t col = s * b.dim + t;
            for (std::size_t r2 = 0; r2 < a.dim; ++r2)
                left_amb.at(r2 * b.dim + t, col) = a.left_gen.at(r2, s);
            for (std::size_t r2 = 0; r2 < b.dim; ++r2)
                right_amb.at(s * b.dim + r2, col) = b.right_gen.at(r2, t);
        }
    c.left_gen = r.proj * (left_amb * r.lift);
    c.right_gen = r.proj * (right_amb * r.lift);
    validate_bimodule(c);
    return r;
}

template <field_scalar K>
Bimodule<K> tensor(const Bimodule<K>& a, const Bimodule<K>& b) {
    return tensor_full(a, b).space;
}

// ---------------------------------------------------------------------------
// Dual basis pairs and the canonical relation element.
// ---------------------------------------------------------------------------

template <field_scalar K>
struct DualBasisPair {
    Matrix<K> right_basis;      // rows: the phi_j, vectors in N^{i*}
    Matrix<K> dual_left_basis;  // rows: the f_j, vectors in N^{(i+1)*}
};

/// Evaluates a right functional (coordinates in host's dual) at a host vector.
template <field_scalar K>
FieldElem<K> evaluate_functional(const Bimodule<K>& host, const FreeBasis<K>& fb,
                                 const std::vector<K>& functional, const std::vector<K>& v) {
    const auto& l = host.right_field;
    auto vals = [&] {
        std::vector<FieldElem<K>> out;
        std::size_t count = host.dim / static_cast<std::size_t>(l->degree);
        for (std::size_t j = 0; j < count; ++j) {
            std::vector<K> c(functional.begin() + j * l->degree,
                             functional.begin() + (j + 1) * l->degree);
            out.emplace_back(l, std::move(c));
        }
        return out;
    }();
    auto coords = basis_coordinates(fb, l, v);
    FieldElem<K> acc = FieldElem<K>::zero(l);
    for (std::size_t j = 0; j < vals.size(); ++j) acc = acc + vals[j] * coords[j];
    return acc;
}

/// A right basis {phi_j} of N^{i*} together with the dual left basis {f_j} of
/// N^{(i+1)*}. Coordinates on N^{(i+1)*} are always the ones induced by the
/// default greedy basis (the coordinatization the dual chain uses), so pairs
/// produced with different scan orders are directly comparable; for the
/// default scan the f_j are the unit block vectors. The Kronecker pairing is
/// checked before returning.
template <field_scalar K>
DualBasisPair<K> dual_basis_pair(const DualChain<K>& chain, int i,
                                 const std::vector<std::size_t>& scan = {}) {
    const Bimodule<K>& host = chain.at(i);
    const auto& l = host.right_field;
    std::size_t count = host.dim / static_cast<std::size_t>(l->degree);
    FreeBasis<K> fb_def = right_basis(host);
    FreeBasis<K> fb_scan = scan.empty() ? fb_def : right_basis(host, scan);

    DualBasisPair<K> pair;
    pair.right_basis = fb_scan.vectors;
    // f_j(v_t) is the j-th scan-basis coordinate of the default basis vector v_t
    pair.dual_left_basis = Matrix<K>(count, host.dim);
    for (std::size_t t = 0; t < count; ++t) {
        auto coords = basis_coordinates(fb_scan, l, fb_def.vectors.row(t));
        for (std::size_t j = 0; j < count; ++j)
            for (int d = 0; d < l->degree; ++d)
                pair.dual_left_basis.at(j, t * static_cast<std::size_t>(l->degree) + d) =
                    coords[j].coeffs()[d];
    }
    for (std::size_t s = 0; s < count; ++s)
        for (std::size_t j = 0; j < count; ++j) {
            auto val = evaluate_functional(host, fb_def, pair.dual_left_basis.row(j),
                                           pair.right_basis.row(s));
            bool want_one = s == j;
            if (val != (want_one ? FieldElem<K>::one(l) : FieldElem<K>::zero(l)))
                throw InternalError("dual basis pairing failed");
        }
    return pair;
}

template <field_scalar K>
struct CanonicalRelation {
    std::vector<K> element;  // sum phi_j ⊗ f_j in tensor coordinates
    Subspace<K> span;        // Q_i, the left field span of the element
};

/// The canonical element of N^{i*} ⊗ N^{(i+1)*} and its one-generator
/// sub-bimodule Q_i (dimension [F_i : k] over k).
template <field_scalar K>
CanonicalRelation<K> canonical_relation(const DualChain<K>& chain, int i,
                                        const TensorResult<K>& t,
                                        const std::vector<std::size_t>& scan = {}) {
    DualBasisPair<K> pair = dual_basis_pair(chain, i, scan);
    const Bimodule<K>& left_part = chain.at(i);
    std::size_t amb = t.proj.cols();
    if (amb != left_part.dim * chain.at(i + 1).dim)
        throw AmbientMismatch("tensor does not match the dual chain at index " +
                              std::to_string(i));
    CanonicalRelation<K> rel;
    std::vector<K> elem(t.proj.rows());
    for (std::size_t j = 0; j < pair.right_basis.rows(); ++j) {
        auto term = t.proj.apply(tensor_vec(pair.right_basis.row(j), pair.dual_left_basis.row(j)));
        for (std::size_t c = 0; c < elem.size(); ++c) elem[c] = elem[c] + term[c];
    }
    rel.element = elem;
    const auto& fi = left_part.left_field;
    std::vector<std::vector<K>> orbit;
    std::vector<K> cur = elem;
    for (int pw = 0; pw < fi->degree; ++pw) {
        orbit.push_back(cur);
        if (pw + 1 < fi->degree) cur = t.space.left_gen.apply(cur);
    }
    rel.span = Subspace<K>::span_of_vectors(t.space.dim, orbit);
    if (rel.span.dim() != static_cast<std::size_t>(fi->degree))
        throw InternalError("canonical relation span has wrong dimension");
    return rel;
}

// ---------------------------------------------------------------------------
// Decomposition over the semisimple algebra K ⊗_k L (prime backend) and
// isomorphism testing.
// ---------------------------------------------------------------------------

struct MultiplicityVector {
    struct Factor {
        std::vector<std::vector<long long>> poly;  // factor coefficients, lifted
        long long degree_over_k = 0;
        long long multiplicity = 0;
    };
    std::vector<Factor> factors;

    bool operator==(const MultiplicityVector& o) const {
        if (factors.size() != o.factors.size()) return false;
        for (std::size_t t = 0; t < factors.size(); ++t) {
            if (factors[t].poly != o.factors[t].poly ||
                factors[t].degree_over_k != o.factors[t].degree_over_k ||
                factors[t].multiplicity != o.factors[t].multiplicity)
                return false;
        }
        return true;
    }
    bool operator!=(const MultiplicityVector& o) const { return !(*this == o); }

    long long total_dim() const {
        long long s = 0;
        for (const auto& f : factors) s += f.degree_over_k * f.multiplicity;
        return s;
    }
};

/// Canonical integer lift of a base scalar (prime backend only).
template <class K>
long long lift_value(const K& x);
template <>
inline long long lift_value<Fp>(const Fp& x) {
    return x.lift();
}
template <>
inline long long lift_value<Rat>(const Rat&) {
    throw UnsupportedBackend("no canonical integer lift over Q");
}

/// Multiplicities of N over the primitive idempotents of K ⊗_k L, computed by
/// factoring the left modulus over the right field and taking kernels of the
/// factor evaluations. Factors are reported in a canonical sorted order and
/// zero multiplicities are kept, so equal vectors mean isomorphic modules.
template <field_scalar K>
MultiplicityVector decompose(const Bimodule<K>& n) {
    if (!n.left_field->base.is_prime)
        throw UnsupportedBackend("decompose needs the prime backend (no factor data on Q)");
    const auto& l = n.right_field;
    auto lifted = lift_poly<K>(n.left_field->modulus, l);
    auto factors = poly::factor_distinct(lifted, element_enumerator<K>(l));

    // canonical order: (degree, lexicographic lifted coefficients)
    auto lift_of = [&](const poly::Poly<FieldElem<K>>& f) {
        std::vector<std::vector<long long>> rows;
        for (const auto& c : f) {
            std::vector<long long> row;
            for (const auto& x : c.coeffs()) row.push_back(lift_value(x));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    std::sort(factors.begin(), factors.end(),
              [&](const auto& f, const auto& g) {
                  if (f.size() != g.size()) return f.size() < g.size();
                  return lift_of(f) < lift_of(g);
              });

    MultiplicityVector mv;
    K one = scalar_one<K>(n.left_field->base);
    for (const auto& f : factors) {
        // evaluate the factor at the left generator action, coefficients
        // acting through the right structure
        Matrix<K> acc(n.dim, n.dim);
        Matrix<K> pw = Matrix<K>::identity(n.dim, one);
        for (std::size_t t = 0; t < f.size(); ++t) {
            if (!f[t].is_zero()) acc = acc + action_matrix(n.right_gen, f[t]) * pw;
            if (t + 1 < f.size()) pw = n.left_gen * pw;
        }
        std::size_t kdim = kernel(acc, one).dim();
        long long fdeg = static_cast<long long>(poly::degree(f)) * l->degree;
        if (kdim % static_cast<std::size_t>(fdeg) != 0)
            throw InternalError("factor kernel dimension is not a multiple of the factor degree");
        MultiplicityVector::Factor out;
        out.poly = lift_of(f);
        out.degree_over_k = fdeg;
        out.multiplicity = static_cast<long long>(kdim) / fdeg;
        mv.factors.push_back(std::move(out));
    }
    if (mv.total_dim() != static_cast<long long>(n.dim))
        throw InternalError("multiplicities do not add up to dim_k");
    return mv;
}

/// Intertwiner space {T : T L_A = L_B T, T R_A = R_B T} as a canonical
/// subspace of k^(dimB*dimA); entry (r, c) of T sits at index r*dimA + c.
template <field_scalar K>
Subspace<K> hom_space(const Bimodule<K>& a, const Bimodule<K>& b) {
    if (a.left_field != b.left_field || a.right_field != b.right_field)
        throw FieldMismatch("hom space needs matching field pairs");
    std::size_t da = a.dim, db = b.dim, unknowns = da * db;
    if (unknowns == 0) return Subspace<K>(0);
    K one = scalar_one<K>(a.left_field->base);
    Matrix<K> sys(2 * unknowns, unknowns);
    auto emit = [&](std::size_t block, const Matrix<K>& ga, const Matrix<K>& gb) {
        // (T ga - gb T)[r][c] as a linear form in T entries
        for (std::size_t r = 0; r < db; ++r)
            for (std::size_t c = 0; c < da; ++c) {
                std::size_t row = block * unknowns + r * da + c;
                for (std::size_t s = 0; s < da; ++s)
                    sys.at(row, r * da + s) = sys.at(row, r * da + s) + ga.at(s, c);
                for (std::size_t s = 0; s < db; ++s)
                    sys.at(row, s * da + c) = sys.at(row, s * da + c) - gb.at(r, s);
            }
    };
    emit(0, a.left_gen, b.left_gen);
    emit(1, a.right_gen, b.right_gen);
    return kernel(sys, one);
}

/// Searches the span of the intertwiner basis for an invertible map,
/// scanning coefficient tuples over a deterministic grid. On the prime
/// backend the grid is all of F_p; over Q the grid 0..max(dim) is exhaustive
/// for the decision because det is a polynomial of per-variable degree <= dim.
template <field_scalar K>
std::optional<Matrix<K>> find_invertible_intertwiner(const Bimodule<K>& a, const Bimodule<K>& b,
                                                     const Subspace<K>& homs,
                                                     long long budget = 1'000'000) {
    std::size_t h = homs.dim();
    if (h == 0) return std::nullopt;
    std::size_t da = a.dim, db = b.dim;
    if (da != db) return std::nullopt;
    const BaseField& base = a.left_field->base;
    long long grid = base.is_prime ? base.p : static_cast<long long>(da) + 1;
    double total = 1;
    for (std::size_t t = 0; t < h; ++t) total *= static_cast<double>(grid);
    if (total > static_cast<double>(budget))
        throw BudgetExceeded("intertwiner scan of size " + std::to_string(total) +
                             " exceeds budget " + std::to_string(budget));

    std::vector<Matrix<K>> basis;
    for (std::size_t t = 0; t < h; ++t) {
        Matrix<K> m(db, da);
        for (std::size_t r = 0; r < db; ++r)
            for (std::size_t c = 0; c < da; ++c) m.at(r, c) = homs.basis().at(t, r * da + c);
        basis.push_back(std::move(m));
    }
    std::vector<long long> digits(h, 0);
    for (;;) {
        Matrix<K> cand(db, da);
        bool nonzero = false;
        for (std::size_t t = 0; t < h; ++t) {
            if (digits[t] == 0) continue;
            nonzero = true;
            cand = cand + basis[t].scaled(scalar_from_int<K>(base, digits[t]));
        }
        if (nonzero && rank_of(cand) == da) return cand;
        std::size_t pos = 0;
        while (pos < h && ++digits[pos] == grid) digits[pos++] = 0;
        if (pos == h) return std::nullopt;
    }
}

/// Isomorphism test. Prime backend: equality of multiplicity vectors over the
/// semisimple algebra K ⊗_k L. Rational backend: the intertwiner route, with
/// the dimension criterion dim hom(A,B) = dim hom(A,A) = dim hom(B,B) as the
/// decision (valid by semisimplicity of K ⊗_k L in characteristic zero) and a
/// found invertible intertwiner as the witness.
template <field_scalar K>
bool is_isomorphic(const Bimodule<K>& a, const Bimodule<K>& b) {
    if (a.left_field != b.left_field || a.right_field != b.right_field)
        throw FieldMismatch("isomorphism test needs matching field pairs");
    if (a.dim != b.dim) return false;
    if (a.dim == 0) return true;
    if (a.left_field->base.is_prime) return decompose(a) == decompose(b);
    Subspace<K> homs = hom_space(a, b);
    std::size_t dab = homs.dim();
    std::size_t daa = hom_space(a, a).dim();
    std::size_t dbb = hom_space(b, b).dim();
    bool iso = dab == daa && dab == dbb;
    if (iso) {
        auto witness = find_invertible_intertwiner(a, b, homs);
        if (!witness) throw InternalError("isomorphic modules without invertible intertwiner");
    }
    return iso;
}

}  // namespace nccurve
