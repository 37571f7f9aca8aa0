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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nccurve/base.hpp"
#include "nccurve/linalg.hpp"
#include "nccurve/poly.hpp"
#include "nccurve/scalar.hpp"

namespace nccurve {

// ---------------------------------------------------------------------------
// Extension fields K = k[x]/(modulus) over the base field k.
// ---------------------------------------------------------------------------

template <field_scalar K>
struct ExtFieldData {
    BaseField base;
    std::vector<K> modulus;  // monic, size degree+1
    int degree = 0;
    std::string label;
};

template <field_scalar K>
using ExtFieldPtr = std::shared_ptr<const ExtFieldData<K>>;

namespace detail {

template <field_scalar K>
poly::Enumerator<K> base_enumerator(const BaseField& base) {
    if (!base.is_prime)
        throw UnsupportedBackend("element enumeration requires a finite base field");
    long long p = base.p;
    return [p](const std::function<void(const K&)>& fn) {
        for (long long v = 0; v < p; ++v) fn(scalar_from_int<K>(BaseField::prime(p), v));
    };
}

/// Lexicographically smallest monic irreducible of the given degree over F_p:
/// non-leading coefficients (c_{d-1},...,c_0) ascend as base-p counters.
template <field_scalar K>
std::vector<K> smallest_irreducible(const BaseField& base, int degree) {
    auto enumerate = base_enumerator<K>(base);
    K one = scalar_one<K>(base);
    std::vector<K> found;
    poly::enumerate_monic<K>(degree, one, enumerate, [&](const poly::Poly<K>& f) {
        if (poly::is_irreducible(f, enumerate)) {
            found = f;
            return false;
        }
        return true;
    });
    if (found.empty())
        throw InternalError("no irreducible polynomial found (impossible over F_p)");
    return found;
}

}  // namespace detail

/// Builds k[x]/(modulus). Prime backend: an omitted modulus selects the
/// lexicographically smallest monic irreducible (deterministic), a supplied
/// one is checked for irreducibility. Rational backend: modulus is mandatory
/// and the field property is only verified lazily, on the first failed
/// inversion.
template <field_scalar K>
ExtFieldPtr<K> make_extension(const BaseField& base, int degree,
                              std::vector<K> modulus = {}, std::string label = "") {
    validate_base(base);
    if (degree < 1) throw ValidationError("extension degree must be positive");
    if (modulus.empty()) {
        if (!base.is_prime)
            throw ModulusRequired("the rational backend cannot search for irreducibles");
        modulus = detail::smallest_irreducible<K>(base, degree);
    } else {
        modulus = poly::trimmed(std::move(modulus));
        if (poly::degree(modulus) != degree)
            throw ValidationError("modulus degree does not match the declared degree");
        if (!(modulus.back() == scalar_one<K>(base)))
            throw ValidationError("modulus must be monic");
        if (base.is_prime &&
            !poly::is_irreducible(modulus, detail::base_enumerator<K>(base)))
            throw NotIrreducible("modulus is reducible over " + base.describe());
    }
    auto data = std::make_shared<ExtFieldData<K>>();
    data->base = base;
    data->modulus = std::move(modulus);
    data->degree = degree;
    data->label = label.empty() ? base.describe() + "[x]/deg" + std::to_string(degree)
                                : std::move(label);
    return data;
}

// ---------------------------------------------------------------------------
// Field elements: fully reduced coefficient vectors.
// ---------------------------------------------------------------------------

template <field_scalar K>
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(ExtFieldPtr<K> field, std::vector<K> coeffs)
        : field_(std::move(field)), c_(std::move(coeffs)) {
        reduce();
    }

    static FieldElem zero(const ExtFieldPtr<K>& f) {
        return FieldElem(f, std::vector<K>(f->degree, scalar_zero<K>(f->base)));
    }
    static FieldElem one(const ExtFieldPtr<K>& f) {
        auto c = std::vector<K>(f->degree, scalar_zero<K>(f->base));
        c[0] = scalar_one<K>(f->base);
        return FieldElem(f, std::move(c));
    }
    /// The class of x, i.e. the distinguished generator. For a degree-1
    /// extension this is the root -c0 of the linear modulus.
    static FieldElem gen(const ExtFieldPtr<K>& f) {
        auto c = std::vector<K>(f->degree, scalar_zero<K>(f->base));
        if (f->degree > 1) c[1] = scalar_one<K>(f->base);
        else c[0] = -f->modulus[0];
        return FieldElem(f, std::move(c));
    }
    static FieldElem from_int(const ExtFieldPtr<K>& f, long long n) {
        auto c = std::vector<K>(f->degree, scalar_zero<K>(f->base));
        c[0] = scalar_from_int<K>(f->base, n);
        return FieldElem(f, std::move(c));
    }

    const ExtFieldPtr<K>& field() const { return field_; }
    const std::vector<K>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }
    FieldElem zero_like() const { return zero(field_); }
    FieldElem one_like() const { return one(field_); }

    friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
        a.check_same(b);
        std::vector<K> c(a.c_.size());
        for (std::size_t t = 0; t < c.size(); ++t) c[t] = a.c_[t] + b.c_[t];
        return FieldElem(a.field_, std::move(c));
    }
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
        a.check_same(b);
        std::vector<K> c(a.c_.size());
        for (std::size_t t = 0; t < c.size(); ++t) c[t] = a.c_[t] - b.c_[t];
        return FieldElem(a.field_, std::move(c));
    }
    FieldElem operator-() const {
        std::vector<K> c(c_.size());
        for (std::size_t t = 0; t < c.size(); ++t) c[t] = -c_[t];
        return FieldElem(field_, std::move(c));
    }
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
        a.check_same(b);
        auto prod = poly::mod(poly::mul(poly::Poly<K>(a.c_), poly::Poly<K>(b.c_)),
                              a.field_->modulus);
        prod.resize(a.field_->degree, scalar_zero<K>(a.field_->base));
        return FieldElem(a.field_, std::move(prod));
    }
    friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }

    /// Inverse by extended Euclid. A nonzero noninvertible element proves the
    /// modulus reducible, which the prime backend has excluded up front; on
    /// the rational backend it surfaces here as NotAField.
    FieldElem inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of 0 in " + field_->label);
        auto [g, u] = poly::half_ext_gcd(poly::Poly<K>(c_), field_->modulus);
        if (poly::degree(g) != 0)
            throw NotAField(field_->label + " has a zero divisor; its modulus is reducible");
        auto inv = poly::mod(u, field_->modulus);
        inv.resize(field_->degree, scalar_zero<K>(field_->base));
        return FieldElem(field_, std::move(inv));
    }

    FieldElem pow(long long e) const {
        if (e < 0) return inverse().pow(-e);
        auto r = poly::powmod(poly::Poly<K>(c_), e, field_->modulus);
        r.resize(field_->degree, scalar_zero<K>(field_->base));
        return FieldElem(field_, std::move(r));
    }

    bool operator==(const FieldElem& o) const {
        check_same(o);
        for (std::size_t t = 0; t < c_.size(); ++t)
            if (!(c_[t] == o.c_[t])) return false;
        return true;
    }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = "[";
        for (std::size_t t = 0; t < c_.size(); ++t) s += (t ? "," : "") + c_[t].str();
        return s + "]";
    }

private:
    void reduce() {
        if (!field_) throw InternalError("element without a parent field");
        poly::Poly<K> f(c_);
        f = poly::mod(f, field_->modulus);
        f.resize(field_->degree, scalar_zero<K>(field_->base));
        c_ = std::move(f);
    }
    void check_same(const FieldElem& o) const {
        if (field_ != o.field_)
            throw FieldMismatch("elements of distinct fields: " + field_->label + " vs " +
                                o.field_->label);
    }

    ExtFieldPtr<K> field_;
    std::vector<K> c_;
};

/// Enumerates all elements of a finite extension field, coefficient vectors
/// counting up in base p (constant coefficient fastest).
template <field_scalar K>
void enumerate_elements(const ExtFieldPtr<K>& f, const std::function<void(const FieldElem<K>&)>& fn) {
    if (!f->base.is_prime)
        throw UnsupportedBackend("cannot enumerate an infinite field");
    long long p = f->base.p;
    std::vector<long long> digits(f->degree, 0);
    for (;;) {
        std::vector<K> c(f->degree);
        for (int t = 0; t < f->degree; ++t) c[t] = scalar_from_int<K>(f->base, digits[t]);
        fn(FieldElem<K>(f, std::move(c)));
        int pos = 0;
        while (pos < f->degree && ++digits[pos] == p) digits[pos++] = 0;
        if (pos == f->degree) return;
    }
}

template <field_scalar K>
poly::Enumerator<FieldElem<K>> element_enumerator(const ExtFieldPtr<K>& f) {
    return [f](const std::function<void(const FieldElem<K>&)>& fn) {
        enumerate_elements<K>(f, fn);
    };
}

/// Lifts a base-field polynomial to coefficients in an extension of it.
template <field_scalar K>
poly::Poly<FieldElem<K>> lift_poly(const std::vector<K>& f, const ExtFieldPtr<K>& target) {
    poly::Poly<FieldElem<K>> out;
    out.reserve(f.size());
    for (const auto& c : f) {
        auto v = std::vector<K>(target->degree, scalar_zero<K>(target->base));
        v[0] = c;
        out.emplace_back(target, std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Base-fixing homomorphisms between extensions.
// ---------------------------------------------------------------------------

template <field_scalar K>
class FieldHom {
public:
    FieldHom() = default;
    /// Checks the defining property: the source modulus vanishes at gen_image.
    FieldHom(ExtFieldPtr<K> source, ExtFieldPtr<K> target, FieldElem<K> gen_image)
        : src_(std::move(source)), dst_(std::move(target)), img_(std::move(gen_image)) {
        if (img_.field() != dst_) throw InvalidEmbedding("gen_image lives in the wrong field");
        if (!(src_->base == dst_->base))
            throw InvalidEmbedding("source and target have different base fields");
        if (!poly::eval(lift_poly<K>(src_->modulus, dst_), img_).is_zero())
            throw InvalidAutomorphism("gen_image is not a root of the source modulus");
    }

    static FieldHom identity(const ExtFieldPtr<K>& f) {
        return FieldHom(f, f, FieldElem<K>::gen(f));
    }

    const ExtFieldPtr<K>& source() const { return src_; }
    const ExtFieldPtr<K>& target() const { return dst_; }
    const FieldElem<K>& gen_image() const { return img_; }

    FieldElem<K> apply(const FieldElem<K>& a) const {
        if (a.field() != src_) throw FieldMismatch("applying hom to a foreign element");
        FieldElem<K> acc = FieldElem<K>::zero(dst_);
        FieldElem<K> pw = FieldElem<K>::one(dst_);
        for (int t = 0; t < src_->degree; ++t) {
            std::vector<K> c(dst_->degree, scalar_zero<K>(dst_->base));
            c[0] = a.coeffs()[t];
            acc = acc + FieldElem<K>(dst_, std::move(c)) * pw;
            if (t + 1 < src_->degree) pw = pw * img_;
        }
        return acc;
    }

    /// this ∘ other (other applied first).
    FieldHom compose(const FieldHom& other) const {
        if (other.dst_ != src_) throw FieldMismatch("composition sources do not chain");
        return FieldHom(other.src_, dst_, apply(other.img_));
    }

    bool is_identity() const {
        return src_ == dst_ && img_ == FieldElem<K>::gen(src_);
    }

    bool operator==(const FieldHom& o) const {
        return src_ == o.src_ && dst_ == o.dst_ && img_ == o.img_;
    }
    bool operator!=(const FieldHom& o) const { return !(*this == o); }

private:
    ExtFieldPtr<K> src_, dst_;
    FieldElem<K> img_;
};

/// The p-power map on a finite field, as a hom fixing F_p.
template <field_scalar K>
FieldHom<K> frobenius(const ExtFieldPtr<K>& f) {
    if (!f->base.is_prime) throw UnsupportedBackend("Frobenius needs a finite base field");
    return FieldHom<K>(f, f, FieldElem<K>::gen(f).pow(f->base.p));
}

template <field_scalar K>
struct GaloisGroup {
    ExtFieldPtr<K> field;
    std::vector<FieldHom<K>> elements;                // elements[0] is the identity
    std::vector<std::vector<std::size_t>> table;      // table[i][j] = index of elem[i]∘elem[j]

    std::size_t order() const { return elements.size(); }
    std::size_t index_of(const FieldHom<K>& h) const {
        for (std::size_t t = 0; t < elements.size(); ++t)
            if (elements[t] == h) return t;
        throw NotClosed("composition left the group");
    }
    std::size_t inverse_index(std::size_t i) const {
        for (std::size_t j = 0; j < elements.size(); ++j)
            if (table[i][j] == 0) return j;
        throw NotClosed("element without inverse");
    }
};

/// Prime backend: the cyclic group generated by Frobenius. Rational backend:
/// the closure of user-supplied automorphisms, which must stay within
/// [K:k] elements.
template <field_scalar K>
GaloisGroup<K> galois_group(const ExtFieldPtr<K>& f,
                            const std::vector<FieldHom<K>>& user_gens = {}) {
    GaloisGroup<K> g;
    g.field = f;
    g.elements.push_back(FieldHom<K>::identity(f));
    if (f->base.is_prime) {
        FieldHom<K> fr = frobenius(f);
        FieldHom<K> cur = fr;
        while (!cur.is_identity()) {
            g.elements.push_back(cur);
            cur = fr.compose(cur);
        }
        if (static_cast<int>(g.elements.size()) != f->degree)
            throw InternalError("Frobenius orbit has unexpected size");
    } else {
        for (const auto& h : user_gens) {
            if (h.source() != f || h.target() != f)
                throw InvalidAutomorphism("generator is not an endomorphism of the field");
            // the FieldHom constructor has already checked the root property;
            // revalidate to catch default-constructed homs
            FieldHom<K> checked(h.source(), h.target(), h.gen_image());
            (void)checked;
        }
        std::vector<FieldHom<K>> frontier = user_gens;
        for (std::size_t t = 0; t < frontier.size(); ++t) {
            bool known = false;
            for (const auto& e : g.elements)
                if (e == frontier[t]) { known = true; break; }
            if (known) continue;
            g.elements.push_back(frontier[t]);
            if (static_cast<int>(g.elements.size()) > f->degree)
                throw NotClosed("closure exceeds the field degree");
            for (std::size_t a = 0; a < g.elements.size(); ++a) {
                frontier.push_back(g.elements[a].compose(frontier[t]));
                frontier.push_back(frontier[t].compose(g.elements[a]));
            }
        }
    }
    g.table.assign(g.order(), std::vector<std::size_t>(g.order(), 0));
    for (std::size_t i = 0; i < g.order(); ++i)
        for (std::size_t j = 0; j < g.order(); ++j)
            g.table[i][j] = g.index_of(g.elements[i].compose(g.elements[j]));
    return g;
}

/// All base-fixing maps K -> L, ordered by target enumeration order of the
/// generator image; empty when deg(K) does not divide deg(L).
template <field_scalar K>
std::vector<FieldHom<K>> embeddings(const ExtFieldPtr<K>& from, const ExtFieldPtr<K>& into) {
    if (!from->base.is_prime || !into->base.is_prime)
        throw UnsupportedBackend("embedding enumeration needs finite fields");
    if (!(from->base == into->base)) throw FieldMismatch("different base fields");
    std::vector<FieldHom<K>> out;
    auto lifted = lift_poly<K>(from->modulus, into);
    enumerate_elements<K>(into, [&](const FieldElem<K>& x) {
        if (poly::eval(lifted, x).is_zero()) out.emplace_back(from, into, x);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Relative extensions E = K[y]/(modulus over K), the tower data backing
// simple bimodules V(λ). Elements are coefficient vectors over K.
// ---------------------------------------------------------------------------

template <field_scalar K>
struct RelExtension {
    ExtFieldPtr<K> over;                       // K
    poly::Poly<FieldElem<K>> modulus;          // monic over K, degree = rel_degree
    int rel_degree = 0;
    std::string label;

    static RelExtension make(ExtFieldPtr<K> over, poly::Poly<FieldElem<K>> modulus,
                             std::string label) {
        RelExtension e;
        int d = poly::degree(modulus);
        if (d < 1) throw ValidationError("relative modulus must have degree >= 1");
        if (!(modulus[d] == FieldElem<K>::one(over)))
            throw ValidationError("relative modulus must be monic");
        e.over = std::move(over);
        e.modulus = std::move(modulus);
        e.rel_degree = d;
        e.label = std::move(label);
        return e;
    }

    int abs_degree() const { return rel_degree * over->degree; }

    using Elem = poly::Poly<FieldElem<K>>;  // length rel_degree, coefficients in K

    Elem zero() const { return Elem(rel_degree, FieldElem<K>::zero(over)); }
    Elem gen() const {
        Elem e = zero();
        if (rel_degree > 1) e[1] = FieldElem<K>::one(over);
        else e[0] = -modulus[0];
        return e;
    }
    Elem from_base(const FieldElem<K>& a) const {
        Elem e = zero();
        e[0] = a;
        return e;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        auto prod = poly::mod(poly::mul(a, b), modulus);
        prod.resize(rel_degree, FieldElem<K>::zero(over));
        return prod;
    }
    Elem add(const Elem& a, const Elem& b) const {
        auto s = poly::add(a, b);
        s.resize(rel_degree, FieldElem<K>::zero(over));
        return s;
    }
    bool is_zero(const Elem& a) const {
        for (const auto& c : a)
            if (!c.is_zero()) return false;
        return true;
    }

    /// Evaluates a polynomial with K-coefficients at an element of E.
    Elem eval_lifted(const std::vector<FieldElem<K>>& f, const Elem& x) const {
        Elem acc = zero();
        for (std::size_t t = f.size(); t-- > 0;) acc = add(mul(acc, x), from_base(f[t]));
        return acc;
    }
};

}  // namespace nccurve
