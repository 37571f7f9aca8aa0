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

#include <functional>
#include <utility>
#include <vector>

#include "nccurve/base.hpp"

namespace nccurve {

// Dense univariate polynomials as coefficient vectors, c[t] the coefficient
// of x^t. The zero polynomial is the empty vector; every routine works for
// any coefficient type with field operations, is_zero() and zero_like().
namespace poly {

template <class C>
using Poly = std::vector<C>;

template <class C>
Poly<C> trimmed(Poly<C> f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    return f;
}

template <class C>
int degree(const Poly<C>& f) {
    for (std::size_t t = f.size(); t-- > 0;)
        if (!f[t].is_zero()) return static_cast<int>(t);
    return -1;
}

template <class C>
bool is_zero(const Poly<C>& f) {
    return degree(f) < 0;
}

template <class C>
Poly<C> add(const Poly<C>& a, const Poly<C>& b) {
    Poly<C> r = a.size() >= b.size() ? a : b;
    const Poly<C>& s = a.size() >= b.size() ? b : a;
    for (std::size_t t = 0; t < s.size(); ++t) r[t] = r[t] + s[t];
    return trimmed(std::move(r));
}

template <class C>
Poly<C> sub(const Poly<C>& a, const Poly<C>& b) {
    Poly<C> r = a;
    if (r.size() < b.size()) r.resize(b.size(), b.front().zero_like());
    for (std::size_t t = 0; t < b.size(); ++t) r[t] = r[t] - b[t];
    return trimmed(std::move(r));
}

template <class C>
Poly<C> mul(const Poly<C>& a, const Poly<C>& b) {
    if (is_zero(a) || is_zero(b)) return {};
    Poly<C> r(a.size() + b.size() - 1, a.front().zero_like());
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].is_zero()) continue;
        for (std::size_t t = 0; t < b.size(); ++t) r[s + t] = r[s + t] + a[s] * b[t];
    }
    return trimmed(std::move(r));
}

template <class C>
Poly<C> scale(const Poly<C>& a, const C& c) {
    Poly<C> r = a;
    for (auto& x : r) x = x * c;
    return trimmed(std::move(r));
}

/// Quotient and remainder; the divisor's leading coefficient must be
/// invertible (it always is over a field, and may throw NotAField for a
/// quotient ring that only pretends to be one).
template <class C>
std::pair<Poly<C>, Poly<C>> divmod(const Poly<C>& a, const Poly<C>& b) {
    int db = degree(b);
    if (db < 0) throw DivisionByZero("polynomial division by zero");
    Poly<C> rem = trimmed(a);
    int da = degree(rem);
    if (da < db) return {{}, rem};
    C lead_inv = rem.front().one_like() / b[db];
    Poly<C> quo(static_cast<std::size_t>(da - db + 1), rem.front().zero_like());
    while ((da = degree(rem)) >= db) {
        C c = rem[da] * lead_inv;
        quo[da - db] = c;
        for (int t = 0; t <= db; ++t) rem[da - db + t] = rem[da - db + t] - c * b[t];
    }
    return {trimmed(std::move(quo)), trimmed(std::move(rem))};
}

template <class C>
Poly<C> mod(const Poly<C>& a, const Poly<C>& b) {
    return divmod(a, b).second;
}

template <class C>
Poly<C> mulmod(const Poly<C>& a, const Poly<C>& b, const Poly<C>& m) {
    return mod(mul(a, b), m);
}

template <class C>
Poly<C> powmod(Poly<C> base, long long e, const Poly<C>& m) {
    if (degree(m) < 1) throw InternalError("powmod modulus must have degree >= 1");
    Poly<C> r{m[0].one_like()};
    base = mod(base, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

template <class C>
C eval(const Poly<C>& f, const C& x) {
    C acc = x.zero_like();
    for (std::size_t t = f.size(); t-- > 0;) acc = acc * x + f[t];
    return acc;
}

template <class C>
Poly<C> make_monic(const Poly<C>& f) {
    int d = degree(f);
    if (d < 0) return {};
    return scale(f, f[d].one_like() / f[d]);
}

/// Monic gcd via the Euclidean algorithm.
template <class C>
Poly<C> gcd(Poly<C> a, Poly<C> b) {
    a = trimmed(std::move(a));
    b = trimmed(std::move(b));
    while (!is_zero(b)) {
        Poly<C> r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

/// Extended Euclid: returns (g, u) with u*a ≡ g (mod m), g monic.
template <class C>
std::pair<Poly<C>, Poly<C>> half_ext_gcd(Poly<C> a, Poly<C> m) {
    Poly<C> r0 = trimmed(std::move(m)), r1 = trimmed(std::move(a));
    if (is_zero(r0)) throw InternalError("ext gcd with zero modulus");
    Poly<C> u0{}, u1{r0.front().one_like()};
    while (!is_zero(r1)) {
        auto [q, r2] = divmod(r0, r1);
        Poly<C> u2 = sub(u0, mul(q, u1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    int d = degree(r0);
    C inv = r0[d].one_like() / r0[d];
    return {scale(r0, inv), scale(u0, inv)};
}

template <class C>
bool equal(const Poly<C>& a, const Poly<C>& b) {
    Poly<C> ta = trimmed(a), tb = trimmed(b);
    if (ta.size() != tb.size()) return false;
    for (std::size_t t = 0; t < ta.size(); ++t)
        if (!(ta[t] == tb[t])) return false;
    return true;
}

/// Enumerator contract: enumerate(fn) calls fn once per field element, in a
/// fixed deterministic order. Only finite (prime-backend) fields provide one.
template <class C>
using Enumerator = std::function<void(const std::function<void(const C&)>&)>;

/// All roots of f in the (finite) coefficient field, in enumeration order.
template <class C>
std::vector<C> roots(const Poly<C>& f, const Enumerator<C>& enumerate) {
    std::vector<C> out;
    enumerate([&](const C& x) {
        if (eval(f, x).is_zero()) out.push_back(x);
    });
    return out;
}

/// Monic polynomials of the given degree in lexicographic order: coefficient
/// tuples (c_{d-1}, ..., c_0) ascend in enumeration order of the field.
template <class C>
void enumerate_monic(int deg, const C& one, const Enumerator<C>& enumerate,
                     const std::function<bool(const Poly<C>&)>& visit) {
    std::vector<C> elems;
    enumerate([&](const C& x) { elems.push_back(x); });
    std::vector<std::size_t> idx(static_cast<std::size_t>(deg), 0);
    Poly<C> f(static_cast<std::size_t>(deg) + 1, one.zero_like());
    f[deg] = one;
    for (;;) {
        for (int t = 0; t < deg; ++t) f[t] = elems[idx[deg - 1 - t]];
        if (!visit(f)) return;
        int pos = deg - 1;
        while (pos >= 0) {
            if (++idx[pos] < elems.size()) break;
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) return;
    }
}

/// Squarefree monic factorization over a finite field by root extraction and
/// trial division with ascending-degree monic divisors. Factors come back
/// monic, sorted by (degree, lexicographic coefficients). Desk-scale only.
template <class C>
std::vector<Poly<C>> factor_distinct(Poly<C> f, const Enumerator<C>& enumerate) {
    f = make_monic(trimmed(std::move(f)));
    std::vector<Poly<C>> factors;
    if (degree(f) < 1) return factors;
    C one = f[degree(f)];

    // linear factors first
    for (const C& r : roots(f, enumerate)) {
        Poly<C> lin{-r, one};
        auto [q, rem] = divmod(f, lin);
        if (!is_zero(rem)) throw InternalError("root does not divide");
        factors.push_back(lin);
        f = q;
    }
    // after root extraction any divisor of minimal degree is irreducible
    for (int d = 2; 2 * d <= degree(f);) {
        bool found = false;
        enumerate_monic<C>(d, one, enumerate, [&](const Poly<C>& cand) {
            auto [q, rem] = divmod(f, cand);
            if (is_zero(rem)) {
                factors.push_back(cand);
                f = q;
                found = true;
                return false;
            }
            return true;
        });
        if (!found) ++d;
    }
    if (degree(f) >= 1) factors.push_back(f);
    return factors;
}

template <class C>
bool is_irreducible(const Poly<C>& f, const Enumerator<C>& enumerate) {
    if (degree(f) < 1) return false;
    if (degree(f) == 1) return true;
    if (!roots(f, enumerate).empty()) return false;
    auto factors = factor_distinct(f, enumerate);
    return factors.size() == 1 && degree(factors[0]) == degree(f);
}

}  // namespace poly
}  // namespace nccurve
