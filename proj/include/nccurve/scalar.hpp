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

#include <concepts>
#include <string>

#include <gmpxx.h>

#include "nccurve/base.hpp"

namespace nccurve {

/// Prime-field scalar with a runtime modulus. A default-constructed value is
/// the modulus-free zero; it adopts the modulus of the first nonzero partner
/// it meets, so zero-filled matrices work without threading a context around.
class Fp {
public:
    Fp() = default;
    Fp(long long value, long long p) : p_(p) { v_ = norm(value, p); }

    static Fp zero_of(long long p) { return Fp(0, p); }
    static Fp one_of(long long p) { return Fp(1, p); }

    long long value() const { return v_; }
    long long modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }

    Fp zero_like() const { return Fp(0, p_); }
    Fp one_like() const {
        if (p_ == 0) throw InternalError("one_like on modulus-free zero");
        return Fp(1, p_);
    }

    friend Fp operator+(const Fp& a, const Fp& b) {
        long long p = join(a, b);
        return p == 0 ? Fp() : Fp(a.v_ + b.v_, p);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        long long p = join(a, b);
        return p == 0 ? Fp() : Fp(a.v_ - b.v_, p);
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        long long p = join(a, b);
        if (p == 0) return Fp();
        return Fp(static_cast<long long>((__int128)a.v_ * b.v_ % p), p);
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
    Fp operator-() const { return p_ == 0 ? Fp() : Fp(-v_, p_); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp& operator/=(const Fp& o) { return *this = *this / o; }

    Fp inverse() const {
        if (v_ == 0) throw DivisionByZero("inverse of 0 in " + describe_field());
        // extended Euclid on (v, p)
        long long t = 0, new_t = 1, r = p_, new_r = v_;
        while (new_r != 0) {
            long long q = r / new_r;
            long long tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        return Fp(t, p_);
    }

    bool operator==(const Fp& o) const {
        if (p_ != 0 && o.p_ != 0 && p_ != o.p_)
            throw FieldMismatch("comparing scalars over different primes");
        return v_ == o.v_;
    }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(v_); }
    /// Canonical integer lift in [0, p).
    long long lift() const { return v_; }

private:
    static long long norm(long long v, long long p) {
        if (p == 0) return 0;
        v %= p;
        return v < 0 ? v + p : v;
    }
    static long long join(const Fp& a, const Fp& b) {
        if (a.p_ == 0) return b.p_;
        if (b.p_ == 0) return a.p_;
        if (a.p_ != b.p_) throw FieldMismatch("mixing scalars over different primes");
        return a.p_;
    }
    std::string describe_field() const { return "F_" + std::to_string(p_); }

    long long v_ = 0;
    long long p_ = 0;
};

/// Exact rational scalar (GMP-backed).
class Rat {
public:
    Rat() : v_(0) {}
    explicit Rat(long long n) : v_(static_cast<long>(n)) {}
    Rat(long long num, long long den) : v_(static_cast<long>(num), static_cast<long>(den)) {
        if (den == 0) throw DivisionByZero("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    bool is_zero() const { return v_ == 0; }
    Rat zero_like() const { return Rat(); }
    Rat one_like() const { return Rat(1); }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
    friend Rat operator/(const Rat& a, const Rat& b) { return a * b.inverse(); }
    Rat operator-() const { return Rat(mpq_class(-v_)); }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    Rat inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of 0 in Q");
        return Rat(mpq_class(1 / v_));
    }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }

    std::string str() const { return v_.get_str(); }

private:
    mpq_class v_;
};

template <class K>
concept field_scalar = requires(const K a, const K b) {
    { a + b } -> std::convertible_to<K>;
    { a - b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { a / b } -> std::convertible_to<K>;
    { -a } -> std::convertible_to<K>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.zero_like() } -> std::convertible_to<K>;
    { a.one_like() } -> std::convertible_to<K>;
    { a == b } -> std::convertible_to<bool>;
    { a.str() } -> std::convertible_to<std::string>;
};

static_assert(field_scalar<Fp>);
static_assert(field_scalar<Rat>);

/// Makes a base-field scalar from an integer literal in an instance file.
template <class K>
K scalar_from_int(const BaseField& base, long long n);

template <>
inline Fp scalar_from_int<Fp>(const BaseField& base, long long n) {
    return Fp(n, base.p);
}
template <>
inline Rat scalar_from_int<Rat>(const BaseField&, long long n) {
    return Rat(n);
}

template <class K>
K scalar_one(const BaseField& base) {
    return scalar_from_int<K>(base, 1);
}
template <class K>
K scalar_zero(const BaseField& base) {
    return scalar_from_int<K>(base, 0);
}

}  // namespace nccurve
