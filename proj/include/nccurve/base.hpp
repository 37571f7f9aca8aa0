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

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nccurve {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define NCCURVE_ERROR(Name)                                              \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

NCCURVE_ERROR(NotIrreducible);
NCCURVE_ERROR(ModulusRequired);
NCCURVE_ERROR(DivisionByZero);
NCCURVE_ERROR(NotAField);
NCCURVE_ERROR(UnsupportedBackend);
NCCURVE_ERROR(InvalidAutomorphism);
NCCURVE_ERROR(InvalidEmbedding);
NCCURVE_ERROR(NotClosed);
NCCURVE_ERROR(FieldMismatch);
NCCURVE_ERROR(AmbientMismatch);
NCCURVE_ERROR(IndexMismatch);
NCCURVE_ERROR(BudgetExceeded);
NCCURVE_ERROR(UnsupportedFlavor);
NCCURVE_ERROR(WrongShape);
NCCURVE_ERROR(ParseError);
NCCURVE_ERROR(ValidationError);
NCCURVE_ERROR(InternalError);

#undef NCCURVE_ERROR

/// Base field descriptor: an odd prime field F_p or the rationals.
struct BaseField {
    bool is_prime = true;
    long long p = 0;  // meaningful only when is_prime

    static BaseField prime(long long p) { return BaseField{true, p}; }
    static BaseField rationals() { return BaseField{false, 0}; }

    bool operator==(const BaseField& o) const {
        return is_prime == o.is_prime && (!is_prime || p == o.p);
    }

    std::string describe() const {
        return is_prime ? "F_" + std::to_string(p) : "Q";
    }
};

inline bool is_prime_number(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Rejects composite p and characteristic 2.
inline void validate_base(const BaseField& b) {
    if (!b.is_prime) return;
    if (!is_prime_number(b.p))
        throw ValidationError("base characteristic " + std::to_string(b.p) + " is not prime");
    if (b.p == 2)
        throw ValidationError("characteristic 2 is not supported");
}

/// Enumeration/search caps for the exhaustive checks.
struct Budget {
    long long enumeration = 1'000'000;
};

/// Runs fn(0..n-1) on up to `jobs` threads; results must be written to
/// index-addressed storage by the caller so output order stays deterministic.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned count = jobs < n ? jobs : static_cast<unsigned>(n);
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace nccurve
