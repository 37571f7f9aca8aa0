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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nccurve/fields.hpp"

using namespace nccurve;

namespace {

FieldElem<Fp> random_elem(std::mt19937& rng, const ExtFieldPtr<Fp>& f) {
    std::uniform_int_distribution<long long> dist(0, f->base.p - 1);
    std::vector<Fp> c(f->degree);
    for (auto& x : c) x = Fp(dist(rng), f->base.p);
    return FieldElem<Fp>(f, std::move(c));
}

}  // namespace

TEST_CASE("make_extension") {
    auto f3 = BaseField::prime(3);

    SECTION("degree-1 extension is the base itself") {
        auto k = make_extension<Fp>(f3, 1);
        REQUIRE(k->degree == 1);
        // modulus x
        REQUIRE(k->modulus.size() == 2);
        REQUIRE(k->modulus[0].is_zero());
        REQUIRE(k->modulus[1] == Fp::one_of(3));
    }

    SECTION("smallest irreducible quadratic over F_3") {
        // independent oracle: scan monic quadratics x^2 + c1 x + c0 in
        // lexicographic (c1, c0) order and take the first without a root
        std::vector<Fp> expected;
        bool found = false;
        for (long long c1 = 0; c1 < 3 && !found; ++c1)
            for (long long c0 = 0; c0 < 3 && !found; ++c0) {
                bool has_root = false;
                for (long long x = 0; x < 3; ++x)
                    if ((x * x + c1 * x + c0) % 3 == 0) has_root = true;
                if (!has_root) {
                    expected = {Fp(c0, 3), Fp(c1, 3), Fp(1, 3)};
                    found = true;
                }
            }
        REQUIRE(found);
        REQUIRE(expected[0] == Fp(1, 3));  // the oracle lands on x^2 + 1
        REQUIRE(expected[1] == Fp(0, 3));

        auto k9 = make_extension<Fp>(f3, 2);
        REQUIRE(k9->modulus == expected);
    }

    SECTION("deterministic modulus selection") {
        auto a = make_extension<Fp>(f3, 4);
        auto b = make_extension<Fp>(f3, 4);
        REQUIRE(a->modulus == b->modulus);
        REQUIRE(poly::is_irreducible(a->modulus, detail::base_enumerator<Fp>(f3)));
    }

    SECTION("reducible modulus is rejected") {
        // x^2 - 1 = (x-1)(x+1)
        std::vector<Fp> bad{Fp(-1, 3), Fp(0, 3), Fp(1, 3)};
        REQUIRE_THROWS_AS(make_extension<Fp>(f3, 2, bad), NotIrreducible);
    }

    SECTION("rational backend requires a modulus") {
        REQUIRE_THROWS_AS(make_extension<Rat>(BaseField::rationals(), 3), ModulusRequired);
        // x^3 - 2 builds Q(cbrt 2)
        std::vector<Rat> m{Rat(-2), Rat(0), Rat(0), Rat(1)};
        auto k = make_extension<Rat>(BaseField::rationals(), 3, m, "K");
        REQUIRE(k->degree == 3);
    }

    SECTION("characteristic 2 is refused") {
        REQUIRE_THROWS_AS(make_extension<Fp>(BaseField::prime(2), 2), ValidationError);
    }
}

TEST_CASE("element arithmetic") {
    auto f3 = BaseField::prime(3);
    auto k9 = make_extension<Fp>(f3, 2, {}, "F9");

    SECTION("generator square reduces by the modulus") {
        auto g = FieldElem<Fp>::gen(k9);
        auto g2 = g * g;
        // modulus x^2 + 1, so g^2 = -1
        REQUIRE(g2 == -FieldElem<Fp>::one(k9));
    }

    SECTION("a / a = 1 for nonzero a") {
        std::mt19937 rng(11);
        for (int t = 0; t < 30; ++t) {
            auto a = random_elem(rng, k9);
            if (a.is_zero()) continue;
            REQUIRE(a / a == FieldElem<Fp>::one(k9));
        }
        REQUIRE_THROWS_AS(FieldElem<Fp>::zero(k9).inverse(), DivisionByZero);
    }

    SECTION("zero divisor in a rational quotient surfaces lazily") {
        // Q[y]/(y^2 - 1) is not a field; inverting y - 1 proves it
        auto q = BaseField::rationals();
        std::vector<Rat> m{Rat(-1), Rat(0), Rat(1)};
        auto ring = make_extension<Rat>(q, 2, m, "Q[y]/(y^2-1)");
        FieldElem<Rat> ym1(ring, {Rat(-1), Rat(1)});
        REQUIRE_THROWS_AS(ym1.inverse(), NotAField);
        // arithmetic that never inverts keeps working
        REQUIRE((ym1 * ym1) == FieldElem<Rat>(ring, {Rat(2), Rat(-2)}));
    }
}

TEST_CASE("frobenius") {
    auto f3 = BaseField::prime(3);

    SECTION("on the prime field it is the identity") {
        auto k = make_extension<Fp>(f3, 1);
        REQUIRE(frobenius(k).is_identity());
    }
    SECTION("gen maps to gen cubed on F_9") {
        auto k9 = make_extension<Fp>(f3, 2);
        auto fr = frobenius(k9);
        REQUIRE(fr.gen_image() == FieldElem<Fp>::gen(k9).pow(3));
    }
    SECTION("degree many applications give the identity") {
        auto k81 = make_extension<Fp>(f3, 4);
        auto fr = frobenius(k81);
        FieldHom<Fp> cur = fr;
        for (int t = 1; t < 4; ++t) cur = fr.compose(cur);
        REQUIRE(cur.is_identity());
    }
    SECTION("unsupported on the rationals") {
        std::vector<Rat> m{Rat(-2), Rat(0), Rat(0), Rat(1)};
        auto k = make_extension<Rat>(BaseField::rationals(), 3, m);
        REQUIRE_THROWS_AS(frobenius(k), UnsupportedBackend);
    }
}

TEST_CASE("galois groups") {
    auto f3 = BaseField::prime(3);

    SECTION("F_9/F_3 has order 2") {
        auto g = galois_group(make_extension<Fp>(f3, 2));
        REQUIRE(g.order() == 2);
        REQUIRE(g.elements[0].is_identity());
        REQUIRE(!g.elements[1].is_identity());
    }
    SECTION("F_81/F_3 is cyclic of order 4") {
        auto k81 = make_extension<Fp>(f3, 4);
        auto g = galois_group(k81);
        REQUIRE(g.order() == 4);
        // generated by element 1 = Frobenius
        std::size_t cur = 0;
        for (int t = 0; t < 4; ++t) cur = g.table[1][cur];
        REQUIRE(cur == 0);
    }
    SECTION("composition table is a Latin square") {
        auto g = galois_group(make_extension<Fp>(f3, 4));
        for (std::size_t i = 0; i < g.order(); ++i) {
            std::vector<bool> seen_row(g.order(), false), seen_col(g.order(), false);
            for (std::size_t j = 0; j < g.order(); ++j) {
                REQUIRE(!seen_row[g.table[i][j]]);
                seen_row[g.table[i][j]] = true;
                REQUIRE(!seen_col[g.table[j][i]]);
                seen_col[g.table[j][i]] = true;
            }
        }
    }
    SECTION("group size equals the degree on the prime backend") {
        for (int d = 1; d <= 4; ++d)
            REQUIRE(galois_group(make_extension<Fp>(f3, d)).order() ==
                    static_cast<std::size_t>(d));
    }
    SECTION("real cubic field has a trivial group") {
        std::vector<Rat> m{Rat(-2), Rat(0), Rat(0), Rat(1)};
        auto k = make_extension<Rat>(BaseField::rationals(), 3, m);
        auto g = galois_group<Rat>(k, {});
        REQUIRE(g.order() == 1);
        // a wrong gen_image is rejected by the hom invariant
        REQUIRE_THROWS_AS(FieldHom<Rat>(k, k, FieldElem<Rat>::one(k)), InvalidAutomorphism);
    }
}

TEST_CASE("embeddings") {
    auto f3 = BaseField::prime(3);
    auto k3 = make_extension<Fp>(f3, 1);
    auto k9 = make_extension<Fp>(f3, 2);
    auto k27 = make_extension<Fp>(f3, 3);
    auto k81 = make_extension<Fp>(f3, 4);

    SECTION("prime field embeds uniquely") {
        REQUIRE(embeddings(k3, k9).size() == 1);
    }
    SECTION("F_9 into F_81 has exactly two maps") {
        // independent oracle: count roots of the F_9 modulus in F_81
        auto lifted = lift_poly<Fp>(k9->modulus, k81);
        int root_count = 0;
        enumerate_elements<Fp>(k81, [&](const FieldElem<Fp>& x) {
            if (poly::eval(lifted, x).is_zero()) ++root_count;
        });
        REQUIRE(root_count == 2);
        REQUIRE(embeddings(k9, k81).size() == 2);
    }
    SECTION("no embedding when degrees do not divide") {
        REQUIRE(embeddings(k9, k27).empty());
    }
}

TEST_CASE("homomorphism property by sampling") {
    auto f3 = BaseField::prime(3);
    auto k81 = make_extension<Fp>(f3, 4);
    std::mt19937 rng(20260810);
    for (const auto& sigma : galois_group(k81).elements) {
        for (int t = 0; t < 25; ++t) {
            auto a = random_elem(rng, k81);
            auto b = random_elem(rng, k81);
            REQUIRE(sigma.apply(a * b) == sigma.apply(a) * sigma.apply(b));
            REQUIRE(sigma.apply(a + b) == sigma.apply(a) + sigma.apply(b));
        }
    }
}

TEST_CASE("relative extensions") {
    // E = K[y]/(y^2 + x y + x^2) over K = Q[x]/(x^3 - 2); then y^3 = 2 in E,
    // so x -> y is a base-fixing embedding of K into E.
    auto q = BaseField::rationals();
    auto k = make_extension<Rat>(q, 3, {Rat(-2), Rat(0), Rat(0), Rat(1)}, "K");
    auto x = FieldElem<Rat>::gen(k);
    poly::Poly<FieldElem<Rat>> mod{x * x, x, FieldElem<Rat>::one(k)};
    auto e = RelExtension<Rat>::make(k, mod, "E");
    REQUIRE(e.abs_degree() == 6);

    auto y = e.gen();
    auto y3 = e.mul(e.mul(y, y), y);
    auto two = e.from_base(FieldElem<Rat>::from_int(k, 2));
    REQUIRE(poly::equal(y3, two));
}
