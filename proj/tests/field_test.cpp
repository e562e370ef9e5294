#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"

using namespace squarex;
using testutil::find_field;
using testutil::inverse_by_search;
using testutil::mul_oracle;
using testutil::squares_by_enumeration;

namespace {

struct EnumLimitGuard {
    uint64_t saved = enumeration_limit();
    ~EnumLimitGuard() { set_enumeration_limit(saved); }
};

FiniteField make_f9() {
    return FiniteField::extension_field(3, 2, {1, 0, 1}); // F_3[t]/(t^2 + 1)
}

} // namespace

TEST_CASE("prime field arithmetic basics") {
    FiniteField F7 = FiniteField::prime_field(7);
    CHECK((F7.from_residue(3) * F7.from_residue(5)) == F7.from_residue(1)); // 15 = 1 mod 7
    CHECK((F7.zero() + F7.from_residue(4)) == F7.from_residue(4));
    CHECK((F7.from_residue(2) - F7.from_residue(5)) == F7.from_residue(4));
    CHECK(-F7.from_residue(3) == F7.from_residue(4));
    CHECK(-F7.zero() == F7.zero());
}

TEST_CASE("extension field arithmetic matches the polynomial oracle") {
    FiniteField F9 = make_f9();
    FieldElement t = F9.from_coefficients({0, 1});

    // t^2 = -1 = 2 in F_3[t]/(t^2+1)
    FieldElement t2 = t * t;
    CHECK(t2 == F9.from_residue(2));
    CHECK(t2 == mul_oracle(t, t));

    // exhaustive cross-check of the multiplication table
    for (uint64_t i = 0; i < F9.q(); ++i)
        for (uint64_t j = 0; j < F9.q(); ++j) {
            FieldElement u = F9.element(i), v = F9.element(j);
            CHECK((u * v) == mul_oracle(u, v));
        }

    FiniteField F27(3, 3, {1, 2, 0, 1});
    for (uint64_t i = 0; i < F27.q(); ++i)
        for (uint64_t j = 0; j < F27.q(); ++j) {
            FieldElement u = F27.element(i), v = F27.element(j);
            CHECK((u * v) == mul_oracle(u, v));
        }
}

TEST_CASE("inverse") {
    FiniteField F7 = FiniteField::prime_field(7);
    FieldElement three = F7.from_residue(3);
    CHECK(three.inverse() == F7.from_residue(5));
    CHECK(three.inverse() == inverse_by_search(three));
    CHECK(F7.one().inverse() == F7.one());
    CHECK_THROWS_AS(F7.zero().inverse(), DivisionByZeroError);

    FiniteField F9 = make_f9();
    FieldElement t = F9.from_coefficients({0, 1});
    FieldElement two_t = F9.from_coefficients({0, 2});
    CHECK(t.inverse() == two_t);
    CHECK(t.inverse() == inverse_by_search(t));

    // round-trip over every nonzero element
    for (uint64_t i = 1; i < F9.q(); ++i) {
        FieldElement u = F9.element(i);
        CHECK(u * u.inverse() == F9.one());
    }
}

TEST_CASE("power") {
    FiniteField F7 = FiniteField::prime_field(7);
    CHECK(F7.from_residue(3).pow(6) == F7.one()); // Fermat
    CHECK(F7.from_residue(5).pow(1) == F7.from_residue(5));
    CHECK(F7.zero().pow(0) == F7.one());

    FiniteField F5 = FiniteField::prime_field(5);
    FieldElement two = F5.from_residue(2);
    CHECK(two.pow(3) == two * two * two);
    CHECK(two.pow(3) == F5.from_residue(3));
}

TEST_CASE("squareness follows the exhaustive squaring oracle") {
    FiniteField F7 = FiniteField::prime_field(7);
    auto squares = squares_by_enumeration(F7);
    CHECK(squares == std::set<uint64_t>{0, 1, 2, 4});
    CHECK(F7.zero().is_square());
    CHECK(F7.from_residue(2).is_square());
    CHECK_FALSE(F7.from_residue(3).is_square());
    for (uint64_t i = 0; i < 7; ++i)
        CHECK(F7.element(i).is_square() == (squares.count(i) > 0));

    FiniteField F9 = make_f9();
    FieldElement t = F9.from_coefficients({0, 1});
    CHECK(t.is_square());
    FieldElement one_two_t = F9.from_coefficients({1, 2});
    CHECK(mul_oracle(one_two_t, one_two_t) == t); // (1+2t)^2 = t
}

TEST_CASE("square roots are canonical and square back") {
    FiniteField F7 = FiniteField::prime_field(7);
    auto r = F7.from_residue(2).sqrt();
    REQUIRE(r.has_value());
    CHECK(*r == F7.from_residue(3)); // canonical of {3, 4}
    CHECK(F7.zero().sqrt() == F7.zero());
    CHECK_FALSE(F7.from_residue(3).sqrt().has_value());

    FiniteField F9 = make_f9();
    FieldElement t = F9.from_coefficients({0, 1});
    auto rt = t.sqrt();
    REQUIRE(rt.has_value());
    CHECK(*rt == F9.from_coefficients({1, 2})); // canonical of {1+2t, 2+t}

    // sqrt(u^2) is the smaller of {u, -u} in canonical order
    for (const auto& def : {find_field(13, 1), find_field(3, 2), find_field(5, 2)}) {
        auto F = testutil::make_field(def);
        for (uint64_t i = 0; i < F->q(); ++i) {
            FieldElement u = F->element(i);
            FieldElement expected = (-u < u) ? -u : u;
            auto root = (u * u).sqrt();
            REQUIRE(root.has_value());
            CHECK(*root == expected);
        }
    }
}

TEST_CASE("table-backed and pure squareness/sqrt paths agree") {
    for (const auto& def : {find_field(11, 1), find_field(3, 2), find_field(5, 2)}) {
        auto F = testutil::make_field(def);
        // before tables exist the pure algorithms run; record their answers
        std::vector<bool> squareness;
        std::vector<std::optional<FieldElement>> roots;
        for (uint64_t i = 0; i < F->q(); ++i) {
            squareness.push_back(detail::is_square_euler(F->element(i)));
            roots.push_back(detail::sqrt_tonelli_shanks(F->element(i)));
        }
        F->ensure_residue_tables();
        for (uint64_t i = 0; i < F->q(); ++i) {
            FieldElement u = F->element(i);
            CHECK(u.is_square() == squareness[i]);
            auto root = u.sqrt();
            CHECK(root.has_value() == roots[i].has_value());
            if (root) CHECK(*root == *roots[i]);
            if (root) CHECK(*root * *root == u);
        }
    }
}

TEST_CASE("exactly (q-1)/2 nonzero squares") {
    for (const auto& def :
         {find_field(7, 1), find_field(31, 1), find_field(3, 2), find_field(5, 2),
          find_field(3, 3)}) {
        auto F = testutil::make_field(def);
        uint64_t square_count = 0;
        for (uint64_t i = 1; i < F->q(); ++i)
            if (F->element(i).is_square()) ++square_count;
        CHECK(square_count == (F->q() - 1) / 2);
    }
}

TEST_CASE("enumeration order and size") {
    FiniteField F5 = FiniteField::prime_field(5);
    std::vector<uint64_t> seen;
    for (const FieldElement& u : F5.elements()) seen.push_back(u.index());
    CHECK(seen == std::vector<uint64_t>{0, 1, 2, 3, 4});

    FiniteField F9 = make_f9();
    std::vector<FieldElement> elems(F9.elements().begin(), F9.elements().end());
    REQUIRE(elems.size() == 9);
    CHECK(elems.front() == F9.zero());
    CHECK(elems.back() == F9.from_coefficients({2, 2})); // 2 + 2t

    FiniteField F49(7, 2, {1, 0, 1});
    CHECK(F49.elements().size() == 49);
}

TEST_CASE("enumeration bound refusal") {
    EnumLimitGuard guard;
    set_enumeration_limit(16);
    FiniteField F17 = FiniteField::prime_field(17);
    CHECK_THROWS_AS(F17.elements(), EnumerationLimitError);
    FiniteField F13 = FiniteField::prime_field(13);
    CHECK(F13.elements().size() == 13);
}

TEST_CASE("field construction rejects bad parameters") {
    CHECK_THROWS_AS(FiniteField::prime_field(4), InvalidFieldError);
    CHECK_THROWS_AS(FiniteField::prime_field(2), InvalidFieldError);
    CHECK_THROWS_AS(FiniteField::prime_field(1), InvalidFieldError);
    CHECK_THROWS_AS(FiniteField::extension_field(3, 5, {1, 0, 0, 0, 0, 1}), InvalidFieldError);
    // t^2 + 2t + 1 = (t+1)^2 is reducible over F_3
    CHECK_THROWS_AS(FiniteField::extension_field(3, 2, {1, 2, 1}), InvalidFieldError);
    // not monic
    CHECK_THROWS_AS(FiniteField::extension_field(3, 2, {1, 0, 2}), InvalidFieldError);
    // wrong length
    CHECK_THROWS_AS(FiniteField::extension_field(3, 2, {1, 0}), InvalidFieldError);
    // cardinality over the word-size bound: p^4 with p = 2^16+1
    CHECK_THROWS_AS(FiniteField(65537, 4, {3, 0, 0, 0, 1}), InvalidFieldError);
}

TEST_CASE("irreducibility check agrees with divisor trial") {
    for (uint64_t p : {3ull, 5ull}) {
        for (unsigned k : {2u, 3u}) {
            uint64_t combos = 1;
            for (unsigned i = 0; i < k; ++i) combos *= p;
            for (uint64_t idx = 0; idx < combos; ++idx) {
                std::vector<uint64_t> m(k + 1, 0);
                m[k] = 1;
                uint64_t tmp = idx;
                for (unsigned i = 0; i < k; ++i) {
                    m[i] = tmp % p;
                    tmp /= p;
                }
                bool expected = testutil::poly_irreducible_bruteforce(m, p);
                bool accepted = true;
                try {
                    FiniteField F(p, k, m);
                } catch (const InvalidFieldError&) {
                    accepted = false;
                }
                CHECK(accepted == expected);
            }
        }
    }
}

TEST_CASE("mixed-context operands are rejected") {
    FiniteField F5 = FiniteField::prime_field(5);
    FiniteField F7 = FiniteField::prime_field(7);
    CHECK_THROWS_AS(F5.one() + F7.one(), FieldMismatchError);
    CHECK_THROWS_AS(F5.one() * F7.one(), FieldMismatchError);

    // structurally equal contexts interoperate
    FiniteField F5b = FiniteField::prime_field(5);
    CHECK((F5.from_residue(3) + F5b.from_residue(4)) == F5.from_residue(2));
}

TEST_CASE("field axioms on random triples") {
    std::mt19937_64 rng(2024);
    for (const auto& def : {find_field(10007, 1), find_field(3, 4)}) {
        auto F = testutil::make_field(def);
        for (int trial = 0; trial < 200; ++trial) {
            FieldElement u = F->element(rng() % F->q());
            FieldElement v = F->element(rng() % F->q());
            FieldElement w = F->element(rng() % F->q());
            CHECK((u + v) + w == u + (v + w));
            CHECK((u * v) * w == u * (v * w));
            CHECK(u * (v + w) == u * v + u * w);
            if (!u.is_zero()) CHECK(u * u.inverse() == F->one());
        }
    }
}

TEST_CASE("textual element syntax") {
    FiniteField F7 = FiniteField::prime_field(7);
    CHECK(F7.parse("5") == F7.from_residue(5));
    CHECK(F7.parse("12") == F7.from_residue(5)); // reduced
    CHECK(F7.from_residue(5).str() == "5");
    CHECK_THROWS_AS(F7.parse(""), ParseError);
    CHECK_THROWS_AS(F7.parse("x"), ParseError);
    CHECK_THROWS_AS(F7.parse("1,2"), ParseError); // too many coefficients for k=1

    FiniteField F9 = make_f9();
    CHECK(F9.parse("1,2") == F9.from_coefficients({1, 2}));
    CHECK(F9.parse("2") == F9.from_residue(2)); // short form zero-pads
    CHECK(F9.from_coefficients({1, 2}).str() == "1,2");
    CHECK(F9.zero().str() == "0,0");
    CHECK_THROWS_AS(F9.parse("1,2,0"), ParseError);
}

TEST_CASE("Euler criterion equals root existence on every element") {
    for (const auto& def : {find_field(13, 1), find_field(3, 2), find_field(7, 2)}) {
        auto F = testutil::make_field(def);
        auto squares = squares_by_enumeration(*F);
        for (uint64_t i = 0; i < F->q(); ++i) {
            FieldElement u = F->element(i);
            bool has_root = squares.count(i) > 0;
            CHECK(detail::is_square_euler(u) == has_root);
            if (i != 0)
                CHECK((u.pow((F->q() - 1) / 2) == F->one()) == has_root);
        }
    }
}
