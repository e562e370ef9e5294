#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "oracles.hpp"

using namespace squarex;
using testutil::all_valid_curves;
using testutil::closed_form_fiber;
using testutil::make_field;
using testutil::odd_prime_power_fields;

namespace {

Curve curve_over(const FiniteField& F, uint64_t a, uint64_t b) {
    return Curve(F, F.from_residue(a), F.from_residue(b));
}

} // namespace

TEST_CASE("source curve parameters") {
    FiniteField F5 = FiniteField::prime_field(5);
    TwoIsogeny phi1(curve_over(F5, 0, 1));
    CHECK(phi1.source().a() == F5.zero());
    CHECK(phi1.source().b() == F5.one()); // r = -4 = 1: self-paired equation

    TwoIsogeny phi2(curve_over(F5, 0, 2));
    CHECK(phi2.source().a() == F5.zero());
    CHECK(phi2.source().b() == F5.from_residue(2)); // r = -8 = 2

    FiniteField F7 = FiniteField::prime_field(7);
    TwoIsogeny phi3(curve_over(F7, 1, 3));
    CHECK(phi3.source().a() == F7.from_residue(5)); // -2 = 5
    CHECK(phi3.source().b() == F7.from_residue(3)); // r = 1 - 12 = 3
}

TEST_CASE("the source is always a valid family member") {
    for (const auto& def : odd_prime_power_fields(13)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E); // Curve construction validates b' != 0, r' != 0
            CHECK(phi.source().b() == E.r());
            FieldElement sixteen_b = F->from_residue(16) * E.b();
            CHECK(phi.source().r() == sixteen_b);
        }
    }
}

TEST_CASE("kernel") {
    FiniteField F5 = FiniteField::prime_field(5);
    TwoIsogeny phi(curve_over(F5, 0, 2));
    auto ker = phi.kernel();
    REQUIRE(ker.size() == 2); // degree of the isogeny
    CHECK(ker[0] == Point::infinity());
    CHECK(ker[1] == Point::affine(F5.zero(), F5.zero()));
    for (const Point& Q : ker) CHECK(phi.apply(Q) == Point::infinity());
}

TEST_CASE("forward evaluation, frozen examples") {
    FiniteField F5 = FiniteField::prime_field(5);
    TwoIsogeny phi(curve_over(F5, 0, 1));
    CHECK(phi.apply(Point::infinity()) == Point::infinity());
    CHECK(phi.apply(Point::affine(F5.zero(), F5.zero())) == Point::infinity());
    // (2,0) on E': 2^2 = 4 != r = 1, so not a kernel point; Y = 0 forces (0,0)
    CHECK(phi.apply(Point::affine(F5.from_residue(2), F5.zero())) ==
          Point::affine(F5.zero(), F5.zero()));

    Point bogus = Point::affine(F5.one(), F5.one());
    CHECK_THROWS_AS(phi.apply(bogus), OffCurveError);
}

TEST_CASE("forward evaluation matches a separate-inversion formula route") {
    for (const auto& def : odd_prime_power_fields(9)) {
        auto F = make_field(def);
        const FieldElement four = F->from_residue(4);
        const FieldElement eight = F->from_residue(8);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E);
            for (const Point& Q : phi.source().points()) {
                if (Q.is_infinity() || Q.x().is_zero()) continue;
                const FieldElement& X = Q.x();
                const FieldElement& Y = Q.y();
                FieldElement X2 = X * X;
                FieldElement ox = Y * Y * (four * X2).inverse();
                FieldElement oy = Y * (E.r() - X2) * (eight * X2).inverse();
                CHECK(phi.apply(Q) == Point::affine(ox, oy));
            }
        }
    }
}

TEST_CASE("image is well-defined on the target curve, q <= 31") {
    for (const auto& def : odd_prime_power_fields(31)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E);
            for (const Point& Q : phi.source().points()) CHECK(E.contains(phi.apply(Q)));
        }
    }
}

TEST_CASE("homomorphism, exhaustive for small fields") {
    for (const auto& def : odd_prime_power_fields(9)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E);
            const Curve& Ep = phi.source();
            auto pts = Ep.points();
            for (const Point& P : pts)
                for (const Point& Q : pts)
                    CHECK(phi.apply(Ep.add(P, Q)) == E.add(phi.apply(P), phi.apply(Q)));
        }
    }
}

TEST_CASE("fibers, frozen examples") {
    FiniteField F5 = FiniteField::prime_field(5);
    Curve E1 = curve_over(F5, 0, 1);
    TwoIsogeny phi1(E1);

    CHECK(phi1.fiber(Point::infinity()) == phi1.kernel());

    // preimage of (0,0): X = a +- 2 sqrt(b) = {2, 3}
    auto fib = phi1.fiber(Point::affine(F5.zero(), F5.zero()));
    REQUIRE(fib.size() == 2);
    CHECK(fib[0] == Point::affine(F5.from_residue(2), F5.zero()));
    CHECK(fib[1] == Point::affine(F5.from_residue(3), F5.zero()));

    // b = 2 is a non-square mod 5: (0,0) has no rational preimage
    TwoIsogeny phi2(curve_over(F5, 0, 2));
    CHECK(phi2.fiber(Point::affine(F5.zero(), F5.zero())).empty());

    CHECK_THROWS_AS(phi1.fiber(Point::affine(F5.one(), F5.one())), OffCurveError);
}

TEST_CASE("fiber partition of the source group, q <= 13") {
    for (const auto& def : odd_prime_power_fields(13)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E);
            auto source_points = phi.source().points();
            auto image_points = phi.image();
            std::set<Point> image_set(image_points.begin(), image_points.end());

            size_t fiber_total = 0;
            std::set<Point> seen;
            for (const Point& P : E.points()) {
                auto fib = phi.fiber(P);
                bool in_image = image_set.count(P) > 0;
                CHECK(fib.empty() == !in_image);
                if (!fib.empty()) CHECK(fib.size() == 2);
                for (const Point& Q : fib) {
                    CHECK(phi.apply(Q) == P);
                    CHECK(seen.insert(Q).second); // fibers of distinct points are disjoint
                }
                fiber_total += fib.size();
            }
            CHECK(fiber_total == source_points.size());
        }
    }
}

TEST_CASE("round-trip: every source point lies in the fiber of its image") {
    for (const auto& def : odd_prime_power_fields(9)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E);
            for (const Point& Q : phi.source().points()) {
                auto fib = phi.fiber(phi.apply(Q));
                CHECK(std::find(fib.begin(), fib.end(), Q) != fib.end());
            }
        }
    }
}

TEST_CASE("square step: x nonzero square and y != 0 make x^2+ax+b square") {
    for (const auto& def : odd_prime_power_fields(13)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            for (const Point& P : E.points()) {
                if (P.is_infinity() || P.x().is_zero() || P.y().is_zero()) continue;
                if (!P.x().is_square()) continue;
                FieldElement s = P.x() * P.x() + E.a() * P.x() + E.b();
                CHECK(s.is_square());
            }
        }
    }
}

TEST_CASE("closed-form fiber agrees with candidate-and-verify, q <= 13") {
    for (const auto& def : odd_prime_power_fields(13)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E);
            for (const Point& P : E.points()) {
                if (P.is_infinity() || P.y().is_zero()) continue;
                CHECK(closed_form_fiber(phi, P) == phi.fiber(P));
            }
        }
    }
}

TEST_CASE("image, frozen examples and the halving relation") {
    FiniteField F5 = FiniteField::prime_field(5);
    TwoIsogeny phi1(curve_over(F5, 0, 1));
    auto img1 = phi1.image();
    REQUIRE(img1.size() == 2); // 4 / 2
    CHECK(img1[0] == Point::infinity());
    CHECK(img1[1] == Point::affine(F5.zero(), F5.zero()));

    TwoIsogeny phi2(curve_over(F5, 0, 2));
    auto img2 = phi2.image();
    REQUIRE(img2.size() == 1); // 2 / 2
    CHECK(img2[0] == Point::infinity());

    for (const auto& def : odd_prime_power_fields(13)) {
        auto F = make_field(def);
        for (const Curve& E : all_valid_curves(*F)) {
            TwoIsogeny phi(E);
            CHECK(phi.image().size() == E.point_count() / 2);
            CHECK(E.point_count() == phi.source().point_count());
        }
    }
}
