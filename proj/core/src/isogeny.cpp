#include "squarex/isogeny.hpp"

#include <algorithm>

namespace squarex {

namespace {

Curve make_source(const Curve& target) {
    // E': Y^2 = X^3 - 2a X^2 + r X
    const FieldElement& a = target.a();
    return Curve(target.field(), -(a + a), target.r());
}

} // namespace

TwoIsogeny::TwoIsogeny(const Curve& target)
    : target_(target), source_(make_source(target)) {}

Point TwoIsogeny::apply(const Point& P) const {
    if (!source_.contains(P))
        throw OffCurveError("apply: point " + P.str() + " is not on the source curve");
    if (P.is_infinity()) return Point::infinity();

    const FieldElement& X = P.x();
    const FieldElement& Y = P.y();
    if (X.is_zero()) return Point::infinity(); // (0,0), the affine kernel point

    // (X, Y) -> ( Y^2 / (4X^2), Y (r - X^2) / (8X^2) ), one inversion of 8X^2.
    const FiniteField& F = target_.field();
    FieldElement X2 = X * X;
    FieldElement inv_8X2 = (F.from_residue(8) * X2).inverse();
    FieldElement two = F.from_residue(2);

    FieldElement x_out = Y * Y * two * inv_8X2;            // = Y^2 / (4X^2)
    FieldElement y_out = Y * (target_.r() - X2) * inv_8X2; // = Y (r - X^2) / (8X^2)
    return Point::affine(x_out, y_out);
}

std::vector<Point> TwoIsogeny::kernel() const {
    const FiniteField& F = source_.field();
    return {Point::infinity(), Point::affine(F.zero(), F.zero())};
}

std::vector<Point> TwoIsogeny::fiber(const Point& P) const {
    if (!target_.contains(P))
        throw OffCurveError("fiber: point " + P.str() + " is not on the target curve");
    if (P.is_infinity()) return kernel();

    const FiniteField& F = target_.field();
    const FieldElement& a = target_.a();
    const FieldElement& x = P.x();
    const FieldElement two = F.from_residue(2);

    // X^2 - 2(a + 2x) X + r = 0, discriminant 4(x^2 + ax + b); so the roots
    // are X = a + 2x +- 2 sqrt(x^2 + ax + b). For P = (0,0) this is the
    // preimage X = a +- 2 sqrt(b).
    FieldElement half_sum = a + two * x;
    FieldElement s = x * x + a * x + target_.b();
    auto root = s.sqrt();
    if (!root) return {};

    std::vector<FieldElement> xs;
    xs.push_back(half_sum + two * *root);
    FieldElement other = half_sum - two * *root;
    if (!(other == xs[0])) xs.push_back(other);

    std::vector<Point> result;
    for (const FieldElement& X : xs) {
        FieldElement w = source_.rhs_at(X);
        std::vector<FieldElement> ys;
        if (w.is_zero()) {
            ys.push_back(F.zero());
        } else if (auto yroot = w.sqrt()) {
            ys.push_back(*yroot);
            ys.push_back(-*yroot);
        }
        for (const FieldElement& Y : ys) {
            Point Q = Point::affine(X, Y);
            if (apply(Q) == P) result.push_back(Q);
        }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

std::vector<Point> TwoIsogeny::image() const {
    std::vector<Point> result;
    for (const Point& Q : source_.points()) result.push_back(apply(Q));
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

} // namespace squarex
