#ifndef SQUAREX_CURVE_HPP
#define SQUAREX_CURVE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "squarex/field.hpp"

namespace squarex {

/// A point on a curve of the family: the identity at infinity, or an affine
/// pair (x, y). Affine coordinates only.
class Point {
public:
    Point() = default; // infinity

    static Point infinity() { return Point(); }
    static Point affine(FieldElement x, FieldElement y) { return Point(std::move(x), std::move(y)); }

    bool is_infinity() const { return infinite_; }
    const FieldElement& x() const;
    const FieldElement& y() const;

    bool operator==(const Point& rhs) const;
    bool operator!=(const Point& rhs) const { return !(*this == rhs); }
    /// Deterministic point order: infinity first, then ascending x, then
    /// ascending y (canonical field order on both coordinates).
    bool operator<(const Point& rhs) const;

    /// "inf" or "(x,y)" with the field-element syntax for each coordinate.
    std::string str() const;

private:
    Point(FieldElement x, FieldElement y) : infinite_(false), x_(std::move(x)), y_(std::move(y)) {}

    bool infinite_ = true;
    FieldElement x_;
    FieldElement y_;
};

std::ostream& operator<<(std::ostream& os, const Point& P);

/// A member of the curve family y^2 = x^3 + a x^2 + b x over a finite field
/// of odd characteristic. Construction validates b != 0 and r = a^2 - 4b != 0
/// (the nonsingularity conditions for this family) and keeps r around.
class Curve {
public:
    Curve(const FiniteField& field, FieldElement a, FieldElement b);

    const FiniteField& field() const { return *field_; }
    const FieldElement& a() const { return a_; }
    const FieldElement& b() const { return b_; }
    /// r = a^2 - 4b, the discriminant of the quadratic factor x^2 + ax + b.
    const FieldElement& r() const { return r_; }

    bool operator==(const Curve& rhs) const;

    /// Right-hand side x^3 + a x^2 + b x.
    FieldElement rhs_at(const FieldElement& x) const;

    /// True iff P is infinity or satisfies the curve equation.
    bool contains(const Point& P) const;

    /// (x, y) -> (x, -y); infinity is its own negative. Throws OffCurveError
    /// for points not on the curve.
    Point negate(const Point& P) const;

    /// Chord-tangent addition. For P != +-Q: lambda = (y2-y1)/(x2-x1); for
    /// doubling with y != 0: lambda = (3x^2 + 2ax + b)/(2y). In both cases
    /// x3 = lambda^2 - a - x1 - x2 and y3 = lambda(x1 - x3) - y1.
    Point add(const Point& P, const Point& Q) const;

    /// n * P by double-and-add; 0 * P is infinity.
    Point multiply(uint64_t n, const Point& P) const;

    /// All points of E(K) in deterministic order: infinity first, then
    /// ascending x with the smaller root y first. A root y = 0 yields one
    /// point. Refuses when q exceeds the enumeration limit.
    std::vector<Point> points() const;

    /// #E(K) by the quadratic-character scan q + 1 + sum_x chi(x^3+ax^2+bx),
    /// chi(0) = 0. Independent of points(). Same enumeration limit.
    uint64_t point_count() const;

    /// Parses "inf" or "(x,y)". For extension fields each coordinate must
    /// list all k coefficients, so a point literal holds exactly 2k numbers.
    Point parse_point(std::string_view text) const;

private:
    void require_on_curve(const Point& P, const char* op) const;

    const FiniteField* field_;
    FieldElement a_;
    FieldElement b_;
    FieldElement r_;
};

} // namespace squarex

#endif // SQUAREX_CURVE_HPP
