#ifndef SQUAREX_ISOGENY_HPP
#define SQUAREX_ISOGENY_HPP

#include <vector>

#include "squarex/curve.hpp"

namespace squarex {

/// The explicit degree-2 isogeny phi: E' -> E with
///
///   E : y^2 = x^3 + a x^2 + b x     (target)
///   E': Y^2 = X^3 - 2a X^2 + r X    (source, r = a^2 - 4b)
///
///   phi(X, Y) = ( Y^2 / (4 X^2),  Y (r - X^2) / (8 X^2) )
///
/// The source is always a valid member of the family: its b-parameter is
/// r != 0 and its own r-parameter is 16b != 0. Kernel is {inf, (0,0)}.
class TwoIsogeny {
public:
    /// Builds the isogeny onto `target` from its companion source curve.
    explicit TwoIsogeny(const Curve& target);

    const Curve& target() const { return target_; }   // E
    const Curve& source() const { return source_; }   // E'

    /// Forward evaluation. Kernel points map to infinity; everything else is
    /// evaluated with a single inversion of 8 X^2. The image always lies on
    /// the target curve. Throws OffCurveError for points not on the source.
    Point apply(const Point& P) const;

    /// {inf, (0,0)} on the source curve.
    std::vector<Point> kernel() const;

    /// All source points mapping to P: empty or exactly two points. Solves
    /// X^2 - 2(a + 2x) X + r = 0 for candidate X (discriminant 4(x^2+ax+b)),
    /// lifts each rational root to candidate Y values on the source curve,
    /// and keeps the candidates that phi actually maps to P.
    std::vector<Point> fiber(const Point& P) const;

    /// { phi(Q) : Q in E'(K) } with duplicates removed, in deterministic
    /// point order. Cardinality #E'(K) / 2. Enumeration-bounded.
    std::vector<Point> image() const;

private:
    Curve target_;
    Curve source_;
};

} // namespace squarex

#endif // SQUAREX_ISOGENY_HPP
