#include "squarex/curve.hpp"

#include <ostream>

namespace squarex {

const FieldElement& Point::x() const {
    if (infinite_) throw Error("the point at infinity has no coordinates");
    return x_;
}

const FieldElement& Point::y() const {
    if (infinite_) throw Error("the point at infinity has no coordinates");
    return y_;
}

bool Point::operator==(const Point& rhs) const {
    if (infinite_ || rhs.infinite_) return infinite_ == rhs.infinite_;
    return x_ == rhs.x_ && y_ == rhs.y_;
}

bool Point::operator<(const Point& rhs) const {
    if (infinite_ || rhs.infinite_) return infinite_ && !rhs.infinite_;
    if (x_ != rhs.x_) return x_ < rhs.x_;
    return y_ < rhs.y_;
}

std::string Point::str() const {
    if (infinite_) return "inf";
    return "(" + x_.str() + "," + y_.str() + ")";
}

std::ostream& operator<<(std::ostream& os, const Point& P) {
    return os << P.str();
}

Curve::Curve(const FiniteField& field, FieldElement a, FieldElement b)
    : field_(&field), a_(std::move(a)), b_(std::move(b)), r_(field.zero()) {
    if (b_.is_zero())
        throw InvalidCurveError("b = 0: the curve x^3 + ax^2 + bx must have b != 0");
    r_ = a_ * a_ - (b_ + b_ + b_ + b_);
    if (r_.is_zero())
        throw InvalidCurveError("r = a^2 - 4b = 0: singular member of the family");
}

bool Curve::operator==(const Curve& rhs) const {
    return *field_ == *rhs.field_ && a_ == rhs.a_ && b_ == rhs.b_;
}

FieldElement Curve::rhs_at(const FieldElement& x) const {
    return ((x + a_) * x + b_) * x;
}

bool Curve::contains(const Point& P) const {
    if (P.is_infinity()) return true;
    return P.y() * P.y() == rhs_at(P.x());
}

void Curve::require_on_curve(const Point& P, const char* op) const {
    if (!contains(P))
        throw OffCurveError(std::string(op) + ": point " + P.str() + " is not on the curve");
}

Point Curve::negate(const Point& P) const {
    require_on_curve(P, "negate");
    if (P.is_infinity()) return P;
    return Point::affine(P.x(), -P.y());
}

Point Curve::add(const Point& P, const Point& Q) const {
    require_on_curve(P, "add");
    require_on_curve(Q, "add");
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;

    const FieldElement& x1 = P.x();
    const FieldElement& y1 = P.y();
    const FieldElement& x2 = Q.x();
    const FieldElement& y2 = Q.y();

    FieldElement lambda = field_->zero();
    if (x1 == x2) {
        if (y1 != y2) return Point::infinity(); // Q = -P
        if (y1.is_zero()) return Point::infinity(); // 2-torsion
        // tangent slope (3x^2 + 2ax + b) / 2y
        FieldElement three_x2 = x1 * x1;
        three_x2 = three_x2 + three_x2 + three_x2;
        FieldElement two_ax = a_ * x1;
        two_ax = two_ax + two_ax;
        lambda = (three_x2 + two_ax + b_) * (y1 + y1).inverse();
    } else {
        lambda = (y2 - y1) * (x2 - x1).inverse();
    }

    FieldElement x3 = lambda * lambda - a_ - x1 - x2;
    FieldElement y3 = lambda * (x1 - x3) - y1;
    return Point::affine(x3, y3);
}

Point Curve::multiply(uint64_t n, const Point& P) const {
    require_on_curve(P, "multiply");
    Point acc = Point::infinity();
    Point base = P;
    while (n) {
        if (n & 1) acc = add(acc, base);
        n >>= 1;
        if (n) base = add(base, base);
    }
    return acc;
}

std::vector<Point> Curve::points() const {
    const FiniteField& F = *field_;
    F.ensure_residue_tables();

    std::vector<Point> result;
    result.push_back(Point::infinity());
    for (const FieldElement& x : F.elements()) {
        FieldElement v = rhs_at(x);
        if (v.is_zero()) {
            result.push_back(Point::affine(x, F.zero()));
            continue;
        }
        if (auto root = v.sqrt()) {
            FieldElement other = -*root;
            result.push_back(Point::affine(x, *root));
            result.push_back(Point::affine(x, other));
        }
    }
    // elements() already walks x in canonical order; only the y pairs need
    // ordering (sqrt returns the canonical, smaller root first).
    return result;
}

uint64_t Curve::point_count() const {
    const FiniteField& F = *field_;
    if (F.q() > enumeration_limit())
        throw EnumerationLimitError("point count over a field of size " + std::to_string(F.q()) +
                                    " exceeds the enumeration limit");
    F.ensure_residue_tables();

    uint64_t count = F.q() + 1;
    for (uint64_t xi = 0; xi < F.q(); ++xi) {
        FieldElement v = rhs_at(F.element(xi));
        if (v.is_zero()) continue;
        if (v.is_square())
            ++count;
        else
            --count;
    }
    return count;
}

Point Curve::parse_point(std::string_view text) const {
    // strip surrounding spaces
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);

    if (text == "inf" || text == "INF" || text == "Inf") return Point::infinity();
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw ParseError("expected \"inf\" or \"(x,y)\", got \"" + std::string(text) + "\"");
    text = text.substr(1, text.size() - 2);

    std::vector<uint64_t> numbers;
    size_t start = 0;
    while (true) {
        size_t comma = text.find(',', start);
        std::string_view part = (comma == std::string_view::npos)
                                    ? text.substr(start)
                                    : text.substr(start, comma - start);
        numbers.push_back(detail::parse_unsigned(part));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }

    const unsigned k = field_->k();
    if (numbers.size() != 2 * k)
        throw ParseError("point literal must list " + std::to_string(2 * k) +
                         " coordinates for k=" + std::to_string(k));
    std::vector<uint64_t> xc(numbers.begin(), numbers.begin() + k);
    std::vector<uint64_t> yc(numbers.begin() + k, numbers.end());
    Point P = Point::affine(field_->from_coefficients(xc), field_->from_coefficients(yc));
    if (!contains(P))
        throw OffCurveError("point " + P.str() + " is not on the curve");
    return P;
}

} // namespace squarex
