#include "squarex/field.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <ostream>

namespace squarex {

namespace {

std::atomic<uint64_t> g_enum_limit{uint64_t{1} << 24};

// q^2 must fit in 64 bits for packed (x, y) point keys elsewhere.
constexpr uint64_t kEnumLimitCap = uint64_t{1} << 30;
// All prime-field products must fit in double-width intermediates.
constexpr uint64_t kMaxCardinality = uint64_t{1} << 62;
// Residue/root lookup tables are built only up to this field size.
constexpr uint64_t kResidueTableLimit = uint64_t{1} << 22;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t p) {
    uint64_t acc = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) acc = mulmod(acc, base, p);
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    return acc;
}

uint64_t invmod_prime(uint64_t a, uint64_t p) {
    return powmod(a, p - 2, p);
}

// ---- dense polynomials over F_p, ascending degree, used only for modulus
// ---- validation at field construction

using Poly = std::vector<uint64_t>;

void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a * b reduced by the monic polynomial f.
Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    const size_t deg_f = f.size() - 1;
    for (size_t d = prod.size(); d-- > deg_f;) {
        uint64_t c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        for (size_t i = 0; i < deg_f; ++i) {
            if (!f[i]) continue;
            prod[d - deg_f + i] =
                (prod[d - deg_f + i] + mulmod(p - f[i], c, p)) % p;
        }
    }
    prod.resize(deg_f);
    poly_trim(prod);
    return prod;
}

// x^e mod f.
Poly poly_pow_x(uint64_t e, const Poly& f, uint64_t p) {
    Poly result{1};
    Poly base{0, 1};
    while (e) {
        if (e & 1) result = poly_mulmod(result, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    return result;
}

Poly poly_mod(Poly a, const Poly& b, uint64_t p) {
    const size_t deg_b = b.size() - 1;
    const uint64_t lead_inv = invmod_prime(b.back(), p);
    while (a.size() > deg_b) {
        uint64_t c = mulmod(a.back(), lead_inv, p);
        size_t shift = a.size() - b.size();
        if (c) {
            for (size_t i = 0; i < b.size(); ++i)
                a[shift + i] = (a[shift + i] + mulmod(p - b[i], c, p)) % p;
        }
        a.pop_back();
        poly_trim(a);
        if (a.empty()) break;
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// f monic of degree k in [2, 4]. Reducible f of degree <= 3 has a linear
// factor; degree 4 additionally allows a quadratic-quadratic split. Linear
// factors show up in gcd(x^p - x, f), quadratic ones in gcd(x^(p^2) - x, f).
bool poly_is_irreducible(const Poly& f, uint64_t p) {
    const size_t k = f.size() - 1;

    auto coprime_to_frobenius_fixed = [&](uint64_t e) {
        Poly g = poly_pow_x(e, f, p); // x^e mod f
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p; // g - x
        poly_trim(g);
        if (g.empty()) return false; // f divides x^e - x: splits into small factors
        Poly d = poly_gcd(f, g, p);
        return d.size() == 1;
    };

    if (!coprime_to_frobenius_fixed(p)) return false;
    if (k == 4 && !coprime_to_frobenius_fixed(p * p)) return false; // p < 2^16 here
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<uint64_t> split_u64_list(std::string_view text) {
    std::vector<uint64_t> values;
    size_t start = 0;
    while (true) {
        size_t comma = text.find(',', start);
        std::string_view part = (comma == std::string_view::npos)
                                    ? text.substr(start)
                                    : text.substr(start, comma - start);
        values.push_back(detail::parse_unsigned(part));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

} // namespace

uint64_t enumeration_limit() {
    return g_enum_limit.load(std::memory_order_relaxed);
}

void set_enumeration_limit(uint64_t limit) {
    limit = std::clamp<uint64_t>(limit, 2, kEnumLimitCap);
    g_enum_limit.store(limit, std::memory_order_relaxed);
}

namespace detail {

uint64_t parse_unsigned(std::string_view text) {
    text = trim(text);
    uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw ParseError("expected an unsigned decimal integer, got \"" +
                         std::string(text) + "\"");
    return value;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % small == 0) return n == small;
    }
    uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for all 64-bit inputs.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace detail

// ---------------------------------------------------------------------------
// FiniteField

FiniteField::FiniteField(uint64_t p, unsigned k, std::vector<uint64_t> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
    if (p_ < 3 || (p_ & 1) == 0)
        throw InvalidFieldError("field characteristic must be an odd prime, got p=" +
                                std::to_string(p_));
    if (!detail::is_prime_u64(p_))
        throw InvalidFieldError("p=" + std::to_string(p_) + " is not prime");
    if (k_ < 1 || k_ > kMaxExtensionDegree)
        throw InvalidFieldError("extension degree k=" + std::to_string(k_) +
                                " outside supported range [1, " +
                                std::to_string(kMaxExtensionDegree) + "]");

    unsigned __int128 q = 1;
    for (unsigned i = 0; i < k_; ++i) q *= p_;
    if (q >= kMaxCardinality)
        throw InvalidFieldError("field cardinality p^k exceeds the 2^62 word-size bound");
    q_ = static_cast<uint64_t>(q);

    if (k_ == 1) {
        if (!modulus_.empty())
            throw InvalidFieldError("prime fields take no modulus polynomial");
        return;
    }

    if (modulus_.size() != k_ + 1)
        throw InvalidFieldError("modulus must list k+1 coefficients (degree k)");
    for (auto& c : modulus_) c %= p_;
    if (modulus_.back() != 1)
        throw InvalidFieldError("modulus must be monic");
    if (!poly_is_irreducible(modulus_, p_))
        throw InvalidFieldError("modulus is reducible over F_p");
}

FiniteField FiniteField::prime_field(uint64_t p) {
    return FiniteField(p, 1, {});
}

FiniteField FiniteField::extension_field(uint64_t p, unsigned k,
                                         const std::vector<uint64_t>& modulus) {
    if (k < 2)
        throw InvalidFieldError("extension_field requires k >= 2; use prime_field");
    return FiniteField(p, k, modulus);
}

bool FiniteField::operator==(const FiniteField& other) const {
    return p_ == other.p_ && k_ == other.k_ && modulus_ == other.modulus_;
}

FieldElement FiniteField::zero() const {
    return FieldElement(this, {});
}

FieldElement FiniteField::one() const {
    std::array<uint64_t, kMaxExtensionDegree> c{};
    c[0] = 1;
    return FieldElement(this, c);
}

FieldElement FiniteField::element(uint64_t index) const {
    if (index >= q_)
        throw Error("element index " + std::to_string(index) + " out of range for q=" +
                    std::to_string(q_));
    std::array<uint64_t, kMaxExtensionDegree> c{};
    for (unsigned i = k_; i-- > 0;) {
        c[i] = index % p_;
        index /= p_;
    }
    return FieldElement(this, c);
}

FieldElement FiniteField::from_residue(uint64_t value) const {
    std::array<uint64_t, kMaxExtensionDegree> c{};
    c[0] = value % p_;
    return FieldElement(this, c);
}

FieldElement FiniteField::from_coefficients(const std::vector<uint64_t>& coeffs) const {
    if (coeffs.empty() || coeffs.size() > k_)
        throw ParseError("expected between 1 and " + std::to_string(k_) +
                         " coefficients, got " + std::to_string(coeffs.size()));
    std::array<uint64_t, kMaxExtensionDegree> c{};
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i] % p_;
    return FieldElement(this, c);
}

FieldElement FiniteField::parse(std::string_view text) const {
    return from_coefficients(split_u64_list(text));
}

FiniteField::ElementRange FiniteField::elements() const {
    if (q_ > enumeration_limit())
        throw EnumerationLimitError("field of size " + std::to_string(q_) +
                                    " exceeds the enumeration limit " +
                                    std::to_string(enumeration_limit()));
    return ElementRange(this, q_);
}

void FiniteField::ensure_residue_tables() const {
    if (q_ > kResidueTableLimit) return;
    std::call_once(tables_once_, [this] {
        auto t = std::make_unique<ResidueTables>();
        t->sqrt_index.assign(q_, ResidueTables::kNoRoot);
        for (uint64_t yi = 0; yi < q_; ++yi) {
            FieldElement y = element(yi);
            uint64_t vi = (y * y).index();
            if (t->sqrt_index[vi] == ResidueTables::kNoRoot)
                t->sqrt_index[vi] = static_cast<uint32_t>(yi);
        }
        tables_ = std::move(t);
        tables_ready_.store(true, std::memory_order_release);
    });
}

const FiniteField::ResidueTables* FiniteField::tables() const {
    if (!tables_ready_.load(std::memory_order_acquire)) return nullptr;
    return tables_.get();
}

// ---------------------------------------------------------------------------
// FieldElement

const FiniteField& FieldElement::field() const {
    if (!field_) throw Error("operation on a detached field element");
    return *field_;
}

void FieldElement::require_same_field(const FieldElement& rhs) const {
    if (field_ == rhs.field_ && field_ != nullptr) return;
    if (field_ && rhs.field_ && *field_ == *rhs.field_) return;
    throw FieldMismatchError("operands belong to different fields");
}

bool FieldElement::is_zero() const {
    for (unsigned i = 0; i < field().k_; ++i)
        if (coeff_[i]) return false;
    return true;
}

uint64_t FieldElement::index() const {
    const FiniteField& F = field();
    uint64_t idx = 0;
    for (unsigned i = 0; i < F.k_; ++i) idx = idx * F.p_ + coeff_[i];
    return idx;
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
    require_same_field(rhs);
    const FiniteField& F = *field_;
    std::array<uint64_t, kMaxExtensionDegree> c{};
    for (unsigned i = 0; i < F.k_; ++i) {
        uint64_t s = coeff_[i] + rhs.coeff_[i];
        c[i] = s >= F.p_ ? s - F.p_ : s;
    }
    return FieldElement(field_, c);
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
    require_same_field(rhs);
    const FiniteField& F = *field_;
    std::array<uint64_t, kMaxExtensionDegree> c{};
    for (unsigned i = 0; i < F.k_; ++i) {
        c[i] = coeff_[i] >= rhs.coeff_[i] ? coeff_[i] - rhs.coeff_[i]
                                          : coeff_[i] + F.p_ - rhs.coeff_[i];
    }
    return FieldElement(field_, c);
}

FieldElement FieldElement::operator-() const {
    const FiniteField& F = field();
    std::array<uint64_t, kMaxExtensionDegree> c{};
    for (unsigned i = 0; i < F.k_; ++i) c[i] = coeff_[i] ? F.p_ - coeff_[i] : 0;
    return FieldElement(field_, c);
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
    require_same_field(rhs);
    const FiniteField& F = *field_;
    const uint64_t p = F.p_;
    if (F.k_ == 1) {
        std::array<uint64_t, kMaxExtensionDegree> c{};
        c[0] = mulmod(coeff_[0], rhs.coeff_[0], p);
        return FieldElement(field_, c);
    }
    const unsigned k = F.k_;
    // Schoolbook convolution, then reduce degrees k .. 2k-2 by the monic
    // modulus: t^k = -(m_0 + m_1 t + ... + m_{k-1} t^{k-1}).
    std::array<uint64_t, 2 * kMaxExtensionDegree - 1> tmp{};
    for (unsigned i = 0; i < k; ++i) {
        if (!coeff_[i]) continue;
        for (unsigned j = 0; j < k; ++j) {
            if (!rhs.coeff_[j]) continue;
            unsigned __int128 acc = tmp[i + j];
            acc += static_cast<unsigned __int128>(coeff_[i]) * rhs.coeff_[j];
            tmp[i + j] = static_cast<uint64_t>(acc % p);
        }
    }
    const auto& m = F.modulus_;
    for (unsigned d = 2 * k - 2; d >= k; --d) {
        uint64_t c = tmp[d];
        if (!c) {
            continue;
        }
        tmp[d] = 0;
        for (unsigned i = 0; i < k; ++i) {
            if (!m[i]) continue;
            tmp[d - k + i] = (tmp[d - k + i] + mulmod(p - m[i], c, p)) % p;
        }
    }
    std::array<uint64_t, kMaxExtensionDegree> c{};
    for (unsigned i = 0; i < k; ++i) c[i] = tmp[i];
    return FieldElement(field_, c);
}

FieldElement FieldElement::pow(uint64_t n) const {
    const FiniteField& F = field();
    FieldElement acc = F.one();
    FieldElement base = *this;
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DivisionByZeroError("inverse of zero");
    const FiniteField& F = field();
    if (F.k_ == 1) {
        // extended Euclid; coefficients stay within +-p, so int64 suffices
        // for p < 2^62
        int64_t t0 = 0, t1 = 1;
        int64_t r0 = static_cast<int64_t>(F.p_), r1 = static_cast<int64_t>(coeff_[0]);
        while (r1 != 0) {
            int64_t quot = r0 / r1;
            int64_t tmp = r0 - quot * r1;
            r0 = r1;
            r1 = tmp;
            tmp = t0 - quot * t1;
            t0 = t1;
            t1 = tmp;
        }
        uint64_t inv = t0 < 0 ? static_cast<uint64_t>(t0 + static_cast<int64_t>(F.p_))
                              : static_cast<uint64_t>(t0);
        std::array<uint64_t, kMaxExtensionDegree> c{};
        c[0] = inv;
        return FieldElement(field_, c);
    }
    // u^(q-2) = u^(-1) in the multiplicative group of order q-1.
    return pow(F.q_ - 2);
}

bool FieldElement::operator==(const FieldElement& rhs) const {
    require_same_field(rhs);
    for (unsigned i = 0; i < field_->k_; ++i)
        if (coeff_[i] != rhs.coeff_[i]) return false;
    return true;
}

bool FieldElement::operator<(const FieldElement& rhs) const {
    require_same_field(rhs);
    for (unsigned i = 0; i < field_->k_; ++i) {
        if (coeff_[i] != rhs.coeff_[i]) return coeff_[i] < rhs.coeff_[i];
    }
    return false;
}

std::string FieldElement::str() const {
    const FiniteField& F = field();
    std::string out = std::to_string(coeff_[0]);
    for (unsigned i = 1; i < F.k_; ++i) {
        out += ',';
        out += std::to_string(coeff_[i]);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
    return os << e.str();
}

namespace detail {

bool is_square_euler(const FieldElement& u) {
    if (u.is_zero()) return true;
    const FiniteField& F = u.field();
    return u.pow((F.q() - 1) / 2) == F.one();
}

std::optional<FieldElement> sqrt_tonelli_shanks(const FieldElement& u) {
    const FiniteField& F = u.field();
    if (u.is_zero()) return F.zero();
    if (!is_square_euler(u)) return std::nullopt;

    FieldElement w = F.zero();
    const uint64_t q = F.q();
    if (q % 4 == 3) {
        w = u.pow((q + 1) / 4);
    } else {
        uint64_t t = q - 1;
        unsigned s = 0;
        while ((t & 1) == 0) {
            t >>= 1;
            ++s;
        }
        // First non-residue in canonical order seeds the 2-Sylow descent.
        FieldElement z = F.one();
        for (uint64_t idx = 1; idx < q; ++idx) {
            z = F.element(idx);
            if (!is_square_euler(z)) break;
        }
        const FieldElement one = F.one();
        FieldElement c = z.pow(t);
        w = u.pow((t + 1) / 2);
        FieldElement b = u.pow(t);
        unsigned m = s;
        while (!(b == one)) {
            unsigned i = 0;
            FieldElement probe = b;
            while (!(probe == one)) {
                probe = probe * probe;
                ++i;
            }
            FieldElement tau = c;
            for (unsigned j = 0; j + i + 1 < m; ++j) tau = tau * tau;
            m = i;
            c = tau * tau;
            w = w * tau;
            b = b * c;
        }
    }
    FieldElement neg = -w;
    return neg < w ? neg : w;
}

} // namespace detail

bool FieldElement::is_square() const {
    const FiniteField& F = field();
    if (const auto* t = F.tables())
        return t->sqrt_index[index()] != FiniteField::ResidueTables::kNoRoot;
    return detail::is_square_euler(*this);
}

std::optional<FieldElement> FieldElement::sqrt() const {
    const FiniteField& F = field();
    if (const auto* t = F.tables()) {
        uint32_t ri = t->sqrt_index[index()];
        if (ri == FiniteField::ResidueTables::kNoRoot) return std::nullopt;
        return F.element(ri);
    }
    return detail::sqrt_tonelli_shanks(*this);
}

} // namespace squarex
