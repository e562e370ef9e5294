#ifndef SQUAREX_FIELD_HPP
#define SQUAREX_FIELD_HPP

#include <array>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squarex/errors.hpp"

namespace squarex {

class FieldElement;

/// Enumeration ceiling shared by every exhaustive operation (field scans,
/// point listings, image computation, sweeps). Fields with q above the limit
/// can still be constructed and used for pointwise arithmetic; only the
/// exhaustive operations refuse. Default is 2^24.
uint64_t enumeration_limit();

/// Replaces the enumeration limit. Values are clamped to [2, 2^30]; the cap
/// keeps x*q + y point encodings inside 64 bits.
void set_enumeration_limit(uint64_t limit);

inline constexpr unsigned kMaxExtensionDegree = 4;

/// A finite field F_q with q = p^k, p an odd prime and 1 <= k <= 4.
///
/// Extension fields are represented as F_p[t]/(m) for a monic irreducible
/// modulus m of degree k, supplied as coefficients in ascending degree.
/// Instances are immutable and must outlive every element created from them;
/// they are neither copyable nor movable so element back-references stay
/// valid.
class FiniteField {
public:
    /// Full form: prime field for k = 1 (empty modulus), extension otherwise.
    /// Validates primality, the degree bound, irreducibility of the modulus,
    /// and the p^k < 2^62 word-size bound.
    FiniteField(uint64_t p, unsigned k, std::vector<uint64_t> modulus);

    static FiniteField prime_field(uint64_t p);
    static FiniteField extension_field(uint64_t p, unsigned k,
                                       const std::vector<uint64_t>& modulus);

    FiniteField(const FiniteField&) = delete;
    FiniteField& operator=(const FiniteField&) = delete;

    uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    uint64_t q() const { return q_; }
    /// Modulus coefficients c0..ck (ascending degree, ck = 1); empty for k = 1.
    const std::vector<uint64_t>& modulus() const { return modulus_; }

    bool operator==(const FiniteField& other) const;
    bool operator!=(const FiniteField& other) const { return !(*this == other); }

    FieldElement zero() const;
    FieldElement one() const;
    /// Element with the given canonical index in [0, q). Indices follow the
    /// enumeration order: residue value for k = 1, lexicographic coefficient
    /// order (constant term most significant) for k > 1.
    FieldElement element(uint64_t index) const;
    /// Element from an integer residue (k = 1 embedding; reduced mod p).
    FieldElement from_residue(uint64_t value) const;
    /// Element from coefficients in ascending degree; at most k entries,
    /// missing high coefficients are zero. Values are reduced mod p.
    FieldElement from_coefficients(const std::vector<uint64_t>& coeffs) const;

    /// Parses the textual element syntax: a decimal residue for k = 1,
    /// "c0,c1,...,c(k-1)" for k > 1 (shorter lists are zero-padded).
    FieldElement parse(std::string_view text) const;

    /// Forward range over all q elements in canonical order. Refuses with
    /// EnumerationLimitError when q exceeds the enumeration limit.
    class ElementRange;
    ElementRange elements() const;

    /// Builds the quadratic-residue/root lookup tables when q is small enough
    /// (<= 2^22). No-op above that size. Exhaustive scans call this once so
    /// squareness tests inside their loops are O(1).
    void ensure_residue_tables() const;

private:
    friend class FieldElement;

    struct ResidueTables {
        // sqrt_index[i]: canonical-root index of element i, or kNoRoot.
        static constexpr uint32_t kNoRoot = UINT32_MAX;
        std::vector<uint32_t> sqrt_index;
    };

    const ResidueTables* tables() const;

    uint64_t p_ = 0;
    unsigned k_ = 1;
    uint64_t q_ = 0;
    std::vector<uint64_t> modulus_; // ascending degree, size k+1 when k > 1

    mutable std::once_flag tables_once_;
    mutable std::unique_ptr<ResidueTables> tables_;
    mutable std::atomic<bool> tables_ready_{false};
};

/// An element of a FiniteField in canonical reduced form. Value type; cheap
/// to copy. Carries a pointer to its field, which must stay alive.
class FieldElement {
public:
    FieldElement() = default; // detached element, only valid as a placeholder

    const FiniteField& field() const;

    bool is_zero() const;
    /// Canonical index in [0, q); inverse of FiniteField::element().
    uint64_t index() const;
    /// Coefficient of t^i (the residue itself for i = 0 in a prime field).
    uint64_t coefficient(unsigned i) const { return coeff_[i]; }

    FieldElement operator+(const FieldElement& rhs) const;
    FieldElement operator-(const FieldElement& rhs) const;
    FieldElement operator*(const FieldElement& rhs) const;
    FieldElement operator-() const;

    FieldElement& operator+=(const FieldElement& rhs) { return *this = *this + rhs; }
    FieldElement& operator-=(const FieldElement& rhs) { return *this = *this - rhs; }
    FieldElement& operator*=(const FieldElement& rhs) { return *this = *this * rhs; }

    /// Multiplicative inverse; throws DivisionByZeroError on zero.
    FieldElement inverse() const;
    /// u^n with 0^0 = 1.
    FieldElement pow(uint64_t n) const;

    /// True iff some w satisfies w^2 = u; is_square(0) is true. Uses the
    /// residue table when the field has one, Euler's criterion otherwise.
    bool is_square() const;
    /// Canonical square root (the root with the smaller canonical index), or
    /// nullopt for non-squares. Tonelli-Shanks, with the u^((q+1)/4) fast
    /// path when q = 3 (mod 4).
    std::optional<FieldElement> sqrt() const;

    bool operator==(const FieldElement& rhs) const;
    bool operator!=(const FieldElement& rhs) const { return !(*this == rhs); }
    /// Canonical order: lexicographic on coefficient vectors (equivalently,
    /// index order). Used for root canonicalization and deterministic output.
    bool operator<(const FieldElement& rhs) const;

    /// Textual syntax: decimal residue for k = 1, "c0,c1,..." for k > 1.
    std::string str() const;

private:
    friend class FiniteField;

    FieldElement(const FiniteField* field, std::array<uint64_t, kMaxExtensionDegree> coeff)
        : field_(field), coeff_(coeff) {}

    void require_same_field(const FieldElement& rhs) const;

    const FiniteField* field_ = nullptr;
    std::array<uint64_t, kMaxExtensionDegree> coeff_{};
};

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

class FiniteField::ElementRange {
public:
    class iterator {
    public:
        using value_type = FieldElement;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(const FiniteField* field, uint64_t index) : field_(field), index_(index) {}

        FieldElement operator*() const { return field_->element(index_); }
        iterator& operator++() { ++index_; return *this; }
        iterator operator++(int) { iterator t = *this; ++index_; return t; }
        bool operator==(const iterator& rhs) const { return index_ == rhs.index_; }
        bool operator!=(const iterator& rhs) const { return index_ != rhs.index_; }

    private:
        const FiniteField* field_ = nullptr;
        uint64_t index_ = 0;
    };

    ElementRange(const FiniteField* field, uint64_t count) : field_(field), count_(count) {}
    iterator begin() const { return iterator(field_, 0); }
    iterator end() const { return iterator(field_, count_); }
    uint64_t size() const { return count_; }

private:
    const FiniteField* field_;
    uint64_t count_;
};

namespace detail {

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(uint64_t n);

/// Strict unsigned-decimal parser; throws ParseError on anything else.
uint64_t parse_unsigned(std::string_view text);

/// Euler-criterion squareness test, independent of the residue tables.
bool is_square_euler(const FieldElement& u);

/// Tonelli-Shanks square root, independent of the residue tables. Returns
/// the canonical root or nullopt.
std::optional<FieldElement> sqrt_tonelli_shanks(const FieldElement& u);

} // namespace detail

} // namespace squarex

#endif // SQUAREX_FIELD_HPP
