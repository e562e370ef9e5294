#ifndef SQUAREX_THEOREM_HPP
#define SQUAREX_THEOREM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "squarex/isogeny.hpp"

namespace squarex {

/// Per-curve verification record. For a curve E: y^2 = x^3 + ax^2 + bx over
/// F_q with companion source curve E' and 2-isogeny phi: E' -> E, the
/// predicted size of S = {inf} u {(x,y) in E(K) : x square} is
/// #E/2 when b is a square and #E/2 + 1 otherwise.
struct VerificationReport {
    uint64_t p = 0;
    unsigned k = 1;
    std::string a;
    std::string b;
    uint64_t card_E = 0;
    uint64_t card_E_prime = 0;
    uint64_t card_S = 0;
    uint64_t card_image = 0;
    bool b_is_square = false;
    uint64_t predicted_S = 0;
    bool theorem_ok = false;
    bool set_identity_ok = false;
    bool counts_equal_ok = false;

    bool passed() const { return theorem_ok && set_identity_ok && counts_equal_ok; }
};

/// S = {inf} u {(x,y) in E(K) : x square}; (0,0) is always a member since
/// 0 counts as square. Deterministic point order. Enumeration-bounded.
std::vector<Point> square_x_set(const Curve& E);

/// Full independent verification of one curve: counts #E and #E' by
/// character scan, materializes S and Im(phi) by enumeration, and compares
/// everything against the predicted relations. Never trusts one result to
/// derive another.
VerificationReport verify_curve(const Curve& E);

/// A field to sweep: prime field when k = 1, otherwise an extension with an
/// explicit modulus (k+1 coefficients, ascending degree, monic).
struct FieldSpec {
    uint64_t p = 0;
    unsigned k = 1;
    std::vector<uint64_t> modulus;
};

/// Sweep description. Exhaustive mode (samples absent) verifies every valid
/// (a, b) pair of every field. Sampled mode draws `samples` pairs per field,
/// uniformly over valid pairs by rejection (reject b = 0 or a^2 = 4b, about
/// 2/p of draws), reproducibly from the seed; duplicate draws collapse to
/// one report per curve.
struct SweepSpec {
    std::vector<FieldSpec> fields;
    std::optional<uint64_t> samples;
    uint64_t seed = 0;
    bool keep_going = false;
    unsigned jobs = 1;

    /// All primes in [p_min, p_max] as prime-field specs. Throws on an empty
    /// range or a bound beyond the enumeration limit.
    static SweepSpec prime_range(uint64_t p_min, uint64_t p_max);
};

struct SweepSummary {
    uint64_t curves = 0;
    uint64_t failures = 0;
    uint64_t elapsed_ms = 0;
};

using ReportSink = std::function<void(const VerificationReport&)>;

/// Runs the sweep, delivering one report per curve to `sink` in (p, k, a, b)
/// order regardless of the worker count. Unless keep_going is set, the sweep
/// halts after the first failing report (a failure here means a bug: the
/// relations it checks are theorems).
SweepSummary run_sweep(const SweepSpec& spec, const ReportSink& sink);

// --- report serialization -------------------------------------------------
// JSON and CSV are the stable machine formats; the text form is for humans.

std::string report_csv_header();
std::string report_to_csv(const VerificationReport& rep);
std::string report_to_json(const VerificationReport& rep);
std::string report_to_text(const VerificationReport& rep);
std::string summary_to_json(const SweepSummary& summary);

} // namespace squarex

#endif // SQUAREX_THEOREM_HPP
