#include "squarex/theorem.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace squarex {

std::vector<Point> square_x_set(const Curve& E) {
    std::vector<Point> result;
    for (const Point& P : E.points()) {
        if (P.is_infinity() || P.x().is_square()) result.push_back(P);
    }
    return result;
}

namespace {

constexpr uint64_t kInfinityKey = UINT64_MAX;

// Packed (x, y) index pair; valid because the enumeration limit caps q at
// 2^30, so x*q + y < 2^60.
uint64_t point_key(const Point& P, uint64_t q) {
    return P.is_infinity() ? kInfinityKey : P.x().index() * q + P.y().index();
}

void sort_unique(std::vector<uint64_t>& keys) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

} // namespace

VerificationReport verify_curve(const Curve& E) {
    const FiniteField& F = E.field();
    const uint64_t q = F.q();
    if (q > enumeration_limit())
        throw EnumerationLimitError("verification over a field of size " + std::to_string(q) +
                                    " exceeds the enumeration limit");
    F.ensure_residue_tables();

    VerificationReport rep;
    rep.p = F.p();
    rep.k = F.k();
    rep.a = E.a().str();
    rep.b = E.b().str();

    TwoIsogeny phi(E);
    const Curve& Eprime = phi.source();

    // Target pass: #E by the quadratic-character sum q + 1 + sum chi(f(x)),
    // and the packed keys of S = {inf} u {(x, y) : x square}, in one scan.
    uint64_t count_e = q + 1;
    std::vector<uint64_t> s_keys;
    s_keys.reserve(q + 2);
    s_keys.push_back(kInfinityKey);
    for (uint64_t xi = 0; xi < q; ++xi) {
        FieldElement x = F.element(xi);
        FieldElement v = E.rhs_at(x);
        if (v.is_zero()) {
            if (x.is_square()) s_keys.push_back(xi * q);
        } else if (v.is_square()) {
            ++count_e;
            if (x.is_square()) {
                FieldElement root = *v.sqrt();
                s_keys.push_back(xi * q + root.index());
                s_keys.push_back(xi * q + (-root).index());
            }
        } else {
            --count_e;
        }
    }
    sort_unique(s_keys);

    // Source pass: #E' by the same character sum, plus Im(phi) by mapping
    // every source point forward. phi fixes x and negates y under Y -> -Y
    // (both Eq.-(1) coordinates are even resp. odd in Y), so the second root
    // reuses the first evaluation.
    uint64_t count_ep = q + 1;
    std::vector<uint64_t> image_keys;
    image_keys.reserve(q + 2);
    image_keys.push_back(kInfinityKey);
    for (uint64_t Xi = 0; Xi < q; ++Xi) {
        FieldElement X = F.element(Xi);
        FieldElement w = Eprime.rhs_at(X);
        if (w.is_zero()) {
            image_keys.push_back(point_key(phi.apply(Point::affine(X, F.zero())), q));
        } else if (w.is_square()) {
            ++count_ep;
            Point img = phi.apply(Point::affine(X, *w.sqrt()));
            image_keys.push_back(point_key(img, q));
            image_keys.push_back(img.x().index() * q + (-img.y()).index());
        } else {
            --count_ep;
        }
    }
    sort_unique(image_keys);

    rep.card_E = count_e;
    rep.card_E_prime = count_ep;

    rep.card_S = s_keys.size();
    rep.card_image = image_keys.size();
    rep.b_is_square = E.b().is_square();
    rep.predicted_S = rep.card_E / 2 + (rep.b_is_square ? 0 : 1);
    rep.theorem_ok = rep.card_S == rep.predicted_S;
    rep.counts_equal_ok = rep.card_E == rep.card_E_prime;

    // S should equal Im(phi), plus the point (0,0) exactly when b is not a
    // square (then (0,0) has no rational preimage).
    const uint64_t zero_key = 0; // (0,0) packs to 0
    const bool zero_in_image =
        std::binary_search(image_keys.begin(), image_keys.end(), zero_key);
    if (rep.b_is_square) {
        rep.set_identity_ok = zero_in_image && s_keys == image_keys;
    } else {
        std::vector<uint64_t> expected;
        expected.reserve(image_keys.size() + 1);
        expected.push_back(zero_key);
        expected.insert(expected.end(), image_keys.begin(), image_keys.end());
        rep.set_identity_ok = !zero_in_image && s_keys == expected;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

uint64_t splitmix_step(uint64_t& state, uint64_t salt) {
    state += 0x9e3779b97f4a7c15ull + salt;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Per-field RNG seed: independent of the other fields in the sweep.
uint64_t field_seed(uint64_t seed, const FieldSpec& fs) {
    uint64_t state = seed;
    uint64_t out = splitmix_step(state, fs.p);
    out ^= splitmix_step(state, fs.k);
    for (uint64_t c : fs.modulus) out ^= splitmix_step(state, c);
    return out;
}

uint64_t bounded_draw(std::mt19937_64& rng, uint64_t n) {
    const uint64_t reject_from = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= reject_from);
    return v % n;
}

bool valid_pair(const FiniteField& F, uint64_t a_idx, uint64_t b_idx) {
    if (b_idx == 0) return false;
    FieldElement a = F.element(a_idx);
    FieldElement b = F.element(b_idx);
    FieldElement four_b = b + b + b + b;
    return !(a * a == four_b);
}

struct CurveJob {
    size_t field_index;
    uint64_t a_idx;
    uint64_t b_idx;
};

bool field_spec_less(const FieldSpec& lhs, const FieldSpec& rhs) {
    if (lhs.p != rhs.p) return lhs.p < rhs.p;
    if (lhs.k != rhs.k) return lhs.k < rhs.k;
    return lhs.modulus < rhs.modulus;
}

} // namespace

SweepSpec SweepSpec::prime_range(uint64_t p_min, uint64_t p_max) {
    if (p_min > p_max) throw Error("empty prime range: p_min > p_max");
    if (p_max > enumeration_limit())
        throw EnumerationLimitError("p_max " + std::to_string(p_max) +
                                    " exceeds the enumeration limit " +
                                    std::to_string(enumeration_limit()));
    SweepSpec spec;
    for (uint64_t p = std::max<uint64_t>(p_min, 3); p <= p_max; ++p) {
        if ((p & 1) && detail::is_prime_u64(p)) spec.fields.push_back({p, 1, {}});
    }
    return spec;
}

SweepSummary run_sweep(const SweepSpec& spec, const ReportSink& sink) {
    const auto started = std::chrono::steady_clock::now();

    std::vector<FieldSpec> field_specs = spec.fields;
    std::stable_sort(field_specs.begin(), field_specs.end(), field_spec_less);

    std::vector<std::unique_ptr<FiniteField>> fields;
    fields.reserve(field_specs.size());
    for (const FieldSpec& fs : field_specs) {
        fields.push_back(std::make_unique<FiniteField>(fs.p, fs.k, fs.modulus));
        if (fields.back()->q() > enumeration_limit())
            throw EnumerationLimitError("sweep field of size " +
                                        std::to_string(fields.back()->q()) +
                                        " exceeds the enumeration limit");
    }

    // Deterministic job list in (p, k, a, b) order.
    std::vector<CurveJob> jobs;
    for (size_t fi = 0; fi < fields.size(); ++fi) {
        const FiniteField& F = *fields[fi];
        if (!spec.samples) {
            for (uint64_t a_idx = 0; a_idx < F.q(); ++a_idx)
                for (uint64_t b_idx = 1; b_idx < F.q(); ++b_idx)
                    if (valid_pair(F, a_idx, b_idx)) jobs.push_back({fi, a_idx, b_idx});
        } else {
            std::mt19937_64 rng(field_seed(spec.seed, field_specs[fi]));
            std::vector<std::pair<uint64_t, uint64_t>> pairs;
            pairs.reserve(*spec.samples);
            while (pairs.size() < *spec.samples) {
                uint64_t a_idx = bounded_draw(rng, F.q());
                uint64_t b_idx = bounded_draw(rng, F.q());
                if (valid_pair(F, a_idx, b_idx)) pairs.emplace_back(a_idx, b_idx);
            }
            std::sort(pairs.begin(), pairs.end());
            pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
            for (auto [a_idx, b_idx] : pairs) jobs.push_back({fi, a_idx, b_idx});
        }
    }

    auto compute = [&](const CurveJob& job) {
        const FiniteField& F = *fields[job.field_index];
        return verify_curve(Curve(F, F.element(job.a_idx), F.element(job.b_idx)));
    };

    SweepSummary summary;
    auto finish = [&] {
        summary.elapsed_ms = static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started)
                .count());
        return summary;
    };

    const unsigned jobs_n = std::max(1u, spec.jobs);
    if (jobs_n == 1 || jobs.size() <= 1) {
        for (const CurveJob& job : jobs) {
            VerificationReport rep = compute(job);
            ++summary.curves;
            if (!rep.passed()) ++summary.failures;
            sink(rep);
            if (!rep.passed() && !spec.keep_going) break;
        }
        return finish();
    }

    // Parallel path: workers fill slots in claim order; the caller thread
    // drains them in index order so output stays deterministic.
    std::vector<std::unique_ptr<VerificationReport>> slots(jobs.size());
    std::atomic<size_t> next_job{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr first_error;

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            size_t i = next_job.fetch_add(1, std::memory_order_relaxed);
            if (i >= jobs.size()) return;
            std::unique_ptr<VerificationReport> rep;
            try {
                rep = std::make_unique<VerificationReport>(compute(jobs[i]));
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                cv.notify_all();
                return;
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                slots[i] = std::move(rep);
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    const unsigned n_workers = static_cast<unsigned>(
        std::min<size_t>(jobs_n, jobs.size()));
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);

    try {
        std::unique_lock<std::mutex> lock(mu);
        for (size_t emit = 0; emit < jobs.size(); ++emit) {
            cv.wait(lock, [&] { return slots[emit] != nullptr || first_error; });
            if (first_error) break;
            VerificationReport rep = *slots[emit];
            slots[emit].reset();
            lock.unlock();
            ++summary.curves;
            if (!rep.passed()) ++summary.failures;
            sink(rep);
            if (!rep.passed() && !spec.keep_going) {
                stop.store(true, std::memory_order_relaxed);
                lock.lock();
                break;
            }
            lock.lock();
        }
    } catch (...) {
        stop.store(true, std::memory_order_relaxed);
        for (std::thread& t : pool) t.join();
        throw;
    }

    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return finish();
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string csv_quote_if_needed(const std::string& value) {
    if (value.find(',') == std::string::npos) return value;
    return "\"" + value + "\"";
}

const char* bool_word(bool v) {
    return v ? "true" : "false";
}

} // namespace

std::string report_csv_header() {
    return "p,k,a,b,card_E,card_E_prime,card_S,card_image,b_is_square,"
           "predicted_S,theorem_ok,set_identity_ok,counts_equal_ok";
}

std::string report_to_csv(const VerificationReport& rep) {
    std::ostringstream os;
    os << rep.p << ',' << rep.k << ',' << csv_quote_if_needed(rep.a) << ','
       << csv_quote_if_needed(rep.b) << ',' << rep.card_E << ',' << rep.card_E_prime << ','
       << rep.card_S << ',' << rep.card_image << ',' << bool_word(rep.b_is_square) << ','
       << rep.predicted_S << ',' << bool_word(rep.theorem_ok) << ','
       << bool_word(rep.set_identity_ok) << ',' << bool_word(rep.counts_equal_ok);
    return os.str();
}

std::string report_to_json(const VerificationReport& rep) {
    nlohmann::ordered_json j;
    j["p"] = rep.p;
    j["k"] = rep.k;
    j["a"] = rep.a;
    j["b"] = rep.b;
    j["card_E"] = rep.card_E;
    j["card_E_prime"] = rep.card_E_prime;
    j["card_S"] = rep.card_S;
    j["card_image"] = rep.card_image;
    j["b_is_square"] = rep.b_is_square;
    j["predicted_S"] = rep.predicted_S;
    j["theorem_ok"] = rep.theorem_ok;
    j["set_identity_ok"] = rep.set_identity_ok;
    j["counts_equal_ok"] = rep.counts_equal_ok;
    return j.dump();
}

std::string report_to_text(const VerificationReport& rep) {
    std::ostringstream os;
    os << "F_" << rep.p;
    if (rep.k > 1) os << '^' << rep.k;
    os << " a=" << rep.a << " b=" << rep.b << ": #E=" << rep.card_E
       << " #E'=" << rep.card_E_prime << " #S=" << rep.card_S
       << " #Im=" << rep.card_image << " b_square=" << (rep.b_is_square ? "yes" : "no")
       << " predicted_S=" << rep.predicted_S
       << " theorem=" << (rep.theorem_ok ? "ok" : "FAIL")
       << " identity=" << (rep.set_identity_ok ? "ok" : "FAIL")
       << " counts=" << (rep.counts_equal_ok ? "ok" : "FAIL");
    return os.str();
}

std::string summary_to_json(const SweepSummary& summary) {
    nlohmann::ordered_json j;
    j["curves"] = summary.curves;
    j["failures"] = summary.failures;
    j["elapsed_ms"] = summary.elapsed_ms;
    return j.dump();
}

} // namespace squarex
