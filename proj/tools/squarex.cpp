// squarex: command-line front end for verifying point counts with square
// x-coordinates on curves y^2 = x^3 + ax^2 + bx over small finite fields.
//
// Exit codes: 0 success/verified, 1 verification failure, 2 usage or input
// error. stdout carries data; stderr carries diagnostics.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "squarex/theorem.hpp"

namespace {

using namespace squarex;

enum class Format { Text, Json, Csv };

struct FieldOptions {
    uint64_t p = 0;
    unsigned k = 1;
    std::string modulus;
};

struct CurveOptions {
    std::string a;
    std::string b;
};

void add_field_options(CLI::App* cmd, FieldOptions& opts) {
    cmd->add_option("--p", opts.p, "Field characteristic (odd prime)")->required();
    cmd->add_option("--k", opts.k, "Extension degree (default 1: prime field)");
    cmd->add_option("--modulus", opts.modulus,
                    "Monic irreducible modulus \"c0,c1,...,1\" (k+1 coefficients; required for k > 1)");
}

void add_curve_options(CLI::App* cmd, CurveOptions& opts) {
    cmd->add_option("--a", opts.a, "Curve parameter a (field-element syntax)")->required();
    cmd->add_option("--b", opts.b, "Curve parameter b (field-element syntax)")->required();
}

void add_format_option(CLI::App* cmd, Format& format) {
    cmd->add_option("--format", format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{
                {"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}},
            CLI::ignore_case));
}

std::unique_ptr<FiniteField> make_field(const FieldOptions& opts) {
    if (opts.k <= 1) {
        if (!opts.modulus.empty())
            throw ParseError("--modulus is only meaningful with --k >= 2");
        return std::make_unique<FiniteField>(opts.p, 1, std::vector<uint64_t>{});
    }
    if (opts.modulus.empty())
        throw ParseError("--k >= 2 requires --modulus");
    std::vector<uint64_t> coeffs;
    size_t start = 0;
    const std::string& text = opts.modulus;
    while (true) {
        size_t comma = text.find(',', start);
        std::string part = (comma == std::string::npos) ? text.substr(start)
                                                        : text.substr(start, comma - start);
        coeffs.push_back(detail::parse_unsigned(part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return std::make_unique<FiniteField>(opts.p, opts.k, coeffs);
}

Curve make_curve(const FiniteField& F, const CurveOptions& opts) {
    return Curve(F, F.parse(opts.a), F.parse(opts.b));
}

std::string join_points(const std::vector<Point>& points) {
    std::string out;
    for (size_t i = 0; i < points.size(); ++i) {
        if (i) out += ',';
        out += points[i].str();
    }
    return out;
}

nlohmann::json points_json(const std::vector<Point>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Point& P : points) arr.push_back(P.str());
    return arr;
}

std::string csv_point(const Point& P) {
    if (P.is_infinity()) return P.str();
    return "\"" + P.str() + "\""; // affine points contain commas
}

std::string csv_element(const std::string& text) {
    if (text.find(',') == std::string::npos) return text;
    return "\"" + text + "\"";
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const FieldOptions& fopts, const CurveOptions& copts, Format format) {
    auto F = make_field(fopts);
    VerificationReport rep = verify_curve(make_curve(*F, copts));
    switch (format) {
    case Format::Text:
        std::cout << report_to_text(rep) << '\n';
        break;
    case Format::Json:
        std::cout << report_to_json(rep) << '\n';
        break;
    case Format::Csv:
        std::cout << report_csv_header() << '\n' << report_to_csv(rep) << '\n';
        break;
    }
    return rep.passed() ? 0 : 1;
}

// --- sweep -----------------------------------------------------------------

struct SweepOptions {
    std::optional<uint64_t> p_min;
    std::optional<uint64_t> p_max;
    std::vector<uint64_t> primes;
    FieldOptions ext; // used when --k >= 2
    std::optional<uint64_t> samples;
    uint64_t seed = 0;
    bool keep_going = false;
    unsigned jobs = 1;
};

SweepSpec build_sweep_spec(const SweepOptions& opts) {
    SweepSpec spec;
    if (opts.ext.k >= 2) {
        if (opts.primes.size() != 1)
            throw ParseError("an extension-field sweep takes exactly one --p");
        auto F = make_field({opts.primes[0], opts.ext.k, opts.ext.modulus});
        spec.fields.push_back({F->p(), F->k(), F->modulus()});
    } else if (opts.p_min || opts.p_max) {
        if (!opts.p_min || !opts.p_max)
            throw ParseError("--p-min and --p-max must be given together");
        if (!opts.primes.empty())
            throw ParseError("--p cannot be combined with --p-min/--p-max");
        spec = SweepSpec::prime_range(*opts.p_min, *opts.p_max);
    } else if (!opts.primes.empty()) {
        for (uint64_t p : opts.primes) {
            FiniteField probe(p, 1, {}); // validates primality before queueing
            (void)probe;
            spec.fields.push_back({p, 1, {}});
        }
    } else {
        throw ParseError("sweep needs --p-min/--p-max or --p");
    }
    spec.samples = opts.samples;
    spec.seed = opts.seed;
    spec.keep_going = opts.keep_going;
    spec.jobs = opts.jobs;
    return spec;
}

int cmd_sweep(const SweepOptions& opts, Format format) {
    SweepSpec spec = build_sweep_spec(opts);

    if (format == Format::Csv) std::cout << report_csv_header() << '\n';

    std::optional<VerificationReport> offender;
    auto sink = [&](const VerificationReport& rep) {
        switch (format) {
        case Format::Text:
            std::cout << report_to_text(rep) << '\n';
            break;
        case Format::Json:
            std::cout << report_to_json(rep) << '\n';
            break;
        case Format::Csv:
            std::cout << report_to_csv(rep) << '\n';
            break;
        }
        if (!rep.passed() && !offender) offender = rep;
    };

    SweepSummary summary = run_sweep(spec, sink);

    // The summary goes to stdout for the human/JSON streams; the CSV stream
    // stays pure records so identical sweeps stay byte-identical.
    switch (format) {
    case Format::Text:
        std::cout << "summary: curves=" << summary.curves << " failures=" << summary.failures
                  << " elapsed_ms=" << summary.elapsed_ms << '\n';
        break;
    case Format::Json:
        std::cout << summary_to_json(summary) << '\n';
        break;
    case Format::Csv:
        std::cerr << "sweep: " << summary.curves << " curves, " << summary.failures
                  << " failures, " << summary.elapsed_ms << " ms\n";
        break;
    }

    if (offender) {
        std::cerr << "verification FAILED for curve: " << report_to_text(*offender) << '\n';
        if (!spec.keep_going) std::cerr << "sweep halted (use --keep-going to continue)\n";
    }
    return summary.failures == 0 ? 0 : 1;
}

// --- enumerate ---------------------------------------------------------------

int cmd_enumerate(const FieldOptions& fopts, const CurveOptions& copts, bool square_x_only,
                  Format format) {
    auto F = make_field(fopts);
    Curve E = make_curve(*F, copts);
    std::vector<Point> pts = square_x_only ? square_x_set(E) : E.points();

    switch (format) {
    case Format::Text:
        std::cout << join_points(pts) << '\n';
        break;
    case Format::Json:
        std::cout << points_json(pts).dump() << '\n';
        break;
    case Format::Csv:
        std::cout << "point\n";
        for (const Point& P : pts) std::cout << csv_point(P) << '\n';
        break;
    }
    return 0;
}

// --- fiber -------------------------------------------------------------------

int cmd_fiber(const FieldOptions& fopts, const CurveOptions& copts, const std::string& point_text,
              const std::string& x_text, const std::string& y_text, Format format) {
    auto F = make_field(fopts);
    Curve E = make_curve(*F, copts);
    TwoIsogeny phi(E);

    Point P;
    if (!point_text.empty()) {
        P = E.parse_point(point_text);
    } else if (!x_text.empty() && !y_text.empty()) {
        P = Point::affine(F->parse(x_text), F->parse(y_text));
        if (!E.contains(P)) throw OffCurveError("point " + P.str() + " is not on the curve");
    } else {
        throw ParseError("fiber needs --point, or --x and --y");
    }

    std::vector<Point> pts = phi.fiber(P);
    const Curve& Ep = phi.source();

    switch (format) {
    case Format::Text:
        std::cout << "E': a'=" << Ep.a().str() << " b'=" << Ep.b().str() << '\n';
        std::cout << join_points(pts) << '\n';
        break;
    case Format::Json: {
        nlohmann::ordered_json j;
        j["a_prime"] = Ep.a().str();
        j["b_prime"] = Ep.b().str();
        j["points"] = points_json(pts);
        std::cout << j.dump() << '\n';
        break;
    }
    case Format::Csv:
        std::cout << "a_prime,b_prime,point\n";
        for (const Point& Q : pts) {
            std::cout << csv_element(Ep.a().str()) << ',' << csv_element(Ep.b().str()) << ','
                      << csv_point(Q) << '\n';
        }
        break;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point counting with square x-coordinates on y^2 = x^3 + ax^2 + bx "
                 "over odd-characteristic finite fields"};
    app.require_subcommand(1);

    uint64_t max_enum = 0;
    app.add_option("--max-enum", max_enum,
                   "Override the enumeration limit (also via SQUAREX_MAX_ENUM)");

    // verify
    auto* verify = app.add_subcommand("verify", "Verify the square-x point count of one curve");
    FieldOptions verify_field;
    CurveOptions verify_curve_opts;
    Format verify_format = Format::Text;
    add_field_options(verify, verify_field);
    add_curve_options(verify, verify_curve_opts);
    add_format_option(verify, verify_format);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Verify curve families over prime ranges or samples");
    SweepOptions sweep_opts;
    Format sweep_format = Format::Text;
    uint64_t raw_p_min = 0, raw_p_max = 0, raw_samples = 0;
    auto* opt_p_min =
        sweep->add_option("--p-min", raw_p_min, "Lower end of an exhaustive prime range");
    auto* opt_p_max =
        sweep->add_option("--p-max", raw_p_max, "Upper end of an exhaustive prime range");
    sweep->add_option("--p", sweep_opts.primes, "Explicit prime(s) to sweep");
    sweep->add_option("--k", sweep_opts.ext.k, "Extension degree for a single-field sweep");
    sweep->add_option("--modulus", sweep_opts.ext.modulus, "Modulus for --k >= 2");
    auto* opt_samples = sweep->add_option(
        "--samples", raw_samples, "Sampled mode: number of random valid curves per field");
    sweep->add_option("--seed", sweep_opts.seed, "Seed for sampled mode");
    sweep->add_flag("--keep-going", sweep_opts.keep_going, "Do not halt on a failing curve");
    sweep->add_option("--jobs", sweep_opts.jobs, "Worker threads (output order is unaffected)");
    add_format_option(sweep, sweep_format);

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "List the points of one curve");
    FieldOptions enum_field;
    CurveOptions enum_curve;
    Format enum_format = Format::Text;
    bool square_x_only = false;
    add_field_options(enumerate, enum_field);
    add_curve_options(enumerate, enum_curve);
    enumerate->add_flag("--square-x-only", square_x_only,
                        "List only S: infinity plus points with square x");
    add_format_option(enumerate, enum_format);

    // fiber
    auto* fiber = app.add_subcommand("fiber", "Preimages of a point under the 2-isogeny");
    FieldOptions fiber_field;
    CurveOptions fiber_curve;
    Format fiber_format = Format::Text;
    std::string fiber_point, fiber_x, fiber_y;
    add_field_options(fiber, fiber_field);
    add_curve_options(fiber, fiber_curve);
    fiber->add_option("--point", fiber_point, "Target point: \"(x,y)\" or \"inf\"");
    fiber->add_option("--x", fiber_x, "Target x-coordinate (alternative to --point)");
    fiber->add_option("--y", fiber_y, "Target y-coordinate (alternative to --point)");
    add_format_option(fiber, fiber_format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (const char* env = std::getenv("SQUAREX_MAX_ENUM")) {
        try {
            squarex::set_enumeration_limit(squarex::detail::parse_unsigned(env));
        } catch (const squarex::ParseError&) {
            std::cerr << "SQUAREX_MAX_ENUM is not a valid unsigned integer\n";
            return 2;
        }
    }
    if (max_enum != 0) squarex::set_enumeration_limit(max_enum);

    if (opt_p_min->count()) sweep_opts.p_min = raw_p_min;
    if (opt_p_max->count()) sweep_opts.p_max = raw_p_max;
    if (opt_samples->count()) sweep_opts.samples = raw_samples;

    try {
        if (verify->parsed()) return cmd_verify(verify_field, verify_curve_opts, verify_format);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_format);
        if (enumerate->parsed())
            return cmd_enumerate(enum_field, enum_curve, square_x_only, enum_format);
        if (fiber->parsed())
            return cmd_fiber(fiber_field, fiber_curve, fiber_point, fiber_x, fiber_y, fiber_format);
    } catch (const squarex::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
