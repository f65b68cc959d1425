#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "edwardsg2/io.hpp"

namespace edwardsg2::cli {

using json = nlohmann::json;

enum ExitCode { Ok = 0, ParseFailure = 2, DomainFailure = 3 };

struct Options {
    std::string verb;
    std::string p, a, b, c, frak_a, d;
    std::string seed = "0";
    std::string count = "1";
    std::string budget = "100000";
    std::string search = "t";
    std::string strategy;
    std::string format = "json";
    std::string k = "1";
    std::string P, Q, L;
};

namespace detail {

inline std::uint64_t to_u64(const std::string& text, const char* what) {
    const mpz_class v = edwardsg2::detail::parse_integer(text);
    if (v < 0 || !v.fits_ulong_p()) throw Error(ErrorCode::ParseError, std::string(what) + " out of range");
    return v.get_ui();
}

inline unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EDWARDSG2_THREADS")) {
        const std::uint64_t cap = to_u64(env, "EDWARDSG2_THREADS");
        if (cap == 0) throw Error(ErrorCode::ParseError, "EDWARDSG2_THREADS must be positive");
        n = static_cast<unsigned>(std::min<std::uint64_t>(n, cap));
    }
    return n;
}

inline json parse_json_arg(const std::string& text, const char* flag) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        throw Error(ErrorCode::ParseError, std::string(flag) + " is not valid JSON");
    }
}

// "first", "universal" or "columns:j,j'" with 1-based columns.
template <FieldElement F>
std::optional<AddStrategy<F>> model_strategy(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "first") return AddStrategy<F>::first_nonzero();
    if (s == "universal") return AddStrategy<F>::universal();
    if (s.rfind("columns:", 0) == 0) {
        const std::string rest = s.substr(8);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::ParseError, "columns strategy needs j,j'");
        const auto ja = to_u64(rest.substr(0, comma), "column");
        const auto jj = to_u64(rest.substr(comma + 1), "column");
        if (ja < 1 || ja > 4 || jj < 1 || jj > 4) throw Error(ErrorCode::ParseError, "columns run from 1 to 4");
        return AddStrategy<F>::columns(static_cast<int>(ja) - 1, static_cast<int>(jj) - 1);
    }
    throw Error(ErrorCode::ParseError, "unknown strategy '" + s + "'");
}

inline edwards::AddStrategy edwards_strategy(const std::string& s) {
    if (s.empty() || s == "first") return edwards::AddStrategy::first_nonzero();
    if (s == "universal") return edwards::AddStrategy::universal();
    if (s.rfind("columns:", 0) == 0) {
        const std::string rest = s.substr(8);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::ParseError, "columns strategy needs j,j'");
        const auto ja = to_u64(rest.substr(0, comma), "column");
        const auto jj = to_u64(rest.substr(comma + 1), "column");
        if (ja < 1 || ja > 2 || jj < 1 || jj > 2) throw Error(ErrorCode::ParseError, "Edwards columns run from 1 to 2");
        return edwards::AddStrategy::columns(static_cast<int>(ja) - 1, static_cast<int>(jj) - 1);
    }
    throw Error(ErrorCode::ParseError, "unknown strategy '" + s + "'");
}

inline std::string strategy_name(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::FirstNonzeroColumn: return "first";
    case StrategyKind::Columns: return "columns";
    case StrategyKind::LinearComb: return "linear";
    case StrategyKind::Universal: return "universal";
    }
    return "?";
}

// Human-readable rendering: one "key: value" line per top-level entry,
// hex strings shown in decimal.
inline std::string hex_to_dec(const std::string& h) {
    mpz_class v;
    if (h.empty() || v.set_str(h, 16) != 0) return h;
    return v.get_str(10);
}

inline void render_value(std::ostream& out, const json& v) {
    if (v.is_string()) {
        out << hex_to_dec(v.get<std::string>());
    } else if (v.is_array()) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ", ";
            render_value(out, v[i]);
        }
        out << ']';
    } else if (v.is_object()) {
        out << '{';
        bool first = true;
        for (const auto& [key, item] : v.items()) {
            if (!first) out << ", ";
            first = false;
            out << key << ": ";
            render_value(out, item);
        }
        out << '}';
    } else {
        out << v.dump();
    }
}

inline void render_text(std::ostream& out, const json& doc) {
    if (!doc.is_object()) {
        render_value(out, doc);
        out << '\n';
        return;
    }
    for (const auto& [key, value] : doc.items()) {
        out << key << ": ";
        render_value(out, value);
        out << '\n';
    }
}

// --- verbs ------------------------------------------------------------------

template <FieldElement F>
class Runner {
public:
    using Field = typename F::field_type;

    Runner(const Options& o, Field k) : o_(o), k_(std::move(k)) {}

    json run() {
        const std::string& v = o_.verb;
        if (v == "params-check") return params_check();
        if (v == "params-search") return params_search();
        if (v.rfind("edwards-", 0) == 0) return edwards_verb();
        const SurfaceModel<F> model(params());
        if (v == "point-random") return point_random(model);
        if (v == "add") return add(model);
        if (v == "double") return io::model_point(model.dbl(point(model, o_.P, "--P")));
        if (v == "mul") {
            const mpz_class n = edwardsg2::detail::parse_integer(o_.k);
            return io::model_point(model.scalar_mul(n, point(model, o_.P, "--P")));
        }
        if (v == "verify") return verify(model);
        if (v == "lift") return lift(model);
        if (v == "bench") return bench(model);
        throw Error(ErrorCode::ParseError, "unknown verb " + v);
    }

private:
    F element(const std::string& text, const char* flag) const {
        if (text.empty()) throw Error(ErrorCode::ParseError, std::string(flag) + " is required");
        return k_.from_integer(edwardsg2::detail::parse_integer(text));
    }

    CurveParams<F> params() const {
        const F b = element(o_.b, "--b"), c = element(o_.c, "--c");
        if (!o_.frak_a.empty()) return params_from_frak(element(o_.frak_a, "--frak-a"), b, c);
        return params_from_abc(element(o_.a, "--a"), b, c);
    }

    json params_check() const {
        const CurveParams<F> p = params();
        const UniversalityReport r = universality_report(p);
        json out{{"params", io::params(p)},
                 {"c", io::element(p.c)},
                 {"cd", io::element(p.c * p.d)},
                 {"c_nonsquare", r.c_nonsquare},
                 {"cd_nonsquare", r.cd_nonsquare},
                 {"near_miss_nonsquare", r.near_miss_nonsquare},
                 {"universal", r.universal()}};
        if (p.frak_parametrized()) {
            out["gterm"] = io::element(universality_gterm(p));
            out["gterm_nonsquare"] = r.gterm_nonsquare;
        }
        return out;
    }

    json params_search() const {
        SearchStrategy s;
        if (o_.search == "t") {
            s = SearchStrategy::TParametrized;
        } else if (o_.search == "random") {
            s = SearchStrategy::Random;
        } else {
            throw Error(ErrorCode::ParseError, "--method must be t or random");
        }
        const auto found = param_search<F>(k_, s, to_u64(o_.budget, "--budget"), to_u64(o_.seed, "--seed"),
                                           thread_cap());
        const std::size_t limit = to_u64(o_.count, "--count");
        json list = json::array();
        for (std::size_t i = 0; i < found.size() && i < limit; ++i) {
            list.push_back({{"frak_a", io::element(found[i].frak_a)},
                            {"b", io::element(found[i].b)},
                            {"c", io::element(found[i].c)}});
        }
        return {{"p", edwardsg2::detail::to_hex(k_.modulus())}, {"found", list}, {"total", found.size()}};
    }

    ModelPoint<F> point(const SurfaceModel<F>& m, const std::string& text, const char* flag) const {
        if (text.empty()) throw Error(ErrorCode::ParseError, std::string(flag) + " is required");
        if (text == "identity") return m.identity();
        if (text == "d1") return m.embed(m.d1());
        const ModelPoint<F> P = io::parse_model_point<F>(k_, parse_json_arg(text, flag));
        if (!m.is_member(P)) throw Error(ErrorCode::InvalidPoint, std::string(flag) + " is not on the model");
        return P;
    }

    json point_random(const SurfaceModel<F>& m) const {
        Rng rng(to_u64(o_.seed, "--seed"));
        json points = json::array();
        for (std::uint64_t i = 0, n = to_u64(o_.count, "--count"); i < n; ++i) {
            points.push_back(io::model_point(m.embed(m.curve().random_divisor(rng))));
        }
        return {{"points", points}};
    }

    json add(const SurfaceModel<F>& m) const {
        const auto P = point(m, o_.P, "--P"), Q = point(m, o_.Q, "--Q");
        const auto s = model_strategy<F>(o_.strategy).value_or(m.default_strategy());
        return io::model_point(m.add(P, Q, s));
    }

    json verify(const SurfaceModel<F>& m) const {
        if (o_.P.empty()) throw Error(ErrorCode::ParseError, "--P is required");
        const ModelPoint<F> P = o_.P == "identity" ? m.identity()
                                : o_.P == "d1"     ? m.embed(m.d1())
                                                   : io::parse_model_point<F>(k_, parse_json_arg(o_.P, "--P"));
        json res = json::array();
        bool zero = true;
        for (const F& r : m.residuals(P)) {
            res.push_back(io::element(r));
            zero = zero && r.is_zero();
        }
        return {{"residuals", res}, {"member", zero && !all_zero(P.u) && !all_zero(P.y)}};
    }

    json lift(const SurfaceModel<F>& m) const {
        if (o_.L.empty()) throw Error(ErrorCode::ParseError, "--L is required");
        const json j = parse_json_arg(o_.L, "--L");
        const bool has_l = j.is_object() && j.contains("l");
        if (!has_l && !(j.is_object() && j.contains("k"))) {
            throw Error(ErrorCode::ParseError, "--L needs {\"l\":[..]} or {\"k\":[..]}");
        }
        const LPoint<F> l = has_l ? io::parse_elements<F, 4>(k_, j["l"])
                                  : m.kummer().to_l(io::parse_elements<F, 4>(k_, j["k"]));
        const auto pair = m.lift_from_kummer(l);
        return {{"points", json::array({io::model_point(pair[0]), io::model_point(pair[1])})}};
    }

    json bench(const SurfaceModel<F>& m) const {
        Rng rng(to_u64(o_.seed, "--seed"));
        const std::uint64_t n = std::max<std::uint64_t>(1, to_u64(o_.count, "--count"));
        std::vector<ModelPoint<F>> pts;
        for (std::uint64_t i = 0; i < n + 1; ++i) pts.push_back(m.embed(m.curve().random_divisor(rng)));

        std::vector<AddStrategy<F>> strategies;
        if (auto s = model_strategy<F>(o_.strategy)) {
            strategies.push_back(*s);
        } else {
            strategies.push_back(AddStrategy<F>::first_nonzero());
            if (m.universal_available()) strategies.push_back(AddStrategy<F>::universal());
        }
        json rows = json::array();
        for (const auto& s : strategies) {
            std::uint64_t degenerate = 0;
            MulCountScope scope;
            const auto start = std::chrono::steady_clock::now();
            for (std::uint64_t i = 0; i < n; ++i) {
                try {
                    (void)m.add(pts[i], pts[i + 1], s);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::DegenerateColumn) throw;
                    ++degenerate;
                }
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const std::uint64_t muls = scope.count();
            rows.push_back({{"strategy", strategy_name(s.kind)},
                            {"additions", n},
                            {"degenerate", degenerate},
                            {"seconds", secs},
                            {"additions_per_sec", secs > 0 ? static_cast<double>(n) / secs : 0.0},
                            {"field_muls", muls},
                            {"field_muls_per_add", static_cast<double>(muls) / static_cast<double>(n)}});
        }
        return {{"bench", rows}};
    }

    // --- Edwards baseline ---

    edwards::EdwardsPoint<F> edwards_point(const edwards::EdwardsParams<F>& p, const std::string& text,
                                           const char* flag, bool check) const {
        if (text.empty()) throw Error(ErrorCode::ParseError, std::string(flag) + " is required");
        if (text == "identity") return edwards::identity(p);
        if (text == "d1") return edwards::from_weierstrass(p, edwards::d1_point(p));
        const auto P = io::parse_edwards_point<F>(k_, parse_json_arg(text, flag));
        if (check && !edwards::is_member(p, P)) {
            throw Error(ErrorCode::InvalidPoint, std::string(flag) + " is not on the Edwards model");
        }
        return P;
    }

    json edwards_verb() const {
        const auto p = edwards::EdwardsParams<F>::make(element(o_.d, "--d"));
        if (o_.verb == "edwards-random") {
            Rng rng(to_u64(o_.seed, "--seed"));
            json points = json::array();
            for (std::uint64_t i = 0, n = to_u64(o_.count, "--count"); i < n; ++i) {
                points.push_back(io::edwards_point(edwards::from_weierstrass(p, edwards::weierstrass_random(p, rng))));
            }
            return {{"points", points}};
        }
        if (o_.verb == "edwards-add") {
            const auto P = edwards_point(p, o_.P, "--P", true), Q = edwards_point(p, o_.Q, "--Q", true);
            return io::edwards_point(edwards::add(p, P, Q, edwards_strategy(o_.strategy)));
        }
        if (o_.verb == "edwards-verify") {
            const auto P = edwards_point(p, o_.P, "--P", false);
            return {{"residual", io::element(edwards::residual(p, P))}, {"member", edwards::is_member(p, P)}};
        }
        throw Error(ErrorCode::ParseError, "unknown verb " + o_.verb);
    }

    const Options& o_;
    Field k_;
};

inline json dispatch(const Options& o) {
    if (o.p.empty()) throw Error(ErrorCode::ParseError, "--p is required");
    const mpz_class p = edwardsg2::detail::parse_integer(o.p);
    if (p.fits_ulong_p() && p < (mpz_class(1) << 63)) {
        return Runner<Fp>(o, PrimeField(p.get_ui())).run();
    }
    return Runner<BigFp>(o, BigPrimeField(p)).run();
}

} // namespace detail

/// Runs one command. argv[0] is the program name. Output goes to `out`,
/// diagnostics to `err`; the return value is the process exit code.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact arithmetic on the P^3 x P^3 model of genus-2 Jacobians", "edwardsg2"};
    app.require_subcommand(1);
    Options o;

    auto field_flags = [&](CLI::App* sub) {
        sub->add_option("--p", o.p, "prime modulus (decimal or 0x-hex)")->required();
        sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    };
    auto curve_flags = [&](CLI::App* sub) {
        field_flags(sub);
        sub->add_option("--a", o.a);
        sub->add_option("--frak-a", o.frak_a);
        sub->add_option("--b", o.b)->required();
        sub->add_option("--c", o.c)->required();
    };

    const std::vector<std::pair<const char*, const char*>> verbs{
        {"params-check", "report the universality conditions"},
        {"params-search", "search for universal parameters"},
        {"point-random", "embed random divisor classes"},
        {"add", "add two model points"},
        {"double", "double a model point"},
        {"mul", "scalar multiple of a model point"},
        {"verify", "evaluate the defining equations"},
        {"lift", "lift a Kummer point to the model"},
        {"bench", "time additions per strategy"},
        {"edwards-random", "random points of the Edwards model"},
        {"edwards-add", "add two Edwards points"},
        {"edwards-verify", "evaluate the Edwards equation"},
    };
    for (const auto& [name, help] : verbs) {
        const std::string verb = name;
        CLI::App* sub = app.add_subcommand(verb, help);
        sub->callback([&o, verb] { o.verb = verb; });
        if (verb == "params-search") {
            field_flags(sub);
            sub->add_option("--method", o.search, "t or random");
            sub->add_option("--budget", o.budget, "candidates to examine");
        } else if (verb.rfind("edwards-", 0) == 0) {
            field_flags(sub);
            sub->add_option("--d", o.d)->required();
        } else {
            curve_flags(sub);
        }
        sub->add_option("--seed", o.seed);
        sub->add_option("--count", o.count);
        sub->add_option("--strategy", o.strategy, "universal, first or columns:j,j'");
        sub->add_option("--k", o.k, "scalar for mul");
        sub->add_option("--P", o.P, "point JSON, or identity / d1");
        sub->add_option("--Q", o.Q, "point JSON, or identity / d1");
        sub->add_option("--L", o.L, "{\"l\":[..]} or {\"k\":[..]} for lift");
    }

    std::vector<std::string> args(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        out << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << '\n';
        return ParseFailure;
    }

    try {
        const json result = detail::dispatch(o);
        if (o.format == "text") {
            detail::render_text(out, result);
        } else {
            out << result.dump() << '\n';
        }
        return Ok;
    } catch (const Error& e) {
        err << e.what() << '\n';
        out << json{{"error", e.name()}, {"message", e.what()}}.dump() << '\n';
        return e.code() == ErrorCode::ParseError ? ParseFailure : DomainFailure;
    }
}

} // namespace edwardsg2::cli
