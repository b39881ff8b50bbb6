#pragma once

#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "keyform/criteria.hpp"
#include "keyform/dualgraph.hpp"
#include "keyform/error.hpp"
#include "keyform/keyforms.hpp"
#include "keyform/polyparse.hpp"
#include "keyform/puiseux.hpp"
#include "keyform/semidegree.hpp"

namespace keyform {

using Json = nlohmann::json;

/// Input of the report commands. Exactly one of series / pairs / generic is set.
/// `generic` is a ready-made generic series and only drives `keyforms`.
struct CurveSpec {
    std::optional<PuiseuxPoly> series;
    std::optional<std::vector<PuiseuxPair>> pairs;
    std::optional<GenericDps> generic;
    std::int64_t r = 0;

    std::vector<PuiseuxPair> characteristic() const {
        if (pairs) return *pairs;
        if (series) return puiseux_pairs(*series).pairs;
        throw PreconditionError("command needs a curve series or characteristic pairs");
    }
};

namespace detail {

inline std::string unquote(std::string_view v, std::size_t pos) {
    if (v.empty() || v.front() != '"') return std::string(v);
    if (v.size() < 2 || v.back() != '"') throw ParseError("unterminated string", pos);
    return std::string(v.substr(1, v.size() - 2));
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Re-bases a ParseError raised on a value onto the enclosing text.
template <class F>
auto at_offset(std::size_t base, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        std::string msg = e.what();
        auto cut = msg.rfind(" at position ");
        throw ParseError(msg.substr(0, cut), base + e.position());
    }
}

inline std::int64_t parse_r(std::string_view v, std::size_t pos) {
    return at_offset(pos, [&] {
        Lexer lx(v);
        Integer n = lx.signed_integer();
        if (!lx.at_end()) lx.fail("trailing input");
        if (n < 0) throw PreconditionError("r must be nonnegative");
        return to_int64(n);
    });
}

}  // namespace detail

/// Builds a spec from the individual textual fields; empty fields are absent.
inline CurveSpec make_spec(const std::string& series, const std::string& pairs, const std::string& generic, std::int64_t r) {
    int given = !series.empty() + !pairs.empty() + !generic.empty();
    if (given != 1) throw PreconditionError("exactly one of series, pairs, generic must be given");
    if (r < 0) throw PreconditionError("r must be nonnegative");
    CurveSpec s;
    s.r = r;
    if (!series.empty()) s.series = parse_puiseux(series, Orientation::Local);
    if (!pairs.empty()) {
        s.pairs = parse_pairs(pairs);
        validate_local_pairs(*s.pairs);
    }
    if (!generic.empty()) s.generic = parse_generic_dps(generic);
    return s;
}

/// Spec file: one `key = value` per line, `#` starts a comment. Keys: series, pairs, generic, r.
inline CurveSpec parse_spec(std::string_view text) {
    std::string fields[4];
    bool seen[4] = {false, false, false, false};
    const char* names[4] = {"series", "pairs", "generic", "r"};
    std::size_t starts[4] = {0, 0, 0, 0};
    std::size_t off = 0;
    while (off <= text.size()) {
        std::size_t nl = text.find('\n', off);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(off, nl - off);
        bool in_str = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_str = !in_str;
            if (line[i] == '#' && !in_str) {
                line = line.substr(0, i);
                break;
            }
        }
        if (!detail::trim(line).empty()) {
            auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", off);
            std::string_view key = detail::trim(line.substr(0, eq));
            std::string_view raw = line.substr(eq + 1);
            std::size_t vpos = off + eq + 1;
            while (!raw.empty() && (raw.front() == ' ' || raw.front() == '\t')) {
                raw.remove_prefix(1);
                ++vpos;
            }
            raw = detail::trim(raw);
            int idx = -1;
            for (int i = 0; i < 4; ++i)
                if (key == names[i]) idx = i;
            if (idx < 0) throw ParseError("unknown key '" + std::string(key) + "'", off);
            if (seen[idx]) throw ParseError("duplicate key '" + std::string(key) + "'", off);
            seen[idx] = true;
            bool quoted = !raw.empty() && raw.front() == '"';
            fields[idx] = detail::unquote(raw, vpos);
            starts[idx] = vpos + (quoted ? 1 : 0);
        }
        off = nl + 1;
    }
    std::int64_t r = seen[3] ? detail::parse_r(fields[3], starts[3]) : 0;
    int given = seen[0] + seen[1] + seen[2];
    if (given != 1) throw PreconditionError("spec must set exactly one of series, pairs, generic");
    CurveSpec s;
    s.r = r;
    if (seen[0]) s.series = detail::at_offset(starts[0], [&] { return parse_puiseux(fields[0], Orientation::Local); });
    if (seen[1]) {
        s.pairs = detail::at_offset(starts[1], [&] { return parse_pairs(fields[1]); });
        validate_local_pairs(*s.pairs);
    }
    if (seen[2]) s.generic = detail::at_offset(starts[2], [&] { return parse_generic_dps(fields[2]); });
    return s;
}

namespace detail {

inline Json pairs_json(const std::vector<PuiseuxPair>& pairs) {
    Json a = Json::array();
    for (const auto& pr : pairs) a.push_back({pr.q, pr.p});
    return a;
}

inline Json input_json(const CurveSpec& s) {
    Json j = Json::object();
    if (s.series) j["series"] = to_string(*s.series);
    if (s.pairs) j["pairs"] = to_string(*s.pairs);
    if (s.generic) j["generic"] = to_string(*s.generic);
    if (!s.generic) j["r"] = s.r;
    return j;
}

inline Json opt_json(const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace detail

inline Json keyforms_json(const EssentialKeyForms& keys, const GenericDps& g, bool all) {
    Json j;
    j["generic"] = to_string(g);
    j["formal_pairs"] = detail::pairs_json(g.formal_pairs.pairs);
    j["delta_x"] = g.delta_x;
    Json forms = Json::array();
    for (const auto& f : keys.forms) forms.push_back(to_string(f));
    j["forms"] = forms;
    Json lifted = Json::array();
    for (const auto& F : keys.lifted) lifted.push_back(to_string(F));
    j["lifted"] = lifted;
    j["omegas"] = keys.omegas;
    j["absorbed"] = keys.absorbed;
    j["last_is_polynomial"] = is_polynomial(keys.last());
    if (all) {
        Json a = Json::array();
        for (const auto& f : keys.all_forms) a.push_back(to_string(f));
        j["all_forms"] = a;
    }
    return j;
}

inline Json semigroup_json(const SemigroupReport& rep) {
    Json j;
    j["omega_tilde"] = rep.poles.omega_tilde;
    j["omegas"] = rep.poles.omegas;
    j["l"] = rep.poles.l;
    Json rows = Json::array();
    for (std::size_t k = 1; k <= rep.s1.size(); ++k)
        rows.push_back({{"k", k}, {"S1", static_cast<bool>(rep.s1[k - 1])}, {"S2", !rep.s2[k - 1]},
                        {"S2_offender", detail::opt_json(rep.s2[k - 1])}});
    j["table"] = rows;
    j["classification"] = to_string(rep.classification);
    return j;
}

inline Json witnesses_json(const std::vector<PuiseuxPair>& pairs, std::int64_t r, Classification c) {
    Json a = Json::array();
    if (c == Classification::NotContractible) return a;
    for (const auto& w : witness_curves(pairs, r, c))
        a.push_back({{"curve", to_string(w.curve)}, {"algebraic", w.expected_algebraic}});
    return a;
}

inline Json classify_json(const CurveSpec& s) {
    auto pairs = s.characteristic();
    Json j;
    j["input"] = detail::input_json(s);
    j["pairs"] = detail::pairs_json(pairs);
    j["alpha"] = alpha_invariant(pairs, s.r);
    std::int64_t p = CharacteristicData{Orientation::Local, pairs}.polydromy();
    j["p_squared"] = p * p;
    j["contractible"] = is_contractible(pairs, s.r);
    SemigroupReport rep = semigroup_conditions(pairs, s.r);
    j["semigroup"] = semigroup_json(rep);
    j["classification"] = to_string(rep.classification);
    return j;
}

inline Json analyze_json(const CurveSpec& s, bool force_keyforms = false) {
    if (s.generic) throw PreconditionError("analyze needs a curve series or characteristic pairs");
    Json j = classify_json(s);
    auto pairs = s.characteristic();
    Classification c = Classification::NotContractible;
    if (j["contractible"].get<bool>()) c = semigroup_conditions(pairs, s.r).classification;
    j["witnesses"] = witnesses_json(pairs, s.r, c);
    if (s.series) {
        AlgebraicityReport rep = is_algebraic(*s.series, s.r, force_keyforms);
        j["algebraic"] = rep.algebraic ? Json(*rep.algebraic) : Json(nullptr);
        j["semidegree"] = rep.semidegree ? Json(to_string(*rep.semidegree)) : Json(nullptr);
        j["key_forms"] = rep.keys ? keyforms_json(*rep.keys, *rep.semidegree, false) : Json(nullptr);
        j["omegas"] = rep.keys ? Json(rep.keys->omegas) : Json(nullptr);
        j["wp_weights"] = rep.wp_weights;
    } else {
        j["algebraic"] = nullptr;
        j["semidegree"] = nullptr;
        j["key_forms"] = nullptr;
        j["omegas"] = j["semigroup"]["omegas"];
        j["wp_weights"] = Json::array();
    }
    return j;
}

inline Json keyforms_json(const CurveSpec& s, bool all) {
    GenericDps g = s.generic ? *s.generic : [&] {
        if (!s.series) throw PreconditionError("keyforms needs a curve series or a generic series");
        return generic_dps_from_curve(local_to_degreewise(*s.series), s.r);
    }();
    Json j = keyforms_json(essential_key_forms(g), g, all);
    j["input"] = detail::input_json(s);
    return j;
}

inline Json dualgraph_json(const CurveSpec& s) {
    auto pairs = s.characteristic();
    DualGraph g = build_dual_graph(pairs, s.r);
    Json j = to_json(g);
    j["negative_definite"] = is_negative_definite(intersection_matrix(g));
    return j;
}

/// f is read with variables u, v. The spec must carry one characteristic pair.
inline Json singlepair_json(const CurveSpec& s, const std::string& poly) {
    auto pairs = s.characteristic();
    if (pairs.size() != 1) throw PreconditionError("singlepair needs exactly one characteristic pair");
    LaurentPolyXY f = detail::at_offset(0, [&] { return parse_polynomial(poly, "u", "v"); });
    const auto [q, p] = pairs.front();
    SinglePairResult res = single_pair_test(f, p, q, s.r);
    ClosedForm cf = single_pair_closed_form(q, p, s.r);
    Json j;
    j["input"] = detail::input_json(s);
    j["poly"] = to_string(f, "u", "v");
    j["alpha"] = p * q + s.r;
    j["truncated"] = to_string(res.truncated, "u", "v");
    j["algebraic"] = res.algebraic;
    j["contractible"] = cf.contractible;
    j["nonalgebraic_exists"] = cf.nonalgebraic_exists;
    return j;
}

struct SweepCase {
    std::int64_t q = 0, p = 0, r = 0;
    std::vector<std::string> disagreements;
};

/// Checks one (q, p, r): closed forms, the semigroup classifier, key forms on v = u^{q/p} and on
/// v = u^{q/p} + c*u^2 with c drawn from `rng`, and the dual graph's negative definiteness.
inline SweepCase sweep_case(std::int64_t q, std::int64_t p, std::int64_t r, std::mt19937_64& rng) {
    SweepCase sc{q, p, r, {}};
    auto bad = [&](const std::string& what) { sc.disagreements.push_back(what); };
    ClosedForm cf = single_pair_closed_form(q, p, r);
    std::vector<PuiseuxPair> pairs{{q, p}};
    SemigroupReport rep = semigroup_conditions(pairs, r);
    bool contractible = rep.classification != Classification::NotContractible;
    if (contractible != cf.contractible) bad("contractibility");
    if (contractible && (rep.classification == Classification::Both) != cf.nonalgebraic_exists) bad("classification");

    PuiseuxPoly c1(Orientation::Local);
    c1.add_term(make_rat(q, p), Rat(1));
    PuiseuxPoly c2 = c1;
    std::uniform_int_distribution<int> num(1, 9), sgn(0, 1);
    Rat c = make_rat(num(rng), num(rng));
    if (sgn(rng)) c = -c;
    c2.add_term(Rat(2), c);
    AlgebraicityReport a1 = is_algebraic(c1, r), a2 = is_algebraic(c2, r);
    if (a1.contractible != cf.contractible || a2.contractible != cf.contractible) bad("key-form contractibility");
    if (cf.contractible) {
        if (!a1.algebraic || !*a1.algebraic) bad("u^(q/p) not algebraic");
        bool na = !*a2.algebraic;
        if (na != (2 * p - q < r && r < p * (p - q))) bad("u^(q/p) + c*u^2 verdict");
    }
    DualGraph g = build_dual_graph(pairs, r);
    if (is_negative_definite(intersection_matrix(g)) != (alpha_invariant(pairs, r) < p * p)) bad("Grauert");
    return sc;
}

/// All coprime q < p <= max_p and 0 <= r <= p(p-q); one task per p.
inline Json sweep_json(std::int64_t max_p, std::uint64_t seed) {
    if (max_p < 2) throw PreconditionError("max_p must be at least 2");
    std::vector<std::future<std::vector<SweepCase>>> tasks;
    for (std::int64_t p = 2; p <= max_p; ++p) {
        tasks.push_back(std::async(std::launch::async, [p, seed] {
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>(p));
            std::vector<SweepCase> out;
            for (std::int64_t q = 1; q < p; ++q) {
                if (gcd64(p, q) != 1) continue;
                for (std::int64_t r = 0; r <= p * (p - q); ++r) out.push_back(sweep_case(q, p, r, rng));
            }
            return out;
        }));
    }
    Json j;
    std::int64_t cases = 0;
    Json fails = Json::array();
    for (auto& t : tasks) {
        for (const auto& sc : t.get()) {
            ++cases;
            for (const auto& d : sc.disagreements) fails.push_back({{"q", sc.q}, {"p", sc.p}, {"r", sc.r}, {"what", d}});
        }
    }
    j["max_p"] = max_p;
    j["seed"] = seed;
    j["cases"] = cases;
    j["disagreements"] = fails;
    return j;
}

namespace detail {

inline std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
}

inline void text_into(std::string& out, const Json& j, const std::string& indent) {
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            out += indent + k + ":\n";
            text_into(out, v, indent + "  ");
        } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_string())) {
            out += indent + k + ":\n";
            for (const auto& e : v) {
                if (e.is_object()) {
                    std::string row;
                    for (const auto& [ek, ev] : e.items()) row += (row.empty() ? "" : "  ") + ek + "=" + scalar_text(ev);
                    out += indent + "  " + row + "\n";
                } else {
                    out += indent + "  " + scalar_text(e) + "\n";
                }
            }
        } else {
            out += indent + k + ": " + scalar_text(v) + "\n";
        }
    }
}

}  // namespace detail

/// Human-readable rendering of any report: one `key: value` line per scalar.
inline std::string render_text(const Json& j) {
    std::string out;
    detail::text_into(out, j, "");
    return out;
}

}  // namespace keyform
