#pragma once

/**
 * @file json_io.hpp
 * @brief External JSON formats: carriers, homomorphisms, predicates,
 *        formulas, search verdicts, extraction reports, window results, and
 *        the line-oriented forge transcript.
 *
 * All writers emit deterministic output: insertion-ordered keys, no
 * timestamps, compact dumps. Replaying a run and comparing transcripts
 * byte for byte is the supported verification path.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "extract.hpp"
#include "forge.hpp"
#include "formula.hpp"
#include "ip.hpp"
#include "predicate.hpp"
#include "semigroup.hpp"

namespace hindman::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// base64 (RFC 4648, standard alphabet, padded)
// ---------------------------------------------------------------------------

inline std::string base64_encode(const std::vector<std::uint8_t>& data) {
    static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        std::uint32_t chunk = static_cast<std::uint32_t>(data[i]) << 16;
        if (i + 1 < data.size()) chunk |= static_cast<std::uint32_t>(data[i + 1]) << 8;
        if (i + 2 < data.size()) chunk |= data[i + 2];
        out.push_back(alphabet[(chunk >> 18) & 0x3f]);
        out.push_back(alphabet[(chunk >> 12) & 0x3f]);
        out.push_back(i + 1 < data.size() ? alphabet[(chunk >> 6) & 0x3f] : '=');
        out.push_back(i + 2 < data.size() ? alphabet[chunk & 0x3f] : '=');
    }
    return out;
}

inline std::vector<std::uint8_t> base64_decode(std::string_view text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (text.size() % 4 != 0) throw std::invalid_argument("base64 length must be a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        std::uint32_t chunk = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            char c = text[i + k];
            if (c == '=') {
                if (i + 4 != text.size() || k < 2) throw std::invalid_argument("misplaced base64 padding");
                ++pad;
                chunk <<= 6;
            } else {
                if (pad > 0) throw std::invalid_argument("base64 data after padding");
                int v = value_of(c);
                if (v < 0) throw std::invalid_argument("invalid base64 character");
                chunk = (chunk << 6) | static_cast<std::uint32_t>(v);
            }
        }
        out.push_back(static_cast<std::uint8_t>((chunk >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>((chunk >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(chunk & 0xff));
    }
    return out;
}

inline std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline std::vector<std::uint8_t> hex_to_bytes(std::string_view text) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (text.size() % 2 != 0) throw std::invalid_argument("hex string must have even length");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        int hi = nibble(text[i]), lo = nibble(text[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Carriers
// ---------------------------------------------------------------------------

inline json finite_table_to_json(const FiniteSemigroup& s) {
    json rows = json::array();
    for (std::uint32_t a = 0; a < s.order(); ++a) {
        json row = json::array();
        for (std::uint32_t b = 0; b < s.order(); ++b) row.push_back(s.product(a, b));
        rows.push_back(std::move(row));
    }
    return json{{"kind", "finite-table"}, {"order", s.order()}, {"table", std::move(rows)}};
}

inline json semigroup_to_json(const SemigroupHandle& s) {
    switch (s.kind()) {
        case SemigroupHandle::Kind::FiniteTable: return finite_table_to_json(s.table());
        case SemigroupHandle::Kind::NatAdd: return json{{"kind", "nat-add"}};
        case SemigroupHandle::Kind::NatMul: return json{{"kind", "nat-mul"}};
        case SemigroupHandle::Kind::FreeWord: {
            json letters = json::array();
            for (char c : s.alphabet()) letters.push_back(std::string(1, c));
            return json{{"kind", "free-word"}, {"alphabet", std::move(letters)}};
        }
    }
    throw std::logic_error("unreachable carrier kind");
}

inline FiniteSemigroup finite_table_from_json(const json& j) {
    std::uint32_t order = j.at("order").get<std::uint32_t>();
    std::vector<std::vector<std::uint32_t>> rows = j.at("table").get<std::vector<std::vector<std::uint32_t>>>();
    if (rows.size() != order) throw std::invalid_argument("table row count disagrees with order");
    FiniteSemigroup s = FiniteSemigroup::from_rows(rows);
    s.require_associative();
    return s;
}

inline SemigroupHandle semigroup_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite-table") return SemigroupHandle::finite_table(finite_table_from_json(j));
    if (kind == "nat-add") return SemigroupHandle::nat_add();
    if (kind == "nat-mul") return SemigroupHandle::nat_mul();
    if (kind == "free-word") {
        std::string alphabet;
        for (const json& l : j.at("alphabet")) {
            std::string s = l.get<std::string>();
            if (s.size() != 1) throw std::invalid_argument("alphabet entries must be single characters");
            alphabet += s;
        }
        return SemigroupHandle::free_word(std::move(alphabet));
    }
    throw std::invalid_argument("unknown carrier kind: " + kind);
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

inline json hom_to_json(const Homomorphism& h) {
    json rule;
    if (const auto* m = std::get_if<ModRule>(&h.rule())) {
        rule = json{{"type", "mod"}, {"d", m->d}};
    } else if (const auto* li = std::get_if<LetterImageRule>(&h.rule())) {
        rule = json{{"type", "letter-image"}, {"images", li->images}};
    } else {
        rule = json{{"type", "table-map"}, {"map", std::get<TableMapRule>(h.rule()).map}};
    }
    return json{{"source", semigroup_to_json(h.source())},
                {"target", finite_table_to_json(h.target())},
                {"rule", std::move(rule)}};
}

inline Homomorphism hom_from_json(const json& j) {
    SemigroupHandle source = semigroup_from_json(j.at("source"));
    const json& r = j.at("rule");
    const std::string type = r.at("type").get<std::string>();
    HomRule rule;
    if (type == "mod") rule = ModRule{r.at("d").get<std::uint32_t>()};
    else if (type == "letter-image") rule = LetterImageRule{r.at("images").get<std::vector<std::uint32_t>>()};
    else if (type == "table-map") rule = TableMapRule{r.at("map").get<std::vector<std::uint32_t>>()};
    else throw std::invalid_argument("unknown homomorphism rule type: " + type);

    if (!j.contains("target")) {
        // Convenience: a mod rule off the naturals implies the matching
        // modular target.
        if (type == "mod" && source.kind() == SemigroupHandle::Kind::NatAdd)
            return Homomorphism(source, FiniteSemigroup::zmod_add(r.at("d").get<std::uint32_t>()), rule);
        if (type == "mod" && source.kind() == SemigroupHandle::Kind::NatMul)
            return Homomorphism(source, FiniteSemigroup::zmod_mul(r.at("d").get<std::uint32_t>()), rule);
        throw std::invalid_argument("homomorphism needs an explicit target");
    }
    return Homomorphism(std::move(source), finite_table_from_json(j.at("target")), rule);
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

inline std::string formula_to_hex(const Formula& f) { return bytes_to_hex(f.encoding()); }
inline Formula formula_from_hex(std::string_view text) { return Formula::decode(hex_to_bytes(text)); }

inline json formula_to_json(const Formula& f, const StructureContext* ctx = nullptr) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            json term = json::array();
            for (const TermLetter& l : f.term()) {
                if (l.kind == TermLetter::Kind::VarX) term.push_back("x");
                else if (l.kind == TermLetter::Kind::VarY) term.push_back("y");
                else term.push_back(json{{"const", l.index}});
            }
            json pred = ctx && f.pred() < ctx->pred_count() ? json(ctx->pred_name(f.pred())) : json(f.pred());
            return json{{"atom", json{{"pred", std::move(pred)}, {"term", std::move(term)}}}};
        }
        case Formula::Kind::Not: return json{{"not", formula_to_json(f.child(), ctx)}};
        case Formula::Kind::And:
            return json{{"and", json::array({formula_to_json(f.left(), ctx), formula_to_json(f.right(), ctx)})}};
        case Formula::Kind::Or:
            return json{{"or", json::array({formula_to_json(f.left(), ctx), formula_to_json(f.right(), ctx)})}};
    }
    throw std::logic_error("unreachable formula kind");
}

inline Formula formula_from_json(const json& j, const StructureContext* ctx = nullptr) {
    if (!j.is_object() || j.size() != 1)
        throw std::invalid_argument("formula object must have exactly one of: atom, not, and, or");
    if (j.contains("atom")) {
        const json& a = j.at("atom");
        const json& p = a.at("pred");
        std::uint32_t pred;
        if (p.is_string()) {
            if (!ctx) throw std::invalid_argument("named predicate needs a structure context");
            auto idx = ctx->pred_index(p.get<std::string>());
            if (!idx) throw std::invalid_argument("unknown predicate name: " + p.get<std::string>());
            pred = static_cast<std::uint32_t>(*idx);
        } else {
            pred = p.get<std::uint32_t>();
        }
        Term term;
        for (const json& l : a.at("term")) {
            if (l.is_string() && l.get<std::string>() == "x") term.push_back(TermLetter::x());
            else if (l.is_string() && l.get<std::string>() == "y") term.push_back(TermLetter::y());
            else if (l.is_object() && l.contains("const")) term.push_back(TermLetter::constant(l.at("const").get<std::uint64_t>()));
            else throw std::invalid_argument("term letter must be \"x\", \"y\" or {\"const\": n}");
        }
        return Formula::atom(pred, std::move(term));
    }
    if (j.contains("not")) return Formula::negate(formula_from_json(j.at("not"), ctx));
    if (j.contains("and")) {
        const json& c = j.at("and");
        if (!c.is_array() || c.size() != 2) throw std::invalid_argument("\"and\" takes exactly two formulas");
        return Formula::conj(formula_from_json(c[0], ctx), formula_from_json(c[1], ctx));
    }
    if (j.contains("or")) {
        const json& c = j.at("or");
        if (!c.is_array() || c.size() != 2) throw std::invalid_argument("\"or\" takes exactly two formulas");
        return Formula::disj(formula_from_json(c[0], ctx), formula_from_json(c[1], ctx));
    }
    throw std::invalid_argument("formula object must have one of: atom, not, and, or");
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

namespace detail {

/// Finite carriers make every subset exactly quotient-backed: the identity
/// map onto the carrier itself is a homomorphism whose classes are single
/// elements, so class-level reasoning stays available (and exact).
inline SetPredicate finite_subset_predicate(const SemigroupHandle& carrier,
                                            const std::function<bool(std::uint64_t)>& member) {
    const std::size_t n = *carrier.order();
    std::vector<std::uint32_t> identity(n);
    for (std::uint32_t i = 0; i < n; ++i) identity[i] = i;
    auto hom = std::make_shared<const Homomorphism>(carrier, carrier.table(), TableMapRule{std::move(identity)});
    std::vector<bool> subset(n, false);
    for (std::uint32_t i = 0; i < n; ++i) subset[i] = member(i);
    return SetPredicate::from_quotient(std::move(hom), std::move(subset));
}

} // namespace detail

inline SetPredicate predicate_from_json(const json& j, const SemigroupHandle& carrier) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "mod") {
        std::uint32_t d = j.at("d").get<std::uint32_t>();
        if (d == 0) throw std::invalid_argument("mod predicate needs d >= 1");
        std::vector<std::uint32_t> residues = j.at("residues").get<std::vector<std::uint32_t>>();
        std::vector<bool> subset(d, false);
        for (std::uint32_t r : residues) {
            if (r >= d) throw std::invalid_argument("residue out of range");
            subset[r] = true;
        }
        if (carrier.kind() == SemigroupHandle::Kind::NatAdd) {
            auto hom = std::make_shared<const Homomorphism>(carrier, FiniteSemigroup::zmod_add(d), ModRule{d});
            return SetPredicate::from_quotient(std::move(hom), std::move(subset));
        }
        if (carrier.kind() == SemigroupHandle::Kind::NatMul) {
            auto hom = std::make_shared<const Homomorphism>(carrier, FiniteSemigroup::zmod_mul(d), ModRule{d});
            return SetPredicate::from_quotient(std::move(hom), std::move(subset));
        }
        if (carrier.is_finite())
            return detail::finite_subset_predicate(carrier,
                                                   [d, subset](std::uint64_t i) { return subset[i % d]; });
        return SetPredicate::from_evaluator([d, subset](Element e) { return subset[e.index % d]; });
    }
    if (type == "explicit-bitset") {
        std::uint64_t window = j.at("window").get<std::uint64_t>();
        std::vector<std::uint8_t> bits = base64_decode(j.at("bits").get<std::string>());
        if (bits.size() * 8 < window) throw std::invalid_argument("bitset shorter than its window");
        auto member = [window, bits](std::uint64_t i) {
            return i < window && (bits[i / 8] >> (i % 8) & 1) != 0; // LSB-first
        };
        if (carrier.is_finite()) return detail::finite_subset_predicate(carrier, member);
        return SetPredicate::from_evaluator([member](Element e) { return member(e.index); });
    }
    if (type == "formula-ref") {
        std::vector<std::pair<std::string, SetPredicate>> preds;
        for (const json& p : j.at("preds"))
            preds.emplace_back(p.at("name").get<std::string>(), predicate_from_json(p, carrier));
        auto ctx = std::make_shared<const StructureContext>(carrier, std::move(preds));
        Formula f = formula_from_json(j.at("formula"), ctx.get());
        return definable_set(f, std::move(ctx));
    }
    throw std::invalid_argument("unknown predicate type: " + type);
}

// ---------------------------------------------------------------------------
// Verdicts and reports
// ---------------------------------------------------------------------------

inline json bounds_to_json(const Bounds& b) { return json{{"k", b.depth}, {"N", b.window}}; }

inline json verdict_to_json(const OracleVerdict& v) {
    json out;
    switch (v.kind) {
        case OracleVerdict::Kind::Ip: out["verdict"] = "ip"; break;
        case OracleVerdict::Kind::NotIpExact: out["verdict"] = "not-ip-exact"; break;
        case OracleVerdict::Kind::Exhausted: out["verdict"] = "exhausted"; break;
    }
    if (v.witness) {
        json basis = json::array();
        for (Element e : v.witness->basis) basis.push_back(e.index);
        out["basis"] = std::move(basis);
    }
    if (v.bounds) out["bounds"] = bounds_to_json(*v.bounds);
    return out;
}

inline json partition_report_to_json(const PartitionReport& r) {
    return json{{"y", verdict_to_json(r.y_verdict)},
                {"complement", verdict_to_json(r.complement_verdict)},
                {"x_has_witness", r.x_has_witness},
                {"violation_at_bounds", r.violation_at_bounds}};
}

inline json window_to_json(const WindowResult& w) {
    json out{{"colors", w.colors}, {"depth", w.depth}, {"n_max", w.n_max}, {"found", w.found}};
    if (w.found) {
        out["least_n"] = w.least_n;
        out["certificate"] = w.certificate;
    }
    return out;
}

inline json extraction_to_json(const ExtractionResult& r, const StructureContext& ctx) {
    json basis = json::array(), fp = json::array(), trace = json::array();
    for (Element e : r.basis) basis.push_back(e.index);
    for (Element e : r.fp) fp.push_back(e.index);
    for (const Formula& f : r.psi_trace) trace.push_back(formula_to_hex(f));
    json out{{"basis", std::move(basis)},
             {"psi_trace", std::move(trace)},
             {"fp", std::move(fp)},
             {"verified", r.verified},
             {"renamed", r.renamed},
             {"truncated_at", r.truncated_at ? json(*r.truncated_at) : json(nullptr)}};
    json detail;
    detail["chosen"] = r.chosen ? json(display_formula(*r.chosen, ctx)) : json(nullptr);
    json bd = json::array(), fd = json::array();
    for (Element e : r.basis) bd.push_back(ctx.carrier().display(e));
    for (Element e : r.fp) fd.push_back(ctx.carrier().display(e));
    detail["basis_display"] = std::move(bd);
    detail["fp_display"] = std::move(fd);
    detail["least_failing"] = r.least_failing ? json(r.least_failing->index) : json(nullptr);
    out["detail"] = std::move(detail);
    return out;
}

// ---------------------------------------------------------------------------
// Forge transcripts (JSON lines; byte-identical across reruns)
// ---------------------------------------------------------------------------

inline json forge_options_to_json(const ForgeOptions& o) {
    return json{{"mode", o.mode == OracleMode::Exact ? "exact" : "bounded"},
                {"stages", o.stages},
                {"bounds", bounds_to_json(o.bounds)},
                {"skip_identity", o.search.skip_identity},
                {"scan_cap", o.scan_cap},
                {"claim_witness", o.claim_witness},
                {"pin_first", o.pin_first ? json(formula_to_hex(*o.pin_first)) : json(nullptr)}};
}

inline json stage_record_to_json(const StageRecord& r) {
    json phi{{"index", r.stage},
             {"formula", formula_to_hex(r.phi)},
             {"accepted", r.phi_accepted},
             {"at_bounds", r.phi_at_bounds}};
    json out{{"stage", r.stage}, {"phi", std::move(phi)}};
    if (r.psi) {
        out["psi"] = json{{"index", r.stage - 1},
                          {"formula", formula_to_hex(*r.psi)},
                          {"accepted", *r.psi_accepted},
                          {"at_bounds", r.psi_at_bounds}};
    } else {
        out["psi"] = nullptr;
    }
    out["witness_u"] = r.witness_u ? json(r.witness_u->index) : json(nullptr);
    out["J"] = r.rejected_so_far;
    out["claim"] = r.claim ? json{{"u", r.claim->u.index}, {"v", r.claim->v.index}} : json(nullptr);
    return out;
}

inline std::string transcript_text(const ForgeResult& result) {
    const StructureContext& ctx = result.state.context();
    json preds = json::array();
    for (std::size_t i = 0; i < ctx.pred_count(); ++i) preds.push_back(ctx.pred_name(i));
    json header{{"format", "forge-transcript"},
                {"version", 1},
                {"carrier", semigroup_to_json(ctx.carrier())},
                {"preds", std::move(preds)},
                {"options", forge_options_to_json(result.state.options())}};
    std::ostringstream out;
    out << header.dump() << '\n';
    for (const StageRecord& r : result.stages) out << stage_record_to_json(r).dump() << '\n';
    return out.str();
}

struct ReplayOutcome {
    bool ok = false;
    std::string message;
};

/// Strict replay check: rerunning the forge must reproduce the transcript
/// byte for byte. Reports the first differing line otherwise.
inline ReplayOutcome transcript_matches(const std::string& expected, const ForgeResult& rerun) {
    std::string actual = transcript_text(rerun);
    if (expected == actual) return {true, "transcript reproduced byte-identically"};
    std::istringstream e(expected), a(actual);
    std::string el, al;
    for (std::size_t line = 1;; ++line) {
        bool he = static_cast<bool>(std::getline(e, el));
        bool ha = static_cast<bool>(std::getline(a, al));
        if (!he && !ha) break;
        if (!he || !ha || el != al)
            return {false, "first divergence at line " + std::to_string(line)};
    }
    return {false, "transcripts differ in trailing whitespace"};
}

} // namespace hindman::io
