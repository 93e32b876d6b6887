#pragma once

/**
 * @file extract.hpp
 * @brief Pulling a concrete finite-products basis back out of a type oracle,
 *        and the end-to-end partition pipeline built on it.
 *
 * Extraction iterates the self-reproducing formula
 *     psi_1     = W(x) and W(x*y)
 *     psi_{i+1} = psi_i and psi_i[x := u_i * x]
 * where u_i = witness(psi_i). The telescoping guarantees FP(u_1..u_k) lands
 * inside W whenever the oracle's affirmations are sound; the result is
 * re-checked element by element regardless.
 *
 * W is the requested set Y when the oracle affirms it, and otherwise the
 * complement side X and not Y (reported via the `renamed` flag). A witness
 * request the oracle cannot decide truncates the extraction honestly at that
 * step rather than inventing elements.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "forge.hpp"
#include "formula.hpp"
#include "ip.hpp"
#include "semigroup.hpp"

namespace hindman {

struct BasisCheck {
    std::vector<Element> fp;
    bool ok = true;
    std::optional<Element> least_failing; // least FP element outside W
};

/// Direct re-evaluation: does every finite product of the basis satisfy w?
inline BasisCheck verify_basis(const StructureContext& ctx, const Formula& w, const std::vector<Element>& basis) {
    BasisCheck out{fp_set(ctx.carrier(), basis), true, std::nullopt};
    for (Element e : out.fp) // sorted ascending, so the first failure is least
        if (!eval_formula(w, ctx, e)) {
            out.ok = false;
            out.least_failing = e;
            break;
        }
    return out;
}

struct ExtractionResult {
    std::optional<Formula> chosen; // the side W actually extracted from
    bool renamed = false;          // W is "X and not Y" rather than Y
    std::vector<Element> basis;    // u_1 .. (length < depth iff truncated)
    std::vector<Formula> psi_trace; // psi_i built, including a failed last step
    std::vector<Element> fp;
    bool verified = false;
    std::optional<Element> least_failing;
    std::optional<std::size_t> truncated_at; // 1-based step whose witness was undecided
};

/**
 * @brief Extract a depth-`depth` basis for y (or for x_formula and not y,
 *        when the oracle refutes y and a complement side is supplied).
 *
 * Throws UndecidedQueryError when even the side choice is beyond the
 * oracle's horizon, and invalid_argument when the oracle refutes every
 * offered side. Witness horizons inside the iteration truncate instead.
 */
inline ExtractionResult extract_basis(TypeOracle& oracle, const Formula& y, std::optional<Formula> x_formula,
                                      std::size_t depth) {
    if (!y.free_vars().arity_one()) throw std::invalid_argument("extraction target must have exactly x free");
    if (x_formula && !x_formula->free_vars().arity_one())
        throw std::invalid_argument("complement side must have exactly x free");
    if (depth == 0) throw std::invalid_argument("extraction depth must be >= 1");

    ExtractionResult res;
    Truth ty = oracle.query(y);
    if (ty == Truth::True) {
        res.chosen = y;
    } else if (x_formula) {
        Formula w = Formula::conj(*x_formula, Formula::negate(y));
        Truth tw = oracle.query(w);
        if (tw == Truth::True) {
            res.chosen = w;
            res.renamed = true;
        } else if (ty == Truth::Undecided || tw == Truth::Undecided) {
            throw UndecidedQueryError("partition side is beyond the oracle's decided horizon");
        } else {
            throw std::invalid_argument("the type refutes both sides of the partition");
        }
    } else if (ty == Truth::Undecided) {
        throw UndecidedQueryError("target set is beyond the oracle's decided horizon");
    } else {
        throw std::invalid_argument("the type refutes the target set and no complement side was supplied");
    }

    const Formula& w = *res.chosen;
    Formula psi = Formula::conj(w, substitute_x_term(w, {TermLetter::x(), TermLetter::y()}));
    for (std::size_t i = 1; i <= depth; ++i) {
        res.psi_trace.push_back(psi);
        std::optional<Element> u;
        try {
            u = oracle.witness(psi);
        } catch (const UndecidedQueryError&) {
            res.truncated_at = i;
            break;
        }
        res.basis.push_back(*u);
        if (i < depth)
            psi = Formula::conj(psi, substitute_x_term(psi, {TermLetter::constant(u->index), TermLetter::x()}));
    }

    BasisCheck check = verify_basis(oracle.context(), w, res.basis);
    res.fp = std::move(check.fp);
    res.verified = check.ok;
    res.least_failing = check.least_failing;
    return res;
}

struct PartitionViaTypesResult {
    ForgeResult forge;
    ExtractionResult extraction;
    bool y_side = false; // the extracted side is Y itself (not the complement)
};

namespace detail {

inline bool partition_side_decided(const ForgeState& state, const Formula& xf, const Formula& yf) {
    TypeOracle o = TypeOracle::from_forge(state);
    Truth ty = o.query(yf);
    if (ty == Truth::True) return true;
    if (ty == Truth::False) return o.query(Formula::conj(xf, Formula::negate(yf))) != Truth::Undecided;
    return false;
}

} // namespace detail

/**
 * @brief Full pipeline over a context whose predicate 0 is X and predicate 1
 *        is Y: forge until the type settles which side of the partition it
 *        contains, then extract and verify a depth-`depth` basis from it.
 *
 * Exact mode extracts from the idempotent completion of the forged fragment:
 * the least image idempotent surviving in /\A, which provably decides every
 * query. That extension is re-asserted entry by entry before use. Bounded
 * mode extracts from the forged fragment itself and may truncate honestly.
 */
inline PartitionViaTypesResult partition_via_types(std::shared_ptr<const StructureContext> ctx, std::size_t depth,
                                                   ForgeOptions options = {}, bool distinct_witnesses = false,
                                                   std::size_t stage_cap = 64) {
    if (!ctx) throw std::invalid_argument("null structure context");
    if (ctx->pred_count() < 2)
        throw std::invalid_argument("partition pipeline needs predicate 0 (X) and predicate 1 (Y)");
    Formula xf = Formula::atom(0, {TermLetter::x()});
    Formula yf = Formula::atom(1, {TermLetter::x()});

    ForgeState state = forge_init(ctx, options);
    std::vector<StageRecord> records;
    std::size_t s = 0;
    for (; s < options.stages; ++s) records.push_back(state.step());
    while (!detail::partition_side_decided(state, xf, yf) && s < stage_cap) {
        records.push_back(state.step());
        ++s;
    }
    ForgeResult run{std::move(state), std::move(records)};

    ExtractionResult extraction;
    if (options.mode == OracleMode::Exact) {
        auto e = detail::least_image_idempotent(*run.state.quotient_hom(), run.state.class_set());
        if (!e) throw ContractViolation("no idempotent survives in A after the run");
        TypeOracle completion = TypeOracle::quotient_idempotent_type(ctx, *e, options.search, distinct_witnesses);
        // The completion must extend the decided fragment: every A entry and
        // every refuted-psi negation stays affirmed at the idempotent.
        for (const AEntry& a : run.state.a_entries())
            if (completion.query(a.formula) != Truth::True)
                throw ContractViolation("idempotent completion drops an accepted entry");
        for (const Formula& b : run.state.b_formulas())
            if (completion.query(b) != Truth::True)
                throw ContractViolation("idempotent completion drops a refutation");
        extraction = extract_basis(completion, yf, xf, depth);
    } else {
        TypeOracle fragment = TypeOracle::from_forge(run.state);
        extraction = extract_basis(fragment, yf, xf, depth);
    }
    bool y_side = !extraction.renamed;
    return PartitionViaTypesResult{std::move(run), std::move(extraction), y_side};
}

} // namespace hindman
