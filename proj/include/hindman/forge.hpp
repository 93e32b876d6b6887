#pragma once

/**
 * @file forge.hpp
 * @brief Stagewise construction of a finitely generated idempotent type over
 *        a structure, together with the query/witness oracle it induces.
 *
 * The forge walks the canonical formula enumeration. Stage s decides the
 * arity-1 formula phi_s (keep it or its negation in the accumulated set A,
 * whichever leaves the set defined by /\A partition-large), and for s >= 1
 * decides the arity-2 formula psi_{s-1}: it is accepted when some u makes
 * {y : A(y) and psi(u, y)} large again (the witness entry psi(u, x) then
 * joins A), and rejected otherwise (its negation joins B).
 *
 * "Large" means IP. Two oracle modes:
 *   Exact   - predicates share a homomorphism onto a finite semigroup, so
 *             largeness reduces to "an image idempotent survives in the
 *             class set"; every decision and every rejection is exact.
 *   Bounded - largeness is approximated by a depth/window search; decisions
 *             made on exhaustion evidence carry an at_bounds flag.
 *
 * Invariants maintained (checked by check_forge_invariants):
 *   (1) the set defined by /\A is IP;
 *   (2) each stage s decided exactly phi_s or its negation;
 *   (3) each accepted psi_j contributed its canonical witness entry, and an
 *       image idempotent still survives in the witnessed class set;
 *   (4) each rejected psi_j admits no witness class at all (exhaustive over
 *       classes in exact mode);
 *   (5) B is exactly the set of negations of rejected psi_j.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "ip.hpp"
#include "predicate.hpp"
#include "semigroup.hpp"

namespace hindman {

enum class OracleMode { Exact, Bounded };

struct ForgeOptions {
    OracleMode mode = OracleMode::Exact;
    std::size_t stages = 4;             // number of phi decisions
    Bounds bounds{4, 64};               // bounded-mode search depth/window
    SearchOptions search{};             // identity skipping for witness scans
    std::uint64_t scan_cap = 1u << 16;  // element scan ceiling (class reps, claim witnesses)
    bool claim_witness = false;         // record a per-stage consistency witness
    std::optional<Formula> pin_first;   // formula forced to arity-1 index 0
};

struct ClaimWitness {
    Element u{0};
    Element v{0};
};

struct PsiDecision {
    Formula psi;
    bool accepted = false;
    std::optional<Element> witness; // present iff accepted
    bool at_bounds = false;         // bounded-mode rejection on exhaustion evidence
};

struct AEntry {
    enum class Origin { PhiDecision, PsiWitness };
    Formula formula; // canonical over x, exactly as conjoined into A
    Origin origin = Origin::PhiDecision;
    std::size_t index = 0;          // phi stage s, or psi index j
    std::optional<Element> witness; // PsiWitness origin only
};

struct StageRecord {
    std::size_t stage = 0;
    Formula phi;
    bool phi_accepted = false;
    bool phi_at_bounds = false;
    std::optional<Formula> psi;
    std::optional<bool> psi_accepted;
    std::optional<Element> witness_u;
    bool psi_at_bounds = false;
    std::vector<std::size_t> rejected_so_far; // J after this stage
    std::optional<ClaimWitness> claim;
};

namespace detail {

inline std::optional<std::uint32_t> least_image_idempotent(const Homomorphism& hom,
                                                           const std::vector<bool>& classes) {
    for (std::uint32_t c : hom.image()) // sorted ascending
        if (classes[c] && hom.target().product(c, c) == c) return c;
    return std::nullopt;
}

} // namespace detail

class ForgeState {
public:
    ForgeState(std::shared_ptr<const StructureContext> ctx, ForgeOptions options)
        : ctx_(std::move(ctx)), options_(std::move(options)) {
        if (!ctx_) throw std::invalid_argument("null structure context");
        enum1_ = std::make_shared<FormulaEnumeration>(ctx_, FormulaEnumeration::Arity::One, options_.pin_first);
        enum2_ = std::make_shared<FormulaEnumeration>(ctx_, FormulaEnumeration::Arity::Two);
        if (options_.mode == OracleMode::Exact) {
            hom_ = ctx_->shared_hom();
            if (!hom_)
                throw std::invalid_argument(
                    "exact forge mode requires every predicate to share one quotient homomorphism");
            t_a_.assign(hom_->target().order(), true);
            if (!detail::least_image_idempotent(*hom_, t_a_))
                throw std::invalid_argument("quotient image has no idempotent; no type can exist");
            class_reps_ = compute_class_reps();
        }
    }

    const StructureContext& context() const { return *ctx_; }
    std::shared_ptr<const StructureContext> context_ptr() const { return ctx_; }
    const ForgeOptions& options() const { return options_; }
    const std::shared_ptr<FormulaEnumeration>& arity_one() const { return enum1_; }
    const std::shared_ptr<FormulaEnumeration>& arity_two() const { return enum2_; }
    std::size_t stages_done() const { return stages_done_; }
    const std::vector<AEntry>& a_entries() const { return a_entries_; }
    const std::vector<PsiDecision>& psi_log() const { return psi_log_; }
    const std::vector<std::size_t>& rejected() const { return rejected_; }
    const std::vector<bool>& class_set() const {
        if (options_.mode != OracleMode::Exact) throw std::logic_error("class set exists only in exact mode");
        return t_a_;
    }
    const std::shared_ptr<const Homomorphism>& quotient_hom() const { return hom_; }

    /// Negations of the rejected psi formulas, in rejection order.
    std::vector<Formula> b_formulas() const {
        std::vector<Formula> out;
        out.reserve(rejected_.size());
        for (std::size_t j : rejected_) out.push_back(Formula::negate(psi_log_[j].psi));
        return out;
    }

    /// Left-fold conjunction of A, or nullopt while A is empty.
    std::optional<Formula> a_formula() const {
        std::optional<Formula> acc;
        for (const AEntry& e : a_entries_) acc = acc ? Formula::conj(*acc, e.formula) : e.formula;
        return acc;
    }

    /// The set defined by /\A (everything, while A is empty), quotient-backed
    /// whenever the context shares a homomorphism.
    SetPredicate a_predicate() const {
        if (auto f = a_formula()) return definable_set(*f, ctx_);
        if (const auto& hom = ctx_->shared_hom())
            return SetPredicate::from_quotient(hom, std::vector<bool>(hom->target().order(), true));
        return SetPredicate::from_evaluator([](Element) { return true; });
    }

    /// Advance one stage: decide phi_s, then (for s >= 1) psi_{s-1}.
    StageRecord step() {
        const std::size_t s = stages_done_;
        Formula phi = enum1_->at(s);
        StageRecord rec{s, phi, false, false, std::nullopt, std::nullopt, std::nullopt, false, {}, std::nullopt};
        decide_phi(s, phi, rec);
        if (s >= 1) {
            Formula psi = enum2_->at(s - 1);
            rec.psi = psi;
            decide_psi(s - 1, psi, rec);
        }
        ++stages_done_;
        rec.rejected_so_far = rejected_;
        if (options_.claim_witness) rec.claim = consistency_witness();
        return rec;
    }

    /**
     * @brief Least (u, v) consistent with the current decisions: A(u), A(v),
     *        A(u*v) all hold and every rejected psi_j fails at (u, v); u is
     *        additionally required to keep {y : A(y) and A(u*y)} IP.
     *
     * All four element facts are re-checked by direct evaluation. Returns
     * nullopt when the scan cap (bounded mode: the search window) runs out.
     */
    std::optional<ClaimWitness> consistency_witness() const {
        const SetPredicate a = a_predicate();
        const SemigroupHandle& carrier = ctx_->carrier();
        const std::uint64_t start = scan_start(carrier, options_.search);
        const std::uint64_t cap = scan_limit();
        for (std::uint64_t ui = start; ui < cap; ++ui) {
            Element u{ui};
            if (!carrier.contains(u) || !a.contains(u)) continue;
            if (!product_set_large(a, u)) continue;
            for (std::uint64_t vi = start; vi < cap; ++vi) {
                Element v{vi};
                if (!carrier.contains(v) || !a.contains(v) || !a.contains(carrier.product(u, v))) continue;
                bool all_refuted = true;
                for (std::size_t j : rejected_)
                    if (eval_formula(psi_log_[j].psi, *ctx_, u, v)) {
                        all_refuted = false;
                        break;
                    }
                if (!all_refuted) continue;
                assert_claim(a, u, v);
                return ClaimWitness{u, v};
            }
            break; // least valid u admits no v within the cap: give up
        }
        return std::nullopt;
    }

private:
    friend void check_forge_invariants(const struct ForgeResult& result);

    std::uint64_t scan_limit() const {
        std::uint64_t cap =
            options_.mode == OracleMode::Bounded ? options_.bounds.window : options_.scan_cap;
        if (auto ord = ctx_->carrier().order()) cap = std::min<std::uint64_t>(cap, *ord);
        return cap;
    }

    /// Classes of the quotient image in order of their least representative,
    /// paired with that representative.
    std::vector<std::pair<Element, std::uint32_t>> compute_class_reps() const {
        std::vector<std::pair<Element, std::uint32_t>> reps;
        const std::size_t want = hom_->image().size();
        std::vector<bool> seen(hom_->target().order(), false);
        const std::uint64_t start = scan_start(ctx_->carrier(), options_.search);
        for (std::uint64_t ui = start; ui < scan_limit() && reps.size() < want; ++ui) {
            Element u{ui};
            if (!ctx_->carrier().contains(u)) break;
            std::uint32_t c = hom_->map_class(u);
            if (!seen[c]) {
                seen[c] = true;
                reps.emplace_back(u, c);
            }
        }
        if (reps.size() < want)
            throw std::runtime_error("could not realize every quotient class within the scan cap");
        return reps;
    }

    void decide_phi(std::size_t s, const Formula& phi, StageRecord& rec) {
        bool accepted = false;
        bool at_bounds = false;
        if (options_.mode == OracleMode::Exact) {
            std::vector<bool> kept(t_a_.size(), false);
            for (std::uint32_t t = 0; t < t_a_.size(); ++t)
                if (t_a_[t] && eval_formula_at_class(phi, *ctx_, t)) kept[t] = true;
            accepted = detail::least_image_idempotent(*hom_, kept).has_value();
            for (std::uint32_t t = 0; t < t_a_.size(); ++t)
                if (t_a_[t] && eval_formula_at_class(phi, *ctx_, t) != accepted) t_a_[t] = false;
        } else {
            Formula cand = a_formula() ? Formula::conj(*a_formula(), phi) : phi;
            OracleVerdict v = ip_witness_bounded(ctx_->carrier(), definable_set(cand, ctx_), options_.bounds.depth,
                                                 options_.bounds.window, options_.search);
            accepted = v.is_ip();
            at_bounds = !accepted; // the negated entry rests on exhaustion evidence
        }
        Formula entry = accepted ? phi : Formula::negate(phi);
        a_entries_.push_back(AEntry{entry, AEntry::Origin::PhiDecision, s, std::nullopt});
        rec.phi_accepted = accepted;
        rec.phi_at_bounds = at_bounds;
    }

    void decide_psi(std::size_t j, const Formula& psi, StageRecord& rec) {
        std::optional<Element> witness;
        bool at_bounds = false;
        if (options_.mode == OracleMode::Exact) {
            for (const auto& [u, c] : class_reps_) {
                std::vector<bool> kept(t_a_.size(), false);
                bool any = false;
                for (std::uint32_t t = 0; t < t_a_.size(); ++t)
                    if (t_a_[t] && eval_formula_at_class(psi, *ctx_, c, t)) kept[t] = any = true;
                if (any && detail::least_image_idempotent(*hom_, kept)) {
                    witness = u;
                    t_a_ = kept;
                    break;
                }
            }
        } else {
            const std::uint64_t start = scan_start(ctx_->carrier(), options_.search);
            for (std::uint64_t ui = start; ui < scan_limit(); ++ui) {
                Element u{ui};
                if (!ctx_->carrier().contains(u)) break;
                Formula entry = swap_vars(substitute_x(psi, u));
                Formula cand = a_formula() ? Formula::conj(*a_formula(), entry) : entry;
                OracleVerdict v = ip_witness_bounded(ctx_->carrier(), definable_set(cand, ctx_),
                                                     options_.bounds.depth, options_.bounds.window, options_.search);
                if (v.is_ip()) {
                    witness = u;
                    break;
                }
            }
            at_bounds = !witness.has_value(); // rejection rests on exhaustion evidence
        }
        if (witness) {
            Formula entry = swap_vars(substitute_x(psi, *witness));
            a_entries_.push_back(AEntry{entry, AEntry::Origin::PsiWitness, j, witness});
            psi_log_.push_back(PsiDecision{psi, true, witness, false});
        } else {
            rejected_.push_back(j);
            psi_log_.push_back(PsiDecision{psi, false, std::nullopt, at_bounds});
        }
        rec.psi_accepted = witness.has_value();
        rec.witness_u = witness;
        rec.psi_at_bounds = at_bounds;
    }

    /// Is {y : A(y) and A(u*y)} IP, by the mode's own lights?
    bool product_set_large(const SetPredicate& a, Element u) const {
        const SemigroupHandle& carrier = ctx_->carrier();
        if (options_.mode == OracleMode::Exact) {
            const QuotientForm* q = a.quotient_over(carrier);
            if (!q) throw std::logic_error("exact mode lost the quotient form of A");
            std::uint32_t cu = hom_->map_class(u);
            std::vector<bool> z(t_a_.size(), false);
            for (std::uint32_t t = 0; t < z.size(); ++t)
                if (q->contains_class(t) && q->contains_class(hom_->target().product(cu, t))) z[t] = true;
            return detail::least_image_idempotent(*hom_, z).has_value();
        }
        auto zset = SetPredicate::from_evaluator(
            [a, u, carrier](Element y) { return a.contains(y) && a.contains(carrier.product(u, y)); });
        return ip_witness_bounded(carrier, zset, options_.bounds.depth, options_.bounds.window, options_.search)
            .is_ip();
    }

    void assert_claim(const SetPredicate& a, Element u, Element v) const {
        const SemigroupHandle& carrier = ctx_->carrier();
        bool ok = a.contains(u) && a.contains(v) && a.contains(carrier.product(u, v));
        for (std::size_t j : rejected_)
            ok = ok && !eval_formula(psi_log_[j].psi, *ctx_, u, v);
        if (!ok) throw ContractViolation("consistency witness failed direct re-evaluation");
    }

    std::shared_ptr<const StructureContext> ctx_;
    ForgeOptions options_;
    std::shared_ptr<FormulaEnumeration> enum1_, enum2_;
    std::shared_ptr<const Homomorphism> hom_; // exact mode
    std::vector<bool> t_a_;                   // exact mode: classes of /\A
    std::vector<std::pair<Element, std::uint32_t>> class_reps_;
    std::vector<AEntry> a_entries_;
    std::vector<PsiDecision> psi_log_;
    std::vector<std::size_t> rejected_;
    std::size_t stages_done_ = 0;
};

struct ForgeResult {
    ForgeState state;
    std::vector<StageRecord> stages;
};

inline ForgeState forge_init(std::shared_ptr<const StructureContext> ctx, ForgeOptions options = {}) {
    return ForgeState(std::move(ctx), std::move(options));
}

inline StageRecord forge_step(ForgeState& state) { return state.step(); }

inline ForgeResult run_forge(std::shared_ptr<const StructureContext> ctx, ForgeOptions options = {}) {
    ForgeState state = forge_init(std::move(ctx), std::move(options));
    std::vector<StageRecord> records;
    records.reserve(state.options().stages);
    for (std::size_t s = 0; s < state.options().stages; ++s) records.push_back(state.step());
    return ForgeResult{std::move(state), std::move(records)};
}

/// Re-derive every structural invariant of a finished run; exact-mode runs
/// additionally get their semantic invariants re-proved from scratch.
/// Throws ContractViolation on the first failure.
inline void check_forge_invariants(const ForgeResult& result) {
    const ForgeState& st = result.state;
    const StructureContext& ctx = st.context();

    // (2) stage s decided phi_s or its negation, in order.
    std::size_t phi_seen = 0, psi_seen = 0;
    for (const AEntry& e : st.a_entries_) {
        if (e.origin == AEntry::Origin::PhiDecision) {
            if (e.index != phi_seen) throw ContractViolation("phi decisions out of order");
            Formula phi = st.arity_one()->at(e.index);
            if (e.formula != phi && e.formula != Formula::negate(phi))
                throw ContractViolation("A entry is neither phi nor its negation");
            ++phi_seen;
        } else {
            const PsiDecision& d = st.psi_log().at(e.index);
            if (!d.accepted || !d.witness || !e.witness || d.witness->index != e.witness->index)
                throw ContractViolation("psi witness entry disagrees with the decision log");
            if (e.formula != swap_vars(substitute_x(d.psi, *d.witness)))
                throw ContractViolation("psi witness entry is not the canonical instance");
            ++psi_seen;
        }
    }
    if (phi_seen != st.stages_done()) throw ContractViolation("missing phi decision");

    // (5) B is exactly the negations of rejected psi, and the log is total.
    std::size_t expected_psi = st.stages_done() > 0 ? st.stages_done() - 1 : 0;
    if (st.psi_log().size() != expected_psi) throw ContractViolation("psi decision log has the wrong length");
    std::size_t accepted = 0;
    for (std::size_t j = 0; j < st.psi_log().size(); ++j) {
        const PsiDecision& d = st.psi_log()[j];
        if (d.psi != st.arity_two()->at(j)) throw ContractViolation("psi log disagrees with the enumeration");
        bool in_j = std::find(st.rejected().begin(), st.rejected().end(), j) != st.rejected().end();
        if (d.accepted == in_j) throw ContractViolation("rejection list disagrees with the decision log");
        if (d.accepted) ++accepted;
    }
    if (accepted != psi_seen) throw ContractViolation("accepted psi count disagrees with A");
    if (!std::is_sorted(st.rejected().begin(), st.rejected().end()))
        throw ContractViolation("rejection list out of order");

    if (st.options().mode != OracleMode::Exact) return;

    const Homomorphism& hom = *st.quotient_hom();
    // (1) recompute the class set of /\A and require a surviving idempotent.
    std::vector<bool> t(hom.target().order(), true);
    for (const AEntry& e : st.a_entries_)
        for (std::uint32_t c = 0; c < t.size(); ++c)
            if (t[c] && !eval_formula_at_class(e.formula, ctx, c)) t[c] = false;
    if (t != st.class_set()) throw ContractViolation("cached class set of A is stale");
    if (!detail::least_image_idempotent(hom, t)) throw ContractViolation("no idempotent survives in A");

    for (std::size_t j = 0; j < st.psi_log().size(); ++j) {
        const PsiDecision& d = st.psi_log()[j];
        if (d.accepted) {
            // (3) the witnessed class set still carries an idempotent.
            std::uint32_t cu = hom.map_class(*d.witness);
            std::vector<bool> kept(t.size(), false);
            for (std::uint32_t c = 0; c < t.size(); ++c)
                if (t[c] && eval_formula_at_class(d.psi, ctx, cu, c)) kept[c] = true;
            if (!detail::least_image_idempotent(hom, kept))
                throw ContractViolation("accepted psi lost its idempotent");
        } else {
            // (4) no class of the image admits a witness, exhaustively.
            for (std::uint32_t cu : hom.image()) {
                std::vector<bool> kept(t.size(), false);
                for (std::uint32_t c = 0; c < t.size(); ++c)
                    if (t[c] && eval_formula_at_class(d.psi, ctx, cu, c)) kept[c] = true;
                if (detail::least_image_idempotent(hom, kept))
                    throw ContractViolation("rejected psi admits a witness class");
            }
        }
    }

    // The paper-level consistency claim: some (u, v) realizes A and refutes
    // every rejected psi simultaneously.
    if (!st.consistency_witness()) throw ContractViolation("no consistency witness within the scan cap");
}

// ---------------------------------------------------------------------------
// The oracle view of a type: three-valued queries plus witness extraction
// ---------------------------------------------------------------------------

enum class Truth { False, True, Undecided };

inline Truth truth_not(Truth t) {
    if (t == Truth::True) return Truth::False;
    if (t == Truth::False) return Truth::True;
    return Truth::Undecided;
}
inline Truth truth_and(Truth a, Truth b) {
    if (a == Truth::False || b == Truth::False) return Truth::False;
    if (a == Truth::True && b == Truth::True) return Truth::True;
    return Truth::Undecided;
}
inline Truth truth_or(Truth a, Truth b) {
    if (a == Truth::True || b == Truth::True) return Truth::True;
    if (a == Truth::False && b == Truth::False) return Truth::False;
    return Truth::Undecided;
}

/**
 * @brief Uniform interface over "the type says ..." queries.
 *
 * Forge-backed view: truth is decided from the finite decision fragment
 * (A instances over x, y and x*y, plus refuted psi negations) extended
 * through three-valued connectives; everything beyond stays Undecided, and
 * witnesses exist only for psi formulas inside the decided enumeration
 * prefix - witness requests beyond the horizon throw UndecidedQueryError.
 *
 * Quotient-backed view: evaluation at a fixed idempotent class of the shared
 * quotient; every query is decided and every witness request succeeds with a
 * fiber element (optionally strictly increasing, for distinct bases).
 */
class TypeOracle {
public:
    static TypeOracle from_forge(const ForgeState& state) {
        TypeOracle o(state.context_ptr());
        o.enum2_ = state.arity_two();
        for (const PsiDecision& d : state.psi_log()) o.psi_log_.push_back({d.accepted, d.witness});
        for (const AEntry& e : state.a_entries()) {
            o.true_set_.insert(e.formula.encoding());
            o.true_set_.insert(swap_vars(e.formula).encoding());
            o.true_set_.insert(substitute_x_term(e.formula, {TermLetter::x(), TermLetter::y()}).encoding());
        }
        for (const Formula& b : state.b_formulas()) o.true_set_.insert(b.encoding());
        return o;
    }

    static TypeOracle quotient_idempotent_type(std::shared_ptr<const StructureContext> ctx,
                                               std::uint32_t idempotent_class, SearchOptions opts = {},
                                               bool distinct_witnesses = false, std::uint64_t scan_cap = 1u << 20) {
        TypeOracle o(std::move(ctx));
        const auto& hom = o.ctx_->shared_hom();
        if (!hom) throw std::invalid_argument("quotient-backed oracle needs a shared quotient homomorphism");
        if (idempotent_class >= hom->target().order()) throw std::out_of_range("class index out of range");
        if (hom->target().product(idempotent_class, idempotent_class) != idempotent_class)
            throw std::invalid_argument("chosen class is not idempotent");
        const auto& img = hom->image();
        if (!std::binary_search(img.begin(), img.end(), idempotent_class))
            throw std::invalid_argument("chosen class lies outside the quotient image");
        o.at_class_ = idempotent_class;
        o.opts_ = opts;
        o.distinct_ = distinct_witnesses;
        o.scan_cap_ = scan_cap;
        return o;
    }

    bool is_exact() const { return at_class_.has_value(); }
    const StructureContext& context() const { return *ctx_; }
    std::shared_ptr<const StructureContext> context_ptr() const { return ctx_; }

    /// Three-valued membership of f in the type (x is the distinguished
    /// variable; y, when present, refers to the same type).
    Truth query(const Formula& f) const {
        if (at_class_) return eval_formula_at_class(f, *ctx_, *at_class_, *at_class_) ? Truth::True : Truth::False;
        if (true_set_.count(f.encoding())) return Truth::True;
        if (f.kind() == Formula::Kind::Not && true_set_.count(f.child().encoding())) return Truth::False;
        if (true_set_.count(Formula::negate(f).encoding())) return Truth::False;
        switch (f.kind()) {
            case Formula::Kind::Atom: return Truth::Undecided;
            case Formula::Kind::Not: return truth_not(query(f.child()));
            case Formula::Kind::And: return truth_and(query(f.left()), query(f.right()));
            case Formula::Kind::Or: return truth_or(query(f.left()), query(f.right()));
        }
        throw std::logic_error("unreachable formula kind");
    }

    /// An element u for which the type affirms psi(u, -). Quotient view:
    /// the next fiber element of the idempotent class. Forge view: the
    /// logged witness of psi within the decided prefix; beyond the horizon
    /// throws UndecidedQueryError, on a refuted psi throws logic_error.
    Element witness(const Formula& psi) {
        if (!psi.free_vars().arity_two()) throw std::invalid_argument("witness requires a formula with x and y free");
        if (at_class_) {
            if (!eval_formula_at_class(psi, *ctx_, *at_class_, *at_class_))
                throw std::logic_error("witness requested for a formula false at the idempotent class");
            return next_fiber_element();
        }
        auto j = enum2_->find_in_prefix(psi, psi_log_.size());
        if (!j) throw UndecidedQueryError("witness request beyond the decided horizon");
        const auto& d = psi_log_[*j];
        if (!d.accepted) throw std::logic_error("witness requested for a refuted formula");
        return *d.witness;
    }

private:
    explicit TypeOracle(std::shared_ptr<const StructureContext> ctx) : ctx_(std::move(ctx)) {
        if (!ctx_) throw std::invalid_argument("null structure context");
    }

    Element next_fiber_element() {
        const auto& hom = ctx_->shared_hom();
        std::uint64_t start = scan_start(ctx_->carrier(), opts_);
        if (distinct_ && last_witness_ && *last_witness_ + 1 > start) start = *last_witness_ + 1;
        std::uint64_t cap = scan_cap_;
        if (auto ord = ctx_->carrier().order()) cap = std::min<std::uint64_t>(cap, *ord);
        for (std::uint64_t ui = start; ui < cap; ++ui) {
            Element u{ui};
            if (hom->map_class(u) == *at_class_) {
                last_witness_ = ui;
                return u;
            }
        }
        throw std::runtime_error("idempotent fiber exhausted within the scan cap");
    }

    std::shared_ptr<const StructureContext> ctx_;
    // forge view
    std::set<std::vector<std::uint8_t>> true_set_;
    std::shared_ptr<FormulaEnumeration> enum2_;
    struct Logged {
        bool accepted;
        std::optional<Element> witness;
    };
    std::vector<Logged> psi_log_;
    // quotient view
    std::optional<std::uint32_t> at_class_;
    SearchOptions opts_{};
    bool distinct_ = false;
    std::uint64_t scan_cap_ = 1u << 20;
    std::optional<std::uint64_t> last_witness_;
};

} // namespace hindman
