#pragma once

/**
 * @file formula.hpp
 * @brief One- and two-variable positive-product formulas over a semigroup
 *        carrier with named unary predicates, plus their canonical byte
 *        encoding and deterministic enumeration.
 *
 * Grammar: atoms are P_i(t) where t is a nonempty product of letters drawn
 * from {x, y, constants}; formulas close under not/and/or. The encoding is a
 * prefix-free code, so lexicographic comparison of encodings is well defined
 * and is used as canonical formula order.
 *
 * Encoding (all varints are minimal LEB128):
 *   formula := 0x00 varint(pred) varint(len>=1) letter^len
 *            | 0x01 formula                      (not)
 *            | 0x02 formula formula              (and)
 *            | 0x03 formula formula              (or)
 *   letter  := 0x00 | 0x01 | 0x02 varint(element index)   (x | y | constant)
 *
 * Enumeration: level(f) = max(|enc(f)|, 1 + largest constant index), so a
 * formula first using the n-th carrier element cannot appear before level
 * n+1. Streams are ordered by (level, size, encoding bytes) and restricted
 * to a fixed arity: exactly {x} free, or exactly {x, y} free.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "predicate.hpp"
#include "semigroup.hpp"

namespace hindman {

class FormulaDecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct TermLetter {
    enum class Kind : std::uint8_t { VarX = 0, VarY = 1, Const = 2 };
    Kind kind = Kind::VarX;
    std::uint64_t index = 0; // element index, meaningful iff kind == Const

    static TermLetter x() { return {Kind::VarX, 0}; }
    static TermLetter y() { return {Kind::VarY, 0}; }
    static TermLetter constant(std::uint64_t element_index) { return {Kind::Const, element_index}; }

    friend bool operator==(const TermLetter& a, const TermLetter& b) {
        return a.kind == b.kind && (a.kind != Kind::Const || a.index == b.index);
    }
};

using Term = std::vector<TermLetter>;

namespace detail {

inline void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint64_t get_varint(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    std::uint64_t v = 0;
    unsigned shift = 0;
    std::size_t start = pos;
    for (;;) {
        if (pos >= in.size()) throw FormulaDecodeError("truncated varint");
        std::uint8_t b = in[pos++];
        if (shift >= 63 && (b >> (64 - shift)) != 0) throw FormulaDecodeError("varint overflows 64 bits");
        v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
        if ((b & 0x80) == 0) {
            if (pos - start > 1 && b == 0) throw FormulaDecodeError("non-minimal varint");
            return v;
        }
        shift += 7;
        if (shift >= 64) throw FormulaDecodeError("varint overflows 64 bits");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct FreeVars {
    bool x = false;
    bool y = false;
    bool arity_one() const { return x && !y; }
    bool arity_two() const { return x && y; }
};

class Formula {
public:
    enum class Kind : std::uint8_t { Atom = 0, Not = 1, And = 2, Or = 3 };

    static Formula atom(std::uint32_t pred, Term term) {
        if (term.empty()) throw std::invalid_argument("atom term must be nonempty");
        auto n = std::make_shared<Node>();
        n->kind = Kind::Atom;
        n->pred = pred;
        n->term = std::move(term);
        n->enc.push_back(0x00);
        detail::put_varint(n->enc, pred);
        detail::put_varint(n->enc, n->term.size());
        for (const TermLetter& l : n->term) {
            switch (l.kind) {
                case TermLetter::Kind::VarX: n->enc.push_back(0x00); n->vars.x = true; break;
                case TermLetter::Kind::VarY: n->enc.push_back(0x01); n->vars.y = true; break;
                case TermLetter::Kind::Const:
                    n->enc.push_back(0x02);
                    detail::put_varint(n->enc, l.index);
                    n->max_const_plus1 = std::max<std::uint64_t>(n->max_const_plus1, l.index + 1);
                    break;
            }
        }
        return Formula(std::move(n));
    }

    static Formula negate(Formula f) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Not;
        n->enc.push_back(0x01);
        n->enc.insert(n->enc.end(), f.encoding().begin(), f.encoding().end());
        n->vars = f.free_vars();
        n->max_const_plus1 = f.node_->max_const_plus1;
        n->left = std::move(f.node_);
        return Formula(std::move(n));
    }

    static Formula conj(Formula l, Formula r) { return binary(Kind::And, std::move(l), std::move(r)); }
    static Formula disj(Formula l, Formula r) { return binary(Kind::Or, std::move(l), std::move(r)); }

    Kind kind() const { return node_->kind; }
    std::uint32_t pred() const {
        require(Kind::Atom);
        return node_->pred;
    }
    const Term& term() const {
        require(Kind::Atom);
        return node_->term;
    }
    const Formula child() const {
        require(Kind::Not);
        return Formula(node_->left);
    }
    const Formula left() const {
        if (node_->kind != Kind::And && node_->kind != Kind::Or) throw std::logic_error("formula is not binary");
        return Formula(node_->left);
    }
    const Formula right() const {
        if (node_->kind != Kind::And && node_->kind != Kind::Or) throw std::logic_error("formula is not binary");
        return Formula(node_->right);
    }

    const std::vector<std::uint8_t>& encoding() const { return node_->enc; }
    std::size_t size() const { return node_->enc.size(); }
    FreeVars free_vars() const { return node_->vars; }
    /// 1 + largest constant index used, or 0 when constant-free.
    std::uint64_t max_const_plus1() const { return node_->max_const_plus1; }
    std::uint64_t level() const { return std::max<std::uint64_t>(size(), node_->max_const_plus1); }

    friend bool operator==(const Formula& a, const Formula& b) { return a.encoding() == b.encoding(); }
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    /// Canonical order: (level, size, encoding bytes).
    friend bool formula_order_less(const Formula& a, const Formula& b) {
        if (a.level() != b.level()) return a.level() < b.level();
        if (a.size() != b.size()) return a.size() < b.size();
        return a.encoding() < b.encoding();
    }

    static Formula decode(const std::vector<std::uint8_t>& bytes) {
        std::size_t pos = 0;
        Formula f = parse(bytes, pos, 0);
        if (pos != bytes.size()) throw FormulaDecodeError("trailing bytes after formula");
        return f;
    }

private:
    struct Node {
        Kind kind = Kind::Atom;
        std::uint32_t pred = 0;
        Term term;
        std::shared_ptr<const Node> left, right;
        std::vector<std::uint8_t> enc;
        FreeVars vars;
        std::uint64_t max_const_plus1 = 0;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Formula binary(Kind k, Formula l, Formula r) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->enc.push_back(static_cast<std::uint8_t>(k));
        n->enc.insert(n->enc.end(), l.encoding().begin(), l.encoding().end());
        n->enc.insert(n->enc.end(), r.encoding().begin(), r.encoding().end());
        n->vars = {l.node_->vars.x || r.node_->vars.x, l.node_->vars.y || r.node_->vars.y};
        n->max_const_plus1 = std::max(l.node_->max_const_plus1, r.node_->max_const_plus1);
        n->left = std::move(l.node_);
        n->right = std::move(r.node_);
        return Formula(std::move(n));
    }

    void require(Kind k) const {
        if (node_->kind != k) throw std::logic_error("formula node kind mismatch");
    }

    static Formula parse(const std::vector<std::uint8_t>& bytes, std::size_t& pos, unsigned depth) {
        if (depth > 4096) throw FormulaDecodeError("formula nesting too deep");
        if (pos >= bytes.size()) throw FormulaDecodeError("truncated formula");
        std::uint8_t tag = bytes[pos++];
        switch (tag) {
            case 0x00: {
                std::uint64_t pred = detail::get_varint(bytes, pos);
                if (pred > 0xffffffffull) throw FormulaDecodeError("predicate index too large");
                std::uint64_t len = detail::get_varint(bytes, pos);
                if (len == 0) throw FormulaDecodeError("empty term");
                if (len > bytes.size()) throw FormulaDecodeError("term length exceeds input");
                Term t;
                t.reserve(len);
                for (std::uint64_t i = 0; i < len; ++i) {
                    if (pos >= bytes.size()) throw FormulaDecodeError("truncated term");
                    std::uint8_t lb = bytes[pos++];
                    if (lb == 0x00) t.push_back(TermLetter::x());
                    else if (lb == 0x01) t.push_back(TermLetter::y());
                    else if (lb == 0x02) t.push_back(TermLetter::constant(detail::get_varint(bytes, pos)));
                    else throw FormulaDecodeError("unknown term letter tag");
                }
                return atom(static_cast<std::uint32_t>(pred), std::move(t));
            }
            case 0x01: return negate(parse(bytes, pos, depth + 1));
            case 0x02: {
                Formula l = parse(bytes, pos, depth + 1);
                Formula r = parse(bytes, pos, depth + 1);
                return conj(std::move(l), std::move(r));
            }
            case 0x03: {
                Formula l = parse(bytes, pos, depth + 1);
                Formula r = parse(bytes, pos, depth + 1);
                return disj(std::move(l), std::move(r));
            }
            default: throw FormulaDecodeError("unknown formula tag");
        }
    }

    std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

/// Replace every x in f by the given term (simultaneous splice; the
/// replacement may itself mention x or y).
inline Formula substitute_x_term(const Formula& f, const Term& replacement) {
    if (replacement.empty()) throw std::invalid_argument("replacement term must be nonempty");
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            Term t;
            for (const TermLetter& l : f.term()) {
                if (l.kind == TermLetter::Kind::VarX)
                    t.insert(t.end(), replacement.begin(), replacement.end());
                else
                    t.push_back(l);
            }
            return Formula::atom(f.pred(), std::move(t));
        }
        case Formula::Kind::Not: return Formula::negate(substitute_x_term(f.child(), replacement));
        case Formula::Kind::And:
            return Formula::conj(substitute_x_term(f.left(), replacement), substitute_x_term(f.right(), replacement));
        case Formula::Kind::Or:
            return Formula::disj(substitute_x_term(f.left(), replacement), substitute_x_term(f.right(), replacement));
    }
    throw std::logic_error("unreachable formula kind");
}

/// Replace every x in f by the constant u.
inline Formula substitute_x(const Formula& f, Element u) { return substitute_x_term(f, {TermLetter::constant(u.index)}); }

/// Exchange x and y throughout f.
inline Formula swap_vars(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            Term t;
            for (const TermLetter& l : f.term()) {
                if (l.kind == TermLetter::Kind::VarX) t.push_back(TermLetter::y());
                else if (l.kind == TermLetter::Kind::VarY) t.push_back(TermLetter::x());
                else t.push_back(l);
            }
            return Formula::atom(f.pred(), std::move(t));
        }
        case Formula::Kind::Not: return Formula::negate(swap_vars(f.child()));
        case Formula::Kind::And: return Formula::conj(swap_vars(f.left()), swap_vars(f.right()));
        case Formula::Kind::Or: return Formula::disj(swap_vars(f.left()), swap_vars(f.right()));
    }
    throw std::logic_error("unreachable formula kind");
}

// ---------------------------------------------------------------------------
// Structures: a carrier with named unary predicates
// ---------------------------------------------------------------------------

class StructureContext {
public:
    StructureContext(SemigroupHandle carrier, std::vector<std::pair<std::string, SetPredicate>> preds)
        : carrier_(std::move(carrier)), preds_(std::move(preds)) {
        if (preds_.empty()) throw std::invalid_argument("structure needs at least one predicate");
        if (preds_.size() > 127) throw std::invalid_argument("too many predicates (max 127)");
        for (std::size_t i = 0; i < preds_.size(); ++i) {
            if (preds_[i].first.empty()) throw std::invalid_argument("predicate name must be nonempty");
            for (std::size_t j = 0; j < i; ++j)
                if (preds_[j].first == preds_[i].first)
                    throw std::invalid_argument("duplicate predicate name: " + preds_[i].first);
        }
        // Shared quotient: every predicate is backed by the same homomorphism
        // off this carrier (structural equality).
        const QuotientForm* first = preds_[0].second.quotient_over(carrier_);
        if (first) {
            bool all = true;
            for (std::size_t i = 1; i < preds_.size() && all; ++i) {
                const QuotientForm* q = preds_[i].second.quotient_over(carrier_);
                all = q && *q->hom == *first->hom;
            }
            if (all) shared_hom_ = first->hom;
        }
    }

    const SemigroupHandle& carrier() const { return carrier_; }
    std::size_t pred_count() const { return preds_.size(); }
    const std::string& pred_name(std::size_t i) const { return preds_.at(i).first; }
    const SetPredicate& pred(std::size_t i) const { return preds_.at(i).second; }
    std::optional<std::size_t> pred_index(std::string_view name) const {
        for (std::size_t i = 0; i < preds_.size(); ++i)
            if (preds_[i].first == name) return i;
        return std::nullopt;
    }

    /// Non-null iff all predicates are quotient-backed by one homomorphism
    /// whose source is this carrier. Enables exact class-level evaluation.
    const std::shared_ptr<const Homomorphism>& shared_hom() const { return shared_hom_; }

private:
    SemigroupHandle carrier_;
    std::vector<std::pair<std::string, SetPredicate>> preds_;
    std::shared_ptr<const Homomorphism> shared_hom_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

inline Element eval_term(const Term& t, const StructureContext& ctx, std::optional<Element> x,
                         std::optional<Element> y) {
    std::optional<Element> acc;
    for (const TermLetter& l : t) {
        Element v{0};
        switch (l.kind) {
            case TermLetter::Kind::VarX:
                if (!x) throw std::invalid_argument("unbound variable x in term");
                v = *x;
                break;
            case TermLetter::Kind::VarY:
                if (!y) throw std::invalid_argument("unbound variable y in term");
                v = *y;
                break;
            case TermLetter::Kind::Const: v = ctx.carrier().nth_element(l.index); break;
        }
        acc = acc ? ctx.carrier().product(*acc, v) : v;
    }
    return *acc;
}

/// Classical two-valued evaluation at concrete elements.
inline bool eval_formula(const Formula& f, const StructureContext& ctx, std::optional<Element> x,
                         std::optional<Element> y = std::nullopt) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            if (f.pred() >= ctx.pred_count()) throw std::out_of_range("formula references unknown predicate index");
            return ctx.pred(f.pred()).contains(eval_term(f.term(), ctx, x, y));
        }
        case Formula::Kind::Not: return !eval_formula(f.child(), ctx, x, y);
        case Formula::Kind::And: return eval_formula(f.left(), ctx, x, y) && eval_formula(f.right(), ctx, x, y);
        case Formula::Kind::Or: return eval_formula(f.left(), ctx, x, y) || eval_formula(f.right(), ctx, x, y);
    }
    throw std::logic_error("unreachable formula kind");
}

inline std::uint32_t eval_term_at_class(const Term& t, const StructureContext& ctx, std::optional<std::uint32_t> xc,
                                        std::optional<std::uint32_t> yc) {
    const auto& hom = ctx.shared_hom();
    if (!hom) throw std::logic_error("class-level evaluation requires a shared quotient");
    std::optional<std::uint32_t> acc;
    for (const TermLetter& l : t) {
        std::uint32_t v = 0;
        switch (l.kind) {
            case TermLetter::Kind::VarX:
                if (!xc) throw std::invalid_argument("unbound variable x in term");
                v = *xc;
                break;
            case TermLetter::Kind::VarY:
                if (!yc) throw std::invalid_argument("unbound variable y in term");
                v = *yc;
                break;
            case TermLetter::Kind::Const: v = hom->map_class(ctx.carrier().nth_element(l.index)); break;
        }
        acc = acc ? hom->target().product(*acc, v) : v;
    }
    return *acc;
}

/// Exact evaluation in the quotient: the truth value at any element of the
/// given class(es). Well defined because every predicate is a union of
/// classes of the shared homomorphism.
inline bool eval_formula_at_class(const Formula& f, const StructureContext& ctx, std::optional<std::uint32_t> xc,
                                  std::optional<std::uint32_t> yc = std::nullopt) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            if (f.pred() >= ctx.pred_count()) throw std::out_of_range("formula references unknown predicate index");
            const QuotientForm* q = ctx.pred(f.pred()).quotient_over(ctx.carrier());
            if (!q) throw std::logic_error("class-level evaluation requires quotient-backed predicates");
            return q->contains_class(eval_term_at_class(f.term(), ctx, xc, yc));
        }
        case Formula::Kind::Not: return !eval_formula_at_class(f.child(), ctx, xc, yc);
        case Formula::Kind::And:
            return eval_formula_at_class(f.left(), ctx, xc, yc) && eval_formula_at_class(f.right(), ctx, xc, yc);
        case Formula::Kind::Or:
            return eval_formula_at_class(f.left(), ctx, xc, yc) || eval_formula_at_class(f.right(), ctx, xc, yc);
    }
    throw std::logic_error("unreachable formula kind");
}

/// The set {x : f(x)} as a predicate. When the context carries a shared
/// quotient, the result keeps an exact quotient form (the class subset
/// computed by class-level evaluation), so downstream searches stay exact.
inline SetPredicate definable_set(const Formula& f, std::shared_ptr<const StructureContext> ctx) {
    if (!ctx) throw std::invalid_argument("null structure context");
    if (!f.free_vars().arity_one()) throw std::invalid_argument("definable_set needs a formula with exactly x free");
    auto eval = [f, ctx](Element e) { return eval_formula(f, *ctx, e, std::nullopt); };
    if (const auto& hom = ctx->shared_hom()) {
        std::vector<bool> subset(hom->target().order(), false);
        for (std::uint32_t c = 0; c < hom->target().order(); ++c)
            subset[c] = eval_formula_at_class(f, *ctx, c, std::nullopt);
        return SetPredicate::from_evaluator_with_quotient(std::move(eval), QuotientForm{hom, std::move(subset)});
    }
    return SetPredicate::from_evaluator(std::move(eval));
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

inline std::string display_term(const Term& t, const SemigroupHandle& s) {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += "*";
        switch (t[i].kind) {
            case TermLetter::Kind::VarX: out += "x"; break;
            case TermLetter::Kind::VarY: out += "y"; break;
            case TermLetter::Kind::Const: out += s.display(Element{t[i].index}); break;
        }
    }
    return out;
}

inline std::string display_formula(const Formula& f, const StructureContext& ctx) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            std::string name =
                f.pred() < ctx.pred_count() ? ctx.pred_name(f.pred()) : "P" + std::to_string(f.pred());
            return name + "(" + display_term(f.term(), ctx.carrier()) + ")";
        }
        case Formula::Kind::Not: return "!" + display_formula(f.child(), ctx);
        case Formula::Kind::And:
            return "(" + display_formula(f.left(), ctx) + " & " + display_formula(f.right(), ctx) + ")";
        case Formula::Kind::Or:
            return "(" + display_formula(f.left(), ctx) + " | " + display_formula(f.right(), ctx) + ")";
    }
    throw std::logic_error("unreachable formula kind");
}

// ---------------------------------------------------------------------------
// Streaming generation in canonical order
// ---------------------------------------------------------------------------

namespace detail {

class FormulaStream {
public:
    FormulaStream(unsigned npreds, std::uint64_t const_budget) : npreds_(npreds), budget_(const_budget) {
        if (npreds == 0 || npreds > 127) throw std::invalid_argument("predicate count must be in [1,127]");
        if (const_budget > 127) throw std::invalid_argument("constant budget above 127 unsupported by the generator");
    }

    /// Emit every formula of exact encoded size `s` in lexicographic encoding
    /// order. Tag order atom < not < and < or matches byte order 0..3;
    /// prefix-freeness makes child-wise lexicographic recursion exact.
    void by_size(std::size_t s, const std::function<void(const Formula&)>& emit) {
        if (s < 4) return;
        if (s > 130) throw std::invalid_argument("generator supports encoded sizes up to 130");
        atoms(s, emit);
        if (s >= 5) by_size(s - 1, [&](const Formula& f) { emit(Formula::negate(f)); });
        if (s >= 9) {
            pairs(s, Formula::Kind::And, emit);
            pairs(s, Formula::Kind::Or, emit);
        }
    }

private:
    void atoms(std::size_t s, const std::function<void(const Formula&)>& emit) {
        const std::size_t letter_bytes = s - 3; // tag + 1-byte pred + 1-byte len
        for (std::uint32_t p = 0; p < npreds_; ++p)
            for (std::size_t len = 1; len <= letter_bytes; ++len) {
                term_.clear();
                grow_term(p, len, letter_bytes, emit);
            }
    }

    // Letters in byte order: x (00) < y (01) < constants ascending (02 v).
    void grow_term(std::uint32_t pred, std::size_t len, std::size_t bytes_left,
                   const std::function<void(const Formula&)>& emit) {
        const std::size_t rem = len - term_.size();
        if (rem == 0) {
            if (bytes_left == 0) emit(Formula::atom(pred, term_));
            return;
        }
        if (bytes_left < rem || bytes_left > rem * 2) return; // each letter is 1 or 2 bytes
        for (int choice = 0; choice < 2; ++choice) {
            term_.push_back(choice == 0 ? TermLetter::x() : TermLetter::y());
            grow_term(pred, len, bytes_left - 1, emit);
            term_.pop_back();
        }
        for (std::uint64_t v = 0; v < budget_; ++v) {
            term_.push_back(TermLetter::constant(v));
            grow_term(pred, len, bytes_left - 2, emit);
            term_.pop_back();
        }
    }

    void pairs(std::size_t s, Formula::Kind k, const std::function<void(const Formula&)>& emit) {
        ensure_children(s - 1 - 4); // left child at most s-1-(min right size)
        std::vector<Formula> lefts;
        for (std::size_t sz = 4; sz + 4 + 1 <= s; ++sz) {
            auto it = children_by_size_.find(sz);
            if (it != children_by_size_.end()) lefts.insert(lefts.end(), it->second.begin(), it->second.end());
        }
        // Prefix-freeness: lexicographic order of (left, right) concatenations
        // is decided by the left encoding first, never by a prefix overlap.
        std::sort(lefts.begin(), lefts.end(),
                  [](const Formula& a, const Formula& b) { return a.encoding() < b.encoding(); });
        for (const Formula& l : lefts) {
            auto it = children_by_size_.find(s - 1 - l.size());
            if (it == children_by_size_.end()) continue;
            for (const Formula& r : it->second)
                emit(k == Formula::Kind::And ? Formula::conj(l, r) : Formula::disj(l, r));
        }
    }

    void ensure_children(std::size_t max_size) {
        while (children_done_ <= max_size) {
            std::size_t s = children_done_++;
            if (s < 4) continue;
            std::vector<Formula> bucket; // published only when complete
            by_size(s, [&](const Formula& f) { bucket.push_back(f); });
            children_by_size_[s] = std::move(bucket);
        }
    }

    unsigned npreds_;
    std::uint64_t budget_;
    Term term_;
    std::map<std::size_t, std::vector<Formula>> children_by_size_;
    std::size_t children_done_ = 0;
};

} // namespace detail

/// Stream every formula of exact encoded size `size` (pred indices < npreds,
/// constant indices < const_budget) in lexicographic encoding order.
inline void stream_formulas_of_size(unsigned npreds, std::size_t size, std::uint64_t const_budget,
                                    const std::function<void(const Formula&)>& emit) {
    detail::FormulaStream(npreds, const_budget).by_size(size, emit);
}

/// Stream the level-`level` stratum in (size, lex) order: formulas with
/// level(f) == level and constant indices < const_budget. Callers pass
/// const_budget = min(level, carrier order) so constants stay evaluable.
inline void stream_formulas_of_level(unsigned npreds, unsigned level, std::uint64_t const_budget,
                                     const std::function<void(const Formula&)>& emit) {
    detail::FormulaStream stream(npreds, const_budget);
    for (std::size_t s = 4; s <= level; ++s)
        stream.by_size(s, [&](const Formula& f) {
            if (f.level() == level) emit(f);
        });
}

// ---------------------------------------------------------------------------
// Deterministic arity-restricted enumeration with an optional pinned head
// ---------------------------------------------------------------------------

class FormulaEnumeration {
public:
    enum class Arity { One, Two };

    FormulaEnumeration(std::shared_ptr<const StructureContext> ctx, Arity arity,
                       std::optional<Formula> pinned_first = std::nullopt)
        : ctx_(std::move(ctx)), arity_(arity) {
        if (!ctx_) throw std::invalid_argument("null structure context");
        if (pinned_first) {
            if (!matches_arity(*pinned_first))
                throw std::invalid_argument("pinned formula has the wrong arity for this stream");
            ensure_level(static_cast<unsigned>(pinned_first->level()));
            for (std::size_t i = 0; i < items_.size(); ++i)
                if (items_[i] == *pinned_first) {
                    pinned_pos_ = i;
                    break;
                }
            if (!pinned_pos_)
                throw std::invalid_argument("pinned formula does not occur in the enumeration stream");
        }
    }

    /// i-th formula of the stream (grows the materialized prefix on demand).
    Formula at(std::size_t i) const {
        ensure(i + 1);
        if (pinned_pos_ && *pinned_pos_ != 0) {
            if (i == 0) return items_[*pinned_pos_];
            if (i == *pinned_pos_) return items_[0];
        }
        return items_[i];
    }

    /// Position of f among the first `prefix_len` stream entries, if any.
    /// Only the requested prefix is materialized; formulas beyond it (deep
    /// conjunctions built by extraction, say) simply report "not present".
    std::optional<std::size_t> find_in_prefix(const Formula& f, std::size_t prefix_len) const {
        ensure(prefix_len);
        for (std::size_t i = 0; i < std::min(prefix_len, items_.size()); ++i)
            if (at(i) == f) return i;
        return std::nullopt;
    }

    const StructureContext& context() const { return *ctx_; }
    std::shared_ptr<const StructureContext> context_ptr() const { return ctx_; }
    Arity arity() const { return arity_; }

private:
    bool matches_arity(const Formula& f) const {
        return arity_ == Arity::One ? f.free_vars().arity_one() : f.free_vars().arity_two();
    }

    void ensure(std::size_t n) const {
        while (items_.size() < n) {
            if (next_level_ > 64)
                throw std::logic_error("formula enumeration exceeded level 64; index unreachable");
            ensure_level(next_level_);
        }
    }

    void ensure_level(unsigned level) const {
        while (next_level_ <= level) {
            unsigned l = next_level_++;
            std::uint64_t budget = l;
            if (auto ord = ctx_->carrier().order()) budget = std::min<std::uint64_t>(budget, *ord);
            stream_formulas_of_level(static_cast<unsigned>(ctx_->pred_count()), l, budget, [&](const Formula& f) {
                if (matches_arity(f)) items_.push_back(f);
            });
        }
    }

    std::shared_ptr<const StructureContext> ctx_;
    Arity arity_;
    std::optional<std::size_t> pinned_pos_;
    mutable std::vector<Formula> items_;
    mutable unsigned next_level_ = 4;
};

} // namespace hindman
