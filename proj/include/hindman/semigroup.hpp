#pragma once

/**
 * @file semigroup.hpp
 * @brief Concretely represented countable semigroups, finite Cayley tables,
 *        and homomorphisms onto finite targets.
 *
 * Every carrier is addressed through a fixed enumeration: nat-add and nat-mul
 * enumerate 0, 1, 2, ...; free-word enumerates nonempty words in shortlex
 * order; a finite table enumerates its rows. The enumeration index is the
 * canonical encoding of an element, so Element is a strong index type and
 * nth_element is the identity on indices.
 */

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hindman {

struct Element {
    std::uint64_t index = 0;
    friend auto operator<=>(const Element&, const Element&) = default;
};

/// Thrown when an oracle is asked about a formula it has not decided yet.
class UndecidedQueryError : public std::runtime_error {
public:
    explicit UndecidedQueryError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a structural contract that the library guarantees is observed broken.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("element index overflow in addition");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("element index overflow in multiplication");
    return r;
}

} // namespace detail

/// Finite semigroup given by a row-major Cayley table over {0, ..., n-1}.
class FiniteSemigroup {
public:
    FiniteSemigroup(std::size_t order, std::vector<std::uint32_t> flat_table)
        : order_(order), table_(std::move(flat_table)) {
        if (order_ == 0) throw std::invalid_argument("finite semigroup must have order >= 1");
        if (table_.size() != order_ * order_) throw std::invalid_argument("Cayley table size does not match order");
        for (std::uint32_t v : table_)
            if (v >= order_) throw std::invalid_argument("Cayley table entry out of range");
    }

    static FiniteSemigroup from_rows(const std::vector<std::vector<std::uint32_t>>& rows) {
        std::vector<std::uint32_t> flat;
        for (const auto& r : rows) {
            if (r.size() != rows.size()) throw std::invalid_argument("Cayley table is not square");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return FiniteSemigroup(rows.size(), std::move(flat));
    }

    std::size_t order() const { return order_; }

    std::uint32_t product(std::uint32_t a, std::uint32_t b) const {
        if (a >= order_ || b >= order_) throw std::out_of_range("finite semigroup index out of range");
        return table_[a * order_ + b];
    }

    /// Least (a, b, c) in lexicographic order with (a*b)*c != a*(b*c), if any.
    std::optional<std::array<std::uint32_t, 3>> least_associativity_violation() const {
        for (std::uint32_t a = 0; a < order_; ++a)
            for (std::uint32_t b = 0; b < order_; ++b)
                for (std::uint32_t c = 0; c < order_; ++c)
                    if (product(product(a, b), c) != product(a, product(b, c)))
                        return std::array<std::uint32_t, 3>{a, b, c};
        return std::nullopt;
    }

    void require_associative() const {
        if (auto v = least_associativity_violation()) {
            throw std::invalid_argument("table is not associative, least violation at (" +
                                        std::to_string((*v)[0]) + "," + std::to_string((*v)[1]) + "," +
                                        std::to_string((*v)[2]) + ")");
        }
    }

    std::vector<std::uint32_t> idempotents() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t e = 0; e < order_; ++e)
            if (product(e, e) == e) out.push_back(e);
        return out;
    }

    /// The set {f, f^2, f^3, ...}, sorted ascending.
    std::vector<std::uint32_t> cyclic_closure(std::uint32_t f) const {
        if (f >= order_) throw std::out_of_range("finite semigroup index out of range");
        std::set<std::uint32_t> seen;
        std::uint32_t cur = f;
        while (seen.insert(cur).second) cur = product(cur, f);
        return {seen.begin(), seen.end()};
    }

    std::optional<std::uint32_t> two_sided_identity() const {
        for (std::uint32_t e = 0; e < order_; ++e) {
            bool ok = true;
            for (std::uint32_t x = 0; x < order_ && ok; ++x)
                ok = product(e, x) == x && product(x, e) == x;
            if (ok) return e;
        }
        return std::nullopt;
    }

    friend bool operator==(const FiniteSemigroup& a, const FiniteSemigroup& b) {
        return a.order_ == b.order_ && a.table_ == b.table_;
    }

    const std::vector<std::uint32_t>& flat_table() const { return table_; }

    // Stock tables used by homomorphism rules and tests.
    static FiniteSemigroup zmod_add(std::uint32_t d) {
        std::vector<std::uint32_t> t(static_cast<std::size_t>(d) * d);
        for (std::uint32_t a = 0; a < d; ++a)
            for (std::uint32_t b = 0; b < d; ++b) t[a * d + b] = (a + b) % d;
        return FiniteSemigroup(d, std::move(t));
    }
    static FiniteSemigroup zmod_mul(std::uint32_t d) {
        std::vector<std::uint32_t> t(static_cast<std::size_t>(d) * d);
        for (std::uint32_t a = 0; a < d; ++a)
            for (std::uint32_t b = 0; b < d; ++b)
                t[a * d + b] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % d);
        return FiniteSemigroup(d, std::move(t));
    }
    static FiniteSemigroup left_zero(std::uint32_t n) {
        std::vector<std::uint32_t> t(static_cast<std::size_t>(n) * n);
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = 0; b < n; ++b) t[a * n + b] = a;
        return FiniteSemigroup(n, std::move(t));
    }
    static FiniteSemigroup right_zero(std::uint32_t n) {
        std::vector<std::uint32_t> t(static_cast<std::size_t>(n) * n);
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = 0; b < n; ++b) t[a * n + b] = b;
        return FiniteSemigroup(n, std::move(t));
    }

private:
    std::size_t order_;
    std::vector<std::uint32_t> table_; // row-major, table_[a*order_+b] = a*b
};

/**
 * @brief Handle over the four supported carrier kinds.
 *
 * finite-table: the rows of a validated Cayley table.
 * nat-add:      (N, +), 0 included, numeric enumeration.
 * nat-mul:      (N, *), 0 included, numeric enumeration.
 * free-word:    nonempty words over a fixed alphabet, shortlex enumeration,
 *               concatenation product. The empty word is excluded, so there
 *               is no identity.
 */
class SemigroupHandle {
public:
    enum class Kind { FiniteTable, NatAdd, NatMul, FreeWord };

    static SemigroupHandle finite_table(FiniteSemigroup t) {
        t.require_associative();
        SemigroupHandle h;
        h.kind_ = Kind::FiniteTable;
        h.finite_ = std::move(t);
        return h;
    }
    static SemigroupHandle nat_add() {
        SemigroupHandle h;
        h.kind_ = Kind::NatAdd;
        return h;
    }
    static SemigroupHandle nat_mul() {
        SemigroupHandle h;
        h.kind_ = Kind::NatMul;
        return h;
    }
    static SemigroupHandle free_word(std::string alphabet) {
        if (alphabet.empty()) throw std::invalid_argument("free-word alphabet must be nonempty");
        std::set<char> uniq(alphabet.begin(), alphabet.end());
        if (uniq.size() != alphabet.size()) throw std::invalid_argument("free-word alphabet has repeated letters");
        SemigroupHandle h;
        h.kind_ = Kind::FreeWord;
        h.alphabet_ = std::move(alphabet);
        return h;
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::FiniteTable; }
    /// Carrier size for finite tables, nullopt for the infinite kinds.
    std::optional<std::size_t> order() const {
        if (is_finite()) return finite_->order();
        return std::nullopt;
    }
    const FiniteSemigroup& table() const {
        if (!finite_) throw std::logic_error("semigroup has no Cayley table");
        return *finite_;
    }
    const std::string& alphabet() const {
        if (kind_ != Kind::FreeWord) throw std::logic_error("semigroup has no alphabet");
        return alphabet_;
    }

    /// The i-th carrier element in the canonical enumeration.
    Element nth_element(std::uint64_t i) const {
        if (is_finite() && i >= finite_->order()) throw std::out_of_range("element index exceeds carrier order");
        return Element{i};
    }

    bool contains(Element a) const { return !is_finite() || a.index < finite_->order(); }

    Element product(Element a, Element b) const {
        switch (kind_) {
            case Kind::FiniteTable:
                return Element{finite_->product(check32(a), check32(b))};
            case Kind::NatAdd:
                return Element{detail::checked_add(a.index, b.index)};
            case Kind::NatMul:
                return Element{detail::checked_mul(a.index, b.index)};
            case Kind::FreeWord:
                return element_of_word(word_of(a) + word_of(b));
        }
        throw std::logic_error("unreachable semigroup kind");
    }

    std::string display(Element a) const {
        if (kind_ == Kind::FreeWord) return word_of(a);
        return std::to_string(a.index);
    }

    /// Shortlex decoding: index 0 is the first alphabet letter.
    std::string word_of(Element a) const {
        if (kind_ != Kind::FreeWord) throw std::logic_error("word_of on a non-word semigroup");
        const std::uint64_t k = alphabet_.size();
        std::uint64_t start = 0, count = k, len = 1, rest = a.index;
        while (rest >= start + count) {
            start += count;
            count = detail::checked_mul(count, k);
            ++len;
        }
        std::uint64_t offset = rest - start;
        std::string w(static_cast<std::size_t>(len), alphabet_[0]);
        for (std::size_t j = w.size(); j-- > 0;) {
            w[j] = alphabet_[static_cast<std::size_t>(offset % k)];
            offset /= k;
        }
        return w;
    }

    Element element_of_word(const std::string& w) const {
        if (kind_ != Kind::FreeWord) throw std::logic_error("element_of_word on a non-word semigroup");
        if (w.empty()) throw std::invalid_argument("the empty word is not a carrier element");
        const std::uint64_t k = alphabet_.size();
        std::uint64_t start = 0, count = k;
        for (std::size_t l = 1; l < w.size(); ++l) {
            start = detail::checked_add(start, count);
            count = detail::checked_mul(count, k);
        }
        std::uint64_t offset = 0;
        for (char c : w) {
            auto pos = alphabet_.find(c);
            if (pos == std::string::npos) throw std::invalid_argument("word uses a letter outside the alphabet");
            offset = detail::checked_add(detail::checked_mul(offset, k), pos);
        }
        return Element{detail::checked_add(start, offset)};
    }

    /// True when the element enumerated first is a two-sided identity.
    /// This is what the skip-identity search flag keys on.
    bool first_element_is_identity() const {
        switch (kind_) {
            case Kind::FiniteTable: {
                auto e = finite_->two_sided_identity();
                return e.has_value() && *e == 0;
            }
            case Kind::NatAdd:
                return true; // 0 + x = x + 0 = x
            case Kind::NatMul:
                return false; // index 0 is the absorbing 0, not the identity 1
            case Kind::FreeWord:
                return false; // no empty word, hence no identity
        }
        return false;
    }

    friend bool operator==(const SemigroupHandle& a, const SemigroupHandle& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
            case Kind::FiniteTable: return *a.finite_ == *b.finite_;
            case Kind::FreeWord: return a.alphabet_ == b.alphabet_;
            default: return true;
        }
    }

private:
    std::uint32_t check32(Element a) const {
        if (a.index >= finite_->order()) throw std::out_of_range("element index exceeds carrier order");
        return static_cast<std::uint32_t>(a.index);
    }

    Kind kind_ = Kind::NatAdd;
    std::optional<FiniteSemigroup> finite_;
    std::string alphabet_;
};

/// Search knobs shared by every least-element scan in the library.
struct SearchOptions {
    /// Exclude the first carrier element from bases and witnesses when it is
    /// a two-sided identity (0 in nat-add). Off by default.
    bool skip_identity = false;
};

/// First candidate index for a carrier scan under the given options.
inline std::uint64_t scan_start(const SemigroupHandle& s, const SearchOptions& opts) {
    return (opts.skip_identity && s.first_element_is_identity()) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Homomorphisms onto finite targets.
// ---------------------------------------------------------------------------

/// n |-> n mod d, for nat-add and nat-mul sources. Requires d <= target order
/// so every class names a valid target element; whether the map respects the
/// product is what verify() checks.
struct ModRule {
    std::uint32_t d;
};
/// Extension of a letter assignment to all words, for free-word sources.
struct LetterImageRule {
    std::vector<std::uint32_t> images;
};
/// Explicit value table, for finite-table sources.
struct TableMapRule {
    std::vector<std::uint32_t> map;
};
using HomRule = std::variant<ModRule, LetterImageRule, TableMapRule>;

/**
 * @brief Map from a carrier onto a finite semigroup, given by a finitely
 *        described rule. verify() spot-checks the homomorphism property on an
 *        enumeration window; image() is exact for every rule kind.
 */
class Homomorphism {
public:
    Homomorphism(SemigroupHandle source, FiniteSemigroup target, HomRule rule)
        : source_(std::move(source)), target_(std::move(target)), rule_(std::move(rule)) {
        target_.require_associative();
        if (const auto* m = std::get_if<ModRule>(&rule_)) {
            if (source_.kind() != SemigroupHandle::Kind::NatAdd && source_.kind() != SemigroupHandle::Kind::NatMul)
                throw std::invalid_argument("mod rule requires a nat-add or nat-mul source");
            if (m->d == 0 || m->d > target_.order())
                throw std::invalid_argument("mod rule needs 1 <= d <= target order");
        } else if (const auto* l = std::get_if<LetterImageRule>(&rule_)) {
            if (source_.kind() != SemigroupHandle::Kind::FreeWord)
                throw std::invalid_argument("letter-image rule requires a free-word source");
            if (l->images.size() != source_.alphabet().size())
                throw std::invalid_argument("letter-image rule must assign every alphabet letter");
            for (auto v : l->images)
                if (v >= target_.order()) throw std::invalid_argument("letter image out of target range");
        } else if (const auto* t = std::get_if<TableMapRule>(&rule_)) {
            if (!source_.is_finite())
                throw std::invalid_argument("table-map rule requires a finite-table source");
            if (t->map.size() != *source_.order())
                throw std::invalid_argument("table-map rule must assign every source element");
            for (auto v : t->map)
                if (v >= target_.order()) throw std::invalid_argument("table-map image out of target range");
        }
    }

    const SemigroupHandle& source() const { return source_; }
    const FiniteSemigroup& target() const { return target_; }
    const HomRule& rule() const { return rule_; }

    std::uint32_t map_class(Element a) const {
        if (const auto* m = std::get_if<ModRule>(&rule_)) return static_cast<std::uint32_t>(a.index % m->d);
        if (const auto* l = std::get_if<LetterImageRule>(&rule_)) {
            const std::string w = source_.word_of(a);
            const std::string& alpha = source_.alphabet();
            std::optional<std::uint32_t> acc;
            for (char c : w) {
                std::uint32_t img = l->images[alpha.find(c)];
                acc = acc ? target_.product(*acc, img) : img;
            }
            return *acc;
        }
        const auto& t = std::get<TableMapRule>(rule_);
        if (a.index >= t.map.size()) throw std::out_of_range("element index exceeds carrier order");
        return t.map[static_cast<std::size_t>(a.index)];
    }

    /// Least (a, b) in lexicographic index order with h(ab) != h(a)h(b),
    /// scanning the first `window` elements of the enumeration.
    std::optional<std::pair<Element, Element>> first_violation(std::uint64_t window) const {
        std::uint64_t n = window;
        if (auto ord = source_.order()) n = std::min<std::uint64_t>(n, *ord);
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b) {
                Element ea{a}, eb{b};
                if (map_class(source_.product(ea, eb)) != target_.product(map_class(ea), map_class(eb)))
                    return std::make_pair(ea, eb);
            }
        return std::nullopt;
    }

    void require_homomorphism(std::uint64_t window = 64) const {
        if (auto v = first_violation(window))
            throw std::invalid_argument("map is not a homomorphism, first violation at (" +
                                        std::to_string(v->first.index) + "," + std::to_string(v->second.index) + ")");
    }

    /**
     * @brief The image subsemigroup h(M) as a sorted list of target classes.
     *
     * Exact for every rule: a mod rule is onto {0,...,d-1} because the carrier
     * elements 0..d-1 already realize every class; a letter-image rule
     * generates its image from the letter images; a table map covers the whole
     * finite source.
     */
    std::vector<std::uint32_t> image() const {
        std::set<std::uint32_t> img;
        if (const auto* m = std::get_if<ModRule>(&rule_)) {
            for (std::uint32_t c = 0; c < m->d; ++c) img.insert(c);
        } else if (const auto* l = std::get_if<LetterImageRule>(&rule_)) {
            img.insert(l->images.begin(), l->images.end());
            bool grew = true;
            while (grew) {
                grew = false;
                std::vector<std::uint32_t> cur(img.begin(), img.end());
                for (auto a : cur)
                    for (auto b : cur)
                        if (img.insert(target_.product(a, b)).second) grew = true;
            }
        } else {
            const auto& t = std::get<TableMapRule>(rule_);
            img.insert(t.map.begin(), t.map.end());
        }
        return {img.begin(), img.end()};
    }

    /// Least carrier element of the fiber over class t, scanning the
    /// enumeration up to scan_cap. Honors the skip-identity option.
    std::optional<Element> least_in_class(std::uint32_t t, const SearchOptions& opts,
                                          std::uint64_t scan_cap = 1u << 16) const {
        std::uint64_t n = scan_cap;
        if (auto ord = source_.order()) n = std::min<std::uint64_t>(n, *ord);
        for (std::uint64_t u = scan_start(source_, opts); u < n; ++u)
            if (map_class(Element{u}) == t) return Element{u};
        return std::nullopt;
    }

    friend bool operator==(const Homomorphism& a, const Homomorphism& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.rule_same(b);
    }

private:
    bool rule_same(const Homomorphism& o) const {
        if (rule_.index() != o.rule_.index()) return false;
        if (const auto* m = std::get_if<ModRule>(&rule_)) return m->d == std::get<ModRule>(o.rule_).d;
        if (const auto* l = std::get_if<LetterImageRule>(&rule_))
            return l->images == std::get<LetterImageRule>(o.rule_).images;
        return std::get<TableMapRule>(rule_).map == std::get<TableMapRule>(o.rule_).map;
    }

    SemigroupHandle source_;
    FiniteSemigroup target_;
    HomRule rule_;
};

} // namespace hindman
