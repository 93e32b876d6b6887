#pragma once

/**
 * @file ip.hpp
 * @brief Finite-products sets and partition-regularity search engines.
 *
 * FP(u_1, ..., u_k) is the set of all products u_{i_1} * ... * u_{i_m} over
 * nonempty index-increasing subsequences, multiplied in index order; nothing
 * here assumes commutativity. A set X is witnessed "ip at depth k" by a basis
 * whose FP set lies inside X.
 *
 * Three verdicts are possible and they are kept distinct everywhere:
 *   ip(witness)   - a concrete basis was found and re-checked;
 *   not-ip-exact  - a finite quotient certifies no infinite basis exists;
 *   exhausted     - a bounded search ran out of room, which decides nothing.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "predicate.hpp"
#include "semigroup.hpp"

namespace hindman {

/// All products over nonempty index-increasing subsequences of the basis,
/// sorted ascending. |result| <= 2^k - 1.
inline std::vector<Element> fp_set(const SemigroupHandle& s, const std::vector<Element>& basis) {
    if (basis.size() > 30) throw std::invalid_argument("fp_set basis too long (max 30)");
    std::set<std::uint64_t> seen;
    std::vector<Element> fps; // insertion order, used to extend products
    for (Element u : basis) {
        if (!s.contains(u)) throw std::out_of_range("basis element outside the carrier");
        std::vector<Element> fresh;
        fresh.push_back(u);
        for (Element p : fps) fresh.push_back(s.product(p, u));
        for (Element e : fresh)
            if (seen.insert(e.index).second) fps.push_back(e);
    }
    std::vector<Element> out(fps.begin(), fps.end());
    std::sort(out.begin(), out.end());
    return out;
}

struct IpWitness {
    std::vector<Element> basis;
    std::vector<Element> fp; // fp_set of the basis, recomputed on return
};

struct Bounds {
    std::size_t depth = 0;
    std::uint64_t window = 0;
};

struct OracleVerdict {
    enum class Kind { Ip, NotIpExact, Exhausted };
    Kind kind = Kind::Exhausted;
    std::optional<IpWitness> witness; // present iff kind == Ip
    std::optional<Bounds> bounds;     // present for bounded searches

    static OracleVerdict ip(IpWitness w, std::optional<Bounds> b = std::nullopt) {
        return OracleVerdict{Kind::Ip, std::move(w), b};
    }
    static OracleVerdict not_ip_exact() { return OracleVerdict{Kind::NotIpExact, std::nullopt, std::nullopt}; }
    static OracleVerdict exhausted(Bounds b) { return OracleVerdict{Kind::Exhausted, std::nullopt, b}; }

    bool is_ip() const { return kind == Kind::Ip; }
    bool is_exhausted() const { return kind == Kind::Exhausted; }
    bool is_not_ip_exact() const { return kind == Kind::NotIpExact; }
};

namespace detail {

/// Exact class-level feasibility for quotient-backed windows: can the current
/// FP class set be extended by `rem` more elements without leaving the subset?
/// State space is 2^|F| masks, |F| <= 64 enforced by the caller.
class ClassSearch {
public:
    ClassSearch(const FiniteSemigroup& target, std::uint64_t subset_mask, std::vector<bool> realizable)
        : target_(target), subset_(subset_mask), realizable_(std::move(realizable)) {}

    /// (new products mask, extended fp mask) after appending one element of class c.
    std::pair<std::uint64_t, std::uint64_t> step(std::uint64_t mask, std::uint32_t c) const {
        std::uint64_t fresh = 1ull << c;
        for (std::uint32_t p = 0; p < target_.order(); ++p)
            if (mask & (1ull << p)) fresh |= 1ull << target_.product(p, c);
        return {fresh, mask | fresh};
    }

    bool viable(std::uint64_t mask, std::size_t rem) const {
        if (rem == 0) return true;
        auto key = std::make_pair(mask, rem);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool ok = false;
        for (std::uint32_t c = 0; c < target_.order() && !ok; ++c) {
            if (!realizable_[c]) continue;
            auto [fresh, next] = step(mask, c);
            if ((fresh & ~subset_) == 0) ok = viable(next, rem - 1);
        }
        memo_[key] = ok;
        return ok;
    }

    std::uint64_t subset_mask() const { return subset_; }

private:
    const FiniteSemigroup& target_;
    std::uint64_t subset_;
    std::vector<bool> realizable_;
    mutable std::map<std::pair<std::uint64_t, std::size_t>, bool> memo_;
};

inline std::uint64_t window_cap(const SemigroupHandle& s, std::uint64_t window) {
    if (auto ord = s.order()) return std::min<std::uint64_t>(window, *ord);
    return window;
}

/// Generic depth-first basis search. Candidates are tried in enumeration
/// order, so the first complete basis is the lexicographically least one.
struct DfsSearch {
    const SemigroupHandle& s;
    const SetPredicate& x;
    std::size_t depth;
    std::uint64_t window;
    std::uint64_t start;
    std::size_t min_distinct_fp = 0; // 0 = no constraint
    bool distinct_entries = false;
    const ClassSearch* classes = nullptr;          // optional exact prune
    const Homomorphism* hom = nullptr;             // set together with classes

    std::vector<Element> basis;
    std::vector<Element> fps; // FP of the current prefix, insertion order
    std::set<std::uint64_t> fp_seen;
    std::set<std::uint64_t> used;

    bool run(std::uint64_t class_mask) {
        if (basis.size() == depth) return min_distinct_fp == 0 || fp_seen.size() >= min_distinct_fp;
        const std::size_t rem = depth - basis.size();
        if (min_distinct_fp > 0) {
            // |FP| at most doubles-plus-one per appended element.
            std::uint64_t cap = fp_seen.size() + 1;
            for (std::size_t i = 0; i < rem && cap <= min_distinct_fp; ++i) cap = cap * 2;
            if (cap - 1 < min_distinct_fp) return false;
        }
        for (std::uint64_t u = start; u < window; ++u) {
            if (distinct_entries && used.count(u)) continue;
            Element eu{u};
            if (!x.contains(eu)) continue;
            std::vector<Element> fresh;
            fresh.push_back(eu);
            bool ok = true;
            for (Element p : fps) {
                Element q = s.product(p, eu);
                if (!x.contains(q)) {
                    ok = false;
                    break;
                }
                fresh.push_back(q);
            }
            if (!ok) continue;
            std::uint64_t next_mask = class_mask;
            if (classes) {
                auto [freshm, nextm] = classes->step(class_mask, hom->map_class(eu));
                if ((freshm & ~classes->subset_mask()) != 0) continue; // mirrors the element check
                if (!classes->viable(nextm, rem - 1)) continue;
                next_mask = nextm;
            }
            std::vector<Element> added;
            for (Element e : fresh)
                if (fp_seen.insert(e.index).second) {
                    fps.push_back(e);
                    added.push_back(e);
                }
            basis.push_back(eu);
            if (distinct_entries) used.insert(u);
            if (run(next_mask)) return true;
            basis.pop_back();
            if (distinct_entries) used.erase(u);
            for (Element e : added) fp_seen.erase(e.index);
            fps.resize(fps.size() - added.size());
        }
        return false;
    }
};

inline OracleVerdict bounded_search(const SemigroupHandle& s, const SetPredicate& x, std::size_t depth,
                                    std::uint64_t window, const SearchOptions& opts, std::size_t min_distinct_fp,
                                    bool distinct_entries) {
    if (depth == 0) throw std::invalid_argument("search depth must be >= 1");
    const std::uint64_t n = window_cap(s, window);
    const std::uint64_t start = scan_start(s, opts);
    const Bounds bounds{depth, window};

    std::optional<ClassSearch> cls;
    const Homomorphism* hom = nullptr;
    if (const QuotientForm* q = x.quotient_over(s); q && q->hom->target().order() <= 64) {
        hom = q->hom.get();
        std::uint64_t subset_mask = 0;
        for (std::size_t t = 0; t < q->subset.size(); ++t)
            if (q->subset[t]) subset_mask |= 1ull << t;
        std::vector<bool> realizable(q->hom->target().order(), false);
        for (std::uint64_t u = start; u < n; ++u) realizable[hom->map_class(Element{u})] = true;
        cls.emplace(hom->target(), subset_mask, std::move(realizable));
        // Pure existence question: settle it at class level before any DFS.
        if (min_distinct_fp == 0 && !distinct_entries && !cls->viable(0, depth))
            return OracleVerdict::exhausted(bounds);
    }

    DfsSearch dfs{s, x, depth, n, start, min_distinct_fp, distinct_entries,
                  cls ? &*cls : nullptr, hom, {}, {}, {}, {}};
    if (!dfs.run(0)) return OracleVerdict::exhausted(bounds);
    IpWitness w;
    w.basis = dfs.basis;
    w.fp = fp_set(s, w.basis); // recomputed, not taken from search state
    for (Element e : w.fp)
        if (!x.contains(e)) throw ContractViolation("search returned a basis whose FP set leaves X");
    return OracleVerdict::ip(std::move(w), bounds);
}

} // namespace detail

/// Least length-`depth` basis (repeats allowed) drawn from the first `window`
/// carrier elements with FP inside X, or exhausted.
inline OracleVerdict ip_witness_bounded(const SemigroupHandle& s, const SetPredicate& x, std::size_t depth,
                                        std::uint64_t window, const SearchOptions& opts = {}) {
    return detail::bounded_search(s, x, depth, window, opts, 0, false);
}

/// As ip_witness_bounded, additionally requiring at least `min_distinct`
/// distinct FP values.
inline OracleVerdict iip_witness_bounded(const SemigroupHandle& s, const SetPredicate& x, std::size_t depth,
                                         std::size_t min_distinct, std::uint64_t window,
                                         const SearchOptions& opts = {}) {
    if (min_distinct == 0) throw std::invalid_argument("min_distinct must be >= 1");
    return detail::bounded_search(s, x, depth, window, opts, min_distinct, false);
}

/// As ip_witness_bounded with pairwise distinct basis entries.
inline OracleVerdict dip_witness_bounded(const SemigroupHandle& s, const SetPredicate& x, std::size_t depth,
                                         std::uint64_t window, const SearchOptions& opts = {}) {
    return detail::bounded_search(s, x, depth, window, opts, 0, true);
}

/**
 * @brief Exact partition-regularity oracle for quotient-backed predicates.
 *
 * X = h^{-1}(S) is an IP set if and only if some idempotent of the image
 * subsemigroup h(M) lies in S. Sufficiency is witnessed by a constant basis
 * sitting in the fiber of such an idempotent; the returned witness is that
 * constant sequence at the requested depth.
 */
inline OracleVerdict is_ip_quotient(const SetPredicate& x, std::size_t witness_depth = 4,
                                    const SearchOptions& opts = {}, std::uint64_t fiber_scan_cap = 1u << 20) {
    if (!x.quotient()) throw std::invalid_argument("is_ip_quotient requires a quotient-backed predicate");
    const QuotientForm& q = *x.quotient();
    q.hom->require_homomorphism();
    std::optional<std::uint32_t> found;
    for (std::uint32_t c : q.hom->image()) {
        if (!q.contains_class(c)) continue;
        if (q.hom->target().product(c, c) != c) continue;
        found = c; // image() is sorted, so this is the least suitable class
        break;
    }
    if (!found) return OracleVerdict::not_ip_exact();
    auto v = q.hom->least_in_class(*found, opts, fiber_scan_cap);
    if (!v) throw std::runtime_error("fiber of idempotent class " + std::to_string(*found) + " is empty in the scan window");
    IpWitness w;
    w.basis.assign(witness_depth, *v);
    w.fp = fp_set(q.hom->source(), w.basis);
    for (Element e : w.fp)
        if (!x.contains(e)) throw ContractViolation("constant witness leaves X, quotient data inconsistent");
    return OracleVerdict::ip(std::move(w));
}

struct PartitionReport {
    OracleVerdict y_verdict;
    OracleVerdict complement_verdict;
    bool x_has_witness = false;       // X itself has a depth-k witness in the window
    bool violation_at_bounds = false; // X witnessed but both sides exhausted: bounds too small
};

/**
 * @brief Bounded two-sided check of partition regularity: search Y and X\Y at
 *        the same bounds. Requires Y subset of X on the window.
 *
 * A true violation is impossible for genuinely IP X; the flag only signals
 * that the bounds were too small to see either side.
 */
inline PartitionReport partition_check(const SemigroupHandle& s, const SetPredicate& x, const SetPredicate& y,
                                       std::size_t depth, std::uint64_t window, const SearchOptions& opts = {}) {
    const std::uint64_t n = detail::window_cap(s, window);
    for (std::uint64_t i = 0; i < n; ++i) {
        Element a{i};
        if (y.contains(a) && !x.contains(a))
            throw std::invalid_argument("Y is not a subset of X on the window, first counterexample at index " +
                                        std::to_string(i));
    }
    PartitionReport r{OracleVerdict::exhausted({depth, window}), OracleVerdict::exhausted({depth, window}), false,
                      false};
    r.y_verdict = ip_witness_bounded(s, y, depth, window, opts);
    r.complement_verdict = ip_witness_bounded(s, SetPredicate::difference(x, y), depth, window, opts);
    // Either side's witness lies in X already; search X directly only if both missed.
    r.x_has_witness = r.y_verdict.is_ip() || r.complement_verdict.is_ip() ||
                      ip_witness_bounded(s, x, depth, window, opts).is_ip();
    r.violation_at_bounds = r.x_has_witness && r.y_verdict.is_exhausted() && r.complement_verdict.is_exhausted();
    return r;
}

// ---------------------------------------------------------------------------
// Finite-sums windows over (N, +): the smallest interval [1, N] on which every
// r-coloring contains a monochromatic FS set of k distinct elements.
// ---------------------------------------------------------------------------

struct WindowResult {
    bool found = false;
    std::size_t least_n = 0;          // meaningful iff found
    std::vector<int> certificate;     // avoiding coloring of [1, least_n - 1]; certificate[i] colors i+1
    unsigned colors = 0;
    unsigned depth = 0;
    std::size_t n_max = 0;
};

namespace detail {

/// All FS patterns inside [1, n]: for each k-subset B with sum(B) <= n, the
/// sorted set of its nonempty subset sums. Grouped by the largest sum, which
/// is the moment the pattern becomes fully colored.
inline std::vector<std::vector<std::vector<std::uint32_t>>> fs_patterns_by_max(unsigned k, std::size_t n) {
    std::vector<std::vector<std::vector<std::uint32_t>>> by_max(n + 1);
    std::vector<std::uint32_t> base;
    auto rec = [&](auto&& self, std::uint32_t next, std::uint64_t sum) -> void {
        if (base.size() == k) {
            std::set<std::uint32_t> sums;
            for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
                std::uint32_t t = 0;
                for (unsigned i = 0; i < k; ++i)
                    if (mask & (1u << i)) t += base[i];
                sums.insert(t);
            }
            by_max[sum].emplace_back(sums.begin(), sums.end());
            return;
        }
        for (std::uint32_t b = next;; ++b) {
            // Least possible completion keeps b, b+1, ..., so prune on it.
            std::uint64_t rest = sum + b;
            std::uint64_t probe = b;
            for (std::size_t i = base.size() + 1; i < k; ++i) rest += ++probe;
            if (rest > n) break;
            base.push_back(b);
            self(self, b + 1, sum + b);
            base.pop_back();
        }
    };
    rec(rec, 1, 0);
    return by_max;
}

} // namespace detail

/// Independent certificate check: true iff the coloring of [1, len] contains
/// no monochromatic FS set of k distinct elements.
inline bool coloring_avoids_fs(unsigned k, const std::vector<int>& coloring) {
    const std::size_t len = coloring.size();
    auto by_max = detail::fs_patterns_by_max(k, len);
    for (std::size_t m = 1; m <= len; ++m)
        for (const auto& pat : by_max[m]) {
            int c = coloring[pat[0] - 1];
            bool mono = true;
            for (std::uint32_t e : pat)
                if (coloring[e - 1] != c) {
                    mono = false;
                    break;
                }
            if (mono) return false;
        }
    return true;
}

/**
 * @brief Least N <= n_max such that every r-coloring of [1, N] contains a
 *        monochromatic FS set of k distinct elements, plus an avoiding
 *        coloring of [1, N-1] as certificate.
 *
 * The search for an avoiding coloring is a backtracking scan with color
 * symmetry broken canonically (a color may be used only after all smaller
 * colors have appeared).
 */
inline WindowResult hindman_window(unsigned r, unsigned k, std::size_t n_max) {
    if (r == 0) throw std::invalid_argument("need at least one color");
    if (k < 2) throw std::invalid_argument("depth must be >= 2");
    if (k > 16) throw std::invalid_argument("depth too large for pattern enumeration (max 16)");
    WindowResult res;
    res.colors = r;
    res.depth = k;
    res.n_max = n_max;

    auto by_max = detail::fs_patterns_by_max(k, n_max);
    std::vector<int> prev; // avoiding coloring of the previous window
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<int> coloring(n, -1);
        auto dfs = [&](auto&& self, std::size_t pos, int used) -> bool {
            if (pos > n) return true;
            const int limit = std::min<int>(used + 1, static_cast<int>(r));
            for (int c = 0; c < limit; ++c) {
                coloring[pos - 1] = c;
                bool clash = false;
                for (const auto& pat : by_max[pos]) {
                    bool mono = true;
                    for (std::uint32_t e : pat)
                        if (coloring[e - 1] != c) {
                            mono = false;
                            break;
                        }
                    if (mono) {
                        clash = true;
                        break;
                    }
                }
                if (!clash && self(self, pos + 1, std::max(used, c + 1))) return true;
            }
            coloring[pos - 1] = -1;
            return false;
        };
        if (!dfs(dfs, 1, 0)) {
            res.found = true;
            res.least_n = n;
            res.certificate = std::move(prev);
            if (!coloring_avoids_fs(k, res.certificate))
                throw ContractViolation("certificate coloring fails independent re-check");
            return res;
        }
        prev = std::move(coloring);
    }
    return res; // not found within n_max
}

} // namespace hindman
