#pragma once

/**
 * @file predicate.hpp
 * @brief Decidable subsets of a carrier, optionally backed by a finite quotient.
 *
 * A SetPredicate is a total membership test. When the set is the preimage of a
 * class subset under a homomorphism onto a finite semigroup, the predicate also
 * carries that quotient form, which unlocks the exact partition-regularity
 * oracle and class-level search pruning.
 */

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semigroup.hpp"

namespace hindman {

/// X = h^{-1}({t : subset[t]}) for a homomorphism h onto a finite semigroup.
struct QuotientForm {
    std::shared_ptr<const Homomorphism> hom;
    std::vector<bool> subset; // indexed by target class

    bool contains_class(std::uint32_t t) const { return t < subset.size() && subset[t]; }
};

class SetPredicate {
public:
    SetPredicate() = default;

    /// Plain evaluator with no quotient structure.
    static SetPredicate from_evaluator(std::function<bool(Element)> eval) {
        SetPredicate p;
        p.eval_ = std::move(eval);
        return p;
    }

    /// Preimage predicate; the evaluator is derived from the quotient form.
    static SetPredicate from_quotient(std::shared_ptr<const Homomorphism> hom, std::vector<bool> subset) {
        if (!hom) throw std::invalid_argument("quotient predicate needs a homomorphism");
        if (subset.size() != hom->target().order())
            throw std::invalid_argument("quotient subset size does not match target order");
        SetPredicate p;
        QuotientForm q{std::move(hom), std::move(subset)};
        p.eval_ = [q](Element a) { return q.contains_class(q.hom->map_class(a)); };
        p.quotient_ = std::move(q);
        return p;
    }

    /// Evaluator plus a quotient form that is promised to agree with it.
    static SetPredicate from_evaluator_with_quotient(std::function<bool(Element)> eval, QuotientForm q) {
        SetPredicate p;
        p.eval_ = std::move(eval);
        p.quotient_ = std::move(q);
        return p;
    }

    bool contains(Element a) const {
        if (!eval_) throw std::logic_error("empty predicate");
        return eval_(a);
    }

    const std::optional<QuotientForm>& quotient() const { return quotient_; }

    /// Quotient form usable against the given carrier, if any.
    const QuotientForm* quotient_over(const SemigroupHandle& s) const {
        if (quotient_ && quotient_->hom->source() == s) return &*quotient_;
        return nullptr;
    }

    /// X && !Y. The quotient form survives when both sides share one homomorphism.
    static SetPredicate difference(const SetPredicate& x, const SetPredicate& y) {
        SetPredicate p;
        auto ex = x.eval_, ey = y.eval_;
        p.eval_ = [ex, ey](Element a) { return ex(a) && !ey(a); };
        if (x.quotient_ && y.quotient_ && *x.quotient_->hom == *y.quotient_->hom) {
            QuotientForm q;
            q.hom = x.quotient_->hom;
            q.subset.resize(x.quotient_->subset.size());
            for (std::size_t t = 0; t < q.subset.size(); ++t)
                q.subset[t] = x.quotient_->subset[t] && !y.quotient_->subset[t];
            p.quotient_ = std::move(q);
        }
        return p;
    }

    /// Spot-check that the quotient form and the evaluator agree on the first
    /// `window` carrier elements. Throws ContractViolation on a mismatch.
    void check_quotient_consistency(std::uint64_t window) const {
        if (!quotient_) return;
        const auto& src = quotient_->hom->source();
        std::uint64_t n = window;
        if (auto ord = src.order()) n = std::min<std::uint64_t>(n, *ord);
        for (std::uint64_t i = 0; i < n; ++i) {
            Element a{i};
            if (eval_(a) != quotient_->contains_class(quotient_->hom->map_class(a)))
                throw ContractViolation("quotient form disagrees with evaluator at index " + std::to_string(i));
        }
    }

private:
    std::function<bool(Element)> eval_;
    std::optional<QuotientForm> quotient_;
};

} // namespace hindman
