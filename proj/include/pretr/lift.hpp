#pragma once

#include <pretr/ainf.hpp>

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace pretr {

/// Lift along the completion by translations: objects A[t] map to the
/// translated image, and each component picks up the sign
/// (-1)^{sum of all translation indices along the chain}.
class TranslationLift : public AInfFunctor {
public:
    explicit TranslationLift(std::shared_ptr<const AInfFunctor> inner)
        : inner_(std::move(inner)) {}

    const BaseCategory& source_base() const override { return inner_->source_base(); }
    const BaseCategory& target_base() const override { return inner_->target_base(); }
    int support_bound() const override { return inner_->support_bound(); }

    NormalObject map_object(const NormalObject& x) const override {
        if (x.summands.size() != 1 || !x.twist.empty())
            throw std::invalid_argument("TranslationLift: expected a single shifted generator");
        NormalObject plain{{Summand{x.summands[0].object, 0}}, {}};
        return shift_object(inner_->image_of(plain), x.summands[0].shift);
    }

protected:
    Susp apply_units(const Chain& units) const override {
        long long index_sum = units.back().m.src().summands[0].shift;
        Chain stripped;
        stripped.reserve(units.size());
        for (const Susp& s : units) {
            index_sum += s.m.dst().summands[0].shift;
            NormalObject ps{{Summand{s.m.src().summands[0].object, 0}}, {}};
            NormalObject pd{{Summand{s.m.dst().summands[0].object, 0}}, {}};
            stripped.push_back(down(Morphism::unit(
                source_base(), ps, pd, EntryKey{0, 0, s.m.terms().begin()->first.basis})));
        }
        Susp v = inner_->apply(stripped);
        Morphism::ObjectRef new_src = image_ref(units.back().m.src());
        Morphism::ObjectRef new_dst = image_ref(units.front().m.dst());
        Scalar sign = (index_sum % 2 == 0) ? Scalar(1) : Scalar(-1);
        return Susp{sign * v.m.rebracket(std::move(new_src), std::move(new_dst))};
    }

private:
    std::shared_ptr<const AInfFunctor> inner_;
};

/// Lift along the completion by direct sums: objects map summandwise and
/// components act on matrix chains; on unit chains the intermediate
/// summand indices are forced, and the sum over index tuples is exactly
/// the multilinear expansion over matrix entries.
class SumLift : public AInfFunctor {
public:
    explicit SumLift(std::shared_ptr<const AInfFunctor> inner) : inner_(std::move(inner)) {}

    const BaseCategory& source_base() const override { return inner_->source_base(); }
    const BaseCategory& target_base() const override { return inner_->target_base(); }
    int support_bound() const override { return inner_->support_bound(); }

    NormalObject map_object(const NormalObject& x) const override {
        if (!x.twist.empty())
            throw std::invalid_argument("SumLift: expected an untwisted formal sum");
        std::vector<NormalObject> images;
        images.reserve(x.summands.size());
        for (const Summand& s : x.summands)
            images.push_back(inner_->image_of(NormalObject{{s}, {}}));
        return direct_sum(images);
    }

protected:
    Susp apply_units(const Chain& units) const override {
        // composability of the entry path through intermediate summands
        for (std::size_t k = 0; k + 1 < units.size(); ++k) {
            if (units[k].m.terms().begin()->first.col !=
                units[k + 1].m.terms().begin()->first.row)
                return zero_value(units);
        }
        Chain stripped;
        stripped.reserve(units.size());
        for (const Susp& s : units) {
            const EntryKey& key = s.m.terms().begin()->first;
            NormalObject ps{{s.m.src().summands[static_cast<std::size_t>(key.col)]}, {}};
            NormalObject pd{{s.m.dst().summands[static_cast<std::size_t>(key.row)]}, {}};
            stripped.push_back(down(Morphism::unit(source_base(), ps, pd,
                                                   EntryKey{0, 0, key.basis})));
        }
        Susp v = inner_->apply(stripped);
        const NormalObject& top = units.front().m.dst();
        const NormalObject& bottom = units.back().m.src();
        Morphism::ObjectRef image_src = image_ref(bottom);
        Morphism::ObjectRef image_dst = image_ref(top);
        int row0 = units.front().m.terms().begin()->first.row;
        int col0 = units.back().m.terms().begin()->first.col;
        int row_offset = block_offset(top, row0);
        int col_offset = block_offset(bottom, col0);
        Morphism out(target_base(), image_src, image_dst, v.m.degree());
        for (const auto& [key, c] : v.m.terms())
            out.add_term(EntryKey{key.row + row_offset, key.col + col_offset, key.basis}, c);
        return Susp{out};
    }

private:
    std::shared_ptr<const AInfFunctor> inner_;

    int block_offset(const NormalObject& whole, int upto) const {
        int offset = 0;
        for (int k = 0; k < upto; ++k)
            offset += static_cast<int>(
                inner_->image_of(NormalObject{{whole.summands[static_cast<std::size_t>(k)]}, {}})
                    .size());
        return offset;
    }
};

/// Image of a degree-1 Maurer-Cartan endomorphism under a functor: the sum
/// over all arities of the component values on repeated copies of the
/// twist. Requires a finiteness certificate: a bounded functor, a strictly
/// triangular twist, or an explicit bound. The result is checked to
/// satisfy the Maurer-Cartan equation and failure throws, since it can
/// only mean an upstream sign defect.
inline Morphism object_mc_image(const AInfFunctor& f, const Morphism& p, int explicit_bound = -1) {
    if (!p.is_endo()) throw std::invalid_argument("object_mc_image: twist must be an endomorphism");
    if (!p.is_zero() && p.degree() != 1)
        throw std::invalid_argument("object_mc_image: twist must have degree 1");
    {
        MaurerCartanCheck mc = check_maurer_cartan(p);
        if (!mc.ok)
            throw std::invalid_argument("object_mc_image: input fails the Maurer-Cartan equation");
    }
    NormalObject image = f.image_of(p.src());
    Morphism acc = Morphism::zero(f.target_base(), image, image, 1);
    if (p.is_zero()) return acc;

    int bound = f.support_bound();
    bool strict = true;
    for (const auto& [k, c] : p.terms()) {
        (void)c;
        if (k.row <= k.col) strict = false;
    }
    if (strict) {
        int nil = static_cast<int>(p.src().summands.size()) - 1;
        bound = bound < 0 ? nil : std::min(bound, nil);
    }
    if (explicit_bound >= 0) bound = bound < 0 ? explicit_bound : std::min(bound, explicit_bound);
    if (bound < 0)
        throw std::invalid_argument(
            "object_mc_image: no finiteness certificate for an unbounded functor and a "
            "non-triangular twist");

    Chain powers;
    for (int n = 1; n <= bound; ++n) {
        powers.push_back(down(p));
        acc = acc + up(f.apply(powers));
    }
    MaurerCartanCheck mc = check_maurer_cartan(acc);
    if (!mc.ok)
        throw std::logic_error("object_mc_image: image violates the Maurer-Cartan equation: " +
                               mc.residual.to_string());
    return acc;
}

/// Lift along the completion by twisted complexes: objects acquire the
/// Maurer-Cartan image of their twist, and components interleave copies of
/// the endpoint twists between the arguments in all bounded ways.
class TwistLift : public AInfFunctor {
public:
    TwistLift(std::shared_ptr<const AInfFunctor> inner, int explicit_bound = -1)
        : inner_(std::move(inner)), explicit_bound_(explicit_bound) {}

    const BaseCategory& source_base() const override { return inner_->source_base(); }
    const BaseCategory& target_base() const override { return inner_->target_base(); }
    int support_bound() const override { return inner_->support_bound(); }

    NormalObject map_object(const NormalObject& x) const override { return compute_object(x); }

    Susp apply(const Chain& chain) const override {
        if (chain.empty()) throw std::invalid_argument("TwistLift: empty chain");
        if (!chain_composable(chain))
            throw std::invalid_argument("TwistLift: chain is not composable");
        int bound = support_bound();
        if (bound >= 0 && static_cast<int>(chain.size()) > bound) return zero_value(chain);
        // sub-chains repeat heavily across relation sweeps; the number of
        // distinct keys is bounded by the distinct contractions, not by
        // the number of enumerated chains
        std::string key = encode(chain);
        {
            std::lock_guard<std::mutex> lock(eval_mutex_);
            auto it = eval_cache_.find(key);
            if (it != eval_cache_.end()) return it->second;
        }
        Susp value = evaluate(chain);
        std::lock_guard<std::mutex> lock(eval_mutex_);
        return eval_cache_.emplace(std::move(key), std::move(value)).first->second;
    }

protected:
    Susp apply_units(const Chain&) const override {
        throw std::logic_error("TwistLift: evaluation does not go through unit chains");
    }

private:
    struct TwistData {
        Morphism p;     // degree-1 endomorphism of the untwisted object
        int max_power;  // insertion bound for this endpoint
    };

    std::shared_ptr<const AInfFunctor> inner_;
    int explicit_bound_;
    mutable std::map<std::string, Susp> eval_cache_;
    mutable std::map<const NormalObject*,
                     std::pair<Morphism::ObjectRef, std::shared_ptr<const TwistData>>>
        twist_cache_;
    mutable std::mutex eval_mutex_;

    NormalObject compute_object(const NormalObject& x) const {
        NormalObject plain{x.summands, {}};
        if (x.twist.empty()) return inner_->image_of(plain);
        Morphism p(source_base(), plain, plain, 1);
        for (const auto& [k, c] : x.twist) p.add_term(k, c);
        Morphism q = object_mc_image(*inner_, p, explicit_bound_);
        NormalObject image = q.src();
        for (const auto& [k, c] : q.terms()) term_add(image.twist, k, c);
        return image;
    }

    std::shared_ptr<const TwistData> endpoint_twist_cached(const Morphism::ObjectRef& x) const {
        {
            std::lock_guard<std::mutex> lock(eval_mutex_);
            auto it = twist_cache_.find(x.get());
            if (it != twist_cache_.end()) return it->second.second;
        }
        auto value = std::make_shared<const TwistData>(endpoint_twist(*x));
        std::lock_guard<std::mutex> lock(eval_mutex_);
        twist_cache_.emplace(x.get(), std::make_pair(x, value));
        return value;
    }

    TwistData endpoint_twist(const NormalObject& x) const {
        NormalObject plain{x.summands, {}};
        Morphism p(source_base(), plain, plain, 1);
        for (const auto& [k, c] : x.twist) p.add_term(k, c);
        int bound = -1;
        if (p.is_zero()) {
            bound = 0;
        } else {
            bool strict = true;
            for (const auto& [k, c] : x.twist) {
                (void)c;
                if (k.row <= k.col) strict = false;
            }
            if (strict) bound = static_cast<int>(x.summands.size()) - 1;
            if (inner_->support_bound() >= 0)
                bound = bound < 0 ? inner_->support_bound()
                                  : std::min(bound, inner_->support_bound());
            if (explicit_bound_ >= 0)
                bound = bound < 0 ? explicit_bound_ : std::min(bound, explicit_bound_);
            if (bound < 0)
                throw std::invalid_argument(
                    "TwistLift: no finiteness certificate for endpoint twist");
        }
        return TwistData{p, bound};
    }

    Susp evaluate(const Chain& chain) const {
        const std::size_t n = chain.size();
        // endpoint objects bottom-up: levels 1..n+1
        std::vector<Morphism::ObjectRef> levels;
        levels.push_back(chain.back().m.share_src());
        for (std::size_t k = n; k-- > 0;) levels.push_back(chain[k].m.share_dst());
        std::vector<std::shared_ptr<const TwistData>> twists;
        twists.reserve(levels.size());
        for (const Morphism::ObjectRef& x : levels) twists.push_back(endpoint_twist_cached(x));

        // arguments rebracketed to the untwisted endpoints
        std::vector<Susp> plain_args;
        plain_args.reserve(n);
        for (const Susp& s : chain) {
            NormalObject ps{s.m.src().summands, {}};
            NormalObject pd{s.m.dst().summands, {}};
            plain_args.push_back(Susp{s.m.rebracket(ps, pd)});
        }

        Morphism::ObjectRef out_src = image_ref(chain.back().m.share_src());
        Morphism::ObjectRef out_dst = image_ref(chain.front().m.share_dst());
        int sdeg_total = 0;
        for (const Susp& s : chain) sdeg_total += s.sdeg();
        Morphism acc = Morphism::zero(target_base(), out_src, out_dst, sdeg_total + 1);

        int global_bound = inner_->support_bound();
        std::vector<int> js(levels.size(), 0);
        // backtracking over insertion tuples, bounded per endpoint and by
        // the inner support bound on the total arity
        std::function<void(std::size_t, int)> recurse = [&](std::size_t pos, int total) {
            if (global_bound >= 0 && static_cast<int>(n) + total > global_bound) return;
            if (pos == levels.size()) {
                Chain interleaved;
                // leftmost first: top twist copies, then argument n, ...
                for (std::size_t lvl = levels.size(); lvl-- > 0;) {
                    for (int rep = 0; rep < js[lvl]; ++rep)
                        interleaved.push_back(down(twists[lvl]->p));
                    if (lvl > 0) interleaved.push_back(plain_args[n - lvl]);
                }
                Susp v = inner_->apply(interleaved);
                Morphism bracketed = v.m.rebracket(out_src, out_dst);
                acc = acc + bracketed;
                return;
            }
            for (int j = 0; j <= twists[pos]->max_power; ++j) {
                if (global_bound >= 0 && static_cast<int>(n) + total + j > global_bound) break;
                js[pos] = j;
                recurse(pos + 1, total + j);
            }
            js[pos] = 0;
        };
        recurse(0, 0);
        return Susp{acc};
    }
};

/// The composite lift to the hull: translations, then sums, then twists.
/// Maps one-sided twisted complexes to one-sided twisted complexes and
/// restricts to the underlying functor on embedded generators.
class HullLift : public AInfFunctor {
public:
    explicit HullLift(std::shared_ptr<const AInfFunctor> base, int explicit_bound = -1)
        : base_(base),
          translations_(std::make_shared<TranslationLift>(base)),
          sums_(std::make_shared<SumLift>(translations_)),
          twists_(std::make_shared<TwistLift>(sums_, explicit_bound)) {}

    const BaseCategory& source_base() const override { return base_->source_base(); }
    const BaseCategory& target_base() const override { return base_->target_base(); }
    int support_bound() const override { return twists_->support_bound(); }

    const AInfFunctor& base() const { return *base_; }
    const AInfFunctor& translation_stage() const { return *translations_; }
    const AInfFunctor& sum_stage() const { return *sums_; }
    const AInfFunctor& twist_stage() const { return *twists_; }

    NormalObject map_object(const NormalObject& x) const override {
        if (!is_one_sided(x))
            throw std::invalid_argument("HullLift: source object is not one-sided");
        NormalObject image = twists_->image_of(x);
        if (!is_one_sided(image))
            throw std::logic_error("HullLift: image of a one-sided complex lost one-sidedness");
        return image;
    }

    Susp apply(const Chain& chain) const override { return twists_->apply(chain); }

protected:
    Susp apply_units(const Chain&) const override {
        throw std::logic_error("HullLift: evaluation does not go through unit chains");
    }

private:
    std::shared_ptr<const AInfFunctor> base_;
    std::shared_ptr<TranslationLift> translations_;
    std::shared_ptr<SumLift> sums_;
    std::shared_ptr<TwistLift> twists_;
};

inline std::shared_ptr<HullLift> lift_to_hull(std::shared_ptr<const AInfFunctor> base,
                                              int explicit_bound = -1) {
    return std::make_shared<HullLift>(std::move(base), explicit_bound);
}

}  // namespace pretr
