#pragma once

#include <pretr/category.hpp>
#include <pretr/object_expr.hpp>

#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pretr {

/// A homogeneous morphism between completed objects: a block matrix whose
/// (row, col) entry is a combination of base basis morphisms between the
/// col-th source summand and the row-th target summand. The translation
/// decoration of each entry is the pair of summand shifts; all signs of the
/// completed world are produced here, in `differential`.
class Morphism {
public:
    using ObjectRef = std::shared_ptr<const NormalObject>;

    Morphism() = default;

    Morphism(const BaseCategory& cat, NormalObject src, NormalObject dst, int degree)
        : cat_(&cat),
          src_(std::make_shared<const NormalObject>(std::move(src))),
          dst_(std::make_shared<const NormalObject>(std::move(dst))),
          degree_(degree) {}

    Morphism(const BaseCategory& cat, ObjectRef src, ObjectRef dst, int degree)
        : cat_(&cat), src_(std::move(src)), dst_(std::move(dst)), degree_(degree) {}

    static Morphism zero(const BaseCategory& cat, const NormalObject& src,
                         const NormalObject& dst, int degree) {
        return Morphism(cat, src, dst, degree);
    }

    static Morphism zero(const BaseCategory& cat, ObjectRef src, ObjectRef dst, int degree) {
        return Morphism(cat, std::move(src), std::move(dst), degree);
    }

    static Morphism identity(const BaseCategory& cat, const NormalObject& x) {
        Morphism m(cat, x, x, 0);
        m.src_ = m.dst_;  // endpoints coincide, share the storage
        for (std::size_t i = 0; i < x.summands.size(); ++i) {
            int id = cat.identity_id(x.summands[i].object);
            m.terms_.emplace(EntryKey{static_cast<int>(i), static_cast<int>(i), id}, Scalar(1));
        }
        return m;
    }

    /// Single basis entry with coefficient one; the canonical hom-basis
    /// vector of the completed hom space.
    static Morphism unit(const BaseCategory& cat, ObjectRef src, ObjectRef dst,
                         const EntryKey& key) {
        const BasisElem& b = cat.basis(key.basis);
        const Summand& s = src->summands.at(static_cast<std::size_t>(key.col));
        const Summand& d = dst->summands.at(static_cast<std::size_t>(key.row));
        if (b.src != s.object || b.dst != d.object)
            throw std::invalid_argument("Morphism: basis entry does not match summands");
        Morphism m(cat, std::move(src), std::move(dst), b.degree + s.shift - d.shift);
        m.terms_.emplace(key, Scalar(1));
        return m;
    }

    static Morphism unit(const BaseCategory& cat, const NormalObject& src,
                         const NormalObject& dst, const EntryKey& key) {
        return unit(cat, std::make_shared<const NormalObject>(src),
                    std::make_shared<const NormalObject>(dst), key);
    }

    const BaseCategory& category() const { return *cat_; }
    const NormalObject& src() const { return *src_; }
    const NormalObject& dst() const { return *dst_; }
    const ObjectRef& share_src() const { return src_; }
    const ObjectRef& share_dst() const { return dst_; }
    int degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_endo() const { return src_ == dst_ || *src_ == *dst_; }

    /// Total degree of an entry term, determined by the decorations.
    int term_degree(const EntryKey& k) const {
        return cat_->basis(k.basis).degree +
               src_->summands.at(static_cast<std::size_t>(k.col)).shift -
               dst_->summands.at(static_cast<std::size_t>(k.row)).shift;
    }

    void add_term(const EntryKey& k, const Scalar& c) {
        if (c.is_zero()) return;
        const BasisElem& b = cat_->basis(k.basis);
        const Summand& s = src_->summands.at(static_cast<std::size_t>(k.col));
        const Summand& d = dst_->summands.at(static_cast<std::size_t>(k.row));
        if (b.src != s.object || b.dst != d.object)
            throw std::invalid_argument("Morphism: entry endpoints do not match summands");
        if (term_degree(k) != degree_)
            throw std::invalid_argument("Morphism: inhomogeneous term (degree " +
                                        std::to_string(term_degree(k)) + " vs " +
                                        std::to_string(degree_) + ")");
        term_add(terms_, k, c);
    }

    friend Morphism operator+(const Morphism& a, const Morphism& b) {
        a.require_parallel(b, "sum");
        Morphism r = a.is_zero() ? b : a;
        if (!a.is_zero())
            for (const auto& [k, c] : b.terms_) term_add(r.terms_, k, c);
        return r;
    }

    friend Morphism operator-(const Morphism& a, const Morphism& b) {
        a.require_parallel(b, "difference");
        Morphism r = a.is_zero() ? Scalar(-1) * b : a;
        if (!a.is_zero())
            for (const auto& [k, c] : b.terms_) term_add(r.terms_, k, -c);
        return r;
    }

    friend Morphism operator*(const Scalar& s, Morphism m) {
        if (s.is_zero()) {
            m.terms_.clear();
            return m;
        }
        for (auto& [k, c] : m.terms_) c *= s;
        return m;
    }

    friend bool operator==(const Morphism& a, const Morphism& b) {
        bool same_ends = (a.src_ == b.src_ || *a.src_ == *b.src_) &&
                         (a.dst_ == b.dst_ || *a.dst_ == *b.dst_);
        if (a.is_zero() && b.is_zero()) return same_ends;
        return same_ends && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Morphism& a, const Morphism& b) { return !(a == b); }

    /// Matrix-product composition; decorations telescope with no sign.
    friend Morphism compose(const Morphism& after, const Morphism& before) {
        if (after.cat_ != before.cat_)
            throw std::invalid_argument("compose: morphisms of different categories");
        if (!(after.src_ == before.dst_ || *after.src_ == *before.dst_))
            throw std::invalid_argument("compose: endpoint mismatch");
        Morphism r(*after.cat_, before.src_, after.dst_, after.degree_ + before.degree_);
        for (const auto& [kg, cg] : after.terms_) {
            for (const auto& [kf, cf] : before.terms_) {
                if (kg.col != kf.row) continue;
                const Combo& combo = after.cat_->compose_basis(kg.basis, kf.basis);
                for (const auto& [id, c] : combo)
                    term_add(r.terms_, EntryKey{kg.row, kf.col, id}, cg * cf * c);
            }
        }
        return r;
    }

    /// Differential of the completed world: twist of the target composed in,
    /// the decorated entrywise base differential (sign (-1)^{target shift}),
    /// and the twist of the source composed in with sign (-1)^{|m|+1}.
    Morphism differential() const {
        Morphism r(*cat_, src_, dst_, degree_ + 1);
        // target twist o m
        for (const auto& [kq, cq] : dst_->twist) {
            for (const auto& [km, cm] : terms_) {
                if (kq.col != km.row) continue;
                const Combo& combo = cat_->compose_basis(kq.basis, km.basis);
                for (const auto& [id, c] : combo)
                    term_add(r.terms_, EntryKey{kq.row, km.col, id}, cq * cm * c);
            }
        }
        // entrywise base differential with the translation sign
        for (const auto& [km, cm] : terms_) {
            const Combo& dcombo = cat_->diff_basis(km.basis);
            if (dcombo.empty()) continue;
            int tshift = dst_->summands.at(static_cast<std::size_t>(km.row)).shift;
            Scalar sign = (tshift % 2 == 0) ? Scalar(1) : Scalar(-1);
            for (const auto& [id, c] : dcombo)
                term_add(r.terms_, EntryKey{km.row, km.col, id}, sign * cm * c);
        }
        // (-1)^{|m|+1} m o source twist
        Scalar sign = ((degree_ + 1) % 2 == 0) ? Scalar(1) : Scalar(-1);
        for (const auto& [km, cm] : terms_) {
            for (const auto& [kq, cq] : src_->twist) {
                if (km.col != kq.row) continue;
                const Combo& combo = cat_->compose_basis(km.basis, kq.basis);
                for (const auto& [id, c] : combo)
                    term_add(r.terms_, EntryKey{km.row, kq.col, id}, sign * cm * cq * c);
            }
        }
        return r;
    }

    bool is_closed() const { return differential().is_zero(); }

    /// The same matrix viewed between different (equal-shape) endpoints.
    /// Used for twist bracketing and for translations of whole complexes:
    /// entries and coefficients are untouched, only decorations move.
    Morphism rebracket(const NormalObject& new_src, const NormalObject& new_dst) const {
        return rebracket(std::make_shared<const NormalObject>(new_src),
                         std::make_shared<const NormalObject>(new_dst));
    }

    Morphism rebracket(ObjectRef new_src, ObjectRef new_dst) const {
        if (new_src->summands.size() != src_->summands.size() ||
            new_dst->summands.size() != dst_->summands.size())
            throw std::invalid_argument("rebracket: summand shape mismatch");
        for (std::size_t i = 0; i < src_->summands.size(); ++i)
            if (new_src->summands[i].object != src_->summands[i].object)
                throw std::invalid_argument("rebracket: source summand mismatch");
        for (std::size_t i = 0; i < dst_->summands.size(); ++i)
            if (new_dst->summands[i].object != dst_->summands[i].object)
                throw std::invalid_argument("rebracket: target summand mismatch");
        int offset = 0;
        if (!src_->summands.empty() || !dst_->summands.empty()) {
            // degree changes by the common decoration drift, validated below
            bool have = false;
            for (std::size_t i = 0; i < src_->summands.size() && !have; ++i) {
                offset = new_src->summands[i].shift - src_->summands[i].shift;
                have = true;
            }
            for (std::size_t i = 0; i < src_->summands.size(); ++i)
                if (new_src->summands[i].shift - src_->summands[i].shift != offset)
                    throw std::invalid_argument("rebracket: nonuniform source shift drift");
            int doffset = 0;
            bool dhave = false;
            for (std::size_t i = 0; i < dst_->summands.size() && !dhave; ++i) {
                doffset = new_dst->summands[i].shift - dst_->summands[i].shift;
                dhave = true;
            }
            for (std::size_t i = 0; i < dst_->summands.size(); ++i)
                if (new_dst->summands[i].shift - dst_->summands[i].shift != doffset)
                    throw std::invalid_argument("rebracket: nonuniform target shift drift");
            offset = (have ? offset : 0) - (dhave ? doffset : 0);
        }
        Morphism r(*cat_, std::move(new_src), std::move(new_dst), degree_ + offset);
        r.terms_ = terms_;
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << object_label(*cat_, *src_) << " -> " << object_label(*cat_, *dst_) << " (deg "
           << degree_ << "):";
        if (terms_.empty()) os << " 0";
        for (const auto& [k, c] : terms_) {
            os << " [" << k.row << "," << k.col << "] "
               << (c.is_one() ? "" : c.to_string() + "*") << "<"
               << dst_->summands.at(static_cast<std::size_t>(k.row)).shift << "|"
               << cat_->basis(k.basis).label << "|"
               << src_->summands.at(static_cast<std::size_t>(k.col)).shift << ">";
        }
        return os.str();
    }

private:
    const BaseCategory* cat_ = nullptr;
    ObjectRef src_;
    ObjectRef dst_;
    int degree_ = 0;
    TermMap terms_;

    void require_parallel(const Morphism& o, const char* what) const {
        bool same_ends = (src_ == o.src_ || *src_ == *o.src_) &&
                         (dst_ == o.dst_ || *dst_ == *o.dst_);
        if (cat_ != o.cat_ || !same_ends)
            throw std::invalid_argument(std::string("Morphism: endpoints differ in ") + what);
        if (!is_zero() && !o.is_zero() && degree_ != o.degree_)
            throw std::invalid_argument(std::string("Morphism: degrees differ in ") + what);
    }
};

inline void append_encoding(std::string& s, const Morphism& m) {
    append_encoding(s, m.src());
    s.push_back('>');
    append_encoding(s, m.dst());
    s.push_back('@');
    s += std::to_string(m.degree());
    for (const auto& [k, c] : m.terms()) {
        s.push_back(';');
        s += std::to_string(k.row);
        s.push_back(',');
        s += std::to_string(k.col);
        s.push_back(',');
        s += std::to_string(k.basis);
        s.push_back('=');
        c.append_key(s);
    }
}

inline std::string encode(const Morphism& m) {
    std::string s;
    s.reserve(64 + 24 * m.terms().size());
    append_encoding(s, m);
    return s;
}

}  // namespace pretr
