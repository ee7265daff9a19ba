#pragma once

#include <pretr/graded.hpp>
#include <pretr/scalar.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pretr {

/// Sparse linear combination of interned basis elements.
using Combo = std::map<int, Scalar>;

inline void combo_add(Combo& acc, int id, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = acc.emplace(id, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) acc.erase(it);
    }
}

inline void combo_add(Combo& acc, const Combo& other, const Scalar& factor) {
    if (factor.is_zero()) return;
    for (const auto& [id, c] : other) combo_add(acc, id, factor * c);
}

/// One interned basis morphism of a finite dg category.
struct BasisElem {
    int src = 0;         // source object index
    int dst = 0;         // target object index
    int degree = 0;
    std::string label;
    int path_length = -1;  // arrow count when the category came from a quiver
};

/// A finite dg category given by explicit bases, structure constants for
/// composition, and a differential table. Instances are immutable once
/// built and shared by reference throughout the library.
class BaseCategory {
public:
    const std::string& name() const { return name_; }
    const Field& field() const { return field_; }

    std::size_t object_count() const { return objects_.size(); }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::string& object_label(int i) const { return objects_.at(i); }

    int object_index(const std::string& label) const {
        auto it = object_index_.find(label);
        if (it == object_index_.end())
            throw std::invalid_argument("BaseCategory: unknown object '" + label + "'");
        return it->second;
    }
    bool has_object(const std::string& label) const { return object_index_.count(label) != 0; }

    const BasisElem& basis(int id) const { return basis_.at(static_cast<std::size_t>(id)); }
    std::size_t basis_count() const { return basis_.size(); }

    /// Hom basis ids between two objects, keyed by degree.
    const std::map<int, std::vector<int>>& hom(int src, int dst) const {
        static const std::map<int, std::vector<int>> kEmpty;
        auto it = hom_.find({src, dst});
        return it == hom_.end() ? kEmpty : it->second;
    }

    int identity_id(int object) const { return identity_.at(static_cast<std::size_t>(object)); }

    bool is_identity(int id) const {
        const BasisElem& b = basis(id);
        return b.src == b.dst && identity_.at(static_cast<std::size_t>(b.src)) == id;
    }

    /// Structure constants of composition `after o before`; endpoints must match.
    const Combo& compose_basis(int after, int before) const {
        const BasisElem& g = basis(after);
        const BasisElem& f = basis(before);
        if (g.src != f.dst)
            throw std::invalid_argument("BaseCategory: endpoint mismatch in composition");
        static const Combo kZero;
        auto it = comp_.find({after, before});
        return it == comp_.end() ? kZero : it->second;
    }

    /// Differential of a basis element (degree +1 combination; empty = 0).
    const Combo& diff_basis(int id) const {
        static const Combo kZero;
        auto it = diff_.find(id);
        return it == diff_.end() ? kZero : it->second;
    }

    /// True when every positive-length path basis element is recorded, i.e.
    /// the category came from a quiver presentation.
    bool has_path_metadata() const { return path_metadata_; }

    /// Smallest and largest degrees carried by any basis element.
    std::pair<int, int> degree_support() const { return degree_support_; }

    /// Arrow factorization of a path basis element, outermost first.
    const std::vector<int>& path_arrows(int id) const {
        auto it = path_arrows_.find(id);
        if (it == path_arrows_.end())
            throw std::invalid_argument("BaseCategory: no path factorization for basis " +
                                        std::to_string(id));
        return it->second;
    }

    int max_path_length() const {
        int m = 0;
        for (const auto& b : basis_)
            if (b.path_length > m) m = b.path_length;
        return m;
    }

    /// Resolves a basis element by label with a fixed source object; used by
    /// the expression parser where endpoints are threaded left to right.
    int resolve_from_source(int src, const std::string& label) const {
        int found = -1;
        for (std::size_t id = 0; id < basis_.size(); ++id) {
            if (basis_[id].src == src && basis_[id].label == label) {
                if (found >= 0)
                    throw std::invalid_argument("BaseCategory: ambiguous label '" + label + "'");
                found = static_cast<int>(id);
            }
        }
        if (found < 0)
            throw std::invalid_argument("BaseCategory: no basis '" + label + "' out of '" +
                                        object_label(src) + "'");
        return found;
    }

    class Builder;

private:
    std::string name_;
    Field field_;
    std::vector<std::string> objects_;
    std::map<std::string, int> object_index_;
    std::vector<BasisElem> basis_;
    std::map<std::pair<int, int>, std::map<int, std::vector<int>>> hom_;
    std::vector<int> identity_;
    std::map<std::pair<int, int>, Combo> comp_;
    std::map<int, Combo> diff_;
    std::map<int, std::vector<int>> path_arrows_;
    bool path_metadata_ = false;
    std::pair<int, int> degree_support_{0, 0};
};

/// Mutating construction interface; `build()` validates unit laws and
/// degree bookkeeping before releasing the immutable category.
class BaseCategory::Builder {
public:
    Builder(std::string name, Field field) {
        cat_.name_ = std::move(name);
        cat_.field_ = field;
    }

    int add_object(const std::string& label) {
        if (cat_.object_index_.count(label))
            throw std::invalid_argument("Builder: duplicate object '" + label + "'");
        int idx = static_cast<int>(cat_.objects_.size());
        cat_.objects_.push_back(label);
        cat_.object_index_[label] = idx;
        return idx;
    }

    int add_basis(int src, int dst, int degree, const std::string& label, int path_length = -1) {
        auto hit = cat_.hom_.find({src, dst});
        if (hit != cat_.hom_.end()) {
            auto dit = hit->second.find(degree);
            if (dit != hit->second.end())
                for (int id : dit->second)
                    if (cat_.basis_[static_cast<std::size_t>(id)].label == label)
                        throw std::invalid_argument("Builder: duplicate basis label '" + label +
                                                    "'");
        }
        int id = static_cast<int>(cat_.basis_.size());
        cat_.basis_.push_back(BasisElem{src, dst, degree, label, path_length});
        cat_.hom_[{src, dst}][degree].push_back(id);
        return id;
    }

    void set_identity(int object, int basis_id) {
        if (cat_.identity_.size() <= static_cast<std::size_t>(object))
            cat_.identity_.resize(cat_.objects_.size(), -1);
        cat_.identity_[static_cast<std::size_t>(object)] = basis_id;
    }

    void set_composition(int after, int before, Combo value) {
        if (!value.empty()) cat_.comp_[{after, before}] = std::move(value);
    }

    void set_differential(int id, Combo value) {
        if (!value.empty()) cat_.diff_[id] = std::move(value);
    }

    void set_path_arrows(int id, std::vector<int> arrows) {
        cat_.path_arrows_[id] = std::move(arrows);
        cat_.path_metadata_ = true;
    }

    BaseCategory build() {
        if (cat_.identity_.size() != cat_.objects_.size())
            throw std::logic_error("Builder: identity missing for some object");
        for (std::size_t i = 0; i < cat_.identity_.size(); ++i)
            if (cat_.identity_[i] < 0)
                throw std::logic_error("Builder: identity missing for object " +
                                       cat_.objects_[i]);
        int lo = 0;
        int hi = 0;
        for (const auto& b : cat_.basis_) {
            lo = std::min(lo, b.degree);
            hi = std::max(hi, b.degree);
        }
        cat_.degree_support_ = {lo, hi};
        validate_tables();
        return std::move(cat_);
    }

private:
    BaseCategory cat_;

    void validate_tables() {
        for (const auto& [key, combo] : cat_.comp_) {
            const BasisElem& g = cat_.basis_[static_cast<std::size_t>(key.first)];
            const BasisElem& f = cat_.basis_[static_cast<std::size_t>(key.second)];
            if (g.src != f.dst) throw std::logic_error("Builder: composition table endpoints");
            for (const auto& [id, c] : combo) {
                (void)c;
                const BasisElem& r = cat_.basis_[static_cast<std::size_t>(id)];
                if (r.src != f.src || r.dst != g.dst || r.degree != f.degree + g.degree)
                    throw std::logic_error("Builder: composition value for '" + g.label + "' o '" +
                                           f.label + "' has wrong endpoints or degree");
            }
        }
        for (const auto& [id, combo] : cat_.diff_) {
            const BasisElem& b = cat_.basis_[static_cast<std::size_t>(id)];
            for (const auto& [rid, c] : combo) {
                (void)c;
                const BasisElem& r = cat_.basis_[static_cast<std::size_t>(rid)];
                if (r.src != b.src || r.dst != b.dst || r.degree != b.degree + 1)
                    throw std::logic_error("Builder: differential of '" + b.label +
                                           "' is not a degree +1 endomorphism of the hom space");
            }
        }
    }
};

}  // namespace pretr
