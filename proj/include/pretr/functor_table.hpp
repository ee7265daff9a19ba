#pragma once

#include <pretr/completions.hpp>
#include <pretr/morphism.hpp>

#include <map>
#include <stdexcept>
#include <string>

namespace pretr {

/// A k-linear functor from a finite generator category into bounded
/// complexes over another category, given by tables: objects map to
/// complexes (possibly the zero object) and basis morphisms to closed
/// degree-0 morphisms of complexes. Respecting identities and composition
/// exactly is validated, not assumed.
class AdditiveFunctorTable {
public:
    AdditiveFunctorTable(const BaseCategory& source, const BaseCategory& target)
        : src_(&source), dst_(&target) {}

    const BaseCategory& source() const { return *src_; }
    const BaseCategory& target() const { return *dst_; }

    void set_object(const std::string& label, NormalObject image) {
        objects_[src_->object_index(label)] = std::move(image);
    }

    void set_morphism(int basis_id, Morphism value) {
        const BasisElem& b = src_->basis(basis_id);
        if (b.degree != 0)
            throw std::invalid_argument("AdditiveFunctorTable: source must sit in degree 0");
        if (!value.is_zero() && value.degree() != 0)
            throw std::invalid_argument("AdditiveFunctorTable: values must have degree 0");
        morphisms_[basis_id] = std::move(value);
    }

    const NormalObject& object_image(int index) const {
        auto it = objects_.find(index);
        if (it == objects_.end())
            throw std::invalid_argument("AdditiveFunctorTable: no image for object '" +
                                        src_->object_label(index) + "'");
        return it->second;
    }

    Morphism morphism_image(int basis_id) const {
        if (src_->is_identity(basis_id)) {
            const NormalObject& x = object_image(src_->basis(basis_id).src);
            return Morphism::identity(*dst_, x);
        }
        auto it = morphisms_.find(basis_id);
        if (it != morphisms_.end()) return it->second;
        // morphisms into or out of a deleted object vanish
        const BasisElem& b = src_->basis(basis_id);
        return Morphism::zero(*dst_, object_image(b.src), object_image(b.dst), 0);
    }

    /// Checks k-linear functoriality on the nose: closedness of all values
    /// and f(g) o f(h) = f(g o h) over every composable basis pair.
    void validate() const {
        for (std::size_t id = 0; id < src_->basis_count(); ++id) {
            Morphism v = morphism_image(static_cast<int>(id));
            if (!v.differential().is_zero())
                throw std::invalid_argument("AdditiveFunctorTable: image of '" +
                                            src_->basis(static_cast<int>(id)).label +
                                            "' is not closed");
        }
        for (std::size_t g = 0; g < src_->basis_count(); ++g)
            for (std::size_t h = 0; h < src_->basis_count(); ++h) {
                const BasisElem& bg = src_->basis(static_cast<int>(g));
                const BasisElem& bh = src_->basis(static_cast<int>(h));
                if (bg.src != bh.dst) continue;
                Morphism lhs =
                    compose(morphism_image(static_cast<int>(g)), morphism_image(static_cast<int>(h)));
                Morphism rhs = Morphism::zero(*dst_, object_image(bh.src), object_image(bg.dst), 0);
                for (const auto& [rid, c] :
                     src_->compose_basis(static_cast<int>(g), static_cast<int>(h)))
                    rhs = rhs + c * morphism_image(rid);
                if (lhs != rhs)
                    throw std::invalid_argument("AdditiveFunctorTable: composition of '" +
                                                bg.label + "' o '" + bh.label +
                                                "' is not respected");
            }
    }

    /// Extension to bounded complexes: apply the table summandwise and
    /// totalize. The generator values sit in degree 0, so the twist of the
    /// image is the block diagonal of the (shifted) image twists plus the
    /// mapped connecting entries, no extra sign.
    NormalObject apply_to_object(const NormalObject& x) const {
        std::vector<NormalObject> blocks;
        std::vector<int> offsets;
        int offset = 0;
        for (const Summand& s : x.summands) {
            NormalObject img = shift_object(object_image(s.object), s.shift);
            offsets.push_back(offset);
            offset += static_cast<int>(img.size());
            blocks.push_back(std::move(img));
        }
        NormalObject out = direct_sum(blocks);
        for (const auto& [k, c] : x.twist) {
            Morphism v = morphism_image(k.basis);
            for (const auto& [vk, vc] : v.terms())
                term_add(out.twist,
                         EntryKey{offsets[static_cast<std::size_t>(k.row)] + vk.row,
                                  offsets[static_cast<std::size_t>(k.col)] + vk.col, vk.basis},
                         c * vc);
        }
        Morphism q(*dst_, NormalObject{out.summands, {}}, NormalObject{out.summands, {}}, 1);
        for (const auto& [k, c] : out.twist) q.add_term(k, c);
        MaurerCartanCheck mc = check_maurer_cartan(q);
        if (!mc.ok)
            throw std::logic_error(
                "AdditiveFunctorTable: extension lost the Maurer-Cartan equation: " +
                mc.residual.to_string());
        return out;
    }

    /// Extension to morphisms of complexes, blockwise.
    Morphism apply_to_morphism(const Morphism& m) const {
        NormalObject src_img = apply_to_object(m.src());
        NormalObject dst_img = apply_to_object(m.dst());
        std::vector<int> src_off = block_offsets(m.src());
        std::vector<int> dst_off = block_offsets(m.dst());
        Morphism out(*dst_, src_img, dst_img, m.degree());
        for (const auto& [k, c] : m.terms()) {
            Morphism v = morphism_image(k.basis);
            for (const auto& [vk, vc] : v.terms())
                out.add_term(EntryKey{dst_off[static_cast<std::size_t>(k.row)] + vk.row,
                                      src_off[static_cast<std::size_t>(k.col)] + vk.col, vk.basis},
                             c * vc);
        }
        return out;
    }

private:
    const BaseCategory* src_;
    const BaseCategory* dst_;
    std::map<int, NormalObject> objects_;
    std::map<int, Morphism> morphisms_;

    std::vector<int> block_offsets(const NormalObject& x) const {
        std::vector<int> offsets;
        int offset = 0;
        for (const Summand& s : x.summands) {
            offsets.push_back(offset);
            offset += static_cast<int>(object_image(s.object).size());
        }
        return offsets;
    }
};

}  // namespace pretr
