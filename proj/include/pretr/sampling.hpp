#pragma once

#include <pretr/homology.hpp>

#include <random>
#include <vector>

namespace pretr {

/// Uniform-ish random element of the closed degree-d part of a hom space,
/// with small integer coefficients.
inline Morphism random_closed_element(const BaseCategory& cat, const NormalObject& x,
                                      const NormalObject& y, int degree, std::mt19937& rng) {
    HomComplex hc(cat, x, y);
    Matrix d = hc.differential_matrix(degree);
    Matrix m = d;
    std::vector<std::size_t> pivots = m.rref();
    std::vector<bool> is_pivot(d.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<Scalar> v(d.cols(), Scalar(0));
    for (std::size_t free = 0; free < d.cols(); ++free) {
        if (is_pivot[free]) continue;
        Scalar c = Scalar(static_cast<long long>(rng() % 5) - 2);
        if (c.is_zero()) continue;
        v[free] += c;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] -= c * m(r, free);
    }
    return hc.from_coordinates(degree, v);
}

/// Random bounded complex with at most `max_terms` terms over a finite
/// category: consecutive shifts, closed degree-0 connecting maps, and the
/// square-zero condition enforced by exact kernel sampling. Always
/// one-sided by construction.
inline NormalObject random_bounded_complex(const BaseCategory& cat, std::mt19937& rng,
                                           int max_terms = 3) {
    int terms = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
    int top_shift = static_cast<int>(rng() % 3) - 1;
    std::vector<Summand> summands;
    for (int k = 0; k < terms; ++k) {
        int obj = static_cast<int>(rng() % cat.object_count());
        summands.push_back(Summand{obj, top_shift - k});
    }
    NormalObject plain{summands, {}};
    Morphism q(cat, plain, plain, 1);
    Morphism prev = Morphism::zero(cat, plain, plain, 1);
    for (int k = 0; k + 1 < terms; ++k) {
        NormalObject from{{summands[static_cast<std::size_t>(k)]}, {}};
        NormalObject to{{summands[static_cast<std::size_t>(k) + 1]}, {}};
        // sample a closed connecting map; for the second and later maps,
        // resample until the composite with the previous map vanishes
        for (int attempt = 0; attempt < 32; ++attempt) {
            Morphism step = random_closed_element(cat, from, to, 1, rng);
            Morphism cand = q;
            for (const auto& [tk, tc] : step.terms())
                cand.add_term(EntryKey{tk.row + k + 1, tk.col + k, tk.basis}, tc);
            Morphism res = maurer_cartan_residual(cand);
            if (res.is_zero()) {
                q = cand;
                break;
            }
        }
        (void)prev;
    }
    if (!check_maurer_cartan(q).ok)
        throw std::logic_error("random_bounded_complex: sampler failed to satisfy the "
                               "Maurer-Cartan equation");
    return twist_object(q);
}

}  // namespace pretr
