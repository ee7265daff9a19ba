#pragma once

#include <pretr/completions.hpp>
#include <pretr/morphism.hpp>

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pretr {

/// A morphism viewed one suspension down: |down(m)| = |m| - 1. All
/// structure maps and functor components act on these.
struct Susp {
    Morphism m;

    int sdeg() const { return m.degree() - 1; }
    bool is_zero() const { return m.is_zero(); }
};

inline Susp down(Morphism m) { return Susp{std::move(m)}; }
inline Morphism up(const Susp& s) { return s.m; }

inline Susp operator+(const Susp& a, const Susp& b) { return Susp{a.m + b.m}; }
inline Susp operator-(const Susp& a, const Susp& b) { return Susp{a.m - b.m}; }
inline Susp operator*(const Scalar& c, const Susp& a) { return Susp{c * a.m}; }
inline bool operator==(const Susp& a, const Susp& b) { return a.m == b.m; }
inline bool operator!=(const Susp& a, const Susp& b) { return !(a == b); }

/// First structure map of the suspended world: b1(down a) = -down(d a).
inline Susp b1(const Susp& a) { return Susp{Scalar(-1) * a.m.differential()}; }

/// Second structure map: b2(down a, down b) = (-1)^{|a|} down(a o b).
inline Susp b2(const Susp& a, const Susp& b) {
    Scalar sign = (a.m.degree() % 2 == 0) ? Scalar(1) : Scalar(-1);
    return Susp{sign * compose(a.m, b.m)};
}

/// Composable chain of suspended morphisms, leftmost (last applied) first:
/// chain[0] acts last, chain[n-1] first.
using Chain = std::vector<Susp>;

inline bool chain_composable(const Chain& chain) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (!(chain[i].m.src() == chain[i + 1].m.dst())) return false;
    return !chain.empty();
}

/// True when some link is a scalar multiple of an identity; such chains
/// are skipped by exhaustive relation suites.
inline bool is_degenerate_chain(const Chain& chain) {
    for (const Susp& s : chain) {
        if (s.is_zero()) return true;
        if (!(s.m.src() == s.m.dst()) || s.m.degree() != 0) continue;
        Morphism id = Morphism::identity(s.m.category(), s.m.src());
        if (id.is_zero()) return true;  // endomorphism of the zero object
        const Scalar& c = s.m.terms().begin()->second;
        if (s.m == c * id) return true;
    }
    return false;
}

inline std::vector<int> suspended_degrees(const Chain& chain) {
    std::vector<int> out;
    out.reserve(chain.size());
    for (const Susp& s : chain) out.push_back(s.sdeg());
    return out;
}

inline std::string encode(const Chain& chain) {
    std::string s;
    s.reserve(chain.size() * 128);
    for (const Susp& x : chain) {
        append_encoding(s, x.m);
        s.push_back('!');
    }
    return s;
}

// ---------------------------------------------------------------------------
// Functors
// ---------------------------------------------------------------------------

/// A functor of the suspended world with strict units: an object map plus
/// one degree-0 multilinear component per arity. Components receive
/// composable chains (leftmost first) and return the suspended value.
/// Implementations define `apply_units` on chains of single-term unit
/// morphisms; the multilinear extension and memoization live here.
class AInfFunctor {
public:
    virtual ~AInfFunctor() = default;

    virtual const BaseCategory& source_base() const = 0;
    virtual const BaseCategory& target_base() const = 0;

    virtual NormalObject map_object(const NormalObject& x) const = 0;

    /// Cached object image; evaluation paths go through here so image
    /// complexes are assembled once per object and shared thereafter.
    Morphism::ObjectRef image_ref(const NormalObject& x) const {
        std::string key = encode(x);
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            auto it = object_memo_.find(key);
            if (it != object_memo_.end()) return it->second;
        }
        auto value = std::make_shared<const NormalObject>(map_object(x));
        std::lock_guard<std::mutex> lock(memo_mutex_);
        return object_memo_.emplace(std::move(key), std::move(value)).first->second;
    }

    /// Pointer-first variant: shared sources pin their images, so repeated
    /// evaluations against the same endpoints skip the value encoding.
    Morphism::ObjectRef image_ref(const Morphism::ObjectRef& x) const {
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            auto it = image_by_ptr_.find(x.get());
            if (it != image_by_ptr_.end()) return it->second.second;
        }
        Morphism::ObjectRef image = image_ref(*x);
        std::lock_guard<std::mutex> lock(memo_mutex_);
        image_by_ptr_.emplace(x.get(), std::make_pair(x, image));
        return image;
    }

    const NormalObject& image_of(const NormalObject& x) const { return *image_ref(x); }

    /// Largest n with a possibly-nonzero component; -1 when unbounded.
    virtual int support_bound() const { return -1; }

    /// Multilinear evaluation on a composable chain.
    virtual Susp apply(const Chain& chain) const {
        if (chain.empty()) throw std::invalid_argument("AInfFunctor: empty chain");
        if (!chain_composable(chain))
            throw std::invalid_argument("AInfFunctor: chain is not composable");
        Susp zero = zero_value(chain);
        int bound = support_bound();
        if (bound >= 0 && static_cast<int>(chain.size()) > bound) return zero;
        Susp acc = zero;
        Chain units;
        units.reserve(chain.size());
        expand(chain, 0, units, Scalar(1), acc);
        return acc;
    }

protected:
    /// Value on a chain of unit morphisms (single basis entry each).
    virtual Susp apply_units(const Chain& units) const = 0;

    Susp zero_value(const Chain& chain) const {
        int sum = 0;
        for (const Susp& s : chain) sum += s.sdeg();
        return Susp{Morphism::zero(target_base(), image_ref(chain.back().m.share_src()),
                                   image_ref(chain.front().m.share_dst()), sum + 1)};
    }

private:
    // unit-chain memo keyed by interned endpoint identities and entry data;
    // interning is by object pointer, with the shared handle pinned so an
    // address can never be recycled for a different value
    mutable std::map<std::vector<int>, Susp> memo_;
    mutable std::map<std::string, Morphism::ObjectRef> object_memo_;
    mutable std::map<const NormalObject*, std::pair<Morphism::ObjectRef, Morphism::ObjectRef>>
        image_by_ptr_;
    mutable std::map<const NormalObject*, std::pair<int, Morphism::ObjectRef>> interned_;
    mutable std::mutex memo_mutex_;

    int intern_object(const Morphism::ObjectRef& x) const {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = interned_.find(x.get());
        if (it != interned_.end()) return it->second.first;
        int id = static_cast<int>(interned_.size());
        interned_.emplace(x.get(), std::make_pair(id, x));
        return id;
    }

    void expand(const Chain& chain, std::size_t pos, Chain& units, const Scalar& coeff,
                Susp& acc) const {
        if (pos == chain.size()) {
            acc = acc + coeff * memoized_units(units);
            return;
        }
        const Morphism& m = chain[pos].m;
        for (const auto& [key, c] : m.terms()) {
            units.push_back(Susp{Morphism::unit(m.category(), m.share_src(), m.share_dst(), key)});
            expand(chain, pos + 1, units, coeff * c, acc);
            units.pop_back();
        }
    }

    Susp memoized_units(const Chain& units) const {
        std::vector<int> key;
        key.reserve(units.size() * 5);
        for (const Susp& u : units) {
            const EntryKey& e = u.m.terms().begin()->first;
            key.push_back(intern_object(u.m.share_src()));
            key.push_back(intern_object(u.m.share_dst()));
            key.push_back(e.row);
            key.push_back(e.col);
            key.push_back(e.basis);
        }
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        Susp value = apply_units(units);
        std::lock_guard<std::mutex> lock(memo_mutex_);
        return memo_.emplace(std::move(key), std::move(value)).first->second;
    }
};

/// Functor data given by finite tables on a seed category: an object map,
/// first-order values on hom basis elements, and optional second-order
/// values on composable basis pairs. Strict units are built in.
class TableFunctor : public AInfFunctor {
public:
    TableFunctor(const BaseCategory& src, const BaseCategory& dst) : src_(&src), dst_(&dst) {}

    void set_object(const std::string& label, NormalObject image) {
        objects_[src_->object_index(label)] = std::move(image);
    }

    /// f1 on a basis element: the table stores the unsuspended value, so
    /// component-1 maps down(basis) to down(value); |value| = |basis|.
    void set_f1(int basis_id, Morphism value) {
        const BasisElem& b = src_->basis(basis_id);
        if (!value.is_zero() && value.degree() != b.degree)
            throw std::invalid_argument("TableFunctor: f1 value must preserve the degree");
        check_endpoints(b.src, b.dst, value, "f1");
        f1_[basis_id] = std::move(value);
    }

    /// f2 on a composable basis pair (after, before): stores the
    /// unsuspended value of degree |after| + |before| - 1.
    void set_f2(int after, int before, Morphism value) {
        const BasisElem& g = src_->basis(after);
        const BasisElem& f = src_->basis(before);
        if (g.src != f.dst) throw std::invalid_argument("TableFunctor: f2 pair not composable");
        if (!value.is_zero() && value.degree() != g.degree + f.degree - 1)
            throw std::invalid_argument("TableFunctor: f2 value must have degree sum - 1");
        check_endpoints(f.src, g.dst, value, "f2");
        f2_[{after, before}] = std::move(value);
    }

    const BaseCategory& source_base() const override { return *src_; }
    const BaseCategory& target_base() const override { return *dst_; }
    int support_bound() const override { return f2_.empty() ? 1 : 2; }

    bool has_object(int index) const { return objects_.count(index) != 0; }

    NormalObject map_object(const NormalObject& x) const override {
        if (x.summands.size() != 1 || x.summands[0].shift != 0 || !x.twist.empty())
            throw std::invalid_argument(
                "TableFunctor: defined on embedded seed objects only");
        auto it = objects_.find(x.summands[0].object);
        if (it == objects_.end())
            throw std::invalid_argument("TableFunctor: object '" +
                                        src_->object_label(x.summands[0].object) +
                                        "' is outside the functor's domain");
        return it->second;
    }

    const std::map<int, Morphism>& f1_table() const { return f1_; }
    const std::map<std::pair<int, int>, Morphism>& f2_table() const { return f2_; }

protected:
    Susp apply_units(const Chain& units) const override {
        std::vector<int> ids;
        ids.reserve(units.size());
        for (const Susp& s : units) {
            if (s.m.terms().size() != 1)
                throw std::logic_error("TableFunctor: expected unit morphisms");
            ids.push_back(s.m.terms().begin()->first.basis);
        }
        Susp zero = zero_value(units);
        // strict units: identity arguments kill every component except f1
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (src_->is_identity(ids[i]) && ids.size() >= 2) return zero;
        if (ids.size() == 1) {
            int id = ids[0];
            if (src_->is_identity(id))
                return Susp{Morphism::identity(*dst_, map_object(units[0].m.src()))};
            auto it = f1_.find(id);
            return it == f1_.end() ? zero : Susp{it->second};
        }
        if (ids.size() == 2) {
            auto it = f2_.find({ids[0], ids[1]});
            return it == f2_.end() ? zero : Susp{it->second};
        }
        return zero;
    }

private:
    const BaseCategory* src_;
    const BaseCategory* dst_;
    std::map<int, NormalObject> objects_;
    std::map<int, Morphism> f1_;
    std::map<std::pair<int, int>, Morphism> f2_;

    void check_endpoints(int src_obj, int dst_obj, const Morphism& value, const char* what) {
        auto sit = objects_.find(src_obj);
        auto dit = objects_.find(dst_obj);
        if (sit == objects_.end() || dit == objects_.end())
            throw std::invalid_argument(std::string("TableFunctor: set objects before ") + what);
        if (!(value.src() == sit->second) || !(value.dst() == dit->second))
            throw std::invalid_argument(std::string("TableFunctor: ") + what +
                                        " value endpoints do not match the object map");
    }
};

// ---------------------------------------------------------------------------
// The functor relation
// ---------------------------------------------------------------------------

/// Residual of the defining relation of a suspended-world functor at one
/// composable chain; zero iff the relation holds there. The four groups:
/// (A) components eating one b1, (B) components eating one b2, (C) split
/// evaluations recombined by b2, (D) b1 of the full evaluation.
inline Susp functor_relation_residual(const AInfFunctor& f, const Chain& chain) {
    const std::size_t n = chain.size();
    std::vector<int> sdegs = suspended_degrees(chain);
    int total = 0;
    for (int d : sdegs) total += d;
    // every term of the relation has suspended degree (sum) + 1
    Susp acc{Morphism::zero(f.target_base(), f.image_ref(chain.back().m.src()),
                            f.image_ref(chain.front().m.dst()), total + 2)};

    // (A)
    for (std::size_t i = 0; i < n; ++i) {
        Chain modified = chain;
        modified[i] = b1(chain[i]);
        if (modified[i].is_zero()) continue;
        acc = acc + fukaya_sign(sdegs, i) * f.apply(modified);
    }
    // (B)
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Chain modified;
        for (std::size_t k = 0; k < i; ++k) modified.push_back(chain[k]);
        modified.push_back(b2(chain[i], chain[i + 1]));
        for (std::size_t k = i + 2; k < n; ++k) modified.push_back(chain[k]);
        if (modified[i].is_zero()) continue;
        acc = acc + fukaya_sign(sdegs, i) * f.apply(modified);
    }
    // (C)
    for (std::size_t i = 1; i < n; ++i) {
        Chain left(chain.begin(), chain.begin() + static_cast<long>(i));
        Chain right(chain.begin() + static_cast<long>(i), chain.end());
        acc = acc - b2(f.apply(left), f.apply(right));
    }
    // (D)
    acc = acc - b1(f.apply(chain));
    return acc;
}

// ---------------------------------------------------------------------------
// Chain enumeration over probe rosters
// ---------------------------------------------------------------------------

/// Streams all composable chains of hom-basis unit morphisms of the given
/// length among probe objects into a callback; nothing is materialized, so
/// large sweeps stay flat in memory.
template <class Fn>
void for_each_basis_chain(const BaseCategory& cat, const std::vector<NormalObject>& probes,
                          std::size_t length, bool skip_degenerate, Fn&& fn) {
    std::vector<std::vector<std::vector<Morphism>>> units(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        units[i].resize(probes.size());
        for (std::size_t j = 0; j < probes.size(); ++j)
            units[i][j] = hom_units(cat, probes[i], probes[j]);
    }
    // grow to the left: positions hold probe indices bottom-up
    std::vector<std::size_t> at(length + 1, 0);
    Chain chain(length, Susp{});
    std::function<void(std::size_t)> rec = [&](std::size_t step) {
        if (step == length) {
            if (!skip_degenerate || !is_degenerate_chain(chain)) fn(const_cast<const Chain&>(chain));
            return;
        }
        for (std::size_t next = 0; next < probes.size(); ++next) {
            at[step + 1] = next;
            for (const Morphism& u : units[at[step]][next]) {
                chain[length - 1 - step] = down(u);
                rec(step + 1);
            }
        }
    };
    for (std::size_t start = 0; start < probes.size(); ++start) {
        at[0] = start;
        rec(0);
    }
}

/// Round-robin parallel variant: workers re-run the enumeration and keep
/// every k-th chain, so memory stays flat and the callback must be
/// thread-safe. Functor caches take shared locks, so relation sweeps can
/// use this directly.
template <class Fn>
void parallel_for_each_basis_chain(const BaseCategory& cat,
                                   const std::vector<NormalObject>& probes, std::size_t length,
                                   bool skip_degenerate, unsigned threads, Fn&& fn) {
    if (threads <= 1) {
        for_each_basis_chain(cat, probes, length, skip_degenerate, fn);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            std::size_t index = 0;
            for_each_basis_chain(cat, probes, length, skip_degenerate, [&](const Chain& chain) {
                if (index++ % threads == t) fn(chain);
            });
        });
    }
    for (auto& worker : pool) worker.join();
}

/// Enumerates all composable non-degenerate chains of hom-basis unit
/// morphisms of the given length among probe objects.
inline std::vector<Chain> enumerate_basis_chains(const BaseCategory& cat,
                                                 const std::vector<NormalObject>& probes,
                                                 std::size_t length, bool skip_degenerate = true) {
    std::vector<Chain> out;
    std::vector<Chain> partial;
    for (const NormalObject& x : probes)
        for (const NormalObject& y : probes)
            for (const Morphism& u : hom_units(cat, x, y)) partial.push_back(Chain{down(u)});
    if (length == 1) {
        for (auto& c : partial)
            if (!skip_degenerate || !is_degenerate_chain(c)) out.push_back(c);
        return out;
    }
    std::vector<Chain> frontier = partial;
    for (std::size_t step = 1; step < length; ++step) {
        std::vector<Chain> next;
        for (const Chain& c : frontier)
            for (const NormalObject& z : probes)
                for (const Morphism& u : hom_units(cat, c.front().m.dst(), z)) {
                    Chain grown;
                    grown.push_back(down(u));
                    grown.insert(grown.end(), c.begin(), c.end());
                    next.push_back(std::move(grown));
                }
        frontier = std::move(next);
    }
    for (auto& c : frontier)
        if (!skip_degenerate || !is_degenerate_chain(c)) out.push_back(c);
    return out;
}

/// Draws `count` random composable chains of the given length by uniform
/// unit choices; deterministic for a fixed seed.
inline std::vector<Chain> random_basis_chains(const BaseCategory& cat,
                                              const std::vector<NormalObject>& probes,
                                              std::size_t length, std::size_t count,
                                              std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::vector<Chain> out;
    std::size_t attempts = 0;
    while (out.size() < count && attempts < count * 200) {
        ++attempts;
        Chain chain;
        NormalObject at = probes[rng() % probes.size()];
        bool ok = true;
        for (std::size_t k = 0; k < length; ++k) {
            const NormalObject next = probes[rng() % probes.size()];
            std::vector<Morphism> units = hom_units(cat, at, next);
            if (units.empty()) {
                ok = false;
                break;
            }
            Chain grown;
            grown.push_back(down(units[rng() % units.size()]));
            grown.insert(grown.end(), chain.begin(), chain.end());
            chain = std::move(grown);
            at = next;
        }
        if (!ok || is_degenerate_chain(chain)) continue;
        out.push_back(std::move(chain));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stasheff identities for the suspended structure maps
// ---------------------------------------------------------------------------

struct StasheffReport {
    std::string subject;
    long long chains_checked = 0;
    std::vector<CheckIssue> issues;
    bool pass() const { return issues.empty(); }
};

/// Exhaustively verifies the arity 1..3 identities of the suspended
/// structure maps on basis chains between probe objects: b1 b1 = 0,
/// b2(1 (x) b1) + b2(b1 (x) 1) + b1 b2 = 0, and associativity of b2 up to
/// the vanishing third component.
inline StasheffReport check_stasheff(const DgView& view) {
    StasheffReport report;
    report.subject = view.name;
    auto record = [&report](const std::string& clause, const std::string& witness) {
        if (report.issues.size() < 16) report.issues.push_back(CheckIssue{clause, witness});
    };

    for_each_basis_chain(*view.base, view.probes, 1, false, [&](const Chain& c) {
        ++report.chains_checked;
        if (!b1(b1(c[0])).is_zero()) record("b1_squared", c[0].m.to_string());
    });
    for_each_basis_chain(*view.base, view.probes, 2, false, [&](const Chain& c) {
        ++report.chains_checked;
        const Susp& a = c[0];
        const Susp& b = c[1];
        Scalar pass_one = fukaya_sign(suspended_degrees(c), 1);
        Susp lhs = b2(b1(a), b) + pass_one * b2(a, b1(b)) + b1(b2(a, b));
        if (!lhs.is_zero())
            record("b2_b1_compatibility", a.m.to_string() + " , " + b.m.to_string());
    });
    for_each_basis_chain(*view.base, view.probes, 3, false, [&](const Chain& c) {
        ++report.chains_checked;
        const Susp& a = c[0];
        const Susp& b = c[1];
        const Susp& g = c[2];
        Scalar pass_one = fukaya_sign(suspended_degrees(c), 1);
        Susp lhs = b2(b2(a, b), g) + pass_one * b2(a, b2(b, g));
        if (!lhs.is_zero())
            record("b2_associativity",
                   a.m.to_string() + " , " + b.m.to_string() + " , " + g.m.to_string());
    });
    return report;
}

}  // namespace pretr
