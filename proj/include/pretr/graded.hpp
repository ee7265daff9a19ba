#pragma once

#include <pretr/scalar.hpp>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pretr {

/// Ordered basis of a graded space: degree -> basis labels. Only finitely
/// many degrees are populated; labels are unique within a degree.
class GradedBasis {
public:
    void add(int degree, const std::string& label) {
        auto& labels = degrees_[degree];
        for (const auto& l : labels)
            if (l == label)
                throw std::invalid_argument("GradedBasis: duplicate label '" + label + "'");
        labels.push_back(label);
    }

    const std::vector<std::string>& labels(int degree) const {
        static const std::vector<std::string> kEmpty;
        auto it = degrees_.find(degree);
        return it == degrees_.end() ? kEmpty : it->second;
    }

    std::size_t dim(int degree) const { return labels(degree).size(); }

    const std::map<int, std::vector<std::string>>& by_degree() const { return degrees_; }

    bool empty() const { return degrees_.empty(); }

private:
    std::map<int, std::vector<std::string>> degrees_;
};

/// Homogeneous element of a graded space: a degree plus exact coefficients
/// on basis labels of that degree. Zero coefficients are never stored.
class GradedElement {
public:
    GradedElement() = default;
    explicit GradedElement(int degree) : degree_(degree) {}

    int degree() const { return degree_; }
    const std::map<std::string, Scalar>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    void add_term(const std::string& label, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = coeffs_.emplace(label, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    GradedElement& operator+=(const GradedElement& o) {
        if (is_zero()) {
            *this = o;
            return *this;
        }
        if (!o.is_zero() && o.degree_ != degree_)
            throw std::invalid_argument("GradedElement: degree mismatch in sum");
        for (const auto& [l, c] : o.coeffs_) add_term(l, c);
        return *this;
    }

    friend GradedElement operator*(const Scalar& s, GradedElement e) {
        if (s.is_zero()) return GradedElement(e.degree_);
        for (auto& [l, c] : e.coeffs_) c *= s;
        return e;
    }

    friend bool operator==(const GradedElement& a, const GradedElement& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
    }

private:
    int degree_ = 0;
    std::map<std::string, Scalar> coeffs_;
};

/// A graded element together with its suspension offset: 0 for an element
/// of V, -1 for the corresponding element of SV (degree lowered by one).
struct SuspendedElement {
    GradedElement element;
    int offset = 0;

    int degree() const { return element.degree() + offset; }
};

inline SuspendedElement suspend(const SuspendedElement& v) {
    return SuspendedElement{v.element, v.offset - 1};
}

inline SuspendedElement suspend(const GradedElement& v) {
    return SuspendedElement{v, -1};
}

inline SuspendedElement desuspend(const SuspendedElement& v) {
    if (v.offset >= 0)
        throw std::invalid_argument("desuspend: element is not suspended");
    return SuspendedElement{v.element, v.offset + 1};
}

/// Sign acquired by a degree-odd operator passing the leftmost `i` factors
/// of a tensor of suspended elements; `suspended_degrees` lists the factor
/// degrees left to right.
inline Scalar fukaya_sign(const std::vector<int>& suspended_degrees, std::size_t i) {
    if (i > suspended_degrees.size())
        throw std::out_of_range("fukaya_sign: index exceeds chain length");
    long long sum = 0;
    for (std::size_t k = 0; k < i; ++k) sum += suspended_degrees[k];
    return (sum % 2 == 0) ? Scalar(1) : Scalar(-1);
}

/// A homogeneous graded map together with its degree, for the tensor
/// evaluation rule below.
struct GradedMap {
    int degree = 0;
    std::function<GradedElement(const GradedElement&)> apply;
};

/// Evaluates a tensor product of graded maps on a tensor of homogeneous
/// elements: each element passing a map to its right of odd degree
/// contributes (-1)^{|v||map|}.
inline std::vector<GradedElement> tensor_apply(const std::vector<GradedMap>& maps,
                                               const std::vector<GradedElement>& elements) {
    if (maps.size() != elements.size())
        throw std::invalid_argument("tensor_apply: arity mismatch");
    Scalar sign(1);
    std::vector<GradedElement> out;
    out.reserve(maps.size());
    for (std::size_t k = 0; k < maps.size(); ++k) {
        long long tail_degree = 0;
        for (std::size_t j = k + 1; j < maps.size(); ++j) tail_degree += maps[j].degree;
        long long e = static_cast<long long>(elements[k].degree()) * tail_degree;
        if (e % 2 != 0) sign = -sign;
        out.push_back(maps[k].apply(elements[k]));
    }
    if (!out.empty()) out.front() = sign * out.front();
    return out;
}

}  // namespace pretr
