#pragma once

#include <pretr/category.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pretr {

/// One summand of a completed object: a base object with a shift.
struct Summand {
    int object = 0;
    int shift = 0;

    friend bool operator==(const Summand& a, const Summand& b) {
        return a.object == b.object && a.shift == b.shift;
    }
    friend bool operator<(const Summand& a, const Summand& b) {
        return a.object != b.object ? a.object < b.object : a.shift < b.shift;
    }
};

/// Position of one matrix entry term: target summand row, source summand
/// column, and the base basis element sitting in that entry.
struct EntryKey {
    int row = 0;
    int col = 0;
    int basis = 0;

    friend bool operator==(const EntryKey& a, const EntryKey& b) {
        return a.row == b.row && a.col == b.col && a.basis == b.basis;
    }
    friend bool operator<(const EntryKey& a, const EntryKey& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return a.basis < b.basis;
    }
};

using TermMap = std::map<EntryKey, Scalar>;

inline void term_add(TermMap& acc, const EntryKey& k, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = acc.emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) acc.erase(it);
    }
}

/// Canonical form of every object in the completed world over a base
/// category: a finite formal sum of shifted base objects together with a
/// degree-1 twist matrix. Plain objects are the special case twist = 0;
/// the zero object is the empty sum.
struct NormalObject {
    std::vector<Summand> summands;
    TermMap twist;

    std::size_t size() const { return summands.size(); }
    bool is_zero_object() const { return summands.empty(); }
    bool is_twisted() const { return !twist.empty(); }

    friend bool operator==(const NormalObject& a, const NormalObject& b) {
        return a.summands == b.summands && a.twist == b.twist;
    }
    friend bool operator!=(const NormalObject& a, const NormalObject& b) { return !(a == b); }
};

/// Stable text encoding used for map keys, memoization and diagnostics.
inline void append_encoding(std::string& s, const NormalObject& x) {
    s.push_back('S');
    for (const auto& smd : x.summands) {
        s.push_back(':');
        s += std::to_string(smd.object);
        s.push_back('#');
        s += std::to_string(smd.shift);
    }
    if (!x.twist.empty()) {
        s += "|T";
        for (const auto& [k, c] : x.twist) {
            s.push_back(':');
            s += std::to_string(k.row);
            s.push_back(',');
            s += std::to_string(k.col);
            s.push_back(',');
            s += std::to_string(k.basis);
            s.push_back('=');
            c.append_key(s);
        }
    }
}

inline std::string encode(const NormalObject& x) {
    std::string s;
    s.reserve(16 + 8 * x.summands.size() + 24 * x.twist.size());
    append_encoding(s, x);
    return s;
}

inline std::string object_label(const BaseCategory& cat, const NormalObject& x) {
    if (x.is_zero_object()) return "0";
    std::string s;
    for (std::size_t i = 0; i < x.summands.size(); ++i) {
        if (i) s += " + ";
        s += cat.object_label(x.summands[i].object);
        if (x.summands[i].shift != 0) s += "[" + std::to_string(x.summands[i].shift) + "]";
    }
    if (x.is_twisted()) s = "{" + s + ", q}";
    return s;
}

/// Algebraic object term: a base object, a finite formal sum, an integer
/// shift, or a twist of an already-normalized object. Twist data refers to
/// entry positions of the normalized inner object; validation of the
/// Maurer-Cartan equation happens in the completion layer, which is the
/// only place twists are minted.
class ObjectExpr {
public:
    enum class Kind { Base, Sum, Shift, Twist };

    static ObjectExpr base(std::string label) {
        ObjectExpr e;
        e.kind_ = Kind::Base;
        e.base_ = std::move(label);
        return e;
    }

    static ObjectExpr sum(std::vector<ObjectExpr> parts) {
        ObjectExpr e;
        e.kind_ = Kind::Sum;
        e.parts_ = std::move(parts);
        return e;
    }

    static ObjectExpr shift(ObjectExpr inner, int by) {
        ObjectExpr e;
        e.kind_ = Kind::Shift;
        e.parts_.push_back(std::move(inner));
        e.shift_ = by;
        return e;
    }

    static ObjectExpr twist(ObjectExpr inner, TermMap q) {
        ObjectExpr e;
        e.kind_ = Kind::Twist;
        e.parts_.push_back(std::move(inner));
        e.twist_ = std::move(q);
        return e;
    }

    Kind kind() const { return kind_; }
    const std::string& base_label() const { return base_; }
    const std::vector<ObjectExpr>& parts() const { return parts_; }
    int shift_by() const { return shift_; }
    const TermMap& twist_data() const { return twist_; }

private:
    Kind kind_ = Kind::Base;
    std::string base_;
    std::vector<ObjectExpr> parts_;
    int shift_ = 0;
    TermMap twist_;
};

}  // namespace pretr
