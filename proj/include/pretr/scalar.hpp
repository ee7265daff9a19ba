#pragma once

#include <pretr/bigint.hpp>

#include <stdexcept>
#include <string>

namespace pretr {

/// Description of the session ground field: the rationals (modulus 0)
/// or the prime field with `modulus` elements.
struct Field {
    long long modulus = 0;

    static Field rationals() { return Field{0}; }

    static Field prime(long long p) {
        if (p < 2) throw std::invalid_argument("Field: modulus must be >= 2");
        for (long long d = 2; d * d <= p; ++d)
            if (p % d == 0) throw std::invalid_argument("Field: modulus must be prime");
        return Field{p};
    }

    bool operator==(const Field& o) const { return modulus == o.modulus; }
    bool operator!=(const Field& o) const { return !(*this == o); }

    std::string to_string() const {
        return modulus == 0 ? "Q" : "F" + std::to_string(modulus);
    }
};

/// Exact field element: a reduced rational, or a residue modulo a prime.
/// Integer-valued scalars coerce into either field, so literals like
/// Scalar(2) combine freely with residues of any session field.
class Scalar {
public:
    Scalar() : num_(0), den_(1) {}
    Scalar(long long n) : num_(n), den_(1) {}  // NOLINT: literal type
    Scalar(int n) : num_(n), den_(1) {}        // NOLINT

    Scalar(BigInt n, BigInt d, long long mod = 0) : num_(std::move(n)), den_(std::move(d)), mod_(mod) {
        normalize();
    }

    static Scalar rational(long long n, long long d) { return Scalar(BigInt(n), BigInt(d), 0); }

    static Scalar residue(long long n, long long p) { return Scalar(BigInt(n), BigInt(1), p); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    long long modulus() const { return mod_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_integral() const { return den_.is_one(); }

    /// True for +1 or -1 (in a prime field, -1 means p-1).
    bool is_unit_sign() const {
        if (is_one()) return true;
        return (-*this).is_one();
    }

    Scalar operator-() const {
        Scalar r = *this;
        if (r.mod_ == 0) {
            r.num_ = -r.num_;
        } else if (!r.num_.is_zero()) {
            r.num_ = BigInt(r.mod_) - r.num_;
        }
        return r;
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.mod_ == b.mod_)
            return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, a.mod_);
        auto [x, y] = align(a, b);
        return Scalar(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_, x.mod_);
    }

    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.mod_ == b.mod_) return Scalar(a.num_ * b.num_, a.den_ * b.den_, a.mod_);
        auto [x, y] = align(a, b);
        return Scalar(x.num_ * y.num_, x.den_ * y.den_, x.mod_);
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
        auto [x, y] = align(a, b);
        if (x.mod_ == 0) return Scalar(x.num_ * y.den_, x.den_ * y.num_, 0);
        return Scalar(x.num_ * mod_inverse(y.num_, x.mod_), BigInt(1), x.mod_);
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        // both sides are kept in canonical reduced form
        if (a.mod_ == b.mod_) return a.num_ == b.num_ && a.den_ == b.den_;
        auto [x, y] = align(a, b);
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar inverse() const { return Scalar(1) / *this; }

    std::string to_string() const {
        std::string s = num_.to_string();
        if (!den_.is_one()) s += "/" + den_.to_string();
        return s;
    }

    /// Cheap canonical key for memoization; not for display.
    void append_key(std::string& out) const {
        num_.append_key(out);
        if (!den_.is_one()) {
            out.push_back('/');
            den_.append_key(out);
        }
    }

private:
    BigInt num_;
    BigInt den_;            // 1 in a prime field; > 0 over the rationals
    long long mod_ = 0;     // 0 = rationals

    void normalize() {
        if (mod_ == 0) {
            if (den_.is_zero()) throw std::domain_error("Scalar: zero denominator");
            if (den_.is_negative()) {
                num_ = -num_;
                den_ = -den_;
            }
            BigInt g = BigInt::gcd(num_, den_);
            if (!g.is_one() && !g.is_zero()) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
            if (num_.is_zero()) den_ = BigInt(1);
        } else {
            BigInt p(mod_);
            num_ = num_ % p;
            if (num_.is_negative()) num_ = num_ + p;
            if (!den_.is_one()) {
                num_ = (num_ * mod_inverse(den_, mod_)) % p;
                den_ = BigInt(1);
            }
        }
    }

    static BigInt mod_inverse(const BigInt& a, long long mod) {
        BigInt p(mod);
        BigInt r = a % p;
        if (r.is_negative()) r = r + p;
        if (r.is_zero()) throw std::domain_error("Scalar: residue not invertible");
        // Extended Euclid on (r, p).
        BigInt old_r = r, cur_r = p, old_s = BigInt(1), cur_s = BigInt(0);
        while (!cur_r.is_zero()) {
            BigInt q, rem;
            BigInt::divmod(old_r, cur_r, q, rem);
            BigInt next_s = old_s - q * cur_s;
            old_r = cur_r;
            cur_r = rem;
            old_s = cur_s;
            cur_s = next_s;
        }
        BigInt inv = old_s % p;
        if (inv.is_negative()) inv = inv + p;
        return inv;
    }

    /// Coerces a pair of scalars into a common field. Integral (and more
    /// generally p-invertible-denominator) rationals embed into F_p.
    static std::pair<Scalar, Scalar> align(const Scalar& a, const Scalar& b) {
        if (a.mod_ == b.mod_) return {a, b};
        if (a.mod_ == 0) return {a.into(b.mod_), b};
        if (b.mod_ == 0) return {a, b.into(a.mod_)};
        throw std::domain_error("Scalar: mixing distinct prime fields");
    }

    Scalar into(long long mod) const {
        if (mod == 0 || mod_ == mod) return *this;
        if (mod_ != 0) throw std::domain_error("Scalar: mixing distinct prime fields");
        return Scalar(num_, den_, mod);
    }
};

}  // namespace pretr
