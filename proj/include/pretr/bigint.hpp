#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace pretr {

/// Arbitrary-precision signed integer, sign-magnitude with base 2^32 limbs.
/// Sized for exact linear algebra on small dense matrices; schoolbook
/// multiplication and shift-subtract division are plenty at that scale.
class BigInt {
public:
    BigInt() = default;

    BigInt(long long v) {  // NOLINT: implicit by design, used as literal type
        bool neg = v < 0;
        unsigned long long mag = neg ? 0ULL - static_cast<unsigned long long>(v)
                                     : static_cast<unsigned long long>(v);
        while (mag != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(mag & 0xffffffffULL));
            mag >>= 32;
        }
        negative_ = neg && !limbs_.empty();
    }

    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_string(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("BigInt: empty string");
        std::size_t pos = 0;
        bool neg = false;
        if (s[pos] == '+' || s[pos] == '-') {
            neg = s[pos] == '-';
            ++pos;
        }
        if (pos == s.size()) throw std::invalid_argument("BigInt: no digits");
        BigInt r;
        for (; pos < s.size(); ++pos) {
            if (s[pos] < '0' || s[pos] > '9')
                throw std::invalid_argument("BigInt: bad digit in '" + s + "'");
            r = r * BigInt(10) + BigInt(s[pos] - '0');
        }
        if (neg) r.negative_ = !r.is_zero();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return negative_; }
    bool is_one() const { return !negative_ && limbs_.size() == 1 && limbs_[0] == 1; }

    /// True when the value fits in a signed 64-bit integer.
    bool fits_int64() const {
        if (limbs_.size() > 2) return false;
        unsigned long long mag = magnitude_u64();
        return negative_ ? mag <= 0x8000000000000000ULL : mag < 0x8000000000000000ULL;
    }

    long long to_int64() const {
        if (!fits_int64()) throw std::overflow_error("BigInt: does not fit in int64");
        unsigned long long mag = magnitude_u64();
        return negative_ ? -static_cast<long long>(mag - 1) - 1 : static_cast<long long>(mag);
    }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.negative_ = !r.negative_;
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.negative_ = false;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.negative_ == b.negative_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_ && !r.limbs_.empty();
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c == 0) return BigInt();
        BigInt r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.negative_ = b.negative_;
        }
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                    r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffULL);
                carry = cur >> 32;
            }
            r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
        }
        r.trim();
        r.negative_ = (a.negative_ != b.negative_) && !r.limbs_.empty();
        return r;
    }

    /// Truncated division (quotient rounds toward zero, as in C++).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        q = BigInt();
        r = BigInt();
        if (cmp_mag(a.limbs_, b.limbs_) < 0) {
            r = a;
            return;
        }
        // Binary shift-subtract long division on magnitudes.
        std::size_t bits = a.limbs_.size() * 32;
        q.limbs_.assign(a.limbs_.size(), 0);
        std::vector<std::uint32_t> rem;
        for (std::size_t k = bits; k-- > 0;) {
            shl1(rem);
            if ((a.limbs_[k / 32] >> (k % 32)) & 1u) {
                if (rem.empty())
                    rem.push_back(1);
                else
                    rem[0] |= 1u;
            }
            if (cmp_mag(rem, b.limbs_) >= 0) {
                rem = sub_mag(rem, b.limbs_);
                q.limbs_[k / 32] |= (1u << (k % 32));
            }
        }
        q.trim();
        r.limbs_ = std::move(rem);
        r.trim();
        q.negative_ = (a.negative_ != b.negative_) && !q.limbs_.empty();
        r.negative_ = a.negative_ && !r.limbs_.empty();
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }

    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }

    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.negative_ != b.negative_) return a.negative_;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.negative_ ? c > 0 : c < 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    static BigInt gcd(BigInt a, BigInt b) {
        a.negative_ = false;
        b.negative_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string digits;
        BigInt n = abs();
        const BigInt ten(10);
        while (!n.is_zero()) {
            BigInt q, r;
            divmod(n, ten, q, r);
            digits.push_back(static_cast<char>('0' + (r.is_zero() ? 0 : r.limbs_[0])));
            n = q;
        }
        if (negative_) digits.push_back('-');
        return {digits.rbegin(), digits.rend()};
    }

    /// Cheap canonical key (hex limbs), for hashing and memo keys where
    /// decimal conversion would dominate.
    void append_key(std::string& out) const {
        static const char* hex = "0123456789abcdef";
        if (negative_) out.push_back('-');
        if (limbs_.empty()) {
            out.push_back('0');
            return;
        }
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            std::uint32_t limb = limbs_[i];
            for (int shift = 28; shift >= 0; shift -= 4)
                out.push_back(hex[(limb >> shift) & 0xF]);
        }
    }

private:
    std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zero limbs
    bool negative_ = false;

    unsigned long long magnitude_u64() const {
        unsigned long long mag = 0;
        if (limbs_.size() > 1) mag = static_cast<unsigned long long>(limbs_[1]) << 32;
        if (!limbs_.empty()) mag |= limbs_[0];
        return mag;
    }

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) negative_ = false;
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        }
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r;
        r.reserve(std::max(a.size(), b.size()) + 1);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
            std::uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r.push_back(static_cast<std::uint32_t>(cur & 0xffffffffULL));
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // Requires |a| >= |b|.
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r = a;
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            borrow = 0;
            if (cur < 0) {
                cur += (1LL << 32);
                borrow = 1;
            }
            r[i] = static_cast<std::uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static void shl1(std::vector<std::uint32_t>& v) {
        std::uint32_t carry = 0;
        for (auto& limb : v) {
            std::uint32_t next = limb >> 31;
            limb = (limb << 1) | carry;
            carry = next;
        }
        if (carry) v.push_back(carry);
    }
};

}  // namespace pretr
