#pragma once

#include <cstdint>
#include <string>

namespace slln {

/// A nonnegative-or-signed real carried as mantissa * 2^exponent.
///
/// Sequences such as 2^{n/2} or 2^n/n leave the double range long before the
/// horizons we care about; quotients of such values are still ordinary
/// numbers, so everything is computed in this form and only converted at the
/// end. The mantissa is kept in [0.5, 1) (or exactly 0).
class Scaled {
public:
    constexpr Scaled() = default;
    Scaled(double value);  // NOLINT: implicit on purpose, doubles are the common case

    static Scaled from_parts(double mantissa, std::int64_t exponent);
    /// 2^e exactly.
    static Scaled pow2(std::int64_t e);
    /// exp(log_value), never overflowing.
    static Scaled from_log(double log_value);

    double mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }

    bool is_zero() const noexcept { return mantissa_ == 0.0; }
    bool is_finite() const noexcept;
    int sign() const noexcept { return (mantissa_ > 0) - (mantissa_ < 0); }

    /// Converts to double; overflows to +-inf and underflows to 0 like ldexp.
    double to_double() const;
    /// Natural log of |value|; -inf for zero.
    double log() const;

    Scaled operator*(const Scaled& rhs) const;
    Scaled operator/(const Scaled& rhs) const;
    Scaled operator+(const Scaled& rhs) const;
    Scaled operator-(const Scaled& rhs) const;
    Scaled operator-() const { return from_parts(-mantissa_, exponent_); }
    Scaled& operator+=(const Scaled& rhs) { return *this = *this + rhs; }

    Scaled pow(double p) const;
    Scaled sqrt() const { return pow(0.5); }

    friend bool operator<(const Scaled& a, const Scaled& b);
    friend bool operator<=(const Scaled& a, const Scaled& b) { return !(b < a); }
    friend bool operator>(const Scaled& a, const Scaled& b) { return b < a; }
    friend bool operator>=(const Scaled& a, const Scaled& b) { return !(a < b); }
    friend bool operator==(const Scaled& a, const Scaled& b) {
        return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
    }

    std::string to_string() const;

private:
    double mantissa_ = 0.0;
    std::int64_t exponent_ = 0;
};

}  // namespace slln
