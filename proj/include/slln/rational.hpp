#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "slln/scaled.hpp"

namespace slln {

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
class ExactRational {
public:
    using Integer = boost::multiprecision::cpp_int;

    ExactRational() = default;
    ExactRational(std::int64_t value) : value_(value) {}  // NOLINT
    ExactRational(const Integer& numerator, const Integer& denominator);

    static ExactRational pow2(unsigned exponent);

    Integer numerator() const { return boost::multiprecision::numerator(value_); }
    Integer denominator() const { return boost::multiprecision::denominator(value_); }

    double to_double() const;
    /// Conversion that survives magnitudes beyond the double range.
    Scaled to_scaled() const;
    std::string to_string() const;

    bool is_zero() const { return value_ == 0; }
    int sign() const { return value_.sign(); }

    ExactRational operator+(const ExactRational& rhs) const { return ExactRational(value_ + rhs.value_); }
    ExactRational operator-(const ExactRational& rhs) const { return ExactRational(value_ - rhs.value_); }
    ExactRational operator*(const ExactRational& rhs) const { return ExactRational(value_ * rhs.value_); }
    ExactRational operator/(const ExactRational& rhs) const;
    ExactRational operator-() const { return ExactRational(-value_); }
    ExactRational& operator+=(const ExactRational& rhs) {
        value_ += rhs.value_;
        return *this;
    }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.value_ == b.value_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return a.value_ >= b.value_; }

private:
    using Value = boost::multiprecision::cpp_rational;
    explicit ExactRational(Value v) : value_(std::move(v)) {}

    Value value_{0};
};

}  // namespace slln
