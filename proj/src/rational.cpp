#include "slln/rational.hpp"

#include "slln/error.hpp"

namespace slln {

ExactRational::ExactRational(const Integer& numerator, const Integer& denominator) {
    if (denominator == 0) {
        fail(ErrorCategory::NumericDomain, "sequences", "denominator", "ExactRational with zero denominator");
    }
    value_ = denominator < 0 ? Value(Integer(-numerator), Integer(-denominator)) : Value(numerator, denominator);
}

ExactRational ExactRational::pow2(unsigned exponent) {
    Integer one = 1;
    return ExactRational(Value(one << exponent));
}

ExactRational ExactRational::operator/(const ExactRational& rhs) const {
    if (rhs.value_ == 0) {
        fail(ErrorCategory::NumericDomain, "sequences", "divisor", "ExactRational division by zero");
    }
    return ExactRational(value_ / rhs.value_);
}

double ExactRational::to_double() const { return to_scaled().to_double(); }

Scaled ExactRational::to_scaled() const {
    if (value_ == 0) {
        return Scaled(0.0);
    }
    Integer num = numerator();
    Integer den = denominator();
    const bool negative = num < 0;
    if (negative) {
        num = -num;
    }
    // Shift both to ~64 significant bits before converting; the quotient
    // keeps full double precision and the shifts go into the exponent.
    const std::int64_t num_bits = static_cast<std::int64_t>(boost::multiprecision::msb(num)) + 1;
    const std::int64_t den_bits = static_cast<std::int64_t>(boost::multiprecision::msb(den)) + 1;
    const std::int64_t num_shift = num_bits > 64 ? num_bits - 64 : 0;
    const std::int64_t den_shift = den_bits > 64 ? den_bits - 64 : 0;
    const double n = static_cast<double>(static_cast<Integer>(num >> num_shift));
    const double d = static_cast<double>(static_cast<Integer>(den >> den_shift));
    const Scaled q = Scaled::from_parts(n / d, num_shift - den_shift);
    return negative ? -q : q;
}

std::string ExactRational::to_string() const {
    if (denominator() == 1) {
        return numerator().str();
    }
    return numerator().str() + "/" + denominator().str();
}

}  // namespace slln
