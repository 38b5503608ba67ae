#include "slln/scaled.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

namespace slln {

namespace {

constexpr std::int64_t kExponentLimit = std::int64_t{1} << 60;

/// frexp for normal doubles by bit surgery; the hot path of every operation.
double split(double value, int& exponent) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    const int biased = static_cast<int>((bits >> 52) & 0x7ff);
    if (biased == 0 || biased == 0x7ff) {
        return std::frexp(value, &exponent);
    }
    exponent = biased - 1022;
    constexpr std::uint64_t kExponentMask = std::uint64_t{0x7ff} << 52;
    return std::bit_cast<double>((bits & ~kExponentMask) | (std::uint64_t{1022} << 52));
}

}  // namespace

Scaled::Scaled(double value) {
    if (value == 0.0 || !std::isfinite(value)) {
        mantissa_ = value;
        exponent_ = 0;
        return;
    }
    int e = 0;
    mantissa_ = split(value, e);
    exponent_ = e;
}

Scaled Scaled::from_parts(double mantissa, std::int64_t exponent) {
    Scaled out(mantissa);
    if (out.mantissa_ == 0.0 || !std::isfinite(out.mantissa_)) {
        return out;
    }
    out.exponent_ += exponent;
    if (out.exponent_ > kExponentLimit) {
        return Scaled(std::copysign(std::numeric_limits<double>::infinity(), mantissa));
    }
    if (out.exponent_ < -kExponentLimit) {
        return Scaled(0.0);
    }
    return out;
}

Scaled Scaled::pow2(std::int64_t e) { return from_parts(0.5, e + 1); }

Scaled Scaled::from_log(double log_value) {
    if (std::isinf(log_value)) {
        return log_value < 0 ? Scaled(0.0) : Scaled(std::numeric_limits<double>::infinity());
    }
    const double log2_value = log_value / std::numbers::ln2;
    const double whole = std::floor(log2_value);
    const double frac = log2_value - whole;
    return from_parts(std::exp2(frac), static_cast<std::int64_t>(whole));
}

bool Scaled::is_finite() const noexcept { return std::isfinite(mantissa_); }

double Scaled::to_double() const {
    if (mantissa_ == 0.0 || !std::isfinite(mantissa_)) {
        return mantissa_;
    }
    if (exponent_ > 4096) {
        return std::copysign(std::numeric_limits<double>::infinity(), mantissa_);
    }
    if (exponent_ < -4096) {
        return std::copysign(0.0, mantissa_);
    }
    if (exponent_ >= -1021 && exponent_ <= 1024) {
        constexpr std::uint64_t kExponentMask = std::uint64_t{0x7ff} << 52;
        const auto bits = std::bit_cast<std::uint64_t>(mantissa_);
        const auto biased = static_cast<std::uint64_t>(1022 + exponent_);
        return std::bit_cast<double>((bits & ~kExponentMask) | (biased << 52));
    }
    return std::ldexp(mantissa_, static_cast<int>(exponent_));
}

double Scaled::log() const {
    if (mantissa_ == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(std::fabs(mantissa_)) + static_cast<double>(exponent_) * std::numbers::ln2;
}

Scaled Scaled::operator*(const Scaled& rhs) const {
    return from_parts(mantissa_ * rhs.mantissa_, exponent_ + rhs.exponent_);
}

Scaled Scaled::operator/(const Scaled& rhs) const {
    if (rhs.mantissa_ == 0.0) {
        return Scaled(mantissa_ / rhs.mantissa_);
    }
    return from_parts(mantissa_ / rhs.mantissa_, exponent_ - rhs.exponent_);
}

Scaled Scaled::operator+(const Scaled& rhs) const {
    if (rhs.mantissa_ == 0.0 || !std::isfinite(mantissa_)) {
        return *this;
    }
    if (mantissa_ == 0.0 || !std::isfinite(rhs.mantissa_)) {
        return rhs;
    }
    const Scaled& big = exponent_ >= rhs.exponent_ ? *this : rhs;
    const Scaled& small = exponent_ >= rhs.exponent_ ? rhs : *this;
    const std::int64_t gap = big.exponent_ - small.exponent_;
    if (gap > 1100) {
        return big;
    }
    return from_parts(big.mantissa_ + std::ldexp(small.mantissa_, -static_cast<int>(gap)), big.exponent_);
}

Scaled Scaled::operator-(const Scaled& rhs) const { return *this + (-rhs); }

Scaled Scaled::pow(double p) const {
    if (mantissa_ == 0.0) {
        return p == 0.0 ? Scaled(1.0) : Scaled(0.0);
    }
    // |m|^p * 2^{e p}; split e*p into integer and fractional parts.
    const double ep = static_cast<double>(exponent_) * p;
    const double whole = std::floor(ep);
    const double mant = std::pow(std::fabs(mantissa_), p) * std::exp2(ep - whole);
    return from_parts(mant, static_cast<std::int64_t>(whole));
}

bool operator<(const Scaled& a, const Scaled& b) {
    if (a.sign() != b.sign() || a.is_zero() || b.is_zero()) {
        return a.mantissa_ < b.mantissa_;
    }
    if (a.exponent_ != b.exponent_) {
        return a.sign() > 0 ? a.exponent_ < b.exponent_ : a.exponent_ > b.exponent_;
    }
    return a.mantissa_ < b.mantissa_;
}

std::string Scaled::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << mantissa_ << "*2^" << exponent_;
    return os.str();
}

}  // namespace slln
