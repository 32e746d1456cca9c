#include "spaceform/angle.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spaceform {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Angle Angle::turns(long num, long den) {
    if (den == 0) throw std::invalid_argument("angle with zero denominator");
    if (den < 0) {
        den = -den;
        num = -num;
    }
    num %= den;
    if (num < 0) num += den;
    long g = std::gcd(num, den);
    if (g == 0) g = 1;
    Angle a;
    a.rational_ = true;
    a.num_ = num / g;
    a.den_ = den / g;
    a.radians_ = kTwoPi * static_cast<double>(a.num_) / static_cast<double>(a.den_);
    return a;
}

Angle Angle::turns(const Rational& t) {
    return turns(rational_num_long(t), rational_den_long(t));
}

Angle Angle::radians(double value) {
    double r = std::fmod(value, kTwoPi);
    if (r < 0) r += kTwoPi;
    Angle a;
    a.rational_ = false;
    a.num_ = 0;
    a.den_ = 1;
    a.radians_ = r;
    return a;
}

long Angle::order() const {
    if (!rational_) throw std::domain_error("order of an irrational angle");
    return den_;
}

Angle Angle::operator+(const Angle& o) const {
    if (rational_ && o.rational_)
        return turns(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    return radians(radians_ + o.radians_);
}

Angle Angle::operator-() const {
    if (rational_) return turns(-num_, den_);
    return radians(-radians_);
}

std::pair<double, double> Angle::cos_sin() const {
    return {std::cos(radians_), std::sin(radians_)};
}

std::optional<std::pair<Rational, Rational>> Angle::exact_cos_sin() const {
    if (!rational_) return std::nullopt;
    switch (den_) {
        case 1:
            return std::pair<Rational, Rational>{Rational(1), Rational(0)};
        case 2:
            return std::pair<Rational, Rational>{Rational(-1), Rational(0)};
        case 4:
            if (num_ == 1) return std::pair<Rational, Rational>{Rational(0), Rational(1)};
            return std::pair<Rational, Rational>{Rational(0), Rational(-1)};
        default:
            return std::nullopt;
    }
}

std::string Angle::describe() const {
    if (rational_) return "2pi*" + std::to_string(num_) + "/" + std::to_string(den_);
    return std::to_string(radians_) + " rad";
}

bool Angle::operator==(const Angle& o) const {
    if (rational_ != o.rational_) return false;
    if (rational_) return num_ == o.num_ && den_ == o.den_;
    return radians_ == o.radians_;
}

}  // namespace spaceform
