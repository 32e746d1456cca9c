#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "spaceform/rational.hpp"

namespace spaceform {

// An angle that knows whether it is a rational multiple of 2π. The rational /
// irrational split drives the discreteness case analysis, so it is carried as
// data instead of being re-detected from floats.
class Angle {
  public:
    Angle() : rational_(true), num_(0), den_(1), radians_(0.0) {}

    // θ = 2π·num/den. Stored in lowest terms with 0 <= num < den.
    static Angle turns(long num, long den);
    static Angle turns(const Rational& t);
    // Irrational (or unclassified) angle, reduced mod 2π into [0, 2π).
    static Angle radians(double value);

    bool is_rational() const { return rational_; }
    // Order of the rotation by this angle; defined only for rational angles.
    long order() const;
    long turns_num() const { return num_; }
    long turns_den() const { return den_; }
    double value() const { return radians_; }

    Angle operator+(const Angle& o) const;
    Angle operator-() const;

    std::pair<double, double> cos_sin() const;
    // Exact cosine/sine when both are rational (q ∈ {1,2,4} in lowest terms).
    std::optional<std::pair<Rational, Rational>> exact_cos_sin() const;

    bool is_zero() const { return rational_ ? num_ == 0 : radians_ == 0.0; }
    std::string describe() const;

    bool operator==(const Angle& o) const;

  private:
    bool rational_;
    long num_, den_;
    double radians_;
};

}  // namespace spaceform
