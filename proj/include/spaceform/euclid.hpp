#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spaceform/angle.hpp"
#include "spaceform/linalg.hpp"

namespace spaceform {

// A vector that remembers exact rational coordinates when it has them.
template <int N>
struct NumVec {
    Vec<double, N> approx{};
    std::optional<Vec<Rational, N>> exact;

    static NumVec of(const Vec<Rational, N>& v) {
        NumVec r;
        r.exact = v;
        r.approx = to_double(v);
        return r;
    }
    static NumVec of(const Vec<double, N>& v) {
        NumVec r;
        r.approx = v;
        return r;
    }
    bool is_exact() const { return exact.has_value(); }
};

using NumVec2 = NumVec<2>;
using NumVec3 = NumVec<3>;

inline NumVec3 exact_vec3(long x, long y, long z) {
    return NumVec3::of(Vec3r{Rational(x), Rational(y), Rational(z)});
}
inline NumVec3 exact_vec3(const Rational& x, const Rational& y, const Rational& z) {
    return NumVec3::of(Vec3r{x, y, z});
}

template <int N>
struct ExactMotion {
    Mat<Rational, N> linear;
    Vec<Rational, N> translation;
};

enum class MotionKind { Translation, Rotation, Reflection, Screw, Glide };

// Construction record, kept for serialization and for recognizing the
// screw-quotient family. Products do not carry one.
template <int N>
struct MotionRecipe {
    MotionKind kind{};
    NumVec<N> axis{};   // rotation/screw axis; mirror normal (3D) or mirror line (2D)
    NumVec<N> shift{};  // translation vector / glide slide
    Angle angle{};
    Rational pitch{0};
};

// Rigid motion x ↦ linear·x + translation with orthogonal linear part.
// The double fields are always valid; `exact` refines them when every entry
// is rational.
template <int N>
struct Motion {
    Mat<double, N> linear = Mat<double, N>::identity();
    Vec<double, N> translation{};
    std::optional<ExactMotion<N>> exact = ExactMotion<N>{Mat<Rational, N>::identity(), {}};
    std::optional<MotionRecipe<N>> recipe;

    Vec<double, N> operator()(const Vec<double, N>& x) const { return linear * x + translation; }
    bool is_exact() const { return exact.has_value(); }
};

using EuclIsometry = Motion<3>;
using PlaneIsometry = Motion<2>;

template <int N>
Motion<N> make_motion(const Mat<double, N>& linear, const Vec<double, N>& translation);
template <int N>
Motion<N> make_motion_exact(const Mat<Rational, N>& linear, const Vec<Rational, N>& translation);

// a ∘ b (apply b first).
template <int N>
Motion<N> compose(const Motion<N>& a, const Motion<N>& b);
template <int N>
Motion<N> inverse(const Motion<N>& g);
template <int N>
double linear_det(const Motion<N>& g);
template <int N>
bool is_identity(const Motion<N>& g, double tol = 1e-9);

// -- Constructors named after the classical generators ----------------------

EuclIsometry translation3(const NumVec3& v);
// Axis through the origin.
EuclIsometry rotation3(const NumVec3& axis, const Angle& angle);
// Rotation about `axis` followed by translation through pitch·axis.
EuclIsometry screw3(const NumVec3& axis, const Angle& angle, const Rational& pitch);
// Reflection in the plane through the origin with the given normal.
EuclIsometry reflection3(const NumVec3& normal);
// Reflection composed with an in-plane translation (slide ⊥ normal).
EuclIsometry glide3(const NumVec3& normal, const NumVec3& slide);

PlaneIsometry translation2(const NumVec2& v);
PlaneIsometry rotation_origin2(const Angle& angle);
// Reflection in the line spanned by `dir`.
PlaneIsometry line_reflection2(const NumVec2& dir);
PlaneIsometry glide2(const NumVec2& dir, const NumVec2& slide);

// -- Fixed sets --------------------------------------------------------------

enum class FixedSetKind { Empty, Point, Line, Plane, All };

template <int N>
struct FixedSet {
    FixedSetKind kind = FixedSetKind::Empty;
    Vec<double, N> point{};      // a representative when nonempty
    Vec<double, N> direction{};  // line direction / plane normal when relevant
};

// Solves g(x) = x; exact rank decision in the rational case, singular-value
// threshold 1e-9 otherwise.
template <int N>
FixedSet<N> fixed_point_set(const Motion<N>& g);

// -- Rational dependence ------------------------------------------------------

struct RelationOptions {
    long max_denominator = 1'000'000;
    double accept_tol = 1e-13;  // |x - p/q| acceptance for float coefficients
    double zero_tol = 1e-9;     // residual tolerance when verifying a relation
};

struct RelationResult {
    bool related = false;
    std::vector<long long> relation;  // Σ relation[i]·v_i = 0 when related
    bool bounded_search = false;      // float inputs: no relation below the bound
};

// Integer linear dependence of the given vectors; exact over ℚ when all
// inputs are exact, bounded continued-fraction search otherwise.
template <int N>
RelationResult rational_relation(const std::vector<NumVec<N>>& vs,
                                 const RelationOptions& options = {});

// -- Descriptions -------------------------------------------------------------

std::string describe(const EuclIsometry& g);
std::string describe(const PlaneIsometry& g);

// Geometric reading of a plane isometry, used by the orbifold machinery.
struct PlaneIsometryClass {
    enum class Type { Identity, Translation, Rotation, Reflection, Glide } type;
    Vec2d rotation_center{};
    double rotation_angle = 0;  // in (0, 2π)
    Vec2d axis_direction{};     // reflection/glide mirror direction
    Vec2d translation{};
};
PlaneIsometryClass classify_plane_isometry(const PlaneIsometry& g, double tol = 1e-9);

extern template struct Motion<2>;
extern template struct Motion<3>;

}  // namespace spaceform
