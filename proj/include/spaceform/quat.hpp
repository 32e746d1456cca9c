#pragma once

#include <string>
#include <vector>

#include "spaceform/linalg.hpp"

namespace spaceform {

struct Quaternion {
    double w = 1, x = 0, y = 0, z = 0;

    Quaternion() = default;
    Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z, w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x, w * o.z + x * o.y - y * o.x + z * o.w};
    }
    Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    Quaternion operator-() const { return {-w, -x, -y, -z}; }
    Quaternion conj() const { return {w, -x, -y, -z}; }
    double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Quaternion scaled(double s) const { return {w * s, x * s, y * s, z * s}; }
    Quaternion normalized() const { return scaled(1.0 / norm()); }
    // Inverse of a unit quaternion.
    Quaternion inv() const { return conj(); }

    Vec4d vec() const { return Vec4d{w, x, y, z}; }
    static Quaternion from_vec(const Vec4d& v) { return {v[0], v[1], v[2], v[3]}; }
    // e^{iθ} in the span{1,i} circle.
    static Quaternion polar(double theta) { return {std::cos(theta), std::sin(theta), 0, 0}; }
};

inline bool unit_within(const Quaternion& q, double tol) { return std::abs(q.norm() - 1.0) <= tol; }

// The conjugation a ↦ q a q⁻¹ on imaginary quaternions as a rotation matrix.
// Two-to-one: q and −q give the same matrix. Throws on non-unit input.
Mat3d rotation_from_quaternion(const Quaternion& q);

// An orientation-preserving isometry of S³: x ↦ q1 · x · q2⁻¹ with (q1,q2)
// identified with (−q1,−q2). Canonical representative: first component of q1
// larger than 1e-7 in absolute value is made positive.
struct SO4Element {
    Quaternion q1, q2;

    SO4Element() = default;
    SO4Element(const Quaternion& a, const Quaternion& b);

    Quaternion apply(const Quaternion& x) const { return q1 * x * q2.inv(); }
    Vec4d apply(const Vec4d& x) const { return apply(Quaternion::from_vec(x)).vec(); }
    Mat4d matrix() const;
};

SO4Element so4_compose(const SO4Element& a, const SO4Element& b);
SO4Element so4_inverse(const SO4Element& g);
bool so4_is_identity(const SO4Element& g, double tol = 1e-9);

// Factoring homomorphism SO(4) → SO(3)×SO(3), (q1,q2) ↦ (ψq1, ψq2); its
// kernel is {±I}.
std::pair<Mat3d, Mat3d> factor_rotations(const SO4Element& g);

// Lift membership tests for the two Hopf-compatible subgroups: the left or
// right factor lies in the circle span{1,i} (tolerance 1e-9 on the other two
// components).
bool left_factor_in_circle(const SO4Element& g, double tol = 1e-9);
bool right_factor_in_circle(const SO4Element& g, double tol = 1e-9);
// q1 ∈ span{j,k}, the other coset of the circle inside its normalizer.
bool left_factor_in_circle_j(const SO4Element& g, double tol = 1e-9);

std::string describe(const SO4Element& g);

// -- Finite rotation groups ---------------------------------------------------

enum class RotationGroupType { Cyclic, Dihedral, Tetrahedral, Octahedral, Icosahedral };

struct RotationGroupClass {
    RotationGroupType type = RotationGroupType::Cyclic;
    int parameter = 1;  // n for Cyclic(n), m for Dihedral(m); unused otherwise
    std::string name() const;
};

// Classifies a finite subgroup of SO(3) given as an explicit element list.
// Checks closure under product and inverse; throws if the set is not a group
// or matches no case of the classification.
RotationGroupClass classify_rotation_group(const std::vector<Mat3d>& elements, double tol = 1e-8);

// Order of a finite-order rotation matrix (smallest n ≥ 1 with Rⁿ = I);
// throws past the cap.
int rotation_order(const Mat3d& r, int cap = 360, double tol = 1e-8);

// -- Standard finite quaternion groups (generators) ---------------------------

// ⟨e^{iπ/m}, j⟩, order 4m.
std::vector<Quaternion> binary_dihedral_generators(int m);
// Orders 24, 48, 120.
std::vector<Quaternion> binary_tetrahedral_generators();
std::vector<Quaternion> binary_octahedral_generators();
std::vector<Quaternion> binary_icosahedral_generators();

}  // namespace spaceform
