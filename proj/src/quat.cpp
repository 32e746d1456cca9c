#include "spaceform/quat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spaceform {

Mat3d rotation_from_quaternion(const Quaternion& q) {
    if (!unit_within(q, 1e-9)) throw std::invalid_argument("rotation_from_quaternion: non-unit quaternion");
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    Mat3d r;
    r(0, 0) = 1 - 2 * (y * y + z * z);
    r(0, 1) = 2 * (x * y - w * z);
    r(0, 2) = 2 * (x * z + w * y);
    r(1, 0) = 2 * (x * y + w * z);
    r(1, 1) = 1 - 2 * (x * x + z * z);
    r(1, 2) = 2 * (y * z - w * x);
    r(2, 0) = 2 * (x * z - w * y);
    r(2, 1) = 2 * (y * z + w * x);
    r(2, 2) = 1 - 2 * (x * x + y * y);
    return r;
}

SO4Element::SO4Element(const Quaternion& a, const Quaternion& b) {
    if (!unit_within(a, 1e-6) || !unit_within(b, 1e-6))
        throw std::invalid_argument("SO4Element: non-unit quaternion");
    q1 = a.normalized();
    q2 = b.normalized();
    // Joint sign canonicalization. The 1e-7 floor keeps the choice stable
    // under float noise in components that are exactly zero.
    const double comps[4] = {q1.w, q1.x, q1.y, q1.z};
    for (double c : comps) {
        if (std::abs(c) > 1e-7) {
            if (c < 0) {
                q1 = -q1;
                q2 = -q2;
            }
            break;
        }
    }
}

Mat4d SO4Element::matrix() const {
    static const Quaternion basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    Mat4d m;
    for (int j = 0; j < 4; ++j) {
        Vec4d col = apply(basis[j].vec());
        for (int i = 0; i < 4; ++i) m(i, j) = col[i];
    }
    return m;
}

SO4Element so4_compose(const SO4Element& a, const SO4Element& b) {
    return SO4Element(a.q1 * b.q1, a.q2 * b.q2);
}

SO4Element so4_inverse(const SO4Element& g) { return SO4Element(g.q1.inv(), g.q2.inv()); }

bool so4_is_identity(const SO4Element& g, double tol) {
    auto near = [&](const Quaternion& q, double sign) {
        return std::abs(q.w - sign) <= tol && std::abs(q.x) <= tol && std::abs(q.y) <= tol &&
               std::abs(q.z) <= tol;
    };
    return (near(g.q1, 1) && near(g.q2, 1)) || (near(g.q1, -1) && near(g.q2, -1));
}

std::pair<Mat3d, Mat3d> factor_rotations(const SO4Element& g) {
    return {rotation_from_quaternion(g.q1), rotation_from_quaternion(g.q2)};
}

bool left_factor_in_circle(const SO4Element& g, double tol) {
    return std::abs(g.q1.y) <= tol && std::abs(g.q1.z) <= tol;
}

bool right_factor_in_circle(const SO4Element& g, double tol) {
    return std::abs(g.q2.y) <= tol && std::abs(g.q2.z) <= tol;
}

bool left_factor_in_circle_j(const SO4Element& g, double tol) {
    return std::abs(g.q1.w) <= tol && std::abs(g.q1.x) <= tol;
}

std::string describe(const SO4Element& g) {
    std::ostringstream os;
    os.precision(6);
    os << "(q1=[" << g.q1.w << "," << g.q1.x << "," << g.q1.y << "," << g.q1.z << "], q2=[" << g.q2.w
       << "," << g.q2.x << "," << g.q2.y << "," << g.q2.z << "])";
    return os.str();
}

std::string RotationGroupClass::name() const {
    switch (type) {
        case RotationGroupType::Cyclic: return "Cyclic(" + std::to_string(parameter) + ")";
        case RotationGroupType::Dihedral: return "Dihedral(" + std::to_string(parameter) + ")";
        case RotationGroupType::Tetrahedral: return "Tetrahedral";
        case RotationGroupType::Octahedral: return "Octahedral";
        case RotationGroupType::Icosahedral: return "Icosahedral";
    }
    return "?";
}

int rotation_order(const Mat3d& r, int cap, double tol) {
    Mat3d p = r;
    for (int n = 1; n <= cap; ++n) {
        if (max_abs(p - Mat3d::identity()) <= tol) return n;
        p = p * r;
    }
    throw std::runtime_error("rotation_order: order exceeds cap");
}

RotationGroupClass classify_rotation_group(const std::vector<Mat3d>& elements, double tol) {
    if (elements.empty()) throw std::invalid_argument("classify_rotation_group: empty set");
    auto find = [&](const Mat3d& m) {
        for (const auto& e : elements)
            if (max_abs(m - e) <= tol) return true;
        return false;
    };
    for (const auto& e : elements) {
        if (std::abs(det(e) - 1.0) > 1e-6) throw std::invalid_argument("element is not a rotation");
        if (!find(e.transposed())) throw std::invalid_argument("set not closed under inverse");
    }
    for (const auto& a : elements)
        for (const auto& b : elements)
            if (!find(a * b)) throw std::invalid_argument("set not closed under product");

    const int n = static_cast<int>(elements.size());
    int max_order = 1;
    std::map<int, int> census;
    for (const auto& e : elements) {
        int o = rotation_order(e, 2 * n + 1, tol);
        census[o]++;
        max_order = std::max(max_order, o);
    }

    if (max_order == n) return {RotationGroupType::Cyclic, n};
    if (n == 12 && max_order == 3) return {RotationGroupType::Tetrahedral, 0};
    if (n == 24 && max_order == 4 && census.count(3)) return {RotationGroupType::Octahedral, 0};
    if (n == 60 && max_order == 5) return {RotationGroupType::Icosahedral, 0};
    if (n % 2 == 0 && max_order == n / 2) return {RotationGroupType::Dihedral, n / 2};
    throw std::runtime_error("classify_rotation_group: no classification matches (order " +
                             std::to_string(n) + ")");
}

std::vector<Quaternion> binary_dihedral_generators(int m) {
    if (m < 1) throw std::invalid_argument("binary dihedral parameter must be >= 1");
    return {Quaternion::polar(std::numbers::pi / m), Quaternion{0, 0, 1, 0}};
}

std::vector<Quaternion> binary_tetrahedral_generators() {
    return {Quaternion{0.5, 0.5, 0.5, 0.5}, Quaternion{0, 1, 0, 0}};
}

std::vector<Quaternion> binary_octahedral_generators() {
    const double s = std::numbers::sqrt2 / 2.0;
    return {Quaternion{0.5, 0.5, 0.5, 0.5}, Quaternion{s, s, 0, 0}};
}

std::vector<Quaternion> binary_icosahedral_generators() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    return {Quaternion{0.5, 0.5, 0.5, 0.5}, Quaternion{phi / 2, 1.0 / (2 * phi), 0.5, 0}};
}

}  // namespace spaceform
