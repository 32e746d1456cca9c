#include "spaceform/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace spaceform {

Vec3d hopf_leaf_projection(const Quaternion& x) {
    Quaternion n = x.conj() * Quaternion{0, 1, 0, 0} * x;
    return Vec3d{n.x, n.y, n.z};
}

std::string surface_name(Orbifold2::Surface s) {
    switch (s) {
        case Orbifold2::Surface::Plane: return "R^2";
        case Orbifold2::Surface::Sphere: return "S^2";
        case Orbifold2::Surface::Disc: return "D^2";
        case Orbifold2::Surface::Cylinder: return "Cylinder";
        case Orbifold2::Surface::Torus: return "T^2";
        case Orbifold2::Surface::MoebiusBand: return "Moebius";
        case Orbifold2::Surface::KleinBottle: return "Klein";
        case Orbifold2::Surface::ProjectivePlane: return "P^2";
    }
    return "?";
}

std::string Orbifold2::name() const {
    std::string s = surface_name(underlying);
    if (!cone_orders.empty()) {
        s += "(";
        for (std::size_t i = 0; i < cone_orders.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(cone_orders[i]);
        }
        s += ")";
    }
    if (has_reflector) s += " with reflector boundary";
    return s;
}

// -- Condition (a) -------------------------------------------------------------

ConditionReport preserves_vertical_foliation(const std::vector<EuclIsometry>& generators) {
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const auto& g = generators[k];
        bool ok;
        if (g.exact) {
            const auto& a = g.exact->linear;
            ok = a(0, 2) == 0 && a(1, 2) == 0 && (a(2, 2) == 1 || a(2, 2) == -1);
        } else {
            const auto& a = g.linear;
            ok = std::abs(a(0, 2)) <= 1e-9 && std::abs(a(1, 2)) <= 1e-9 &&
                 std::abs(std::abs(a(2, 2)) - 1.0) <= 1e-9;
        }
        if (!ok) {
            Vec3d image{g.linear(0, 2), g.linear(1, 2), g.linear(2, 2)};
            std::ostringstream os;
            os.precision(6);
            os << "generator " << (k + 1) << " maps the vertical direction to (" << image[0] << ","
               << image[1] << "," << image[2] << "); the vertical leaf through the origin is not "
               << "sent to a vertical leaf";
            return {false, os.str()};
        }
    }
    return {true, ""};
}

namespace {

std::string mat_key(const Mat3d& m) {
    std::string bytes;
    bytes.reserve(9 * sizeof(std::int64_t));
    for (double v : m.a) {
        std::int64_t q = llround(v * 1e8);
        bytes.append(reinterpret_cast<const char*>(&q), sizeof(q));
    }
    return bytes;
}

std::vector<Mat3d> dedup_rotations(const std::vector<Mat3d>& in) {
    std::vector<Mat3d> out;
    std::vector<std::string> keys;
    for (const auto& m : in) {
        std::string k = mat_key(m);
        bool seen = false;
        for (const auto& k2 : keys) seen = seen || k2 == k;
        if (!seen) {
            keys.push_back(std::move(k));
            out.push_back(m);
        }
    }
    return out;
}

int count_fixing(const std::vector<Mat3d>& group, const Vec3d& p, double tol = 1e-6) {
    int n = 0;
    for (const auto& m : group)
        if (norm(m * p - p) <= tol) ++n;
    return n;
}

}  // namespace

ConditionReport preserves_hopf_foliation(const std::vector<SO4Element>& generators,
                                         const Enumeration<SO4Element>& en) {
    bool all_left = true;
    for (const auto& g : generators) all_left = all_left && left_factor_in_circle(g);
    if (all_left) return {true, ""};

    for (std::size_t k = 0; k < generators.size(); ++k) {
        if (!right_factor_in_circle(generators[k])) {
            std::ostringstream os;
            os << "generator " << (k + 1)
               << " lies in neither circle factor; it moves the Hopf leaf through 1 off the "
                  "foliation";
            return {false, os.str()};
        }
    }
    if (!en.complete)
        return {false, "group lies in the second circle factor but its enumeration did not close; "
                       "cannot certify the dihedral condition"};

    std::vector<Mat3d> h1, h2;
    for (const auto& g : en.elements) {
        h1.push_back(rotation_from_quaternion(g.q1));
        h2.push_back(rotation_from_quaternion(g.q2));
    }
    h1 = dedup_rotations(h1);
    h2 = dedup_rotations(h2);

    RotationGroupClass c2;
    try {
        c2 = classify_rotation_group(h2);
    } catch (const std::exception& e) {
        return {false, std::string("H2 classification failed: ") + e.what()};
    }
    if (c2.type != RotationGroupType::Cyclic)
        return {false, "H2 is " + c2.name() + ", not cyclic; the second-factor case does not apply"};

    // H1 must be dihedral with its rotation subgroup about the circle axis:
    // exactly half of H1 fixes e1.
    int fix = count_fixing(h1, Vec3d{1, 0, 0});
    if (h1.size() % 2 != 0 || fix != static_cast<int>(h1.size()) / 2) {
        return {false,
                "H1 is not dihedral with cyclic subgroup about the circle axis (|H1|=" +
                    std::to_string(h1.size()) + ", axis-fixing subgroup " + std::to_string(fix) + ")"};
    }
    return {true, ""};
}

// -- Induced leaf actions -------------------------------------------------------

PlaneIsometry induce_plane_motion(const EuclIsometry& g) {
    if (g.exact) {
        Mat2r b;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) b(i, j) = g.exact->linear(i, j);
        Vec2r t{g.exact->translation[0], g.exact->translation[1]};
        return make_motion_exact<2>(b, t);
    }
    Mat2d b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b(i, j) = g.linear(i, j);
    return make_motion<2>(b, Vec2d{g.translation[0], g.translation[1]});
}

LeafGroup induce_leaf_group_euclidean(const std::vector<EuclIsometry>& generators) {
    LeafGroup leaf;
    leaf.ambient = LeafGroup::Ambient::Plane;
    std::ostringstream os;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        leaf.plane_generators.push_back(induce_plane_motion(generators[i]));
        if (i) os << "; ";
        os << describe(leaf.plane_generators.back());
    }
    leaf.description = os.str().empty() ? "trivial" : os.str();
    return leaf;
}

namespace {

// ±ψ(q2): + for q1 in the circle, − for q1 in its j-coset.
Mat3d induced_sphere_matrix(const SO4Element& g) {
    if (left_factor_in_circle(g)) return rotation_from_quaternion(g.q2);
    if (left_factor_in_circle_j(g)) return rotation_from_quaternion(g.q2) * -1.0;
    throw std::domain_error("element does not preserve the Hopf foliation; condition (a) unverified");
}

}  // namespace

LeafGroup induce_leaf_group_spherical(const Enumeration<SO4Element>& en) {
    LeafGroup leaf;
    leaf.ambient = LeafGroup::Ambient::Sphere2;
    std::vector<Mat3d> all;
    for (const auto& g : en.elements) all.push_back(induced_sphere_matrix(g));
    leaf.sphere_elements = dedup_rotations(all);
    for (const auto& m : leaf.sphere_elements)
        if (det(m) < 0) leaf.sphere_has_orientation_reversing = true;

    std::vector<Mat3d> rotations;
    for (const auto& m : leaf.sphere_elements)
        if (det(m) > 0) rotations.push_back(m);
    std::ostringstream os;
    try {
        os << "induced group on S^2: rotation part " << classify_rotation_group(rotations).name();
    } catch (const std::exception&) {
        os << "induced group on S^2 of order " << leaf.sphere_elements.size();
    }
    if (leaf.sphere_has_orientation_reversing) os << " extended by antipodal elements";
    leaf.description = os.str();
    return leaf;
}

// -- Conditions (b1), (b2) ------------------------------------------------------

ConditionReport leaf_stabilizers_reflection_free(const LeafGroup& leaf,
                                                 const Enumeration<PlaneIsometry>* plane_en) {
    if (leaf.ambient == LeafGroup::Ambient::Plane) {
        for (std::size_t i = 1; i < plane_en->elements.size(); ++i) {
            const auto& g = plane_en->elements[i];
            if (linear_det(g) > 0) continue;
            if (fixed_point_set(g).kind != FixedSetKind::Empty)
                return {false, "leaf stabilizer contains the " + describe(g)};
        }
        return {true, ""};
    }
    for (const auto& m : leaf.sphere_elements) {
        if (det(m) > 0) continue;
        Mat3d d = m - Mat3d::identity();
        if (std::abs(det(d)) <= 1e-8)
            return {false, "orientation-reversing leaf element with fixed points (a reflection)"};
    }
    return {true, ""};
}

ConditionReport leaf_acts_discontinuously(const LeafGroup& leaf,
                                          const Enumeration<PlaneIsometry>* plane_en) {
    if (leaf.ambient == LeafGroup::Ambient::Sphere2) return {true, ""};
    auto verdict = verify_discreteness(leaf.plane_generators, *plane_en);
    if (verdict.discrete_within_budget) return {true, ""};
    return {false, "orbit near-return: " + verdict.witness_text};
}

// -- Orbifold classification ----------------------------------------------------

namespace {

struct PlaneLattice {
    int rank = 0;
    Vec2d b1{}, b2{};
};

PlaneLattice plane_translation_lattice(const Enumeration<PlaneIsometry>& en) {
    std::vector<std::pair<double, Vec2d>> by_norm;
    for (std::size_t i = 1; i < en.elements.size(); ++i) {
        const auto& g = en.elements[i];
        if (max_abs(g.linear - Mat2d::identity()) > 1e-9) continue;
        double n = norm(g.translation);
        if (n <= 1e-9) continue;
        by_norm.push_back({n, g.translation});
    }
    std::sort(by_norm.begin(), by_norm.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    PlaneLattice out;
    if (by_norm.empty()) return out;
    out.b1 = by_norm.front().second;
    out.rank = 1;
    for (const auto& [n, v] : by_norm) {
        double cr = std::abs(out.b1[0] * v[1] - out.b1[1] * v[0]);
        if (cr > 1e-6 * (norm(out.b1) * n)) {
            out.b2 = v;
            out.rank = 2;
            break;
        }
    }
    if (out.rank == 2) {
        // Gauss reduction of the pair.
        for (int iter = 0; iter < 64; ++iter) {
            if (out.b1.norm2() > out.b2.norm2()) std::swap(out.b1, out.b2);
            double mu = std::round(out.b2.dot(out.b1) / out.b1.norm2());
            if (mu == 0) break;
            out.b2 = out.b2 - out.b1 * mu;
        }
    }
    return out;
}

Vec2d reduce_mod_lattice(const Vec2d& c, const PlaneLattice& lat) {
    if (lat.rank == 0) return c;
    if (lat.rank == 1) {
        double f = c.dot(lat.b1) / lat.b1.norm2();
        return c - lat.b1 * std::floor(f + 1e-9);
    }
    double dt = lat.b1[0] * lat.b2[1] - lat.b1[1] * lat.b2[0];
    double x = (c[0] * lat.b2[1] - c[1] * lat.b2[0]) / dt;
    double y = (lat.b1[0] * c[1] - lat.b1[1] * c[0]) / dt;
    return c - lat.b1 * std::floor(x + 1e-9) - lat.b2 * std::floor(y + 1e-9);
}

double lattice_torus_distance(const Vec2d& a, const Vec2d& b, const PlaneLattice& lat) {
    double best = norm(a - b);
    if (lat.rank >= 1)
        for (int k = -1; k <= 1; ++k) {
            if (lat.rank == 1) {
                best = std::min(best, norm(a - b + lat.b1 * static_cast<double>(k)));
            } else {
                for (int l = -1; l <= 1; ++l)
                    best = std::min(best, norm(a - b + lat.b1 * static_cast<double>(k) +
                                               lat.b2 * static_cast<double>(l)));
            }
        }
    return best;
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    }
    int find(int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

Orbifold2 classify_plane_orbifold(const LeafGroup& leaf, const Enumeration<PlaneIsometry>& en) {
    // Reflections are terminal.
    for (std::size_t i = 1; i < en.elements.size(); ++i) {
        const auto& g = en.elements[i];
        if (linear_det(g) < 0 && fixed_point_set(g).kind != FixedSetKind::Empty) {
            Orbifold2 o;
            o.has_reflector = true;
            return o;
        }
    }

    PlaneLattice lat = plane_translation_lattice(en);
    bool reversing = false;
    for (const auto& g : en.elements) reversing = reversing || linear_det(g) < 0;

    // Distinct rotation centers, reduced modulo the translation lattice.
    std::vector<Vec2d> centers;
    for (const auto& g : en.elements) {
        auto cls = classify_plane_isometry(g);
        if (cls.type != PlaneIsometryClass::Type::Rotation) continue;
        Vec2d red = reduce_mod_lattice(cls.rotation_center, lat);
        bool seen = false;
        for (const auto& c : centers) seen = seen || lattice_torus_distance(c, red, lat) < 1e-5;
        if (!seen) centers.push_back(red);
    }

    // Stabilizer orders: elements fixing the center as a point of the plane
    // (the isotropy group, not the mod-lattice stabilizer).
    std::vector<int> stab(centers.size(), 0);
    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
        for (const auto& g : en.elements) {
            if (linear_det(g) < 0) continue;
            if (norm(g(centers[ci]) - centers[ci]) < 1e-6) ++stab[ci];
        }
    }

    // Orbits of centers under the induced finite action (iterate generator maps
    // to a fixed point of the union-find).
    DisjointSet ds(static_cast<int>(centers.size()));
    std::vector<PlaneIsometry> maps = leaf.plane_generators;
    for (const auto& g : leaf.plane_generators) maps.push_back(inverse(g));
    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        for (std::size_t ci = 0; ci < centers.size(); ++ci) {
            for (const auto& g : maps) {
                Vec2d img = reduce_mod_lattice(g(centers[ci]), lat);
                for (std::size_t cj = 0; cj < centers.size(); ++cj) {
                    if (lattice_torus_distance(img, centers[cj], lat) < 1e-5) {
                        if (ds.find(static_cast<int>(ci)) != ds.find(static_cast<int>(cj))) {
                            ds.unite(static_cast<int>(ci), static_cast<int>(cj));
                            changed = true;
                        }
                        break;
                    }
                }
            }
        }
        if (!changed) break;
    }

    std::map<int, int> orbit_order;  // root -> stabilizer order
    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
        int root = ds.find(static_cast<int>(ci));
        auto it = orbit_order.find(root);
        if (it == orbit_order.end())
            orbit_order[root] = stab[ci];
        else if (it->second != stab[ci])
            throw UnclassifiedWithinBudget(
                "rotation-center orbit has inconsistent stabilizer orders within the budget");
    }

    std::vector<int> cones;
    int max_order = 1;
    for (const auto& [root, order] : orbit_order) {
        if (order >= 2) cones.push_back(order);
        max_order = std::max(max_order, order);
    }
    std::sort(cones.begin(), cones.end());

    auto expect = [&](std::vector<int> want, Orbifold2::Surface s) {
        std::sort(want.begin(), want.end());
        if (cones != want)
            throw UnclassifiedWithinBudget("cone census " + Orbifold2{s, cones, false}.name() +
                                           " does not match the lattice/point-group signature");
        Orbifold2 o;
        o.underlying = s;
        o.cone_orders = cones;
        return o;
    };

    switch (lat.rank) {
        case 0: {
            if (reversing)
                throw UnclassifiedWithinBudget("orientation-reversing leaf group without translations");
            Orbifold2 o;
            o.underlying = Orbifold2::Surface::Plane;
            if (max_order > 1) {
                if (cones.size() != 1)
                    throw UnclassifiedWithinBudget("multiple rotation centers without translations");
                o.cone_orders = cones;
            }
            return o;
        }
        case 1: {
            if (!reversing && max_order == 1) return expect({}, Orbifold2::Surface::Cylinder);
            if (!reversing && max_order == 2) return expect({2, 2}, Orbifold2::Surface::Disc);
            if (reversing && max_order == 1) return expect({}, Orbifold2::Surface::MoebiusBand);
            throw UnclassifiedWithinBudget("rank-1 leaf group outside the classified signatures");
        }
        case 2: {
            if (!reversing) {
                switch (max_order) {
                    case 1: return expect({}, Orbifold2::Surface::Torus);
                    case 2: return expect({2, 2, 2, 2}, Orbifold2::Surface::Sphere);
                    case 3: return expect({3, 3, 3}, Orbifold2::Surface::Sphere);
                    case 4: return expect({2, 4, 4}, Orbifold2::Surface::Sphere);
                    case 6: return expect({2, 3, 6}, Orbifold2::Surface::Sphere);
                    default:
                        throw UnclassifiedWithinBudget("rotation order " + std::to_string(max_order) +
                                                       " incompatible with a plane lattice");
                }
            }
            if (max_order == 1) return expect({}, Orbifold2::Surface::KleinBottle);
            if (max_order == 2) return expect({2, 2}, Orbifold2::Surface::ProjectivePlane);
            throw UnclassifiedWithinBudget("reversing rank-2 leaf group outside the classified signatures");
        }
        default:
            throw UnclassifiedWithinBudget("unexpected lattice rank");
    }
}

Vec3d rotation_axis(const Mat3d& m) {
    Vec3d skew{m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
    if (norm(skew) > 1e-6) return normalized(skew);
    Mat3d api = m + Mat3d::identity();
    int best = 0;
    double best_norm = -1;
    for (int j = 0; j < 3; ++j) {
        Vec3d col{api(0, j), api(1, j), api(2, j)};
        if (norm(col) > best_norm) {
            best_norm = norm(col);
            best = j;
        }
    }
    return normalized(Vec3d{api(0, best), api(1, best), api(2, best)});
}

Orbifold2 classify_sphere_orbifold(const LeafGroup& leaf) {
    std::vector<Mat3d> rotations, reversing;
    for (const auto& m : leaf.sphere_elements) {
        if (det(m) > 0)
            rotations.push_back(m);
        else
            reversing.push_back(m);
    }
    for (const auto& m : reversing) {
        Mat3d d = m - Mat3d::identity();
        if (std::abs(det(d)) <= 1e-8) {
            Orbifold2 o;
            o.has_reflector = true;
            return o;
        }
    }

    // Poles of all non-trivial rotations.
    std::vector<Vec3d> poles;
    for (const auto& m : rotations) {
        if (max_abs(m - Mat3d::identity()) <= 1e-8) continue;
        Vec3d a = rotation_axis(m);
        for (const Vec3d& p : {a, -a}) {
            bool seen = false;
            for (const auto& q : poles) seen = seen || norm(p - q) < 1e-5;
            if (!seen) poles.push_back(p);
        }
    }

    std::vector<int> stab(poles.size(), 0);
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (const auto& m : rotations)
            if (norm(m * poles[i] - poles[i]) < 1e-5) ++stab[i];

    DisjointSet ds(static_cast<int>(poles.size()));
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (const auto& m : leaf.sphere_elements) {
            Vec3d img = m * poles[i];
            for (std::size_t j = 0; j < poles.size(); ++j)
                if (norm(img - poles[j]) < 1e-5) {
                    ds.unite(static_cast<int>(i), static_cast<int>(j));
                    break;
                }
        }

    std::map<int, int> orbit_order;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        int root = ds.find(static_cast<int>(i));
        auto it = orbit_order.find(root);
        if (it == orbit_order.end())
            orbit_order[root] = stab[i];
        else if (it->second != stab[i])
            throw UnclassifiedWithinBudget("pole orbit with inconsistent stabilizer orders");
    }

    Orbifold2 o;
    o.underlying = reversing.empty() ? Orbifold2::Surface::Sphere
                                     : Orbifold2::Surface::ProjectivePlane;
    for (const auto& [root, order] : orbit_order)
        if (order >= 2) o.cone_orders.push_back(order);
    std::sort(o.cone_orders.begin(), o.cone_orders.end());

    // Orbifold Euler characteristic must equal χ(S²)/|Γ′|.
    double chi = (o.underlying == Orbifold2::Surface::Sphere ? 2.0 : 1.0);
    for (int q : o.cone_orders) chi -= 1.0 - 1.0 / q;
    double expected = 2.0 / static_cast<double>(leaf.sphere_elements.size());
    if (std::abs(chi - expected) > 1e-9)
        throw UnclassifiedWithinBudget("orbifold Euler characteristic mismatch in the leaf census");
    return o;
}

}  // namespace

Orbifold2 classify_leaf_orbifold(const LeafGroup& leaf, const Enumeration<PlaneIsometry>* plane_en) {
    if (leaf.ambient == LeafGroup::Ambient::Plane) {
        if (plane_en == nullptr) throw std::invalid_argument("plane leaf group needs an enumeration");
        return classify_plane_orbifold(leaf, *plane_en);
    }
    return classify_sphere_orbifold(leaf);
}

// -- Pipeline -------------------------------------------------------------------

std::string VerificationReport::outcome_text() const {
    switch (outcome) {
        case Outcome::Classified: return "classified";
        case Outcome::FailsFreeness: return "action is not free";
        case Outcome::FailsDiscreteness: return "group is not discrete";
        case Outcome::FailsA: return "condition (a) fails: foliation not preserved";
        case Outcome::FailsB1: return "condition (b1) fails: reflection in a leaf stabilizer";
        case Outcome::FailsB2: return "condition (b2) fails: leaf action not discontinuous";
        case Outcome::Unclassified: return "unclassified within budget";
    }
    return "?";
}

std::string VerificationReport::failing_condition() const {
    switch (outcome) {
        case Outcome::FailsA: return "a";
        case Outcome::FailsB1: return "b1";
        case Outcome::FailsB2: return "b2";
        case Outcome::FailsFreeness: return "free";
        case Outcome::FailsDiscreteness: return "discrete";
        default: return "";
    }
}

namespace {

std::pair<double, double> structural_residuals_plane(const Enumeration<EuclIsometry>& en,
                                                     std::mt19937_64& rng, int samples) {
    if (en.elements.size() < 1) return {0, 0};
    std::uniform_int_distribution<std::size_t> pick(0, en.elements.size() - 1);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double hom = 0, equi = 0;
    for (int s = 0; s < samples; ++s) {
        const auto& g = en.elements[pick(rng)];
        const auto& h = en.elements[pick(rng)];
        PlaneIsometry lg = induce_plane_motion(g);
        PlaneIsometry lh = induce_plane_motion(h);
        PlaneIsometry lgh = induce_plane_motion(compose(g, h));
        PlaneIsometry prod = compose(lg, lh);
        hom = std::max(hom, max_abs(lgh.linear - prod.linear));
        hom = std::max(hom, max_abs(lgh.translation - prod.translation));

        Vec3d x{coord(rng), coord(rng), coord(rng)};
        Vec2d lhs = vertical_leaf_projection(g(x));
        Vec2d rhs = lg(vertical_leaf_projection(x));
        equi = std::max(equi, max_abs(lhs - rhs));
    }
    return {hom, equi};
}

std::pair<double, double> structural_residuals_sphere(const Enumeration<SO4Element>& en,
                                                      std::mt19937_64& rng, int samples) {
    if (en.elements.size() < 1) return {0, 0};
    std::uniform_int_distribution<std::size_t> pick(0, en.elements.size() - 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double hom = 0, equi = 0;
    for (int s = 0; s < samples; ++s) {
        const auto& g = en.elements[pick(rng)];
        const auto& h = en.elements[pick(rng)];
        Mat3d lg = induced_sphere_matrix(g);
        Mat3d lh = induced_sphere_matrix(h);
        Mat3d lgh = induced_sphere_matrix(so4_compose(g, h));
        hom = std::max(hom, max_abs(lgh - lg * lh));

        Quaternion x{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        x = x.normalized();
        Vec3d lhs = hopf_leaf_projection(g.apply(x));
        Vec3d rhs = lg * hopf_leaf_projection(x);
        equi = std::max(equi, max_abs(lhs - rhs));
    }
    return {hom, equi};
}

}  // namespace

VerificationReport run_pipeline(const GroupSpec& spec, const EnumerationBudget& budget,
                                std::uint64_t seed, int structural_samples) {
    spec.validate();
    VerificationReport rep;
    rep.label = spec.label;
    rep.budget = budget;
    rep.seed = seed;
    std::mt19937_64 rng(seed);

    if (spec.ambient == GroupSpec::Ambient::Euclidean3) {
        auto en = enumerate_group(spec.euclidean_generators, budget, /*allow_truncation=*/true);
        rep.enumeration_complete = en.complete;
        if (en.truncated) rep.note = "enumeration truncated at max_elements; verdicts are partial";

        auto free = verify_free_action(en);
        rep.free_action = {free.free_within_budget,
                           free.free_within_budget ? "" : "fixed points of " + free.witness_text};
        auto disc = verify_discreteness(spec.euclidean_generators, en);
        rep.discreteness = {disc.discrete_within_budget,
                            disc.discrete_within_budget ? "" : disc.witness_text};
        if (!rep.free_action.holds) {
            rep.outcome = VerificationReport::Outcome::FailsFreeness;
            return rep;
        }
        if (!rep.discreteness.holds) {
            rep.outcome = VerificationReport::Outcome::FailsDiscreteness;
            return rep;
        }

        rep.condition_a = preserves_vertical_foliation(spec.euclidean_generators);
        if (!rep.condition_a.holds) {
            rep.outcome = VerificationReport::Outcome::FailsA;
            return rep;
        }

        LeafGroup leaf = induce_leaf_group_euclidean(spec.euclidean_generators);
        rep.leaf_description = leaf.description;
        auto plane_en = enumerate_group(leaf.plane_generators, budget, /*allow_truncation=*/true);

        rep.condition_b1 = leaf_stabilizers_reflection_free(leaf, &plane_en);
        if (!rep.condition_b1.holds) {
            rep.outcome = VerificationReport::Outcome::FailsB1;
            return rep;
        }
        rep.condition_b2 = leaf_acts_discontinuously(leaf, &plane_en);
        if (!rep.condition_b2.holds) {
            rep.outcome = VerificationReport::Outcome::FailsB2;
            return rep;
        }

        auto [hom, equi] = structural_residuals_plane(en, rng, structural_samples);
        rep.homomorphism_residual = hom;
        rep.equivariance_residual = equi;

        try {
            rep.orbifold = classify_leaf_orbifold(leaf, &plane_en);
            rep.outcome = VerificationReport::Outcome::Classified;
        } catch (const UnclassifiedWithinBudget& e) {
            rep.outcome = VerificationReport::Outcome::Unclassified;
            rep.note = e.what();
        }
        return rep;
    }

    auto en = enumerate_group(spec.spherical_generators, budget, /*allow_truncation=*/true);
    rep.enumeration_complete = en.complete;
    if (en.truncated) rep.note = "enumeration truncated at max_elements; verdicts are partial";

    auto free = verify_free_action(en);
    rep.free_action = {free.free_within_budget,
                       free.free_within_budget ? "" : "fixed points of " + free.witness_text};
    auto disc = verify_discreteness(spec.spherical_generators, en);
    rep.discreteness = {disc.discrete_within_budget,
                        disc.discrete_within_budget ? "" : disc.witness_text};
    if (!rep.free_action.holds) {
        rep.outcome = VerificationReport::Outcome::FailsFreeness;
        return rep;
    }
    if (!rep.discreteness.holds) {
        rep.outcome = VerificationReport::Outcome::FailsDiscreteness;
        return rep;
    }

    rep.condition_a = preserves_hopf_foliation(spec.spherical_generators, en);
    if (!rep.condition_a.holds) {
        rep.outcome = VerificationReport::Outcome::FailsA;
        return rep;
    }

    LeafGroup leaf = induce_leaf_group_spherical(en);
    rep.leaf_description = leaf.description;
    rep.condition_b1 = leaf_stabilizers_reflection_free(leaf, nullptr);
    if (!rep.condition_b1.holds) {
        rep.outcome = VerificationReport::Outcome::FailsB1;
        return rep;
    }
    rep.condition_b2 = leaf_acts_discontinuously(leaf, nullptr);
    if (!rep.condition_b2.holds) {
        rep.outcome = VerificationReport::Outcome::FailsB2;
        return rep;
    }

    auto [hom, equi] = structural_residuals_sphere(en, rng, structural_samples);
    rep.homomorphism_residual = hom;
    rep.equivariance_residual = equi;

    try {
        rep.orbifold = classify_leaf_orbifold(leaf, nullptr);
        rep.outcome = VerificationReport::Outcome::Classified;
    } catch (const UnclassifiedWithinBudget& e) {
        rep.outcome = VerificationReport::Outcome::Unclassified;
        rep.note = e.what();
    }
    return rep;
}

}  // namespace spaceform
