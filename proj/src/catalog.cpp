#include "spaceform/catalog.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

namespace spaceform {

namespace {

const NumVec3 kE1 = exact_vec3(1, 0, 0);
const NumVec3 kE2 = exact_vec3(0, 1, 0);
const NumVec3 kE3 = exact_vec3(0, 0, 1);

void require(bool cond, const std::string& case_id, const std::string& clause) {
    if (!cond)
        throw std::invalid_argument("case " + case_id + ": constraint violated: " + clause);
}

bool parallel_to(const NumVec3& a, const Vec3d& b, double tol = 1e-9) {
    return norm(cross(a.approx, b)) <= tol * std::max(1.0, norm(a.approx) * norm(b));
}

bool perpendicular(const NumVec3& a, const NumVec3& b, double tol = 1e-9) {
    return std::abs(a.approx.dot(b.approx)) <= tol;
}

bool independent3(const NumVec3& a, const NumVec3& b, const NumVec3& c) {
    Mat3d m;
    for (int i = 0; i < 3; ++i) {
        m(i, 0) = a.approx[i];
        m(i, 1) = b.approx[i];
        m(i, 2) = c.approx[i];
    }
    return std::abs(det(m)) > 1e-9;
}

bool independent2(const NumVec3& a, const NumVec3& b) {
    return norm(cross(a.approx, b.approx)) > 1e-9;
}

NumVec2 project(const NumVec3& v) {
    if (v.is_exact()) return NumVec2::of(Vec2r{(*v.exact)[0], (*v.exact)[1]});
    return NumVec2::of(Vec2d{v.approx[0], v.approx[1]});
}

bool projections_rationally_related(const std::vector<NumVec3>& vs) {
    std::vector<NumVec2> planar;
    for (const auto& v : vs) planar.push_back(project(v));
    return rational_relation<2>(planar).related;
}

// (R_θ(axis), t_shift): rotation about the axis through the origin followed
// by a translation that need not lie along the axis.
EuclIsometry rotation_then_translation(const NumVec3& axis, const Angle& angle,
                                       const NumVec3& shift) {
    EuclIsometry g = compose(translation3(shift), rotation3(axis, angle));
    g.recipe = MotionRecipe<3>{MotionKind::Rotation, axis, shift, angle, Rational(0)};
    return g;
}

NumVec3 num_scale(const NumVec3& v, const Rational& s) {
    if (v.is_exact())
        return NumVec3::of(Vec3r{(*v.exact)[0] * s, (*v.exact)[1] * s, (*v.exact)[2] * s});
    return NumVec3::of(v.approx * to_double(s));
}

NumVec3 num_add(const NumVec3& a, const NumVec3& b) {
    if (a.is_exact() && b.is_exact())
        return NumVec3::of(Vec3r{(*a.exact)[0] + (*b.exact)[0], (*a.exact)[1] + (*b.exact)[1],
                                 (*a.exact)[2] + (*b.exact)[2]});
    return NumVec3::of(a.approx + b.approx);
}

}  // namespace

GroupSpec build_euclidean_case(const std::string& id, const CaseParams& params) {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Euclidean3;
    spec.label = "4.1-" + id;
    const Vec3d e3{0, 0, 1};

    auto theta_or = [&](const Angle& dflt) { return params.theta.value_or(dflt); };

    if (id == "1a") {
        spec.identity_only = true;
        return spec;
    }
    if (id == "2a" || id == "2b" || id == "2c" || id == "2d" || id == "2e") {
        NumVec3 v = params.v.value_or(id == "2d" || id == "2e" ? kE1 : kE3);
        require(norm(v.approx) > 1e-9, spec.label, "v is non-zero");
        Angle theta;
        if (id == "2a" || id == "2d")
            theta = theta_or(Angle::turns(0, 1));
        else if (id == "2b" || id == "2e")
            theta = theta_or(Angle::turns(1, 2));
        else
            theta = theta_or(Angle::turns(1, 3));
        if (id == "2a" || id == "2b" || id == "2c")
            require(parallel_to(v, e3), spec.label, "v parallel to e3");
        if (id == "2a" || id == "2d") require(theta.is_zero(), spec.label, "theta = 0");
        if (id == "2b" || id == "2e")
            require(theta.is_rational() && theta.order() == 2, spec.label, "theta = pi");
        if (id == "2c")
            require(theta.is_rational() && theta.order() >= 3, spec.label,
                    "theta = 2pi p/q with q >= 3");
        if (id == "2d") require(!parallel_to(v, e3), spec.label, "v not parallel to e3");
        if (id == "2e")
            require(std::abs(v.approx.dot(e3)) <= 1e-9, spec.label, "v perpendicular to e3");
        spec.euclidean_generators.push_back(screw3(v, theta, Rational(1)));
        return spec;
    }
    if (id == "3a" || id == "3b") {
        NumVec3 v1 = params.v1.value_or(id == "3a" ? kE1 : exact_vec3(1, 0, 1));
        NumVec3 v2 = params.v2.value_or(id == "3a" ? kE2 : exact_vec3(2, 0, -1));
        require(independent2(v1, v2), spec.label, "v1, v2 linearly independent");
        bool e3_in_span = !independent3(v1, v2, NumVec3::of(Vec3d{0, 0, 1}));
        if (id == "3a") require(!e3_in_span, spec.label, "e3 not in span{v1,v2}");
        if (id == "3b") {
            require(e3_in_span, spec.label, "e3 in span{v1,v2}");
            require(projections_rationally_related({v1, v2}), spec.label,
                    "projected v1, v2 rationally related");
        }
        spec.euclidean_generators = {translation3(v1), translation3(v2)};
        return spec;
    }
    if (id == "4a" || id == "4b" || id == "4c") {
        NumVec3 v1 = params.v1.value_or(id == "4a" ? kE2 : (id == "4b" ? kE3 : kE1));
        NumVec3 v2 = params.v2.value_or(id == "4c" ? kE3 : kE1);
        require(independent2(v1, v2), spec.label, "v1, v2 linearly independent");
        if (id == "4a") {
            require(!parallel_to(v1, e3), spec.label, "v1 not parallel to e3");
            require(std::abs(v2.approx.dot(e3)) <= 1e-9, spec.label, "v2 in e3-perp");
        }
        if (id == "4b") {
            require(parallel_to(v1, e3), spec.label, "v1 parallel to e3");
            require(std::abs(v2.approx.dot(e3)) <= 1e-9, spec.label, "v2 in e3-perp");
        }
        if (id == "4c") require(parallel_to(v2, e3), spec.label, "v2 parallel to e3");
        spec.euclidean_generators = {translation3(v1), screw3(v2, Angle::turns(1, 2), Rational(1))};
        return spec;
    }
    if (id == "5a") {
        NumVec3 v1 = params.v1.value_or(kE1), v2 = params.v2.value_or(kE2),
                v3 = params.v3.value_or(kE3);
        require(independent3(v1, v2, v3), spec.label, "v1, v2, v3 linearly independent");
        require(projections_rationally_related({v1, v2, v3}), spec.label,
                "projected v1, v2, v3 rationally related");
        spec.euclidean_generators = {translation3(v1), translation3(v2), translation3(v3)};
        return spec;
    }
    if (id == "6a" || id == "6b") {
        NumVec3 v1 = params.v1.value_or(id == "6a" ? kE1 : kE3);
        NumVec3 v2 = params.v2.value_or(id == "6a" ? kE2 : kE1);
        NumVec3 v3 = params.v3.value_or(id == "6a" ? kE3 : kE2);
        require(independent3(v1, v2, v3), spec.label, "v1, v2, v3 linearly independent");
        require(perpendicular(v1, v2) && perpendicular(v1, v3), spec.label,
                "v1 perpendicular to span{v2,v3}");
        if (id == "6a") {
            require(std::abs(v1.approx.dot(e3)) <= 1e-9, spec.label, "v1 in e3-perp");
            require(projections_rationally_related({v2, v3}), spec.label,
                    "projected v2, v3 rationally related");
        } else {
            require(parallel_to(v1, e3), spec.label, "v1 parallel to e3");
        }
        spec.euclidean_generators = {screw3(v1, Angle::turns(1, 2), Rational(1, 2)),
                                     translation3(v1), translation3(v2), translation3(v3)};
        return spec;
    }
    if (id == "7a" || id == "8a" || id == "9a") {
        const bool hex = id != "8a";
        Angle theta = theta_or(id == "7a"   ? Angle::turns(1, 3)
                               : id == "8a" ? Angle::turns(1, 4)
                                            : Angle::turns(1, 12));  // printed value for 9a
        long order = theta.order();
        NumVec3 v1 = params.v1.value_or(kE3);
        NumVec3 v2 = params.v2.value_or(kE1);
        NumVec3 v3;
        if (params.v3) {
            v3 = *params.v3;
        } else if (id == "8a") {
            v3 = kE2;
        } else {
            // Lattice companion at the case's stated angle to v2.
            double ang = id == "7a" ? 2 * std::numbers::pi / 3
                                    : theta.value();  // 9a: printed pi/6 when theta = 2pi/12
            v3 = NumVec3::of(Vec3d{std::cos(ang), std::sin(ang), 0});
        }
        require(independent3(v1, v2, v3), spec.label, "v1, v2, v3 linearly independent");
        require(perpendicular(v1, v2) && perpendicular(v1, v3), spec.label,
                "v1 perpendicular to span{v2,v3}");
        require(parallel_to(v1, e3), spec.label, "v1 parallel to e3");
        if (hex)
            require(std::abs(norm(v2.approx) - norm(v3.approx)) <= 1e-9, spec.label,
                    "|v2| = |v3|");
        else
            require(perpendicular(v2, v3) &&
                        std::abs(norm(v2.approx) - norm(v3.approx)) <= 1e-9,
                    spec.label, "v1, v2, v3 mutually orthogonal with |v2| = |v3|");
        if (id == "7a") {
            double ang = std::acos(
                std::clamp(v2.approx.dot(v3.approx) / (norm(v2.approx) * norm(v3.approx)), -1.0, 1.0));
            require(std::abs(ang - 2 * std::numbers::pi / 3) <= 1e-9, spec.label,
                    "angle(v2,v3) = 2pi/3");
        }
        spec.euclidean_generators.push_back(screw3(v1, theta, Rational(1, order)));
        if (id != "7a") spec.euclidean_generators.push_back(translation3(v1));
        spec.euclidean_generators.push_back(translation3(v2));
        spec.euclidean_generators.push_back(translation3(v3));
        return spec;
    }
    if (id == "10a" || id == "10b" || id == "10c") {
        NumVec3 v1 = params.v1.value_or(id == "10a" ? kE3 : kE1);
        NumVec3 v2 = params.v2.value_or(id == "10b" ? kE3 : (id == "10a" ? kE1 : kE2));
        NumVec3 v3 = params.v3.value_or(id == "10c" ? kE3 : kE2);
        require(perpendicular(v1, v2) && perpendicular(v1, v3) && perpendicular(v2, v3),
                spec.label, "v1, v2, v3 mutually orthogonal");
        if (id == "10a") require(parallel_to(v1, e3), spec.label, "v1 parallel to e3");
        if (id == "10b") require(parallel_to(v2, e3), spec.label, "v2 parallel to e3");
        if (id == "10c") require(parallel_to(v3, e3), spec.label, "v3 parallel to e3");
        Angle half_turn = Angle::turns(1, 2);
        Rational half(1, 2);
        spec.euclidean_generators = {
            rotation_then_translation(v1, half_turn, num_scale(v1, half)),
            rotation_then_translation(v2, half_turn, num_scale(num_add(v2, v3), half)),
            rotation_then_translation(v3, half_turn,
                                      num_scale(num_add(num_add(v1, v2), v3), half)),
            translation3(v1), translation3(v2), translation3(v3)};
        return spec;
    }
    throw std::invalid_argument("unknown flat catalog case id: " + id);
}

GroupSpec lens_space_group(int p, int r) {
    if (p < 1) throw std::invalid_argument("lens parameter p must be positive");
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Sphere3;
    spec.label = "lens(" + std::to_string(p) + "," + std::to_string(r) + ")";
    double a = 2 * std::numbers::pi / p;
    spec.spherical_generators = {SO4Element(Quaternion::polar(a), Quaternion::polar(a * r))};
    return spec;
}

GroupSpec build_spherical_case(RotationGroupType h1, int h1_param, RotationGroupType h2,
                               int h2_param) {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Sphere3;
    auto left = [&](const Quaternion& q) { spec.spherical_generators.emplace_back(q, Quaternion{}); };
    auto right = [&](const Quaternion& q) { spec.spherical_generators.emplace_back(Quaternion{}, q); };

    if (h1 == RotationGroupType::Cyclic) {
        if (h1_param < 1) throw std::invalid_argument("H1 cyclic parameter must be positive");
        if (h1_param > 1) left(Quaternion::polar(std::numbers::pi / h1_param));
        switch (h2) {
            case RotationGroupType::Cyclic:
                if (h2_param > 1) right(Quaternion::polar(std::numbers::pi / h2_param));
                spec.label = "Z" + std::to_string(h1_param) + " x Z" + std::to_string(h2_param);
                break;
            case RotationGroupType::Dihedral:
                for (const auto& q : binary_dihedral_generators(h2_param)) right(q);
                spec.label = "Z" + std::to_string(h1_param) + " x D" + std::to_string(h2_param);
                break;
            case RotationGroupType::Tetrahedral:
                for (const auto& q : binary_tetrahedral_generators()) right(q);
                spec.label = "Z" + std::to_string(h1_param) + " x T";
                break;
            case RotationGroupType::Octahedral:
                for (const auto& q : binary_octahedral_generators()) right(q);
                spec.label = "Z" + std::to_string(h1_param) + " x O";
                break;
            case RotationGroupType::Icosahedral:
                for (const auto& q : binary_icosahedral_generators()) right(q);
                spec.label = "Z" + std::to_string(h1_param) + " x I";
                break;
        }
        if (spec.spherical_generators.empty()) spec.identity_only = true;
        return spec;
    }
    if (h1 == RotationGroupType::Dihedral && h2 == RotationGroupType::Cyclic) {
        for (const auto& q : binary_dihedral_generators(h1_param)) left(q);
        if (h2_param > 1) right(Quaternion::polar(std::numbers::pi / h2_param));
        spec.label = "D" + std::to_string(h1_param) + " x Z" + std::to_string(h2_param);
        return spec;
    }
    throw std::invalid_argument("(H1, H2) pair is not a row of the spherical table");
}

std::vector<CatalogCase> standard_catalog(const EnumerationBudget& euclidean_budget) {
    std::vector<CatalogCase> cases;
    EnumerationBudget sphere_budget = euclidean_budget;
    sphere_budget.max_word_length = std::max(euclidean_budget.max_word_length, 40);

    auto flat = [&](const std::string& sub, const std::string& family, Orbifold2 expected) {
        CatalogCase c;
        c.id = "4.1-" + sub;
        c.family = family;
        c.spec = build_euclidean_case(sub);
        c.expected = expected;
        c.budget = euclidean_budget;
        cases.push_back(std::move(c));
    };
    using S = Orbifold2::Surface;
    flat("1a", "trivial group", {S::Plane, {}, false});
    flat("2a", "vertical translation", {S::Plane, {}, false});
    flat("2b", "vertical half-turn screw", {S::Plane, {2}, false});
    flat("2c", "vertical rational screw", {S::Plane, {3}, false});
    flat("2d", "horizontal translation", {S::Cylinder, {}, false});
    flat("2e", "horizontal half-turn screw", {S::MoebiusBand, {}, false});
    flat("3a", "rank-2 lattice, vertical free", {S::Torus, {}, false});
    flat("3b", "rank-2 lattice over the axis", {S::Cylinder, {}, false});
    flat("4a", "lattice + horizontal screw", {S::KleinBottle, {}, false});
    flat("4b", "vertical lattice + horizontal screw", {S::MoebiusBand, {}, false});
    flat("4c", "lattice + vertical half-turn screw", {S::Disc, {2, 2}, false});
    flat("5a", "rank-3 lattice", {S::Torus, {}, false});
    flat("6a", "half-turn space group, horizontal axis", {S::KleinBottle, {}, false});
    flat("6b", "half-turn space group, vertical axis", {S::Sphere, {2, 2, 2, 2}, false});
    flat("7a", "third-turn hexagonal space group", {S::Sphere, {3, 3, 3}, false});
    flat("8a", "quarter-turn tetragonal space group", {S::Sphere, {2, 4, 4}, false});

    {
        // Case 9: the printed parameters (twelfth turn, pi/6 lattice angle) are
        // rejected by the discreteness check; fall back to the sixth-turn
        // hexagonal convention and log the substitution.
        CatalogCase c;
        c.id = "4.1-9a";
        c.family = "sixth-turn hexagonal space group";
        c.budget = euclidean_budget;
        c.expected = Orbifold2{S::Sphere, {2, 3, 6}, false};
        GroupSpec printed = build_euclidean_case("9a");
        EnumerationBudget probe = euclidean_budget;
        probe.ball_radius = std::min(probe.ball_radius, 4.0);
        auto en = enumerate_group(printed.euclidean_generators, probe, /*allow_truncation=*/true);
        auto disc = verify_discreteness(printed.euclidean_generators, en);
        if (disc.discrete_within_budget) {
            c.spec = printed;
        } else {
            CaseParams fallback;
            fallback.theta = Angle::turns(1, 6);
            fallback.v3 = NumVec3::of(Vec3d{0.5, std::sqrt(3.0) / 2.0, 0.0});
            c.spec = build_euclidean_case("9a", fallback);
            c.note = "printed twelfth-turn parameters rejected (" + disc.witness_text +
                     "); using the sixth-turn hexagonal convention";
        }
        cases.push_back(std::move(c));
    }

    flat("10a", "three half-turn screws, first vertical", {S::ProjectivePlane, {2, 2}, false});
    flat("10b", "three half-turn screws, second vertical", {S::ProjectivePlane, {2, 2}, false});
    flat("10c", "three half-turn screws, third vertical", {S::ProjectivePlane, {2, 2}, false});

    auto sphere = [&](const std::string& sub, const std::string& family, GroupSpec spec) {
        CatalogCase c;
        c.id = "4.3-" + sub;
        c.family = family;
        c.spec = std::move(spec);
        c.spherical_expected = true;
        c.budget = sphere_budget;
        cases.push_back(std::move(c));
    };
    sphere("ZZ", "lens space", build_spherical_case(RotationGroupType::Cyclic, 5,
                                                    RotationGroupType::Cyclic, 3));
    sphere("ZD", "prism space over S2", build_spherical_case(RotationGroupType::Cyclic, 5,
                                                             RotationGroupType::Dihedral, 3));
    sphere("DZ", "prism space over P2", build_spherical_case(RotationGroupType::Dihedral, 2,
                                                             RotationGroupType::Cyclic, 3));
    sphere("ZT", "tetrahedral space", build_spherical_case(RotationGroupType::Cyclic, 1,
                                                           RotationGroupType::Tetrahedral, 0));
    sphere("ZO", "octahedral space", build_spherical_case(RotationGroupType::Cyclic, 1,
                                                          RotationGroupType::Octahedral, 0));
    sphere("ZI", "icosahedral space", build_spherical_case(RotationGroupType::Cyclic, 1,
                                                           RotationGroupType::Icosahedral, 0));

    {
        CatalogCase c;
        c.id = "neg-b1";
        c.family = "glide control (reflection in the leaf stabilizer)";
        c.spec.ambient = GroupSpec::Ambient::Euclidean3;
        c.spec.label = "glide control";
        c.spec.euclidean_generators = {glide3(kE1, kE3)};
        c.expected_reject = "b1";
        c.budget = euclidean_budget;
        cases.push_back(std::move(c));
    }
    {
        CatalogCase c;
        c.id = "neg-b2";
        c.family = "irrational screw control (leaf action not discontinuous)";
        c.spec.ambient = GroupSpec::Ambient::Euclidean3;
        c.spec.label = "irrational screw control";
        const double golden_frac = (std::sqrt(5.0) - 1.0) / 2.0;
        c.spec.euclidean_generators = {
            screw3(kE3, Angle::radians(2 * std::numbers::pi * golden_frac), Rational(1))};
        c.expected_reject = "b2";
        c.budget = euclidean_budget;
        cases.push_back(std::move(c));
    }
    {
        CatalogCase c;
        c.id = "neg-a";
        c.family = "tilted screw control (foliation not preserved)";
        c.spec.ambient = GroupSpec::Ambient::Euclidean3;
        c.spec.label = "tilted screw control";
        c.spec.euclidean_generators = {
            screw3(exact_vec3(1, 0, 1), Angle::turns(1, 4), Rational(1))};
        c.expected_reject = "a";
        c.budget = euclidean_budget;
        cases.push_back(std::move(c));
    }
    return cases;
}

std::optional<SphericalExpectation> spherical_table_expectation(const GroupSpec& spec,
                                                                const EnumerationBudget& budget,
                                                                std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return std::nullopt;
    };
    if (spec.ambient != GroupSpec::Ambient::Sphere3) return fail("not a spherical spec");
    auto en = enumerate_group(spec.spherical_generators, budget);
    if (!en.complete) return fail("enumeration did not certify finiteness");

    std::vector<Mat3d> h1, h2;
    for (const auto& g : en.elements) {
        h1.push_back(rotation_from_quaternion(g.q1));
        h2.push_back(rotation_from_quaternion(g.q2));
    }
    auto dedup = [](std::vector<Mat3d>& ms) {
        std::vector<Mat3d> out;
        for (const auto& m : ms) {
            bool seen = false;
            for (const auto& o : out) seen = seen || max_abs(m - o) <= 1e-8;
            if (!seen) out.push_back(m);
        }
        ms = out;
    };
    dedup(h1);
    dedup(h2);

    SphericalExpectation exp;
    try {
        exp.h1 = classify_rotation_group(h1);
        exp.h2 = classify_rotation_group(h2);
    } catch (const std::exception& e) {
        return fail(std::string("H classification failed: ") + e.what());
    }

    bool gamma1 = true;
    for (const auto& g : spec.spherical_generators) gamma1 = gamma1 && left_factor_in_circle(g);

    using T = RotationGroupType;
    using S = Orbifold2::Surface;
    if (gamma1) {
        if (exp.h1.type != T::Cyclic) return fail("H1 not cyclic in the first-factor case");
        switch (exp.h2.type) {
            case T::Cyclic: {
                int q = exp.h2.parameter;
                exp.orbifold = {S::Sphere, q >= 2 ? std::vector<int>{q, q} : std::vector<int>{},
                                false};
                exp.row = "Zp x Zq (lens)";
                return exp;
            }
            case T::Dihedral:
                exp.orbifold = {S::Sphere, {2, 2, exp.h2.parameter}, false};
                std::sort(exp.orbifold.cone_orders.begin(), exp.orbifold.cone_orders.end());
                exp.row = "Zp x Dm (prism)";
                return exp;
            case T::Tetrahedral:
                exp.orbifold = {S::Sphere, {2, 3, 3}, false};
                exp.row = "Zp x T";
                return exp;
            case T::Octahedral:
                exp.orbifold = {S::Sphere, {2, 3, 4}, false};
                exp.row = "Zp x O";
                return exp;
            case T::Icosahedral:
                exp.orbifold = {S::Sphere, {2, 3, 5}, false};
                exp.row = "Zp x I";
                return exp;
        }
    }
    if (exp.h2.type != T::Cyclic) return fail("H2 not cyclic in the second-factor case");
    int q = exp.h2.parameter;
    exp.orbifold = {S::ProjectivePlane, q >= 2 ? std::vector<int>{q} : std::vector<int>{}, false};
    exp.row = "Dm x Zq (prism over P2)";
    return exp;
}

bool glob_match(const std::string& pattern, const std::string& text) {
    std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

namespace {

CaseReport run_case(const CatalogCase& c, std::uint64_t seed, int structural_samples) {
    CaseReport rep;
    rep.id = c.id;
    rep.family = c.family;
    rep.note = c.note;
    rep.expected = c.expected;
    rep.expected_reject = c.expected_reject;

    auto t0 = std::chrono::steady_clock::now();
    rep.pipeline = run_pipeline(c.spec, c.budget, seed, structural_samples);

    if (c.spherical_expected) {
        std::string why;
        auto exp = spherical_table_expectation(c.spec, c.budget, &why);
        if (exp) {
            rep.expected = exp->orbifold;
            if (rep.note.empty())
                rep.note = "table row " + exp->row + ": H1=" + exp->h1.name() +
                           ", H2=" + exp->h2.name();
        } else {
            rep.note = "no table expectation: " + why;
        }
    }

    if (!c.expected_reject.empty()) {
        rep.match = rep.pipeline.failing_condition() == c.expected_reject;
    } else {
        rep.match = rep.pipeline.classified() && rep.expected &&
                    rep.pipeline.orbifold.value() == rep.expected.value();
    }
    auto t1 = std::chrono::steady_clock::now();
    rep.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rep;
}

}  // namespace

CatalogReport run_catalog(const CatalogOptions& options) {
    CatalogReport report;
    report.seed = options.seed;
    report.euclidean_budget = options.euclidean_budget;

    std::vector<CatalogCase> cases;
    for (auto& c : standard_catalog(options.euclidean_budget))
        if (glob_match(options.filter, c.id)) cases.push_back(std::move(c));

    report.cases.resize(cases.size());
    if (options.parallel) {
        std::vector<std::future<CaseReport>> futures;
        futures.reserve(cases.size());
        for (const auto& c : cases)
            futures.push_back(std::async(std::launch::async, run_case, std::cref(c), options.seed,
                                         options.structural_samples));
        for (std::size_t i = 0; i < futures.size(); ++i) report.cases[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < cases.size(); ++i)
            report.cases[i] = run_case(cases[i], options.seed, options.structural_samples);
    }

    for (const auto& c : report.cases)
        (c.match ? report.matched : report.mismatched)++;
    report.all_ok = report.mismatched == 0;
    return report;
}

GroupSpec conjugate_by_vertical_rotation(const GroupSpec& spec, double alpha) {
    GroupSpec out = spec;
    out.label += " (conjugated)";
    EuclIsometry c = rotation3(NumVec3::of(Vec3d{0, 0, 1}), Angle::radians(alpha));
    EuclIsometry cinv = inverse(c);
    for (auto& g : out.euclidean_generators) {
        g = compose(c, compose(g, cinv));
        g.recipe.reset();
    }
    return out;
}

GroupSpec conjugate_by_hopf_isometry(const GroupSpec& spec, double alpha, const Quaternion& r) {
    GroupSpec out = spec;
    out.label += " (conjugated)";
    SO4Element c(Quaternion::polar(alpha), r.normalized());
    SO4Element cinv = so4_inverse(c);
    for (auto& g : out.spherical_generators) g = so4_compose(c, so4_compose(g, cinv));
    return out;
}

GroupSpec scale_translations(const GroupSpec& spec, const Rational& factor) {
    GroupSpec out = spec;
    out.label += " (scaled)";
    double f = to_double(factor);
    for (auto& g : out.euclidean_generators) {
        if (g.exact) {
            Vec3r t{g.exact->translation[0] * factor, g.exact->translation[1] * factor,
                    g.exact->translation[2] * factor};
            g = make_motion_exact<3>(g.exact->linear, t);
        } else {
            g = make_motion<3>(g.linear, g.translation * f);
        }
    }
    return out;
}

}  // namespace spaceform
