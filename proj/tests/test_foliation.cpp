#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "spaceform/foliation.hpp"

using namespace spaceform;

namespace {

GroupSpec screw_spec(const Angle& angle) {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Euclidean3;
    spec.label = "screw";
    spec.euclidean_generators = {screw3(exact_vec3(0, 0, 1), angle, Rational(1))};
    return spec;
}

GroupSpec glide_spec() {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Euclidean3;
    spec.label = "glide";
    spec.euclidean_generators = {glide3(exact_vec3(1, 0, 0), exact_vec3(0, 0, 1))};
    return spec;
}

Quaternion random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Quaternion q{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    return q.normalized();
}

}  // namespace

TEST_CASE("hopf leaf projection lands on the unit 2-sphere and matches z1/z2") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 500; ++i) {
        Quaternion x = random_unit(rng);
        Vec3d n = hopf_leaf_projection(x);
        CHECK(std::abs(norm(n) - 1.0) < 1e-12);

        // Chart identity: z1/z2 = (n3 + i n2)/(1 - n1), poles matching.
        std::complex<double> z1(x.w, x.x), z2(x.y, x.z);
        if (std::abs(z2) > 1e-3) {
            std::complex<double> w = z1 / z2;
            std::complex<double> via_leaf(n[2] / (1 - n[0]), n[1] / (1 - n[0]));
            CHECK(std::abs(w - via_leaf) < 1e-9 * (1.0 + std::abs(w)));
        }
        // Fiber invariance under left circle multiplication.
        Quaternion moved = Quaternion::polar(1.234) * x;
        CHECK(norm(hopf_leaf_projection(moved) - n) < 1e-12);
    }
}

TEST_CASE("condition (a): vertical foliation") {
    CHECK(preserves_vertical_foliation(screw_spec(Angle::turns(1, 3)).euclidean_generators).holds);
    CHECK(preserves_vertical_foliation(glide_spec().euclidean_generators).holds);

    // Rotation through pi/3 about a horizontal axis tilts the vertical direction.
    std::vector<EuclIsometry> bad = {
        compose(translation3(exact_vec3(1, 0, 0)), rotation3(exact_vec3(1, 0, 0), Angle::turns(1, 6)))};
    auto verdict = preserves_vertical_foliation(bad);
    CHECK_FALSE(verdict.holds);
    CHECK(verdict.witness.find("vertical") != std::string::npos);

    // A half turn about a horizontal axis maps e3 to -e3 and is fine.
    std::vector<EuclIsometry> halfturn = {rotation3(exact_vec3(1, 0, 0), Angle::turns(1, 2))};
    CHECK(preserves_vertical_foliation(halfturn).holds);
}

TEST_CASE("condition (a): Hopf foliation membership") {
    std::mt19937_64 rng(4);
    EnumerationBudget budget;
    budget.max_word_length = 40;
    {
        // Lens-type group sits in the first circle factor.
        GroupSpec lens;
        lens.ambient = GroupSpec::Ambient::Sphere3;
        lens.spherical_generators = {
            SO4Element(Quaternion::polar(2 * std::numbers::pi / 5),
                       Quaternion::polar(2 * std::numbers::pi * 2 / 5))};
        auto en = enumerate_group(lens.spherical_generators, budget);
        CHECK(preserves_hopf_foliation(lens.spherical_generators, en).holds);
    }
    {
        // Quaternion group on the left with a cyclic right factor: the
        // dihedral second-factor case.
        GroupSpec prism;
        prism.ambient = GroupSpec::Ambient::Sphere3;
        prism.spherical_generators = {
            SO4Element(Quaternion{0, 1, 0, 0}, Quaternion{}),
            SO4Element(Quaternion{0, 0, 1, 0}, Quaternion{}),
            SO4Element(Quaternion{}, Quaternion::polar(std::numbers::pi / 3))};
        auto en = enumerate_group(prism.spherical_generators, budget);
        CHECK(preserves_hopf_foliation(prism.spherical_generators, en).holds);
    }
    {
        // A generic left factor preserves nothing.
        GroupSpec bad;
        bad.ambient = GroupSpec::Ambient::Sphere3;
        bad.spherical_generators = {SO4Element(random_unit(rng), Quaternion{})};
        auto en = enumerate_group(bad.spherical_generators, budget, /*allow_truncation=*/true);
        CHECK_FALSE(preserves_hopf_foliation(bad.spherical_generators, en).holds);
    }
}

TEST_CASE("induced leaf actions match the classical formulas") {
    // Screw about e3 induces the rotation about the origin.
    PlaneIsometry leaf = induce_plane_motion(screw_spec(Angle::turns(1, 3)).euclidean_generators[0]);
    auto cls = classify_plane_isometry(leaf);
    CHECK(cls.type == PlaneIsometryClass::Type::Rotation);
    CHECK(norm(cls.rotation_center) < 1e-12);
    CHECK(cls.rotation_angle == doctest::Approx(2 * std::numbers::pi / 3));

    // The control glide induces the pure reflection (x1,x2) -> (-x1,x2).
    PlaneIsometry refl = induce_plane_motion(glide_spec().euclidean_generators[0]);
    auto rcls = classify_plane_isometry(refl);
    CHECK(rcls.type == PlaneIsometryClass::Type::Reflection);
    CHECK(max_abs(refl.translation) < 1e-12);
    CHECK(refl.linear(0, 0) == doctest::Approx(-1.0));
    CHECK(refl.linear(1, 1) == doctest::Approx(1.0));

    // phi(e^{ia}, q2) acts on the leaf sphere by the conjugation rotation of q2.
    std::mt19937_64 rng(6);
    for (int i = 0; i < 200; ++i) {
        Quaternion q2 = random_unit(rng);
        SO4Element g(Quaternion::polar(0.77), q2);
        Mat3d expected = rotation_from_quaternion(q2);
        Quaternion x = random_unit(rng);
        Vec3d lhs = hopf_leaf_projection(g.apply(x));
        Vec3d rhs = expected * hopf_leaf_projection(x);
        CHECK(norm(lhs - rhs) < 1e-10);
    }
    // Second-factor case: a j-coset left factor composes with the antipodal map.
    for (int i = 0; i < 200; ++i) {
        Quaternion q2 = Quaternion::polar(0.4 + 0.01 * i);
        SO4Element g(Quaternion{0, 0, 1, 0}, q2);
        Quaternion x = random_unit(rng);
        Vec3d lhs = hopf_leaf_projection(g.apply(x));
        Vec3d rhs = (rotation_from_quaternion(q2) * -1.0) * hopf_leaf_projection(x);
        CHECK(norm(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("condition (b1)") {
    EnumerationBudget budget;
    {
        LeafGroup leaf = induce_leaf_group_euclidean(glide_spec().euclidean_generators);
        auto en = enumerate_group(leaf.plane_generators, budget);
        auto verdict = leaf_stabilizers_reflection_free(leaf, &en);
        CHECK_FALSE(verdict.holds);
        CHECK(verdict.witness.find("reflection") != std::string::npos);
    }
    {
        LeafGroup leaf = induce_leaf_group_euclidean(screw_spec(Angle::turns(1, 5)).euclidean_generators);
        auto en = enumerate_group(leaf.plane_generators, budget);
        CHECK(leaf_stabilizers_reflection_free(leaf, &en).holds);
    }
    {
        // Case with a leaf glide: its square is a translation, no reflections.
        GroupSpec spec;
        spec.ambient = GroupSpec::Ambient::Euclidean3;
        spec.euclidean_generators = {translation3(exact_vec3(0, 1, 0)),
                                     screw3(exact_vec3(1, 0, 0), Angle::turns(1, 2), Rational(1))};
        LeafGroup leaf = induce_leaf_group_euclidean(spec.euclidean_generators);
        auto en = enumerate_group(leaf.plane_generators, budget);
        CHECK(leaf_stabilizers_reflection_free(leaf, &en).holds);
    }
}

TEST_CASE("condition (b2)") {
    EnumerationBudget budget;
    {
        LeafGroup leaf = induce_leaf_group_euclidean(screw_spec(Angle::turns(1, 5)).euclidean_generators);
        auto en = enumerate_group(leaf.plane_generators, budget);
        CHECK(leaf_acts_discontinuously(leaf, &en).holds);
    }
    {
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        LeafGroup leaf = induce_leaf_group_euclidean(
            screw_spec(Angle::radians(2 * std::numbers::pi * golden)).euclidean_generators);
        auto en = enumerate_group(leaf.plane_generators, budget);
        auto verdict = leaf_acts_discontinuously(leaf, &en);
        CHECK_FALSE(verdict.holds);
        CHECK(verdict.witness.find("near-return") != std::string::npos);
    }
    {
        GroupSpec spec;
        spec.ambient = GroupSpec::Ambient::Euclidean3;
        spec.euclidean_generators = {translation3(exact_vec3(1, 0, 0)),
                                     translation3(NumVec3::of(Vec3d{std::numbers::sqrt2, 0, 0}))};
        LeafGroup leaf = induce_leaf_group_euclidean(spec.euclidean_generators);
        auto en = enumerate_group(leaf.plane_generators, budget, /*allow_truncation=*/true);
        CHECK_FALSE(leaf_acts_discontinuously(leaf, &en).holds);
    }
}

TEST_CASE("pipeline matches the worked flat examples") {
    EnumerationBudget budget;
    {
        // Glide control: (a) holds, (b1) fails.
        auto rep = run_pipeline(glide_spec(), budget);
        CHECK(rep.free_action.holds);
        CHECK(rep.discreteness.holds);
        CHECK(rep.condition_a.holds);
        CHECK_FALSE(rep.condition_b1.holds);
        CHECK(rep.outcome == VerificationReport::Outcome::FailsB1);
        CHECK(rep.failing_condition() == "b1");
    }
    {
        // Irrational screw: (b2) fails.
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        auto rep = run_pipeline(screw_spec(Angle::radians(2 * std::numbers::pi * golden)), budget);
        CHECK(rep.condition_a.holds);
        CHECK(rep.condition_b1.holds);
        CHECK_FALSE(rep.condition_b2.holds);
        CHECK(rep.failing_condition() == "b2");
    }
    {
        // Rational screw with q = 4: plane with one cone point of order 4.
        auto rep = run_pipeline(screw_spec(Angle::turns(1, 4)), budget);
        REQUIRE(rep.classified());
        CHECK(rep.orbifold->underlying == Orbifold2::Surface::Plane);
        CHECK(rep.orbifold->cone_orders == std::vector<int>{4});
        // p = 3, q = 4 gives the same leaf group.
        auto rep2 = run_pipeline(screw_spec(Angle::turns(3, 4)), budget);
        REQUIRE(rep2.classified());
        CHECK(rep2.orbifold.value() == rep.orbifold.value());
    }
}

TEST_CASE("classification of simple leaf groups") {
    EnumerationBudget budget;
    {
        // Pure half-turn leaf group: cone of angle pi.
        LeafGroup leaf;
        leaf.ambient = LeafGroup::Ambient::Plane;
        leaf.plane_generators = {rotation_origin2(Angle::turns(1, 2))};
        auto en = enumerate_group(leaf.plane_generators, budget);
        Orbifold2 o = classify_leaf_orbifold(leaf, &en);
        CHECK(o.underlying == Orbifold2::Surface::Plane);
        CHECK(o.cone_orders == std::vector<int>{2});
    }
    {
        // Independent plane translations: the 2-torus.
        LeafGroup leaf;
        leaf.ambient = LeafGroup::Ambient::Plane;
        leaf.plane_generators = {translation2(NumVec2::of(Vec2r{Rational(1), Rational(0)})),
                                 translation2(NumVec2::of(Vec2r{make_rational(1, 3), Rational(1)}))};
        auto en = enumerate_group(leaf.plane_generators, budget);
        Orbifold2 o = classify_leaf_orbifold(leaf, &en);
        CHECK(o.underlying == Orbifold2::Surface::Torus);
        CHECK(o.cone_orders.empty());
    }
    {
        // Icosahedral right factor: S^2(2,3,5).
        GroupSpec spec;
        spec.ambient = GroupSpec::Ambient::Sphere3;
        for (const auto& q : binary_icosahedral_generators())
            spec.spherical_generators.emplace_back(Quaternion{}, q);
        EnumerationBudget deep;
        deep.max_word_length = 40;
        auto rep = run_pipeline(spec, deep);
        REQUIRE(rep.classified());
        CHECK(rep.orbifold->underlying == Orbifold2::Surface::Sphere);
        CHECK(rep.orbifold->cone_orders == std::vector<int>{2, 3, 5});
    }
}

TEST_CASE("structural residuals are tiny for a lattice case") {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Euclidean3;
    spec.euclidean_generators = {translation3(exact_vec3(1, 0, 0)),
                                 screw3(exact_vec3(0, 0, 1), Angle::turns(1, 2), Rational(1))};
    auto rep = run_pipeline(spec, EnumerationBudget{}, 5, 1000);
    REQUIRE(rep.classified());
    CHECK(rep.homomorphism_residual < 1e-9);
    CHECK(rep.equivariance_residual < 1e-9);
}

TEST_CASE("a ball too small to see every cone class is reported, not classified") {
    // Half-turn wallpaper group: at radius 1.2 the enumeration sees the
    // rotation centers (0,0), (1/2,0), (0,1/2) but not (1/2,1/2), so the cone
    // census cannot match the rank-2 half-turn signature.
    LeafGroup leaf;
    leaf.ambient = LeafGroup::Ambient::Plane;
    leaf.plane_generators = {rotation_origin2(Angle::turns(1, 2)),
                             translation2(NumVec2::of(Vec2r{Rational(1), Rational(0)})),
                             translation2(NumVec2::of(Vec2r{Rational(0), Rational(1)}))};
    EnumerationBudget tiny;
    tiny.ball_radius = 1.2;
    auto en = enumerate_group(leaf.plane_generators, tiny);
    CHECK_THROWS_AS(classify_leaf_orbifold(leaf, &en), UnclassifiedWithinBudget);

    // The same group at the default ball classifies cleanly.
    auto full = enumerate_group(leaf.plane_generators, EnumerationBudget{});
    Orbifold2 o = classify_leaf_orbifold(leaf, &full);
    CHECK(o.underlying == Orbifold2::Surface::Sphere);
    CHECK(o.cone_orders == std::vector<int>{2, 2, 2, 2});
}

TEST_CASE("identity group classifies as the plane") {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Euclidean3;
    spec.identity_only = true;
    auto rep = run_pipeline(spec, EnumerationBudget{});
    REQUIRE(rep.classified());
    CHECK(rep.orbifold->underlying == Orbifold2::Surface::Plane);
    CHECK(rep.orbifold->cone_orders.empty());
}
