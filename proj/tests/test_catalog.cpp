#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spaceform/catalog.hpp"

using namespace spaceform;

TEST_CASE("glob matching") {
    CHECK(glob_match("*", "anything"));
    CHECK(glob_match("4.1-*", "4.1-2c"));
    CHECK_FALSE(glob_match("4.1-*", "4.3-ZZ"));
    CHECK(glob_match("neg-?" , "neg-a"));
    CHECK_FALSE(glob_match("neg-?", "neg-b1"));
    CHECK(glob_match("4.?-1*", "4.1-10a"));
}

TEST_CASE("flat builders honor their parameter constraints") {
    // Defaults build.
    CHECK(build_euclidean_case("2c").euclidean_generators.size() == 1);
    CHECK(build_euclidean_case("5a").euclidean_generators.size() == 3);
    CHECK(build_euclidean_case("10b").euclidean_generators.size() == 6);

    // Violations name the clause.
    CaseParams tilted;
    tilted.v = exact_vec3(1, 0, 1);
    CHECK_THROWS_WITH_AS(build_euclidean_case("2a", tilted),
                         doctest::Contains("v parallel to e3"), std::invalid_argument);

    CaseParams wrong_theta;
    wrong_theta.theta = Angle::turns(1, 3);
    CHECK_THROWS_WITH_AS(build_euclidean_case("2b", wrong_theta), doctest::Contains("theta = pi"),
                         std::invalid_argument);

    CaseParams dependent;
    dependent.v1 = exact_vec3(1, 0, 0);
    dependent.v2 = exact_vec3(2, 0, 0);
    CHECK_THROWS_WITH_AS(build_euclidean_case("3a", dependent),
                         doctest::Contains("linearly independent"), std::invalid_argument);

    CaseParams skewed;
    skewed.v2 = exact_vec3(1, 1, 0);
    CHECK_THROWS_WITH_AS(build_euclidean_case("8a", skewed),
                         doctest::Contains("mutually orthogonal"), std::invalid_argument);

    CHECK_THROWS(build_euclidean_case("11z"));
}

TEST_CASE("the 2c example builds the advertised screw") {
    GroupSpec spec = build_euclidean_case("2c");
    REQUIRE(spec.euclidean_generators.size() == 1);
    const auto& g = spec.euclidean_generators.front();
    REQUIRE(g.recipe.has_value());
    CHECK(g.recipe->kind == MotionKind::Screw);
    CHECK(g.recipe->angle.is_rational());
    CHECK(g.recipe->angle.turns_den() == 3);
    CHECK(norm(g.translation - Vec3d{0, 0, 1}) < 1e-12);
}

TEST_CASE("lens parameters are validated by the free-action check, not assumed") {
    EnumerationBudget budget;
    budget.max_word_length = 40;
    {
        auto en = enumerate_group(lens_space_group(5, 2).spherical_generators, budget);
        CHECK(en.complete);
        CHECK(verify_free_action(en).free_within_budget);
    }
    {
        auto rep = run_pipeline(lens_space_group(5, 1), budget);
        CHECK(rep.outcome == VerificationReport::Outcome::FailsFreeness);
    }
}

TEST_CASE("spherical builders, and the table expectation route") {
    EnumerationBudget budget;
    budget.max_word_length = 40;

    GroupSpec zz = build_spherical_case(RotationGroupType::Cyclic, 5, RotationGroupType::Cyclic, 3);
    std::string why;
    auto exp = spherical_table_expectation(zz, budget, &why);
    REQUIRE_MESSAGE(exp.has_value(), why);
    CHECK(exp->h1.type == RotationGroupType::Cyclic);
    CHECK(exp->h1.parameter == 5);
    CHECK(exp->h2.type == RotationGroupType::Cyclic);
    CHECK(exp->h2.parameter == 3);
    CHECK(exp->orbifold.name() == "S^2(3,3)");

    GroupSpec dz = build_spherical_case(RotationGroupType::Dihedral, 2, RotationGroupType::Cyclic, 3);
    auto exp2 = spherical_table_expectation(dz, budget, &why);
    REQUIRE_MESSAGE(exp2.has_value(), why);
    CHECK(exp2->orbifold.name() == "P^2(3)");
    CHECK(exp2->row.find("prism over P2") != std::string::npos);

    CHECK_THROWS(build_spherical_case(RotationGroupType::Tetrahedral, 0,
                                      RotationGroupType::Cyclic, 2));
}

TEST_CASE("catalog subsets run and match") {
    CatalogOptions opts;
    opts.filter = "4.1-2*";
    opts.structural_samples = 50;
    auto rep = run_catalog(opts);
    CHECK(rep.cases.size() == 5);
    CHECK(rep.all_ok);

    CatalogOptions neg;
    neg.filter = "neg-*";
    neg.structural_samples = 50;
    auto nrep = run_catalog(neg);
    CHECK(nrep.cases.size() == 3);
    CHECK(nrep.all_ok);
    for (const auto& c : nrep.cases)
        CHECK(c.pipeline.failing_condition() == c.expected_reject);
}

TEST_CASE("classification is invariant under conjugation and homothety") {
    EnumerationBudget budget;
    {
        GroupSpec base = build_euclidean_case("6b");
        auto rep = run_pipeline(base, budget, 1, 50);
        REQUIRE(rep.classified());

        GroupSpec conj = conjugate_by_vertical_rotation(base, 0.83);
        auto crep = run_pipeline(conj, budget, 1, 50);
        REQUIRE(crep.classified());
        CHECK(crep.orbifold.value() == rep.orbifold.value());

        GroupSpec scaled = scale_translations(base, make_rational(3, 2));
        auto srep = run_pipeline(scaled, budget, 1, 50);
        REQUIRE(srep.classified());
        CHECK(srep.orbifold.value() == rep.orbifold.value());
    }
    {
        EnumerationBudget deep;
        deep.max_word_length = 40;
        GroupSpec base = build_spherical_case(RotationGroupType::Cyclic, 5,
                                              RotationGroupType::Dihedral, 3);
        auto rep = run_pipeline(base, deep, 1, 50);
        REQUIRE(rep.classified());
        GroupSpec conj = conjugate_by_hopf_isometry(base, 0.7, Quaternion{0.3, 0.4, -0.2, 0.8});
        auto crep = run_pipeline(conj, deep, 1, 50);
        REQUIRE(crep.classified());
        CHECK(crep.orbifold.value() == rep.orbifold.value());
    }
}

TEST_CASE("classification depends on the group, not the presentation") {
    // Dropping the redundant vertical translation (the screw's square) from
    // the vertical half-turn space group leaves the same group and the same
    // leaf orbifold.
    GroupSpec full = build_euclidean_case("6b");
    GroupSpec reduced = full;
    reduced.euclidean_generators.erase(reduced.euclidean_generators.begin() + 1);
    EnumerationBudget budget;
    auto a = run_pipeline(full, budget, 1, 50);
    auto b = run_pipeline(reduced, budget, 1, 50);
    REQUIRE(a.classified());
    REQUIRE(b.classified());
    CHECK(a.orbifold.value() == b.orbifold.value());
}

TEST_CASE("spherical catalog groups close at their exact orders") {
    EnumerationBudget deep;
    deep.max_word_length = 40;
    auto order_of = [&](const GroupSpec& spec) {
        auto en = enumerate_group(spec.spherical_generators, deep);
        REQUIRE(en.complete);
        return en.elements.size();
    };
    // Product construction: |phi(Z10 x Z6)| = 10*6/2.
    CHECK(order_of(build_spherical_case(RotationGroupType::Cyclic, 5, RotationGroupType::Cyclic,
                                        3)) == 30);
    // Single-generator lens with the same (H1, H2): phi(e^{i pi/5}, e^{i pi/3})
    // has order 15 since its 15th power is phi(-1,-1) = id.
    {
        GroupSpec lens;
        lens.ambient = GroupSpec::Ambient::Sphere3;
        lens.spherical_generators = {SO4Element(Quaternion::polar(std::numbers::pi / 5),
                                                Quaternion::polar(std::numbers::pi / 3))};
        CHECK(order_of(lens) == 15);
        auto rep = run_pipeline(lens, deep, 1, 50);
        REQUIRE(rep.classified());
        CHECK(rep.orbifold->name() == "S^2(3,3)");
    }
    // |phi(Z10 x 2D*3)| = 10*12/2, |phi(2D*2 x Z6)| = 8*6/2, |phi(1 x 2I)| = 120.
    CHECK(order_of(build_spherical_case(RotationGroupType::Cyclic, 5, RotationGroupType::Dihedral,
                                        3)) == 60);
    CHECK(order_of(build_spherical_case(RotationGroupType::Dihedral, 2, RotationGroupType::Cyclic,
                                        3)) == 24);
    CHECK(order_of(build_spherical_case(RotationGroupType::Cyclic, 1,
                                        RotationGroupType::Icosahedral, 0)) == 120);
    CHECK(order_of(lens_space_group(5, 2)) == 5);
}

TEST_CASE("case 9 carries the fallback note") {
    auto cases = standard_catalog(EnumerationBudget{});
    bool found = false;
    for (const auto& c : cases) {
        if (c.id != "4.1-9a") continue;
        found = true;
        CHECK(c.note.find("sixth-turn") != std::string::npos);
        REQUIRE(c.expected.has_value());
        CHECK(c.expected->name() == "S^2(2,3,6)");
    }
    CHECK(found);
}
