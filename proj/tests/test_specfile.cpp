#include <doctest.h>

#include <nlohmann/json.hpp>

#include "spaceform/group.hpp"
#include "spaceform/specfile.hpp"

using namespace spaceform;
using nlohmann::json;

TEST_CASE("parses a Euclidean spec with rational strings exactly") {
    json doc = json::parse(R"({
        "ambient": "euclidean3",
        "label": "third-turn screw",
        "generators": [
            {"kind": "screw", "axis": [0, 0, 1], "angle": {"rational": [1, 3]}, "pitch": "1/3"},
            {"kind": "translation", "vector": ["1/2", "-2/4", 1]}
        ]
    })");
    GroupSpec spec = parse_group_spec(doc);
    CHECK(spec.ambient == GroupSpec::Ambient::Euclidean3);
    REQUIRE(spec.euclidean_generators.size() == 2);
    const auto& screw = spec.euclidean_generators[0];
    REQUIRE(screw.recipe.has_value());
    CHECK(screw.recipe->angle.turns_den() == 3);
    CHECK(screw.recipe->pitch == make_rational(1, 3));
    const auto& tr = spec.euclidean_generators[1];
    REQUIRE(tr.is_exact());
    CHECK(tr.exact->translation[0] == make_rational(1, 2));
    CHECK(tr.exact->translation[1] == make_rational(-1, 2));  // normalized from -2/4
    CHECK(tr.exact->translation[2] == Rational(1));
}

TEST_CASE("unknown keys and malformed fields are rejected") {
    CHECK_THROWS_AS(parse_group_spec(json::parse(
                        R"({"ambient": "euclidean3", "generators": [], "identity": true,
                            "extra": 1})")),
                    SpecParseError);
    CHECK_THROWS_AS(parse_group_spec(json::parse(
                        R"({"ambient": "euclidean3", "generators": [
                            {"kind": "translation", "vector": [0,0,1], "axis": [1,0,0]}]})")),
                    SpecParseError);
    CHECK_THROWS_AS(parse_group_spec(json::parse(
                        R"({"ambient": "sphere3", "generators": [
                            {"q1": [1,0,0,0]}]})")),
                    SpecParseError);
    CHECK_THROWS_AS(parse_group_spec(json::parse(R"({"generators": []})")), SpecParseError);
    CHECK_THROWS_AS(parse_group_spec(json::parse(
                        R"({"ambient": "euclidean3", "generators": []})")),
                    SpecParseError);  // no identity flag
    CHECK_THROWS_AS(parse_group_spec(json::parse(
                        R"({"ambient": "euclidean3", "generators": [
                            {"kind": "rotation", "axis": [0,0,0], "angle": {"rational": [1,2]}}]})")),
                    std::exception);  // zero axis
}

TEST_CASE("non-unit quaternions are rejected at 1e-6") {
    CHECK_THROWS_AS(parse_group_spec(json::parse(
                        R"({"ambient": "sphere3", "generators": [
                            {"q1": [1.0001, 0, 0, 0], "q2": [1, 0, 0, 0]}]})")),
                    SpecParseError);
    CHECK_NOTHROW(parse_group_spec(json::parse(
        R"({"ambient": "sphere3", "generators": [
            {"q1": [1.0000001, 0, 0, 0], "q2": [0, 0, 1, 0]}]})")));
}

TEST_CASE("identity flag admits the trivial group") {
    GroupSpec spec = parse_group_spec(
        json::parse(R"({"ambient": "euclidean3", "identity": true, "generators": []})"));
    CHECK(spec.identity_only);
    CHECK(spec.generator_count() == 0);
}

TEST_CASE("round trip: parse, write, re-parse gives the identical spec") {
    json doc = json::parse(R"({
        "ambient": "euclidean3",
        "label": "round trip",
        "generators": [
            {"kind": "screw", "axis": [0, 0, 1], "angle": {"rational": [2, 5]}, "pitch": "3/7"},
            {"kind": "rotation", "axis": [1, 0, 0], "angle": {"rational": [1, 2]},
             "vector": ["1/2", "1/2", 0]},
            {"kind": "glide", "axis": [1, 0, 0], "vector": [0, "5/3", 2]},
            {"kind": "translation", "vector": [1, 2, "-9/4"]}
        ]
    })");
    GroupSpec first = parse_group_spec(doc);
    auto written = serialize_group_spec(first);
    GroupSpec second = parse_group_spec(json::parse(written.dump()));

    REQUIRE(first.euclidean_generators.size() == second.euclidean_generators.size());
    for (std::size_t i = 0; i < first.euclidean_generators.size(); ++i) {
        const auto& a = first.euclidean_generators[i];
        const auto& b = second.euclidean_generators[i];
        CHECK(element_key(a) == element_key(b));
        CHECK(max_abs(a.linear - b.linear) == 0.0);
        CHECK(max_abs(a.translation - b.translation) == 0.0);
        CHECK(a.is_exact() == b.is_exact());
        if (a.is_exact() && b.is_exact()) {
            CHECK(a.exact->linear == b.exact->linear);
            CHECK(a.exact->translation == b.exact->translation);
        }
        CHECK(a.recipe->kind == b.recipe->kind);
        CHECK(a.recipe->angle == b.recipe->angle);
        CHECK(a.recipe->pitch == b.recipe->pitch);
    }
    // The half-turn rotation and the translations are exactly representable.
    CHECK(second.euclidean_generators[1].is_exact());
    CHECK(second.euclidean_generators[3].is_exact());
    CHECK(first.label == second.label);

    // And for a spherical spec.
    json sdoc = json::parse(R"({
        "ambient": "sphere3",
        "generators": [{"q1": [0, 1, 0, 0], "q2": [0.6, 0.8, 0, 0]}]
    })");
    GroupSpec s1 = parse_group_spec(sdoc);
    GroupSpec s2 = parse_group_spec(json::parse(serialize_group_spec(s1).dump()));
    CHECK(element_key(s1.spherical_generators[0]) == element_key(s2.spherical_generators[0]));
}

TEST_CASE("JSON numbers are converted exactly") {
    // 0.25 is dyadic, so the parsed value is exactly 1/4.
    GroupSpec spec = parse_group_spec(json::parse(
        R"({"ambient": "euclidean3", "generators": [
            {"kind": "translation", "vector": [0.25, 0, 0]}]})"));
    CHECK(spec.euclidean_generators[0].exact->translation[0] == make_rational(1, 4));
}
