#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spaceform/foliation.hpp"
#include "spaceform/numerics.hpp"

namespace spaceform {

// Named parameters for the flat-catalog builders; anything unset takes the
// case default (the simplest admissible choice).
struct CaseParams {
    std::optional<NumVec3> v, v1, v2, v3;
    std::optional<Angle> theta;
};

// Builds the flat-catalog case with the given id ("1a", "2c", ..., "10c"),
// checking every stated parameter constraint and naming the violated clause.
GroupSpec build_euclidean_case(const std::string& id, const CaseParams& params = {});

// Spherical table rows, keyed by the (H1, H2) pair. Freeness is validated by
// the caller through the free-action check, not assumed.
GroupSpec build_spherical_case(RotationGroupType h1, int h1_param, RotationGroupType h2,
                               int h2_param);
// ⟨φ(e^{2πi/p}, e^{2πi r/p})⟩.
GroupSpec lens_space_group(int p, int r);

struct CatalogCase {
    std::string id;           // "4.1-2c", "4.3-ZD", "neg-b1"
    std::string family;
    GroupSpec spec;
    std::optional<Orbifold2> expected;  // flat accept cases
    bool spherical_expected = false;    // expectation derived from (H1,H2) at run time
    std::string expected_reject;        // "a" | "b1" | "b2" for the controls
    EnumerationBudget budget;
    std::string note;
};

// The full standard catalog: 20 flat accept cases, 6 spherical rows, 3
// negative controls. The flat cases run at the given budget; spherical rows
// use a deeper word-length budget so closure certifies finiteness.
std::vector<CatalogCase> standard_catalog(const EnumerationBudget& euclidean_budget);

// Independent expectation for a spherical case: classify H1/H2 through the
// factoring homomorphism and look the orbifold up in the (H1, H2) table.
struct SphericalExpectation {
    RotationGroupClass h1, h2;
    Orbifold2 orbifold;
    std::string row;
};
std::optional<SphericalExpectation> spherical_table_expectation(const GroupSpec& spec,
                                                                const EnumerationBudget& budget,
                                                                std::string* why = nullptr);

struct CaseReport {
    std::string id, family, note;
    VerificationReport pipeline;
    std::optional<Orbifold2> expected;
    std::string expected_reject;
    bool match = false;
    double runtime_ms = 0;
};

struct CatalogReport {
    std::vector<CaseReport> cases;
    int matched = 0;
    int mismatched = 0;
    bool all_ok = false;
    std::uint64_t seed = 0;
    EnumerationBudget euclidean_budget;
};

struct CatalogOptions {
    EnumerationBudget euclidean_budget{};
    std::string filter = "*";
    std::uint64_t seed = 1;
    bool parallel = true;
    int structural_samples = 1000;
};

CatalogReport run_catalog(const CatalogOptions& options);

// Invariance helpers: conjugation by a foliation-preserving isometry and a
// global homothety (scales all translation parts).
GroupSpec conjugate_by_vertical_rotation(const GroupSpec& spec, double alpha);
GroupSpec conjugate_by_hopf_isometry(const GroupSpec& spec, double alpha, const Quaternion& r);
GroupSpec scale_translations(const GroupSpec& spec, const Rational& factor);

// '*' and '?' wildcards.
bool glob_match(const std::string& pattern, const std::string& text);

}  // namespace spaceform
