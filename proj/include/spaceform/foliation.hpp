#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spaceform/group.hpp"

namespace spaceform {

enum class FoliationTag { VerticalLines, HopfCircles };

// Leaf projections of the two standard foliations.
inline Vec2d vertical_leaf_projection(const Vec3d& x) { return Vec2d{x[0], x[1]}; }
// Hopf leaf point as x̄·i·x, a point of S² inside the imaginary quaternions.
Vec3d hopf_leaf_projection(const Quaternion& x);

struct ConditionReport {
    bool holds = false;
    std::string witness;
};

// 2-orbifold: underlying surface plus cone-point orders. A reflector boundary
// is terminal for the pipeline.
struct Orbifold2 {
    enum class Surface {
        Plane,
        Sphere,
        Disc,
        Cylinder,
        Torus,
        MoebiusBand,
        KleinBottle,
        ProjectivePlane
    } underlying = Surface::Plane;
    std::vector<int> cone_orders;  // ascending
    bool has_reflector = false;

    std::string name() const;
    bool operator==(const Orbifold2& o) const {
        return underlying == o.underlying && cone_orders == o.cone_orders &&
               has_reflector == o.has_reflector;
    }
};

std::string surface_name(Orbifold2::Surface s);

class UnclassifiedWithinBudget : public std::runtime_error {
  public:
    explicit UnclassifiedWithinBudget(const std::string& what) : std::runtime_error(what) {}
};

// Induced action on the leaf space.
struct LeafGroup {
    enum class Ambient { Plane, Sphere2 } ambient = Ambient::Plane;
    // Plane case: one induced generator per Euclidean generator, in the same
    // order (plane_generators[k] is the image of generator k).
    std::vector<PlaneIsometry> plane_generators;
    // Sphere case: the full induced group as orthogonal matrices (±ψ(q₂)).
    std::vector<Mat3d> sphere_elements;
    bool sphere_has_orientation_reversing = false;
    std::string description;
};

// Condition (a): Γ maps leaves to leaves. For the Hopf foliation this is the
// Γ₁ / Γ₂ dichotomy; the Γ₂ case additionally requires H₁ dihedral with its
// cyclic subgroup acting about the circle axis and H₂ cyclic.
ConditionReport preserves_vertical_foliation(const std::vector<EuclIsometry>& generators);
ConditionReport preserves_hopf_foliation(const std::vector<SO4Element>& generators,
                                         const Enumeration<SO4Element>& en);

// Leaf image of a single foliation-preserving Euclidean motion.
PlaneIsometry induce_plane_motion(const EuclIsometry& g);
LeafGroup induce_leaf_group_euclidean(const std::vector<EuclIsometry>& generators);
LeafGroup induce_leaf_group_spherical(const Enumeration<SO4Element>& en);

// Condition (b1): no reflections in point stabilizers.
ConditionReport leaf_stabilizers_reflection_free(const LeafGroup& leaf,
                                                 const Enumeration<PlaneIsometry>* plane_en);
// Condition (b2): the leaf group acts discontinuously (desk-scale falsifier).
ConditionReport leaf_acts_discontinuously(const LeafGroup& leaf,
                                          const Enumeration<PlaneIsometry>* plane_en);

// Leaf orbifold with cone points computed from rotation stabilizers; throws
// UnclassifiedWithinBudget when the census does not settle.
Orbifold2 classify_leaf_orbifold(const LeafGroup& leaf, const Enumeration<PlaneIsometry>* plane_en);

// -- Full pipeline -------------------------------------------------------------

struct VerificationReport {
    enum class Outcome {
        Classified,
        FailsFreeness,
        FailsDiscreteness,
        FailsA,
        FailsB1,
        FailsB2,
        Unclassified
    } outcome = Outcome::Unclassified;

    std::string label;
    ConditionReport free_action, discreteness, condition_a, condition_b1, condition_b2;
    std::string leaf_description;
    std::optional<Orbifold2> orbifold;
    std::string note;
    // Sampled structural residuals (leaf homomorphism / projection equivariance).
    double homomorphism_residual = 0.0;
    double equivariance_residual = 0.0;
    bool enumeration_complete = false;  // closure certified within the budget
    EnumerationBudget budget;
    std::uint64_t seed = 0;

    bool classified() const { return outcome == Outcome::Classified; }
    std::string outcome_text() const;
    std::string failing_condition() const;  // "", "a", "b1", "b2", "free", "discrete"
};

VerificationReport run_pipeline(const GroupSpec& spec, const EnumerationBudget& budget,
                                std::uint64_t seed = 1,
                                int structural_samples = 1000);

}  // namespace spaceform
