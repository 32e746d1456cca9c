#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spaceform/group.hpp"

namespace spaceform {

using Complex = std::complex<double>;

// w ↦ (aw + b)/(cw + d); acts linearly on homogeneous pairs.
struct MoebiusMap {
    Complex a{1}, b{0}, c{0}, d{1};
};

struct ChartValue {
    Complex value{};
    bool infinite = false;
};

// The standard submersions, with the target read through two stereographic
// charts (chart 0: w, chart 1: 1/w) so values near ∞ stay representable.
// An optional Möbius postcomposition acts on the homogeneous pair.
struct ChartedMap {
    enum class Kind { VerticalProjection, Hopf, HalfSpaceProjection, ScrewQuotient } kind =
        Kind::VerticalProjection;
    enum class Domain { Euclidean3, Sphere3, HalfSpace3 };
    int power = 1;  // screw-quotient exponent
    std::optional<MoebiusMap> post;

    Domain domain() const {
        switch (kind) {
            case Kind::Hopf: return Domain::Sphere3;
            case Kind::HalfSpaceProjection: return Domain::HalfSpace3;
            default: return Domain::Euclidean3;
        }
    }
    // Round-sphere (radius 1) target metric; Euclidean otherwise. With a
    // Möbius postcomposition the conformality defect is metric-independent.
    bool round_target() const { return kind == Kind::Hopf; }

    // Homogeneous target value (num : den); value = num/den.
    std::pair<Complex, Complex> homogeneous(const Vec4d& x) const;
    Complex eval(const Vec4d& x, int chart) const;
    int preferred_chart(const Vec4d& x) const;
    // Distance to the declared critical set (+∞ when the map has none).
    double critical_distance(const Vec4d& x) const;
    std::string name() const;
};

ChartedMap vertical_projection_map();
ChartedMap hopf_map();
ChartedMap halfspace_projection_map();
ChartedMap screw_quotient_map(int q);
ChartedMap with_postcomposition(ChartedMap base, const MoebiusMap& m);

// -- Pointwise map evaluation (the standard formulas) ---------------------------

Vec2d eval_vertical_projection(const Vec3d& x);
// Requires |z1|²+|z2|² = 1 within 1e-9.
ChartValue eval_hopf(Complex z1, Complex z2);
// Requires x₃ > 0.
Complex eval_halfspace_projection(const Vec3d& x);
Complex eval_screw_quotient(int q, const Vec3d& x);
// The quotient morphism of a rational screw family; throws unless the spec is
// a single screw about the vertical axis with a rational angle.
Complex eval_quotient_map(const GroupSpec& spec, const Vec3d& x);
int screw_quotient_exponent(const GroupSpec& spec);

// -- Numerical verification ------------------------------------------------------

struct DilationResult {
    double lambda = 0;
    double defect = 0;       // ‖Gram − λ²I‖_F / λ²
    double dphi_norm2 = 0;   // ‖dφ‖² in the target metric
};

// Horizontal conformality through central differences (step h) on a
// metric-orthonormal frame; Gram matrix of the two horizontal images.
DilationResult horizontal_conformality(const ChartedMap& map, const Vec4d& x, double h = 1e-5);

struct HarmonicTestFn {
    enum class Kind { RealPower, ImagPower, LogDistance } kind = Kind::RealPower;
    int k = 2;
    Complex c{};
    double eval(Complex w) const;
    std::string name() const;
};
// The three built-ins used by the verification suite.
std::vector<HarmonicTestFn> builtin_test_functions();

// Raw (single-step) Laplace–Beltrami value of fn∘map at x in the chart fixed
// by the centre point; also reports the stencil magnitude for relative errors.
double raw_laplacian(const ChartedMap& map, const HarmonicTestFn& fn, const Vec4d& x, double h,
                     double* scale_out = nullptr, int chart_override = -1);
// One Richardson level: (4·L(h/2) − L(h))/3, relative to the stencil scale.
double harmonicity_residual(const ChartedMap& map, const HarmonicTestFn& fn, const Vec4d& x,
                            double h = 1e-3);

// Geodesy defect of the fiber through x (5-point stencils, step h).
double fiber_geodesic_defect(const ChartedMap& map, const Vec4d& x, double h = 1e-2);

// Least-squares exponent of λ(r) ~ C·r^e along a ray toward the screw axis.
double dilation_decay_exponent(int q, const std::vector<double>& radii);

// -- Seeded sampling -------------------------------------------------------------

Vec4d sample_domain_point(const ChartedMap& map, std::mt19937_64& rng);
MoebiusMap random_moebius(std::mt19937_64& rng);

// True when fn∘map is well defined and the point is clear of critical sets
// and of the log singularity; samplers retry until this holds.
bool sample_ok_for(const ChartedMap& map, const HarmonicTestFn& fn, const Vec4d& x, double h);

}  // namespace spaceform
