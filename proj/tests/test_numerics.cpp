#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spaceform/foliation.hpp"
#include "spaceform/numerics.hpp"

using namespace spaceform;

namespace {

const double kSqrtHalf = std::numbers::sqrt2 / 2.0;

Vec4d random_sphere_point(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec4d v{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    return v * (1.0 / norm(v));
}

// Analytic differential of z1/z2 on a real tangent vector of S³, read in the
// chart fixed by the base point; the independent conformality oracle.
Complex hopf_differential(const Vec4d& x, const Vec4d& t, int chart) {
    Complex z1(x[0], x[1]), z2(x[2], x[3]);
    Complex w1(t[0], t[1]), w2(t[2], t[3]);
    if (chart == 0) return (w1 * z2 - z1 * w2) / (z2 * z2);
    return (w2 * z1 - z2 * w1) / (z1 * z1);
}

}  // namespace

TEST_CASE("pointwise formulas") {
    CHECK(max_abs(eval_vertical_projection(Vec3d{1, 2, 3}) - Vec2d{1, 2}) == 0.0);
    CHECK(max_abs(eval_vertical_projection(Vec3d{0, 0, 7}) - Vec2d{0, 0}) == 0.0);

    CHECK(eval_hopf(Complex(0, 0), Complex(1, 0)).value == Complex(0, 0));
    CHECK(eval_hopf(Complex(1, 0), Complex(0, 0)).infinite);
    auto mid = eval_hopf(Complex(kSqrtHalf, 0), Complex(kSqrtHalf, 0));
    CHECK_FALSE(mid.infinite);
    CHECK(std::abs(mid.value - Complex(1, 0)) < 1e-12);
    CHECK_THROWS(eval_hopf(Complex(1, 0), Complex(1, 0)));  // off the sphere

    CHECK(eval_halfspace_projection(Vec3d{1, 2, 5}) == Complex(1, 2));
    CHECK(eval_halfspace_projection(Vec3d{0, 0, 0.01}) == Complex(0, 0));
    CHECK(eval_halfspace_projection(Vec3d{3, -1, 0.1}) == Complex(3, -1));
    CHECK_THROWS(eval_halfspace_projection(Vec3d{1, 1, 0}));

    CHECK(std::abs(eval_screw_quotient(2, Vec3d{1, 0, 0}) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(eval_screw_quotient(2, Vec3d{-1, 0, 0}) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(eval_screw_quotient(3, Vec3d{0, 1, 5}) - Complex(0, -1)) < 1e-15);  // i^3 = -i
}

TEST_CASE("screw-quotient map recognition from a group spec") {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Euclidean3;
    spec.euclidean_generators = {screw3(exact_vec3(0, 0, 1), Angle::turns(1, 2), Rational(1))};
    CHECK(screw_quotient_exponent(spec) == 2);
    CHECK(std::abs(eval_quotient_map(spec, Vec3d{0, 1, 3}) - Complex(-1, 0)) < 1e-15);

    GroupSpec vertical;
    vertical.ambient = GroupSpec::Ambient::Euclidean3;
    vertical.euclidean_generators = {translation3(exact_vec3(0, 0, 1))};
    CHECK(screw_quotient_exponent(vertical) == 1);
    CHECK(eval_quotient_map(vertical, Vec3d{0.5, -0.25, 9}) == Complex(0.5, -0.25));

    GroupSpec bad;
    bad.ambient = GroupSpec::Ambient::Euclidean3;
    bad.euclidean_generators = {screw3(exact_vec3(1, 0, 0), Angle::turns(1, 2), Rational(1))};
    CHECK_THROWS(screw_quotient_exponent(bad));
}

TEST_CASE("orbit invariance of the quotient morphism") {
    GroupSpec spec;
    spec.ambient = GroupSpec::Ambient::Euclidean3;
    spec.euclidean_generators = {screw3(exact_vec3(0, 0, 1), Angle::turns(1, 3), Rational(1))};
    auto en = enumerate_group(spec.euclidean_generators, EnumerationBudget{});
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        Vec3d x{uni(rng), uni(rng), uni(rng)};
        Complex base = eval_quotient_map(spec, x);
        const auto& g = en.elements[i % en.elements.size()];
        Complex moved = eval_quotient_map(spec, g(x));
        CHECK(std::abs(moved - base) < 1e-9 * (1.0 + std::abs(base)));
    }
}

TEST_CASE("dilations of the standard maps") {
    std::mt19937_64 rng(37);
    ChartedMap pi1 = vertical_projection_map();
    ChartedMap hopf = hopf_map();
    ChartedMap pi4 = halfspace_projection_map();

    for (int i = 0; i < 100; ++i) {
        Vec4d x = sample_domain_point(pi1, rng);
        auto d = horizontal_conformality(pi1, x);
        CHECK(std::abs(d.lambda - 1.0) < 1e-8);
        CHECK(d.defect < 1e-8);
    }
    for (int i = 0; i < 100; ++i) {
        Vec4d x = sample_domain_point(hopf, rng);
        auto d = horizontal_conformality(hopf, x);
        CHECK(std::abs(d.lambda - 2.0) < 1e-5);
        CHECK(d.defect < 1e-5);
        // Dilation identity lambda^2 = |dphi|^2 / 2.
        CHECK(std::abs(d.lambda * d.lambda - d.dphi_norm2 / 2) < 1e-6 * (1 + d.dphi_norm2));
    }
    for (int i = 0; i < 100; ++i) {
        Vec4d x = sample_domain_point(pi4, rng);
        auto d = horizontal_conformality(pi4, x);
        CHECK(std::abs(d.lambda - x[2]) < 1e-5);
        CHECK(d.defect < 1e-5);
    }
}

TEST_CASE("hopf dilation cross-checked against the analytic differential") {
    std::mt19937_64 rng(41);
    ChartedMap hopf = hopf_map();
    for (int i = 0; i < 100; ++i) {
        Vec4d x = random_sphere_point(rng);
        int chart = hopf.preferred_chart(x);
        // Build the fiber direction i·x and two horizontal tangents.
        Quaternion q = Quaternion::from_vec(x);
        Vec4d fiber = (Quaternion{0, 1, 0, 0} * q).vec();
        std::vector<Vec4d> horiz;
        for (int k = 0; k < 4 && horiz.size() < 2; ++k) {
            Vec4d v{};
            v[k] = 1;
            v = v - x * x.dot(v) - fiber * fiber.dot(v);
            for (const auto& h : horiz) v = v - h * h.dot(v);
            if (norm(v) > 1e-3) horiz.push_back(v * (1.0 / norm(v)));
        }
        REQUIRE(horiz.size() == 2);
        // Oracle: |dπ₂(h)| in the round target metric at w.
        Complex w = hopf.eval(x, chart);
        double conf = 2.0 / (1.0 + std::norm(w));
        double lam0 = std::abs(hopf_differential(x, horiz[0], chart)) * conf;
        double lam1 = std::abs(hopf_differential(x, horiz[1], chart)) * conf;
        CHECK(lam0 == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(lam1 == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(horizontal_conformality(hopf, x).lambda == doctest::Approx(lam0).epsilon(1e-6));
    }
}

TEST_CASE("spectral oracle for the sphere Laplacian machinery") {
    // The degree-0 homogeneous extension trick must reproduce the exact
    // eigenvalues -k(k+2) on degree-k harmonics restricted to S³.
    auto laplacian_s3 = [](auto&& f, const Vec4d& x, double h) {
        auto u = [&](const Vec4d& y) { return f(y * (1.0 / norm(y))); };
        double lap = 0;
        for (int i = 0; i < 4; ++i) {
            Vec4d step{};
            step[i] = h;
            lap += (u(x + step) - 2 * u(x) + u(x - step)) / (h * h);
        }
        return lap;
    };
    std::mt19937_64 rng(43);
    for (int i = 0; i < 50; ++i) {
        Vec4d x = random_sphere_point(rng);
        // Degree 1: coordinate functions, eigenvalue -3.
        auto linear = [](const Vec4d& y) { return y[1]; };
        double l1 = laplacian_s3(linear, x, 1e-3);
        CHECK(l1 == doctest::Approx(-3.0 * x[1]).epsilon(2e-5));
        // Degree 2: each component of the leaf projection, eigenvalue -8.
        auto quad = [](const Vec4d& y) {
            return hopf_leaf_projection(Quaternion::from_vec(y))[0];
        };
        double l2 = laplacian_s3(quad, x, 1e-3);
        double n0 = hopf_leaf_projection(Quaternion::from_vec(x))[0];
        CHECK(l2 == doctest::Approx(-8.0 * n0).epsilon(5e-5).scale(1.0));
    }
}

TEST_CASE("harmonicity residuals of the standard maps") {
    std::mt19937_64 rng(47);
    auto fns = builtin_test_functions();
    {
        ChartedMap pi1 = vertical_projection_map();
        HarmonicTestFn f{HarmonicTestFn::Kind::RealPower, 2, {}};  // Re w² = x² - y² up the map
        CHECK(harmonicity_residual(pi1, f, Vec4d{0.3, -0.2, 5.0, 0}) < 1e-6);
    }
    {
        ChartedMap hopf = hopf_map();
        HarmonicTestFn f{HarmonicTestFn::Kind::RealPower, 1, {}};
        for (int i = 0; i < 50; ++i) {
            Vec4d x = sample_domain_point(hopf, rng);
            int guard = 0;
            while (!sample_ok_for(hopf, f, x, 1e-3) && guard++ < 100)
                x = sample_domain_point(hopf, rng);
            CHECK(harmonicity_residual(hopf, f, x) < 1e-4);
        }
    }
    {
        ChartedMap pi4 = halfspace_projection_map();
        HarmonicTestFn f{HarmonicTestFn::Kind::ImagPower, 2, {}};
        CHECK(harmonicity_residual(pi4, f, Vec4d{1, 1, 2, 0}) < 1e-4);
        for (const auto& fn : fns) {
            Vec4d x = sample_domain_point(pi4, rng);
            CHECK(harmonicity_residual(pi4, fn, x) < 1e-4);
        }
    }
    {
        // The critical-set guard refuses stencils near the screw axis.
        ChartedMap sq = screw_quotient_map(2);
        HarmonicTestFn f{HarmonicTestFn::Kind::RealPower, 2, {}};
        CHECK_THROWS(harmonicity_residual(sq, f, Vec4d{1e-4, 0, 0, 0}));
    }
}

TEST_CASE("the quotient morphisms are harmonic away from the axis") {
    std::mt19937_64 rng(71);
    auto fns = builtin_test_functions();
    for (int q : {2, 3}) {
        ChartedMap map = screw_quotient_map(q);
        for (int i = 0; i < 25; ++i) {
            Vec4d x = sample_domain_point(map, rng);
            int guard = 0;
            while (!sample_ok_for(map, fns[2], x, 1e-3) && guard++ < 100)
                x = sample_domain_point(map, rng);
            for (const auto& fn : fns) CHECK(harmonicity_residual(map, fn, x) < 1e-4);
            CHECK(horizontal_conformality(map, x).defect < 1e-5);
        }
    }
}

TEST_CASE("fiber geodesy") {
    ChartedMap pi1 = vertical_projection_map();
    CHECK(fiber_geodesic_defect(pi1, Vec4d{1, 2, 0, 0}) < 1e-10);

    ChartedMap hopf = hopf_map();
    CHECK(fiber_geodesic_defect(hopf, Vec4d{kSqrtHalf, 0, kSqrtHalf, 0}) < 1e-8);
    std::mt19937_64 rng(53);
    for (int i = 0; i < 50; ++i)
        CHECK(fiber_geodesic_defect(hopf, random_sphere_point(rng)) < 1e-8);

    ChartedMap pi4 = halfspace_projection_map();
    CHECK(fiber_geodesic_defect(pi4, Vec4d{0, 0, 1, 0}) < 1e-6);
    CHECK(fiber_geodesic_defect(pi4, Vec4d{2, -1, 0.7, 0}) < 1e-6);
}

TEST_CASE("fiber constancy, chart-aware") {
    // Chordal comparison of map values along each fiber.
    auto chordal = [](Complex a, bool ainf, Complex b, bool binf) {
        if (ainf && binf) return 0.0;
        if (ainf) return 1.0 / std::sqrt(1.0 + std::norm(b));
        if (binf) return 1.0 / std::sqrt(1.0 + std::norm(a));
        return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
    };
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 1000; ++i) {
        Vec4d x = random_sphere_point(rng);
        Quaternion q = Quaternion::from_vec(x);
        Quaternion moved = Quaternion::polar(angle(rng)) * q;
        auto a = eval_hopf(Complex(q.w, q.x), Complex(q.y, q.z));
        auto b = eval_hopf(Complex(moved.w, moved.x), Complex(moved.y, moved.z));
        CHECK(chordal(a.value, a.infinite, b.value, b.infinite) < 1e-9);
    }
}

TEST_CASE("conformal postcomposition preserves the morphism residuals") {
    std::mt19937_64 rng(61);
    auto fns = builtin_test_functions();
    // w -> 1/w swaps the two stereographic charts of the Hopf target.
    MoebiusMap inv;
    inv.a = 0;
    inv.b = 1;
    inv.c = 1;
    inv.d = 0;
    ChartedMap hopf_inv = with_postcomposition(hopf_map(), inv);
    for (int i = 0; i < 30; ++i) {
        Vec4d x = sample_domain_point(hopf_inv, rng);
        int guard = 0;
        while (!sample_ok_for(hopf_inv, fns[2], x, 1e-3) && guard++ < 200)
            x = sample_domain_point(hopf_inv, rng);
        CHECK(horizontal_conformality(hopf_inv, x).defect < 1e-5);
        for (const auto& fn : fns) CHECK(harmonicity_residual(hopf_inv, fn, x) < 1e-4);
    }
    // (w+1)/(w-1) on the flat projection, away from the pole.
    MoebiusMap m;
    m.a = 1;
    m.b = 1;
    m.c = 1;
    m.d = -1;
    ChartedMap proj = with_postcomposition(vertical_projection_map(), m);
    for (int i = 0; i < 30; ++i) {
        Vec4d x = sample_domain_point(proj, rng);
        int guard = 0;
        while (!sample_ok_for(proj, fns[2], x, 1e-3) && guard++ < 200)
            x = sample_domain_point(proj, rng);
        CHECK(horizontal_conformality(proj, x).defect < 1e-5);
        for (const auto& fn : fns) CHECK(harmonicity_residual(proj, fn, x) < 1e-4);
    }
    CHECK_THROWS(with_postcomposition(hopf_map(), MoebiusMap{1, 2, 2, 4}));
}

TEST_CASE("critical dilation decay") {
    CHECK(dilation_decay_exponent(2, {0.1, 0.05, 0.025}) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(dilation_decay_exponent(3, {0.1, 0.05, 0.025}) == doctest::Approx(2.0).epsilon(1e-2));
    // q = 1 has no critical points and unit dilation everywhere.
    ChartedMap flat = screw_quotient_map(1);
    auto d = horizontal_conformality(flat, Vec4d{0.01, 0.02, 0.4, 0});
    CHECK(d.lambda == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("finite-difference residuals converge at second order") {
    std::mt19937_64 rng(67);
    HarmonicTestFn logfn{HarmonicTestFn::Kind::LogDistance, 0, Complex(3.7, 2.9)};
    for (auto map : {vertical_projection_map(), hopf_map(), halfspace_projection_map()}) {
        Vec4d x = sample_domain_point(map, rng);
        int guard = 0;
        while (!sample_ok_for(map, logfn, x, 2e-2) && guard++ < 200)
            x = sample_domain_point(map, rng);
        int chart = map.preferred_chart(x);
        double l1 = std::abs(raw_laplacian(map, logfn, x, 1e-2, nullptr, chart));
        double l2 = std::abs(raw_laplacian(map, logfn, x, 5e-3, nullptr, chart));
        if (l1 > 1e-11) {
            double order = std::log2(l1 / std::max(l2, 1e-300));
            CHECK(order >= 1.8);
        }
    }
}
