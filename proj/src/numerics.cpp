#include "spaceform/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spaceform {

namespace {

Complex complex_pow_int(Complex w, int k) {
    Complex r{1};
    for (int i = 0; i < k; ++i) r *= w;
    return r;
}


}  // namespace

std::pair<Complex, Complex> ChartedMap::homogeneous(const Vec4d& x) const {
    Complex num, den{1};
    switch (kind) {
        case Kind::VerticalProjection:
            num = Complex(x[0], x[1]);
            break;
        case Kind::Hopf:
            num = Complex(x[0], x[1]);
            den = Complex(x[2], x[3]);
            break;
        case Kind::HalfSpaceProjection:
            if (x[2] <= 0) throw std::domain_error("half-space projection needs x3 > 0");
            num = Complex(x[0], x[1]);
            break;
        case Kind::ScrewQuotient:
            num = complex_pow_int(Complex(x[0], x[1]), power);
            break;
    }
    if (post) return {post->a * num + post->b * den, post->c * num + post->d * den};
    return {num, den};
}

Complex ChartedMap::eval(const Vec4d& x, int chart) const {
    auto [num, den] = homogeneous(x);
    return chart == 0 ? num / den : den / num;
}

int ChartedMap::preferred_chart(const Vec4d& x) const {
    // A Euclidean target has a single global chart; only sphere-valued maps
    // (Hopf, or anything postcomposed with a Moebius map) switch charts.
    if (!post && kind != Kind::Hopf) return 0;
    auto [num, den] = homogeneous(x);
    return std::abs(num) <= std::abs(den) ? 0 : 1;
}

double ChartedMap::critical_distance(const Vec4d& x) const {
    if (kind == Kind::ScrewQuotient && power >= 2) return std::hypot(x[0], x[1]);
    return std::numeric_limits<double>::infinity();
}

std::string ChartedMap::name() const {
    std::string base;
    switch (kind) {
        case Kind::VerticalProjection: base = "pi1"; break;
        case Kind::Hopf: base = "hopf"; break;
        case Kind::HalfSpaceProjection: base = "pi4"; break;
        case Kind::ScrewQuotient: base = "screw:" + std::to_string(power); break;
    }
    if (post) base = "moebius*" + base;
    return base;
}

ChartedMap vertical_projection_map() {
    ChartedMap m;
    m.kind = ChartedMap::Kind::VerticalProjection;
    return m;
}

ChartedMap hopf_map() {
    ChartedMap m;
    m.kind = ChartedMap::Kind::Hopf;
    return m;
}

ChartedMap halfspace_projection_map() {
    ChartedMap m;
    m.kind = ChartedMap::Kind::HalfSpaceProjection;
    return m;
}

ChartedMap screw_quotient_map(int q) {
    if (q < 1) throw std::invalid_argument("screw quotient exponent must be >= 1");
    ChartedMap m;
    m.kind = ChartedMap::Kind::ScrewQuotient;
    m.power = q;
    return m;
}
ChartedMap with_postcomposition(ChartedMap base, const MoebiusMap& m) {
    if (std::abs(m.a * m.d - m.b * m.c) < 1e-12)
        throw std::invalid_argument("degenerate Moebius coefficients");
    if (base.post) {
        MoebiusMap combined;
        combined.a = m.a * base.post->a + m.b * base.post->c;
        combined.b = m.a * base.post->b + m.b * base.post->d;
        combined.c = m.c * base.post->a + m.d * base.post->c;
        combined.d = m.c * base.post->b + m.d * base.post->d;
        base.post = combined;
    } else {
        base.post = m;
    }
    return base;
}

Vec2d eval_vertical_projection(const Vec3d& x) { return Vec2d{x[0], x[1]}; }

ChartValue eval_hopf(Complex z1, Complex z2) {
    double r2 = std::norm(z1) + std::norm(z2);
    if (std::abs(r2 - 1.0) > 1e-9) throw std::domain_error("hopf input is off the unit sphere");
    if (std::abs(z2) == 0.0) return {Complex{}, true};
    return {z1 / z2, false};
}

Complex eval_halfspace_projection(const Vec3d& x) {
    if (x[2] <= 0) throw std::domain_error("half-space projection needs x3 > 0");
    return Complex(x[0], x[1]);
}

Complex eval_screw_quotient(int q, const Vec3d& x) {
    return complex_pow_int(Complex(x[0], x[1]), q);
}

int screw_quotient_exponent(const GroupSpec& spec) {
    if (spec.ambient != GroupSpec::Ambient::Euclidean3 || spec.euclidean_generators.size() != 1)
        throw std::invalid_argument("not a screw quotient spec: need one Euclidean generator");
    const auto& g = spec.euclidean_generators.front();
    if (!g.recipe || (g.recipe->kind != MotionKind::Screw && g.recipe->kind != MotionKind::Translation))
        throw std::invalid_argument("not a screw quotient spec: generator is not a screw");
    const auto& axis = g.recipe->kind == MotionKind::Screw ? g.recipe->axis.approx
                                                           : g.recipe->shift.approx;
    if (std::abs(axis[0]) > 1e-9 || std::abs(axis[1]) > 1e-9 || std::abs(axis[2]) < 1e-9)
        throw std::invalid_argument("not a screw quotient spec: axis is not vertical");
    if (g.recipe->kind == MotionKind::Translation) return 1;
    if (!g.recipe->angle.is_rational())
        throw std::invalid_argument("not a screw quotient spec: irrational angle");
    return static_cast<int>(g.recipe->angle.order());
}

Complex eval_quotient_map(const GroupSpec& spec, const Vec3d& x) {
    return eval_screw_quotient(screw_quotient_exponent(spec), x);
}

// -- Frames and stencil steps -----------------------------------------------------

namespace {

// Metric-orthonormal frame of the domain at x.
std::vector<Vec4d> frame_at(const ChartedMap& map, const Vec4d& x) {
    switch (map.domain()) {
        case ChartedMap::Domain::Euclidean3:
            return {Vec4d{1, 0, 0, 0}, Vec4d{0, 1, 0, 0}, Vec4d{0, 0, 1, 0}};
        case ChartedMap::Domain::HalfSpace3: {
            double s = x[2];
            return {Vec4d{s, 0, 0, 0}, Vec4d{0, s, 0, 0}, Vec4d{0, 0, s, 0}};
        }
        case ChartedMap::Domain::Sphere3: {
            // Gram-Schmidt of the coordinate basis against x.
            std::vector<Vec4d> frame;
            for (int i = 0; i < 4 && frame.size() < 3; ++i) {
                Vec4d v{};
                v[i] = 1;
                v = v - x * x.dot(v);
                for (const auto& f : frame) v = v - f * f.dot(v);
                double n = norm(v);
                if (n > 1e-6) frame.push_back(v * (1.0 / n));
            }
            if (frame.size() != 3) throw std::runtime_error("degenerate tangent frame");
            return frame;
        }
    }
    throw std::logic_error("unreachable");
}

// Point reached by moving distance h from x in the frame direction t.
Vec4d advance(const ChartedMap& map, const Vec4d& x, const Vec4d& t, double h) {
    if (map.domain() == ChartedMap::Domain::Sphere3)
        return x * std::cos(h) + t * std::sin(h);
    return x + t * h;
}

double conformal_factor(const ChartedMap& map, Complex w) {
    if (!map.round_target()) return 1.0;
    double s = 1.0 + std::norm(w);
    return 4.0 / (s * s);
}

}  // namespace

DilationResult horizontal_conformality(const ChartedMap& map, const Vec4d& x, double h) {
    const int chart = map.preferred_chart(x);
    auto frame = frame_at(map, x);

    // 2x3 Jacobian in chart coordinates over the metric frame.
    double J[2][3];
    for (int i = 0; i < 3; ++i) {
        Complex plus = map.eval(advance(map, x, frame[static_cast<std::size_t>(i)], h), chart);
        Complex minus = map.eval(advance(map, x, frame[static_cast<std::size_t>(i)], -h), chart);
        Complex d = (plus - minus) / (2 * h);
        J[0][i] = d.real();
        J[1][i] = d.imag();
    }

    Mat3d m{};  // JᵀJ
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = J[0][i] * J[0][j] + J[1][i] * J[1][j];
    Vec3d evals;
    Mat3d evecs;
    symmetric_eigen(m, evals, evecs);

    const double conf = conformal_factor(map, map.eval(x, chart));
    DilationResult out;
    out.dphi_norm2 = conf * (m(0, 0) + m(1, 1) + m(2, 2));

    // Horizontal directions: the two largest-eigenvalue eigenvectors.
    double gram[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double ju[2] = {0, 0}, jv[2] = {0, 0};
            for (int i = 0; i < 3; ++i) {
                ju[0] += J[0][i] * evecs(i, 2 - a);
                ju[1] += J[1][i] * evecs(i, 2 - a);
                jv[0] += J[0][i] * evecs(i, 2 - b);
                jv[1] += J[1][i] * evecs(i, 2 - b);
            }
            gram[a][b] = conf * (ju[0] * jv[0] + ju[1] * jv[1]);
        }
    double lam2 = 0.5 * (gram[0][0] + gram[1][1]);
    out.lambda = std::sqrt(std::max(0.0, lam2));
    if (lam2 < 1e-12) {
        if (map.critical_distance(x) > 10 * h)
            throw std::domain_error("horizontal differential is rank-deficient away from the "
                                    "declared critical set");
        out.defect = 0.0;  // declared-critical region
        return out;
    }
    double d00 = gram[0][0] - lam2, d11 = gram[1][1] - lam2;
    out.defect = std::sqrt(d00 * d00 + d11 * d11 + 2 * gram[0][1] * gram[1][0]) / lam2;
    return out;
}

double HarmonicTestFn::eval(Complex w) const {
    switch (kind) {
        case Kind::RealPower: return complex_pow_int(w, k).real();
        case Kind::ImagPower: return complex_pow_int(w, k).imag();
        case Kind::LogDistance: return std::log(std::abs(w - c));
    }
    return 0;
}

std::string HarmonicTestFn::name() const {
    switch (kind) {
        case Kind::RealPower: return "Re(w^" + std::to_string(k) + ")";
        case Kind::ImagPower: return "Im(w^" + std::to_string(k) + ")";
        case Kind::LogDistance: return "log|w-c|";
    }
    return "?";
}

std::vector<HarmonicTestFn> builtin_test_functions() {
    return {{HarmonicTestFn::Kind::RealPower, 2, {}},
            {HarmonicTestFn::Kind::ImagPower, 3, {}},
            {HarmonicTestFn::Kind::LogDistance, 0, Complex(3.7, 2.9)}};
}

double raw_laplacian(const ChartedMap& map, const HarmonicTestFn& fn, const Vec4d& x, double h,
                     double* scale_out, int chart_override) {
    const int chart = chart_override >= 0 ? chart_override : map.preferred_chart(x);

    auto value = [&](const Vec4d& y) {
        if (map.domain() == ChartedMap::Domain::Sphere3) {
            // Degree-zero homogeneous extension off the sphere.
            Vec4d u = y * (1.0 / norm(y));
            return fn.eval(map.eval(u, chart));
        }
        return fn.eval(map.eval(y, chart));
    };

    const double f0 = value(x);
    const int dims = map.domain() == ChartedMap::Domain::Sphere3 ? 4 : 3;
    double lap = 0, scale = 0;
    for (int i = 0; i < dims; ++i) {
        Vec4d step{};
        step[i] = h;
        double term = (value(x + step) - 2 * f0 + value(x - step)) / (h * h);
        lap += term;
        scale += std::abs(term);
    }
    if (scale_out) {
        // Residuals are reported relative to the full Hessian magnitude, so
        // the mixed partials enter the scale even though the Laplacian stencil
        // never sees them.
        for (int i = 0; i < dims; ++i)
            for (int j = i + 1; j < dims; ++j) {
                Vec4d si{}, sj{};
                si[i] = h;
                sj[j] = h;
                double mixed = (value(x + si + sj) - value(x + si - sj) - value(x - si + sj) +
                                value(x - si - sj)) /
                               (4 * h * h);
                scale += std::abs(mixed);
            }
    }
    if (map.domain() == ChartedMap::Domain::HalfSpace3) {
        // Δ_H u = x₃²·Δu − x₃·∂₃u on the upper half-space.
        Vec4d step{};
        step[2] = h;
        double d3 = (value(x + step) - value(x - step)) / (2 * h);
        double x3 = x[2];
        lap = x3 * x3 * lap - x3 * d3;
        scale = x3 * x3 * scale + std::abs(x3 * d3);
    }
    if (scale_out) *scale_out = scale;
    return lap;
}

double harmonicity_residual(const ChartedMap& map, const HarmonicTestFn& fn, const Vec4d& x,
                            double h) {
    if (map.critical_distance(x) < 10 * h)
        throw std::domain_error("stencil would straddle the critical set");
    const int chart = map.preferred_chart(x);
    double scale_h = 0, scale_h2 = 0;
    double lap_h = raw_laplacian(map, fn, x, h, &scale_h, chart);
    double lap_h2 = raw_laplacian(map, fn, x, h / 2, &scale_h2, chart);
    double richardson = (4 * lap_h2 - lap_h) / 3.0;
    return std::abs(richardson) / std::max(scale_h2, 1e-8);
}

namespace {

// 5-point second derivative, O(h⁴) truncation.
template <class F>
Vec4d second_derivative5(const F& gamma, double t, double h) {
    Vec4d m2 = gamma(t - 2 * h), m1 = gamma(t - h), z = gamma(t), p1 = gamma(t + h),
          p2 = gamma(t + 2 * h);
    return (m2 * -1.0 + m1 * 16.0 + z * -30.0 + p1 * 16.0 + p2 * -1.0) * (1.0 / (12 * h * h));
}
template <class F>
Vec4d first_derivative5(const F& gamma, double t, double h) {
    Vec4d m2 = gamma(t - 2 * h), m1 = gamma(t - h), p1 = gamma(t + h), p2 = gamma(t + 2 * h);
    return (m2 * 1.0 + m1 * -8.0 + p1 * 8.0 + p2 * -1.0) * (1.0 / (12 * h));
}

}  // namespace

double fiber_geodesic_defect(const ChartedMap& map, const Vec4d& x, double h) {
    switch (map.domain()) {
        case ChartedMap::Domain::Euclidean3: {
            auto gamma = [&](double t) {
                Vec4d y = x;
                y[2] += t;
                return y;
            };
            double defect = 0;
            for (double t : {0.0, 0.85}) defect = std::max(defect, norm(second_derivative5(gamma, t, h)));
            return defect;
        }
        case ChartedMap::Domain::Sphere3: {
            Quaternion q = Quaternion::from_vec(x).normalized();
            auto gamma = [&](double t) { return (Quaternion::polar(t) * q).vec(); };
            double defect = 0;
            for (double t : {0.0, 0.7, 1.9}) {
                Vec4d acc = second_derivative5(gamma, t, h);
                defect = std::max(defect, norm(acc + gamma(t)));
            }
            return defect;
        }
        case ChartedMap::Domain::HalfSpace3: {
            // Unit-speed vertical line: x₃(s) = c·eˢ; geodesic equation
            // ẍ₃·x₃ = ẋ₃², horizontal components constant.
            auto gamma = [&](double s) {
                Vec4d y = x;
                y[2] = x[2] * std::exp(s);
                return y;
            };
            double defect = 0;
            for (double s : {0.0, 0.5}) {
                Vec4d d1 = first_derivative5(gamma, s, h);
                Vec4d d2 = second_derivative5(gamma, s, h);
                double x3 = x[2] * std::exp(s);
                defect = std::max(defect, std::abs(d2[2] * x3 - d1[2] * d1[2]) / (x3 * x3));
                defect = std::max(defect, std::abs(d2[0]));
                defect = std::max(defect, std::abs(d2[1]));
            }
            return defect;
        }
    }
    throw std::logic_error("unreachable");
}

double dilation_decay_exponent(int q, const std::vector<double>& radii) {
    ChartedMap map = screw_quotient_map(q);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double r : radii) {
        Vec4d x{r * std::cos(0.3), r * std::sin(0.3), 0.4, 0};
        double lambda = horizontal_conformality(map, x, std::min(1e-5, r / 100)).lambda;
        double lx = std::log(r), ly = std::log(lambda);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Vec4d sample_domain_point(const ChartedMap& map, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    switch (map.domain()) {
        case ChartedMap::Domain::Sphere3: {
            Vec4d v{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
            double n = norm(v);
            if (n < 1e-3) return sample_domain_point(map, rng);
            return v * (1.0 / n);
        }
        case ChartedMap::Domain::HalfSpace3: {
            std::uniform_real_distribution<double> height(0.5, 2.5);
            return Vec4d{uni(rng), uni(rng), height(rng), 0};
        }
        case ChartedMap::Domain::Euclidean3: {
            if (map.kind == ChartedMap::Kind::ScrewQuotient) {
                std::uniform_real_distribution<double> rad(0.4, 1.8);
                std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
                std::uniform_real_distribution<double> up(-1.0, 1.0);
                double r = rad(rng), a = ang(rng);
                return Vec4d{r * std::cos(a), r * std::sin(a), up(rng), 0};
            }
            return Vec4d{uni(rng), uni(rng), uni(rng), 0};
        }
    }
    throw std::logic_error("unreachable");
}

MoebiusMap random_moebius(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int tries = 0; tries < 64; ++tries) {
        MoebiusMap m;
        m.a = Complex(gauss(rng), gauss(rng));
        m.b = Complex(gauss(rng), gauss(rng));
        m.c = Complex(gauss(rng), gauss(rng));
        m.d = Complex(gauss(rng), gauss(rng));
        if (std::abs(m.a * m.d - m.b * m.c) > 0.3) return m;
    }
    throw std::runtime_error("failed to draw a nondegenerate Moebius map");
}

bool sample_ok_for(const ChartedMap& map, const HarmonicTestFn& fn, const Vec4d& x, double h) {
    if (map.critical_distance(x) < 10 * h) return false;
    const int chart = map.preferred_chart(x);
    Complex w = map.eval(x, chart);
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
    // Keep clear of the chart boundary so the whole stencil shares a chart.
    bool chart_switching = map.post || map.kind == ChartedMap::Kind::Hopf;
    if (chart_switching && std::abs(std::abs(w) - 1.0) < 0.02) return false;
    if (fn.kind == HarmonicTestFn::Kind::LogDistance && std::abs(w - fn.c) < 0.5) return false;
    return true;
}

}  // namespace spaceform
