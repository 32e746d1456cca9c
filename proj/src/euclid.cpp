#include "spaceform/euclid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spaceform {

namespace {

template <int N>
void check_orthogonal(const Motion<N>& g) {
    if (g.exact) {
        Mat<Rational, N> prod = g.exact->linear.transposed() * g.exact->linear;
        if (!(prod == Mat<Rational, N>::identity()))
            throw std::invalid_argument("linear part is not orthogonal (exact)");
    } else {
        Mat<double, N> prod = g.linear.transposed() * g.linear;
        if (max_abs(prod - Mat<double, N>::identity()) > 1e-12)
            throw std::invalid_argument("linear part is not orthogonal within 1e-12");
    }
}

Mat3d rodrigues(const Vec3d& unit_axis, double c, double s) {
    const Vec3d& n = unit_axis;
    Mat3d r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = (1 - c) * n[i] * n[j] + (i == j ? c : 0.0);
    r(0, 1) += -s * n[2];
    r(0, 2) += s * n[1];
    r(1, 0) += s * n[2];
    r(1, 2) += -s * n[0];
    r(2, 0) += -s * n[1];
    r(2, 1) += s * n[0];
    return r;
}

// Exact rotation matrix about a rational axis when the angle's trig values and
// the normalized axis are rational; nullopt otherwise.
std::optional<Mat3r> exact_rotation_matrix(const Vec3r& axis, const Angle& angle) {
    auto trig = angle.exact_cos_sin();
    if (!trig) return std::nullopt;
    const auto& [c, s] = *trig;
    Rational n2 = axis.norm2();
    if (n2 == 0) return std::nullopt;
    if (s == 0) {
        if (c == 1) return Mat3r::identity();
        // θ = π: R = 2nnᵀ − I needs no normalized axis.
        Mat3r r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r(i, j) = Rational(2) * axis[i] * axis[j] / n2 - Rational(i == j ? 1 : 0);
        return r;
    }
    if (!is_rational_square(n2)) return std::nullopt;
    Rational inv_norm = Rational(1) / rational_sqrt(n2);
    Vec3r n{axis[0] * inv_norm, axis[1] * inv_norm, axis[2] * inv_norm};
    Mat3r r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = (Rational(1) - c) * n[i] * n[j] + Rational(i == j ? 1 : 0) * c;
    r(0, 1) += -s * n[2];
    r(0, 2) += s * n[1];
    r(1, 0) += s * n[2];
    r(1, 2) += -s * n[0];
    r(2, 0) += -s * n[1];
    r(2, 1) += s * n[0];
    return r;
}

}  // namespace

template <int N>
Motion<N> make_motion(const Mat<double, N>& linear, const Vec<double, N>& translation) {
    Motion<N> g;
    g.linear = linear;
    g.translation = translation;
    g.exact.reset();
    check_orthogonal(g);
    return g;
}

template <int N>
Motion<N> make_motion_exact(const Mat<Rational, N>& linear, const Vec<Rational, N>& translation) {
    Motion<N> g;
    g.exact = ExactMotion<N>{linear, translation};
    g.linear = to_double(linear);
    g.translation = to_double(translation);
    check_orthogonal(g);
    return g;
}

template <int N>
Motion<N> compose(const Motion<N>& a, const Motion<N>& b) {
    Motion<N> g;
    g.linear = a.linear * b.linear;
    g.translation = a.linear * b.translation + a.translation;
    if (a.exact && b.exact) {
        g.exact = ExactMotion<N>{a.exact->linear * b.exact->linear,
                                 a.exact->linear * b.exact->translation + a.exact->translation};
        g.linear = to_double(g.exact->linear);
        g.translation = to_double(g.exact->translation);
    } else {
        g.exact.reset();
    }
    return g;
}

template <int N>
Motion<N> inverse(const Motion<N>& g) {
    // Orthogonal linear part: inverse is the transpose.
    Motion<N> r;
    r.linear = g.linear.transposed();
    r.translation = -(r.linear * g.translation);
    if (g.exact) {
        Mat<Rational, N> lt = g.exact->linear.transposed();
        r.exact = ExactMotion<N>{lt, -(lt * g.exact->translation)};
        r.linear = to_double(r.exact->linear);
        r.translation = to_double(r.exact->translation);
    } else {
        r.exact.reset();
    }
    return r;
}

template <int N>
double linear_det(const Motion<N>& g) {
    return det(g.linear);
}

template <int N>
bool is_identity(const Motion<N>& g, double tol) {
    return max_abs(g.linear - Mat<double, N>::identity()) <= tol && max_abs(g.translation) <= tol;
}

EuclIsometry translation3(const NumVec3& v) {
    EuclIsometry g;
    if (v.is_exact())
        g = make_motion_exact<3>(Mat3r::identity(), *v.exact);
    else
        g = make_motion<3>(Mat3d::identity(), v.approx);
    g.recipe = MotionRecipe<3>{MotionKind::Translation, {}, v, Angle{}, Rational(0)};
    return g;
}

EuclIsometry rotation3(const NumVec3& axis, const Angle& angle) {
    if (norm(axis.approx) < 1e-12) throw std::invalid_argument("rotation about zero axis");
    EuclIsometry g;
    std::optional<Mat3r> exact =
        axis.is_exact() ? exact_rotation_matrix(*axis.exact, angle) : std::nullopt;
    if (exact) {
        g = make_motion_exact<3>(*exact, Vec3r{});
    } else {
        auto [c, s] = angle.cos_sin();
        g = make_motion<3>(rodrigues(normalized(axis.approx), c, s), Vec3d{});
    }
    g.recipe = MotionRecipe<3>{MotionKind::Rotation, axis, {}, angle, Rational(0)};
    return g;
}

EuclIsometry screw3(const NumVec3& axis, const Angle& angle, const Rational& pitch) {
    EuclIsometry rot = rotation3(axis, angle);
    EuclIsometry g;
    if (rot.exact && axis.is_exact()) {
        Vec3r t{(*axis.exact)[0] * pitch, (*axis.exact)[1] * pitch, (*axis.exact)[2] * pitch};
        g = make_motion_exact<3>(rot.exact->linear, t);
    } else {
        double p = to_double(pitch);
        g = make_motion<3>(rot.linear, axis.approx * p);
    }
    g.recipe = MotionRecipe<3>{MotionKind::Screw, axis, {}, angle, pitch};
    return g;
}

EuclIsometry reflection3(const NumVec3& normal) {
    if (norm(normal.approx) < 1e-12) throw std::invalid_argument("reflection with zero normal");
    EuclIsometry g;
    if (normal.is_exact()) {
        const Vec3r& n = *normal.exact;
        Rational n2 = n.norm2();
        Mat3r m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) = Rational(i == j ? 1 : 0) - Rational(2) * n[i] * n[j] / n2;
        g = make_motion_exact<3>(m, Vec3r{});
    } else {
        Vec3d n = normalized(normal.approx);
        Mat3d m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - 2.0 * n[i] * n[j];
        g = make_motion<3>(m, Vec3d{});
    }
    g.recipe = MotionRecipe<3>{MotionKind::Reflection, normal, {}, Angle{}, Rational(0)};
    return g;
}

EuclIsometry glide3(const NumVec3& normal, const NumVec3& slide) {
    if (normal.is_exact() && slide.is_exact()) {
        if (normal.exact->dot(*slide.exact) != 0)
            throw std::invalid_argument("glide slide must be parallel to the mirror plane");
    } else if (std::abs(normal.approx.dot(slide.approx)) >
               1e-9 * (1 + norm(normal.approx) * norm(slide.approx))) {
        throw std::invalid_argument("glide slide must be parallel to the mirror plane");
    }
    EuclIsometry refl = reflection3(normal);
    EuclIsometry g = compose(translation3(slide), refl);
    g.recipe = MotionRecipe<3>{MotionKind::Glide, normal, slide, Angle{}, Rational(0)};
    return g;
}

PlaneIsometry translation2(const NumVec2& v) {
    PlaneIsometry g;
    if (v.is_exact())
        g = make_motion_exact<2>(Mat2r::identity(), *v.exact);
    else
        g = make_motion<2>(Mat2d::identity(), v.approx);
    g.recipe = MotionRecipe<2>{MotionKind::Translation, {}, v, Angle{}, Rational(0)};
    return g;
}

PlaneIsometry rotation_origin2(const Angle& angle) {
    PlaneIsometry g;
    if (auto trig = angle.exact_cos_sin()) {
        const auto& [c, s] = *trig;
        Mat2r m;
        m(0, 0) = c;
        m(0, 1) = -s;
        m(1, 0) = s;
        m(1, 1) = c;
        g = make_motion_exact<2>(m, Vec2r{});
    } else {
        auto [c, s] = angle.cos_sin();
        Mat2d m;
        m(0, 0) = c;
        m(0, 1) = -s;
        m(1, 0) = s;
        m(1, 1) = c;
        g = make_motion<2>(m, Vec2d{});
    }
    g.recipe = MotionRecipe<2>{MotionKind::Rotation, {}, {}, angle, Rational(0)};
    return g;
}

PlaneIsometry line_reflection2(const NumVec2& dir) {
    if (norm(dir.approx) < 1e-12) throw std::invalid_argument("reflection in zero direction");
    PlaneIsometry g;
    if (dir.is_exact()) {
        const Vec2r& v = *dir.exact;
        Rational n2 = v.norm2();
        Mat2r m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                m(i, j) = Rational(2) * v[i] * v[j] / n2 - Rational(i == j ? 1 : 0);
        g = make_motion_exact<2>(m, Vec2r{});
    } else {
        Vec2d v = normalized(dir.approx);
        Mat2d m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = 2.0 * v[i] * v[j] - (i == j ? 1.0 : 0.0);
        g = make_motion<2>(m, Vec2d{});
    }
    g.recipe = MotionRecipe<2>{MotionKind::Reflection, dir, {}, Angle{}, Rational(0)};
    return g;
}

PlaneIsometry glide2(const NumVec2& dir, const NumVec2& slide) {
    double cross2 = dir.approx[0] * slide.approx[1] - dir.approx[1] * slide.approx[0];
    if (std::abs(cross2) > 1e-9 * (1 + norm(dir.approx) * norm(slide.approx)))
        throw std::invalid_argument("glide slide must be parallel to the mirror line");
    PlaneIsometry g = compose(translation2(slide), line_reflection2(dir));
    g.recipe = MotionRecipe<2>{MotionKind::Glide, dir, slide, Angle{}, Rational(0)};
    return g;
}

template <int N>
FixedSet<N> fixed_point_set(const Motion<N>& g) {
    FixedSet<N> out;
    auto kind_from = [](int null_dim, bool linear_identity, bool translation_zero) {
        if constexpr (N == 3) {
            switch (null_dim) {
                case 0: return FixedSetKind::Point;
                case 1: return FixedSetKind::Line;
                case 2: return FixedSetKind::Plane;
                default: return (linear_identity && translation_zero) ? FixedSetKind::All : FixedSetKind::Empty;
            }
        } else {
            switch (null_dim) {
                case 0: return FixedSetKind::Point;
                case 1: return FixedSetKind::Line;
                default: return (linear_identity && translation_zero) ? FixedSetKind::All : FixedSetKind::Empty;
            }
        }
    };

    if (g.exact) {
        Mat<Rational, N> a = g.exact->linear - Mat<Rational, N>::identity();
        Vec<Rational, N> rhs = -g.exact->translation;
        auto sol = solve_exact(a, rhs);
        if (!sol.consistent) {
            out.kind = FixedSetKind::Empty;
            return out;
        }
        int null_dim = N - sol.rank;
        bool lin_id = g.exact->linear == Mat<Rational, N>::identity();
        bool tr_zero = g.exact->translation == Vec<Rational, N>{};
        out.kind = kind_from(null_dim, lin_id, tr_zero);
        out.point = to_double(sol.solution);
        if (!sol.null_basis.empty()) out.direction = to_double(sol.null_basis.front());
        return out;
    }

    Mat<double, N> a = g.linear - Mat<double, N>::identity();
    Vec<double, N> rhs = -g.translation;
    auto sol = solve_float(a, rhs, 1e-9);
    if (!sol.consistent) {
        out.kind = FixedSetKind::Empty;
        return out;
    }
    int null_dim = N - sol.rank;
    bool lin_id = max_abs(a) <= 1e-9;
    bool tr_zero = max_abs(g.translation) <= 1e-9;
    out.kind = kind_from(null_dim, lin_id, tr_zero);
    out.point = sol.solution;
    if (!sol.null_basis.empty()) out.direction = sol.null_basis.front();
    return out;
}

namespace {

// Normalizes an exact kernel vector to a primitive integer relation.
std::optional<std::vector<long long>> integer_relation_from_kernel(const std::vector<Rational>& kernel) {
    mpz_class lcm_den(1);
    for (const Rational& c : kernel) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> ints;
    mpz_class gcd_all(0);
    for (const Rational& c : kernel) {
        mpz_class v = c.get_num() * (lcm_den / c.get_den());
        mpz_gcd(gcd_all.get_mpz_t(), gcd_all.get_mpz_t(), v.get_mpz_t());
        ints.push_back(v);
    }
    if (gcd_all == 0) return std::nullopt;
    int sign = 0;
    for (auto& v : ints) {
        v /= gcd_all;
        if (sign == 0 && v != 0) sign = sgn(v);
    }
    std::vector<long long> out;
    for (auto& v : ints) {
        if (sign < 0) v = -v;
        if (!v.fits_slong_p()) return std::nullopt;
        out.push_back(v.get_si());
    }
    return out;
}

}  // namespace

template <int N>
RelationResult rational_relation(const std::vector<NumVec<N>>& vs, const RelationOptions& options) {
    RelationResult out;
    if (vs.empty()) return out;
    const std::size_t k = vs.size();

    bool all_exact = true;
    for (const auto& v : vs) all_exact = all_exact && v.is_exact();

    if (all_exact) {
        // Kernel of the N×k matrix whose columns are the vectors.
        std::vector<std::vector<Rational>> m(N, std::vector<Rational>(k));
        for (std::size_t j = 0; j < k; ++j)
            for (int i = 0; i < N; ++i) m[static_cast<std::size_t>(i)][j] = (*vs[j].exact)[i];
        rref_exact(m);
        std::vector<int> lead_of_col(k, -1);
        int r = 0;
        for (const auto& row : m) {
            for (std::size_t j = 0; j < k; ++j)
                if (row[j] != 0) {
                    lead_of_col[j] = r;
                    break;
                }
            ++r;
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (lead_of_col[j] != -1) continue;
            std::vector<Rational> kernel(k, Rational(0));
            kernel[j] = 1;
            for (std::size_t i = 0; i < k; ++i)
                if (lead_of_col[i] != -1) kernel[i] = -m[static_cast<std::size_t>(lead_of_col[i])][j];
            if (auto rel = integer_relation_from_kernel(kernel)) {
                out.related = true;
                out.relation = *rel;
                return out;
            }
        }
        return out;
    }

    // Float path: find real dependencies, then rationalize their coefficients.
    std::vector<std::vector<double>> m(N, std::vector<double>(k));
    double scale = 0;
    for (std::size_t j = 0; j < k; ++j)
        for (int i = 0; i < N; ++i) {
            m[static_cast<std::size_t>(i)][j] = vs[j].approx[i];
            scale = std::max(scale, std::abs(vs[j].approx[i]));
        }
    rref_double(m, 1e-10);
    std::vector<int> lead_of_col(k, -1);
    int r = 0;
    for (const auto& row : m) {
        for (std::size_t j = 0; j < k; ++j)
            if (row[j] != 0) {
                lead_of_col[j] = r;
                break;
            }
        ++r;
    }
    bool any_kernel = false;
    for (std::size_t j = 0; j < k; ++j) {
        if (lead_of_col[j] != -1) continue;
        any_kernel = true;
        std::vector<double> kernel(k, 0.0);
        kernel[j] = 1.0;
        for (std::size_t i = 0; i < k; ++i)
            if (lead_of_col[i] != -1) kernel[i] = -m[static_cast<std::size_t>(lead_of_col[i])][j];
        double amp = 0;
        for (double c : kernel) amp = std::max(amp, std::abs(c));
        std::vector<Rational> rat(k);
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            auto q = rationalize(kernel[i] / amp, options.max_denominator, options.accept_tol);
            if (!q)
                ok = false;
            else
                rat[i] = *q;
        }
        if (!ok) continue;
        auto rel = integer_relation_from_kernel(rat);
        if (!rel) continue;
        Vec<double, N> sum{};
        double coef_scale = 0;
        for (std::size_t i = 0; i < k; ++i) {
            sum = sum + vs[i].approx * static_cast<double>((*rel)[i]);
            coef_scale = std::max(coef_scale, std::abs(static_cast<double>((*rel)[i])));
        }
        if (norm(sum) <= options.zero_tol * std::max(1.0, scale) * std::max(1.0, coef_scale)) {
            out.related = true;
            out.relation = *rel;
            return out;
        }
    }
    out.bounded_search = any_kernel;
    return out;
}

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    double r = std::round(v);
    if (std::abs(v - r) < 1e-9) {
        os << static_cast<long long>(r);
    } else {
        os.precision(6);
        os << v;
    }
    return os.str();
}

template <int N>
std::string fmt_vec(const Vec<double, N>& v) {
    std::string s = "(";
    for (int i = 0; i < N; ++i) {
        if (i) s += ",";
        s += fmt_num(v[i]);
    }
    return s + ")";
}

}  // namespace

PlaneIsometryClass classify_plane_isometry(const PlaneIsometry& g, double tol) {
    PlaneIsometryClass out{};
    double d = linear_det(g);
    bool lin_id = max_abs(g.linear - Mat2d::identity()) <= tol;
    if (d > 0) {
        if (lin_id) {
            out.type = max_abs(g.translation) <= tol ? PlaneIsometryClass::Type::Identity
                                                     : PlaneIsometryClass::Type::Translation;
            out.translation = g.translation;
            return out;
        }
        out.type = PlaneIsometryClass::Type::Rotation;
        out.rotation_angle = std::atan2(g.linear(1, 0), g.linear(0, 0));
        if (out.rotation_angle < 0) out.rotation_angle += 2 * std::numbers::pi;
        // (I - A) c = b has a unique solution for a genuine rotation.
        Mat2d ia = Mat2d::identity() - g.linear;
        double dt = det(ia);
        out.rotation_center = Vec2d{(ia(1, 1) * g.translation[0] - ia(0, 1) * g.translation[1]) / dt,
                                    (-ia(1, 0) * g.translation[0] + ia(0, 0) * g.translation[1]) / dt};
        return out;
    }
    // Orientation-reversing: mirror direction is the +1 eigenvector.
    Vec2d dir{g.linear(0, 0) + 1.0, g.linear(1, 0)};
    if (norm(dir) < tol) dir = Vec2d{g.linear(0, 1), g.linear(1, 1) + 1.0};
    dir = normalized(dir);
    out.axis_direction = dir;
    double along = g.translation.dot(dir);
    out.translation = dir * along;
    out.type = std::abs(along) <= tol ? PlaneIsometryClass::Type::Reflection
                                      : PlaneIsometryClass::Type::Glide;
    return out;
}

std::string describe(const EuclIsometry& g) {
    double d = linear_det(g);
    bool lin_id = max_abs(g.linear - Mat3d::identity()) <= 1e-9;
    if (lin_id) {
        if (max_abs(g.translation) <= 1e-9) return "identity";
        return "translation " + fmt_vec<3>(g.translation);
    }
    if (d > 0) {
        // Axis from the skew part, or from A+I for half turns.
        Vec3d skew{g.linear(2, 1) - g.linear(1, 2), g.linear(0, 2) - g.linear(2, 0),
                   g.linear(1, 0) - g.linear(0, 1)};
        Vec3d axis;
        if (norm(skew) > 1e-6) {
            axis = normalized(skew);
        } else {
            Mat3d api = g.linear + Mat3d::identity();
            int best = 0;
            double best_norm = -1;
            for (int j = 0; j < 3; ++j) {
                Vec3d col{api(0, j), api(1, j), api(2, j)};
                if (norm(col) > best_norm) {
                    best_norm = norm(col);
                    best = j;
                }
            }
            axis = normalized(Vec3d{api(0, best), api(1, best), api(2, best)});
        }
        double tr = g.linear(0, 0) + g.linear(1, 1) + g.linear(2, 2);
        double angle = std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
        double pitch = g.translation.dot(axis);
        std::ostringstream os;
        os.precision(6);
        if (std::abs(pitch) > 1e-9)
            os << "screw angle " << angle << " about " << fmt_vec<3>(axis) << " advance " << pitch;
        else if (max_abs(g.translation) > 1e-9)
            os << "rotation angle " << angle << " about axis dir " << fmt_vec<3>(axis) << " + offset";
        else
            os << "rotation angle " << angle << " about " << fmt_vec<3>(axis);
        return os.str();
    }
    auto fs = fixed_point_set(g);
    if (fs.kind == FixedSetKind::Plane) return "reflection, mirror normal " + fmt_vec<3>(fs.direction);
    if (fs.kind == FixedSetKind::Empty) return "glide/improper motion, translation " + fmt_vec<3>(g.translation);
    return "improper motion with fixed point " + fmt_vec<3>(fs.point);
}

std::string describe(const PlaneIsometry& g) {
    auto c = classify_plane_isometry(g);
    std::ostringstream os;
    os.precision(6);
    switch (c.type) {
        case PlaneIsometryClass::Type::Identity:
            return "identity";
        case PlaneIsometryClass::Type::Translation:
            return "translation " + fmt_vec<2>(c.translation);
        case PlaneIsometryClass::Type::Rotation:
            os << "rotation angle " << c.rotation_angle << " about " << fmt_vec<2>(c.rotation_center);
            return os.str();
        case PlaneIsometryClass::Type::Reflection:
            return "reflection in line dir " + fmt_vec<2>(c.axis_direction);
        case PlaneIsometryClass::Type::Glide:
            return "glide along " + fmt_vec<2>(c.axis_direction) + " shift " + fmt_vec<2>(c.translation);
    }
    return "plane isometry";
}

template struct Motion<2>;
template struct Motion<3>;
template Motion<2> make_motion<2>(const Mat2d&, const Vec2d&);
template Motion<3> make_motion<3>(const Mat3d&, const Vec3d&);
template Motion<2> make_motion_exact<2>(const Mat2r&, const Vec2r&);
template Motion<3> make_motion_exact<3>(const Mat3r&, const Vec3r&);
template Motion<2> compose<2>(const Motion<2>&, const Motion<2>&);
template Motion<3> compose<3>(const Motion<3>&, const Motion<3>&);
template Motion<2> inverse<2>(const Motion<2>&);
template Motion<3> inverse<3>(const Motion<3>&);
template double linear_det<2>(const Motion<2>&);
template double linear_det<3>(const Motion<3>&);
template bool is_identity<2>(const Motion<2>&, double);
template bool is_identity<3>(const Motion<3>&, double);
template FixedSet<2> fixed_point_set<2>(const Motion<2>&);
template FixedSet<3> fixed_point_set<3>(const Motion<3>&);
template RelationResult rational_relation<2>(const std::vector<NumVec<2>>&, const RelationOptions&);
template RelationResult rational_relation<3>(const std::vector<NumVec<3>>&, const RelationOptions&);

}  // namespace spaceform
