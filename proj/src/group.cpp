#include "spaceform/group.hpp"

#include <algorithm>
#include <cmath>

namespace spaceform {

bool has_fixed_points(const Motion<3>& g) { return fixed_point_set(g).kind != FixedSetKind::Empty; }
bool has_fixed_points(const Motion<2>& g) { return fixed_point_set(g).kind != FixedSetKind::Empty; }

bool has_fixed_points(const SO4Element& g) {
    // Fixed vector on S³ ⇔ eigenvalue 1 of the 4×4 matrix.
    Mat4d m = g.matrix() - Mat4d::identity();
    return std::abs(det(m)) <= 1e-8;
}

namespace detail {

template <int N>
std::optional<std::vector<long long>> shrink_translations(std::vector<Vec<double, N>> vecs,
                                                          double eps) {
    const std::size_t k = vecs.size();
    if (k == 0) return std::nullopt;
    double scale = 0;
    for (const auto& v : vecs) scale = std::max(scale, norm(v));
    if (scale == 0) return std::nullopt;

    // coeffs[i] expresses vecs[i] in terms of the original list.
    std::vector<std::vector<long long>> coeffs(k, std::vector<long long>(k, 0));
    for (std::size_t i = 0; i < k; ++i) coeffs[i][i] = 1;

    std::vector<bool> dead(k, false);
    auto alive_norm2 = [&](std::size_t i) { return vecs[i].norm2(); };

    for (int pass = 0; pass < 128; ++pass) {
        bool changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (dead[i]) continue;
            double n2 = alive_norm2(i);
            if (n2 < 1e-24 * scale * scale) {
                dead[i] = true;  // exact integer dependency, not a near-return
                continue;
            }
            if (std::sqrt(n2) < eps) {
                bool nonzero = false;
                for (long long c : coeffs[i]) nonzero = nonzero || c != 0;
                if (nonzero) return coeffs[i];
            }
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j || dead[j]) continue;
                double denom = alive_norm2(j);
                if (denom < 1e-24 * scale * scale) continue;
                double mu = std::round(vecs[i].dot(vecs[j]) / denom);
                if (mu == 0 || std::abs(mu) > 9e15) continue;
                vecs[i] = vecs[i] - vecs[j] * mu;
                long long imu = static_cast<long long>(mu);
                bool overflow = false;
                for (std::size_t c = 0; c < k; ++c) {
                    long long delta;
                    if (__builtin_mul_overflow(imu, coeffs[j][c], &delta) ||
                        __builtin_add_overflow(coeffs[i][c], -delta, &coeffs[i][c]))
                        overflow = true;
                }
                if (overflow) return std::nullopt;
                changed = true;
                double nn = norm(vecs[i]);
                if (nn > 1e-12 * scale && nn < eps) return coeffs[i];
            }
        }
        if (!changed) break;
    }
    return std::nullopt;
}

template std::optional<std::vector<long long>> shrink_translations<2>(std::vector<Vec2d>, double);
template std::optional<std::vector<long long>> shrink_translations<3>(std::vector<Vec3d>, double);

template <class G>
bool key_is_identity(const G& g) {
    return element_key(g) == element_key(GroupOps<G>::identity());
}

// Powers of a Euclidean motion accumulate near the identity only if the
// translation component along the invariant axis vanishes; otherwise that
// component grows linearly and the probe can be skipped.
template <int N>
bool powers_escape(const Motion<N>& g) {
    Mat<double, N> a = g.linear - Mat<double, N>::identity();
    if (max_abs(a) <= 1e-9) return norm(g.translation) > kNearIdentityEps;  // pure translation
    if constexpr (N == 3) {
        if (linear_det(g) > 0) {
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
                if (best_norm < 1e-6) return false;
                axis = normalized(Vec3d{api(0, best), api(1, best), api(2, best)});
            }
            return std::abs(g.translation.dot(axis)) > kNearIdentityEps;
        }
        return false;  // improper: square is a rotation or translation; probe is cheap
    } else {
        if (linear_det(g) < 0) {
            // Glide: the along-mirror component doubles with each square.
            Vec2d dir{g.linear(0, 0) + 1.0, g.linear(1, 0)};
            if (norm(dir) < 1e-9) dir = Vec2d{g.linear(0, 1), g.linear(1, 1) + 1.0};
            if (norm(dir) < 1e-9) return false;
            return std::abs(g.translation.dot(normalized(dir))) > kNearIdentityEps;
        }
        return false;  // rotation about a center: bounded orbit, keep probing
    }
}

inline bool powers_escape(const SO4Element&) { return false; }

// Powers of a single element, looking for a near-identity return.
template <class G>
std::optional<std::pair<G, int>> power_probe(const G& g) {
    using Ops = GroupOps<G>;
    if (key_is_identity(g)) return std::nullopt;
    if (powers_escape(g)) return std::nullopt;
    G p = g;
    for (int n = 1; n <= kPowerProbeCap; ++n) {
        if (key_is_identity(p)) return std::nullopt;  // finite order, no accumulation
        if (Ops::near_identity(p, kNearIdentityEps)) return std::make_pair(p, n);
        if constexpr (Ops::kHasBall) {
            if (Ops::displacement(p) > kDivergenceBound) return std::nullopt;
        }
        p = Ops::compose(p, g);
    }
    return std::nullopt;
}

template <int N>
void collect_translations(const Enumeration<Motion<N>>& en, std::vector<Vec<double, N>>& vecs,
                          std::vector<std::size_t>& index) {
    std::vector<std::pair<double, std::size_t>> by_norm;
    for (std::size_t i = 1; i < en.elements.size(); ++i) {
        const auto& g = en.elements[i];
        if (max_abs(g.linear - Mat<double, N>::identity()) > 1e-9) continue;
        double n = norm(g.translation);
        if (n <= 1e-9) continue;
        by_norm.push_back({n, i});
    }
    std::sort(by_norm.begin(), by_norm.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t cap = 16;
    for (const auto& [n, i] : by_norm) {
        if (vecs.size() >= cap) break;
        vecs.push_back(en.elements[i].translation);
        index.push_back(i);
    }
}

template <class G>
DiscretenessVerdict<G> discreteness_impl(const std::vector<G>& generators,
                                         const Enumeration<G>& en) {
    using Ops = GroupOps<G>;
    DiscretenessVerdict<G> out;
    out.budget = en.budget;

    // Enumerated near-identity elements.
    for (std::size_t i = 1; i < en.elements.size(); ++i) {
        if (Ops::near_identity(en.elements[i], kNearIdentityEps)) {
            out.discrete_within_budget = false;
            out.witness = en.elements[i];
            out.witness_text = Ops::describe(en.elements[i]) + " (word length " +
                               std::to_string(en.word_length[i]) + ")";
            return out;
        }
    }

    // Deep powers of generators and short products: catches cyclic groups whose
    // near-returns need far more than the word-length budget.
    std::vector<G> probes = generators;
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            probes.push_back(Ops::compose(generators[i], generators[j]));
            probes.push_back(Ops::compose(generators[i], Ops::inverse(generators[j])));
        }
    for (const G& g : probes) {
        if (auto hit = power_probe(g)) {
            out.discrete_within_budget = false;
            out.witness = hit->first;
            out.witness_text =
                Ops::describe(hit->first) + " (power " + std::to_string(hit->second) + ")";
            return out;
        }
    }

    // Translation subgroup reduction (Euclidean ambients only).
    if constexpr (std::is_same_v<G, Motion<2>> || std::is_same_v<G, Motion<3>>) {
        constexpr int N = std::is_same_v<G, Motion<2>> ? 2 : 3;
        std::vector<Vec<double, N>> vecs;
        std::vector<std::size_t> index;
        collect_translations<N>(en, vecs, index);
        if (auto combo = shrink_translations<N>(vecs, kNearIdentityEps)) {
            G witness = Ops::identity();
            for (std::size_t i = 0; i < combo->size(); ++i) {
                long long c = (*combo)[i];
                const G& base = en.elements[index[i]];
                G step = c > 0 ? base : Ops::inverse(base);
                for (long long n = 0; n < std::llabs(c); ++n) witness = Ops::compose(witness, step);
            }
            if (!key_is_identity(witness) && Ops::near_identity(witness, kNearIdentityEps)) {
                out.discrete_within_budget = false;
                out.witness = witness;
                out.witness_text = Ops::describe(witness) + " (translation combination)";
                return out;
            }
        }
    }
    return out;
}

}  // namespace detail

template <class G>
DiscretenessVerdict<G> verify_discreteness(const std::vector<G>& generators,
                                           const Enumeration<G>& en) {
    return detail::discreteness_impl(generators, en);
}

template DiscretenessVerdict<Motion<2>> verify_discreteness(const std::vector<Motion<2>>&,
                                                            const Enumeration<Motion<2>>&);
template DiscretenessVerdict<Motion<3>> verify_discreteness(const std::vector<Motion<3>>&,
                                                            const Enumeration<Motion<3>>&);
template DiscretenessVerdict<SO4Element> verify_discreteness(const std::vector<SO4Element>&,
                                                             const Enumeration<SO4Element>&);

}  // namespace spaceform
