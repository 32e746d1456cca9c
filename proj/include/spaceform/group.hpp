#pragma once

#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "spaceform/euclid.hpp"
#include "spaceform/quat.hpp"

namespace spaceform {

struct EnumerationBudget {
    int max_word_length = 8;
    double ball_radius = 6.0;  // Euclidean ambients only
    int max_elements = 20000;

    std::string describe() const {
        return "word<=" + std::to_string(max_word_length) + " ball<=" + std::to_string(ball_radius) +
               " elems<=" + std::to_string(max_elements);
    }
};

class BudgetExceeded : public std::runtime_error {
  public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Per-element-type hooks for the generic engine.
template <class G>
struct GroupOps;

template <int N>
struct GroupOps<Motion<N>> {
    static Motion<N> identity() { return Motion<N>{}; }
    static Motion<N> compose(const Motion<N>& a, const Motion<N>& b) { return spaceform::compose(a, b); }
    static Motion<N> inverse(const Motion<N>& g) { return spaceform::inverse(g); }
    static constexpr bool kHasBall = true;
    static double displacement(const Motion<N>& g) { return norm(g.translation); }
    static bool near_identity(const Motion<N>& g, double eps) {
        if (max_abs(g.linear - Mat<double, N>::identity()) > eps) return false;
        if constexpr (N == 2) {
            // Base points (1,0) and (0,1).
            Vec2d p1{1, 0}, p2{0, 1};
            return norm(g(p1) - p1) < eps && norm(g(p2) - p2) < eps;
        } else {
            return max_abs(g.translation) < eps || norm(g.translation) < eps;
        }
    }
    static void append_key(const Motion<N>& g, std::vector<std::int64_t>& key) {
        for (double v : g.linear.a) key.push_back(llround(v * 1e8));
        for (double v : g.translation.c) key.push_back(llround(v * 1e8));
    }
    static std::string describe(const Motion<N>& g) { return spaceform::describe(g); }
};

template <>
struct GroupOps<SO4Element> {
    static SO4Element identity() { return SO4Element(Quaternion{}, Quaternion{}); }
    static SO4Element compose(const SO4Element& a, const SO4Element& b) { return so4_compose(a, b); }
    static SO4Element inverse(const SO4Element& g) { return so4_inverse(g); }
    static constexpr bool kHasBall = false;
    static double displacement(const SO4Element& g) {
        Quaternion one{};
        Quaternion moved = g.apply(one);
        return (moved + (-one)).norm();
    }
    static bool near_identity(const SO4Element& g, double eps) {
        Mat4d m = g.matrix();
        return max_abs(m - Mat4d::identity()) < eps;
    }
    static void append_key(const SO4Element& g, std::vector<std::int64_t>& key) {
        const double c[8] = {g.q1.w, g.q1.x, g.q1.y, g.q1.z, g.q2.w, g.q2.x, g.q2.y, g.q2.z};
        for (double v : c) key.push_back(llround(v * 1e8));
    }
    static std::string describe(const SO4Element& g) { return spaceform::describe(g); }
};

template <class G>
std::string element_key(const G& g) {
    std::vector<std::int64_t> ints;
    GroupOps<G>::append_key(g, ints);
    std::string bytes(ints.size() * sizeof(std::int64_t), '\0');
    std::memcpy(bytes.data(), ints.data(), bytes.size());
    return bytes;
}

template <class G>
struct Enumeration {
    std::vector<G> elements;  // elements[0] is the identity
    std::vector<int> word_length;
    bool complete = false;   // closure certified within the budget
    bool pruned = false;     // some candidate fell outside the ball
    bool truncated = false;  // stopped at max_elements (only with allow_truncation)
    EnumerationBudget budget;
};

// Breadth-first closure of the generating set (with inverses), deduplicated at
// 1e-8 resolution. Euclidean ambients keep only elements displacing the origin
// by at most ball_radius; the working radius during the search is one
// generator-step wider so short products near the boundary are not lost.
template <class G>
Enumeration<G> enumerate_group(const std::vector<G>& generators, const EnumerationBudget& budget,
                               bool allow_truncation = false) {
    using Ops = GroupOps<G>;
    Enumeration<G> out;
    out.budget = budget;

    std::vector<G> steps;
    for (const G& g : generators) {
        steps.push_back(g);
        steps.push_back(Ops::inverse(g));
    }

    double working_radius = budget.ball_radius;
    if constexpr (Ops::kHasBall) {
        double max_step = 0;
        for (const G& s : steps) max_step = std::max(max_step, Ops::displacement(s));
        working_radius = budget.ball_radius + max_step + 1.0;
    }

    std::unordered_set<std::string> seen;
    G id = Ops::identity();
    out.elements.push_back(id);
    out.word_length.push_back(0);
    seen.insert(element_key(id));

    std::vector<std::size_t> frontier{0};
    bool stabilized = false;
    for (int level = 1; level <= budget.max_word_length && !frontier.empty(); ++level) {
        std::vector<std::size_t> next;
        for (std::size_t idx : frontier) {
            for (const G& s : steps) {
                G cand = Ops::compose(out.elements[idx], s);
                if constexpr (Ops::kHasBall) {
                    if (Ops::displacement(cand) > working_radius) {
                        out.pruned = true;
                        continue;
                    }
                }
                std::string key = element_key(cand);
                if (!seen.insert(std::move(key)).second) continue;
                if (static_cast<int>(out.elements.size()) >= budget.max_elements) {
                    if (allow_truncation) {
                        out.truncated = true;
                        goto done;
                    }
                    throw BudgetExceeded("enumeration exceeded max_elements=" +
                                         std::to_string(budget.max_elements));
                }
                out.elements.push_back(cand);
                out.word_length.push_back(level);
                next.push_back(out.elements.size() - 1);
            }
        }
        if (next.empty()) {
            stabilized = true;
            break;
        }
        frontier = std::move(next);
    }
done:
    out.complete = stabilized && !out.pruned && !out.truncated;

    if constexpr (Ops::kHasBall) {
        // Keep only the requested ball.
        std::vector<G> kept;
        std::vector<int> kept_len;
        for (std::size_t i = 0; i < out.elements.size(); ++i) {
            if (Ops::displacement(out.elements[i]) <= budget.ball_radius + 1e-12) {
                kept.push_back(out.elements[i]);
                kept_len.push_back(out.word_length[i]);
            }
        }
        out.elements = std::move(kept);
        out.word_length = std::move(kept_len);
    }
    return out;
}

// -- Free action --------------------------------------------------------------

template <class G>
struct FreeActionVerdict {
    bool free_within_budget = true;
    std::optional<G> witness;
    std::string witness_text;
    EnumerationBudget budget;
};

bool has_fixed_points(const Motion<3>& g);
bool has_fixed_points(const Motion<2>& g);
bool has_fixed_points(const SO4Element& g);

template <class G>
FreeActionVerdict<G> verify_free_action(const Enumeration<G>& en) {
    FreeActionVerdict<G> out;
    out.budget = en.budget;
    for (std::size_t i = 1; i < en.elements.size(); ++i) {
        if (has_fixed_points(en.elements[i])) {
            out.free_within_budget = false;
            out.witness = en.elements[i];
            out.witness_text = GroupOps<G>::describe(en.elements[i]);
            return out;
        }
    }
    return out;
}

// -- Discreteness -------------------------------------------------------------

template <class G>
struct DiscretenessVerdict {
    bool discrete_within_budget = true;
    std::optional<G> witness;
    std::string witness_text;
    EnumerationBudget budget;
};

namespace detail {
constexpr int kPowerProbeCap = 20000;
constexpr double kNearIdentityEps = 1e-3;
constexpr double kDivergenceBound = 1e4;

// Integer size reduction on translation vectors with coefficient tracking;
// returns coefficients of a nonzero combination shorter than eps, if found.
template <int N>
std::optional<std::vector<long long>> shrink_translations(std::vector<Vec<double, N>> vecs,
                                                          double eps);
}  // namespace detail

template <class G>
DiscretenessVerdict<G> verify_discreteness(const std::vector<G>& generators,
                                           const Enumeration<G>& en);

extern template DiscretenessVerdict<Motion<2>> verify_discreteness(const std::vector<Motion<2>>&,
                                                                   const Enumeration<Motion<2>>&);
extern template DiscretenessVerdict<Motion<3>> verify_discreteness(const std::vector<Motion<3>>&,
                                                                   const Enumeration<Motion<3>>&);
extern template DiscretenessVerdict<SO4Element> verify_discreteness(const std::vector<SO4Element>&,
                                                                    const Enumeration<SO4Element>&);

// -- Ambient-tagged generating sets -------------------------------------------

struct GroupSpec {
    enum class Ambient { Euclidean3, Sphere3 } ambient = Ambient::Euclidean3;
    std::vector<EuclIsometry> euclidean_generators;
    std::vector<SO4Element> spherical_generators;
    bool identity_only = false;  // explicit flag for the trivial group
    std::string label;

    std::size_t generator_count() const {
        return ambient == Ambient::Euclidean3 ? euclidean_generators.size()
                                              : spherical_generators.size();
    }
    void validate() const {
        if (!identity_only && generator_count() == 0)
            throw std::invalid_argument("group spec has no generators and no identity flag");
        if (ambient == Ambient::Euclidean3 && !spherical_generators.empty())
            throw std::invalid_argument("spherical generators in a Euclidean spec");
        if (ambient == Ambient::Sphere3 && !euclidean_generators.empty())
            throw std::invalid_argument("Euclidean generators in a spherical spec");
    }
};

}  // namespace spaceform
