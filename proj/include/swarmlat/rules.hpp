#pragma once

#include <cassert>
#include <span>
#include <string>
#include <string_view>

#include "swarmlat/geometry.hpp"

namespace swarmlat {

enum class RuleKind { Barycenter, DistanceWeighted, PoissonMixed };

inline std::string_view to_string(RuleKind k) {
    switch (k) {
        case RuleKind::Barycenter: return "barycenter";
        case RuleKind::DistanceWeighted: return "distance-weighted";
        case RuleKind::PoissonMixed: return "poisson";
    }
    return "?";
}

inline RuleKind rule_kind_from_string(std::string_view s) {
    for (RuleKind k : {RuleKind::Barycenter, RuleKind::DistanceWeighted, RuleKind::PoissonMixed}) {
        if (to_string(k) == s) return k;
    }
    throw ConfigError("rule.kind: unknown rule '" + std::string(s) + "'");
}

/// Shape of the lateral-coupling factor as a function of the initial signed
/// distance from the central axis. Both are odd and negative above the axis,
/// so elongation pulls points toward the axis.
enum class AxisForm { SignedLinear, SignedNormalized };

inline std::string_view to_string(AxisForm f) {
    return f == AxisForm::SignedLinear ? "signed-linear" : "signed-normalized";
}

inline AxisForm axis_form_from_string(std::string_view s) {
    if (s == "signed-linear") return AxisForm::SignedLinear;
    if (s == "signed-normalized") return AxisForm::SignedNormalized;
    throw ConfigError("rule.da: unknown form '" + std::string(s) + "'");
}

struct RuleSpec {
    RuleKind kind = RuleKind::Barycenter;
    double k = 0.05;         // lateral response, PoissonMixed only
    double axis = 0.0;       // central axis y = axis
    AxisForm da_form = AxisForm::SignedLinear;
    double axis_scale = 1.0; // divisor for SignedNormalized
    double w1 = 1.0;
    double w2 = 1.0;

    void validate() const {
        if (!std::isfinite(k)) throw ConfigError("rule.K must be finite");
        if (!std::isfinite(axis)) throw ConfigError("rule.axis must be finite");
        if (!(axis_scale > 0.0)) throw ConfigError("rule.axis_scale must be positive");
        if (w1 < 0.0 || w2 < 0.0) throw ConfigError("rule.w1 and rule.w2 must be non-negative");
        if (w1 == 0.0 && w2 == 0.0) throw ConfigError("rule.w1 and rule.w2 must not both be zero");
    }

    friend bool operator==(const RuleSpec&, const RuleSpec&) = default;
};

/// Neighbour positions split by shell, with the per-shell averaging weights.
struct Neighborhood {
    std::span<const Vec2> first;
    std::span<const Vec2> second{};
    double w1 = 1.0;
    double w2 = 1.0;

    bool empty() const { return first.empty() && second.empty(); }
};

/// Weighted centre of gravity: (w1 * sum1 + w2 * sum2) / (w1 * n1 + w2 * n2).
inline Vec2 barycenter_update(const Neighborhood& nb) {
    assert(!nb.empty() && "frame construction guarantees a neighbour");
    if (nb.empty()) throw SimulationError("barycenter of an empty neighbourhood");
    Vec2 s1, s2;
    for (const Vec2& p : nb.first) s1 += p;
    for (const Vec2& p : nb.second) s2 += p;
    const double denom = nb.w1 * static_cast<double>(nb.first.size()) + nb.w2 * static_cast<double>(nb.second.size());
    return {(nb.w1 * s1.x + nb.w2 * s2.x) / denom, (nb.w1 * s1.y + nb.w2 * s2.y) / denom};
}

inline Vec2 barycenter_update(std::span<const Vec2> neighbors) { return barycenter_update(Neighborhood{neighbors}); }

/// Mean of the neighbours weighted by their distance from `current` (the
/// particle's pre-update position). Falls back to the barycenter when every
/// neighbour sits on top of it.
inline Vec2 distance_weighted_update(Vec2 current, const Neighborhood& nb) {
    Vec2 acc;
    double total = 0.0;
    auto add = [&](std::span<const Vec2> pts, double w) {
        for (const Vec2& p : pts) {
            const double d = w * distance(p, current);
            acc += d * p;
            total += d;
        }
    };
    add(nb.first, nb.w1);
    add(nb.second, nb.w2);
    if (total == 0.0) return barycenter_update(nb);
    return {acc.x / total, acc.y / total};
}

inline Vec2 distance_weighted_update(Vec2 current, std::span<const Vec2> neighbors) {
    return distance_weighted_update(current, Neighborhood{neighbors});
}

/// Lateral-coupling factor evaluated at a particle's initial position.
inline double axis_factor(const RuleSpec& rule, Vec2 initial) {
    const double signed_dist = initial.y - rule.axis;
    if (rule.da_form == AxisForm::SignedNormalized) return -signed_dist / rule.axis_scale;
    return -signed_dist;
}

/// x from the barycenter; y shifted by K * (x_new - x0) * da. `rest_offset`
/// is added to the barycenter before the coupling term sees the new x.
inline Vec2 poisson_update(Vec2 initial, const Neighborhood& nb, const RuleSpec& rule, Vec2 rest_offset = {}) {
    const Vec2 mean = barycenter_update(nb);
    const double x_new = mean.x + rest_offset.x;
    const double y_new = rule.k * (x_new - initial.x) * axis_factor(rule, initial) + mean.y + rest_offset.y;
    return {x_new, y_new};
}

inline Vec2 poisson_update(Vec2 initial, std::span<const Vec2> neighbors, const RuleSpec& rule) {
    return poisson_update(initial, Neighborhood{neighbors}, rule);
}

/// Frame particles copy the mean displacement of their assigned particles.
inline Vec2 frame_update(Vec2 frame_initial, std::span<const Vec2> displacements) {
    if (displacements.empty()) return frame_initial;
    Vec2 sum;
    for (const Vec2& d : displacements) sum += d;
    const double n = static_cast<double>(displacements.size());
    return {frame_initial.x + sum.x / n, frame_initial.y + sum.y / n};
}

/// Dispatch on the rule variant. `current` is the particle's pre-update
/// position, `initial` its t0 position.
inline Vec2 apply_rule(const RuleSpec& rule, Vec2 current, Vec2 initial, const Neighborhood& nb, Vec2 rest_offset = {}) {
    switch (rule.kind) {
        case RuleKind::Barycenter: return barycenter_update(nb) + rest_offset;
        case RuleKind::DistanceWeighted: return distance_weighted_update(current, nb) + rest_offset;
        case RuleKind::PoissonMixed: return poisson_update(initial, nb, rule, rest_offset);
    }
    return current;
}

}  // namespace swarmlat
