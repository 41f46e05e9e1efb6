#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "swarmlat/geometry.hpp"
#include "swarmlat/lattice.hpp"

namespace swarmlat {

enum class MetricKind { CoordinationCount, Radius, WeightedRadius };

inline std::string_view to_string(MetricKind m) {
    switch (m) {
        case MetricKind::CoordinationCount: return "coordination";
        case MetricKind::Radius: return "radius";
        case MetricKind::WeightedRadius: return "weighted-radius";
    }
    return "?";
}

inline MetricKind metric_kind_from_string(std::string_view s) {
    for (MetricKind m : {MetricKind::CoordinationCount, MetricKind::Radius, MetricKind::WeightedRadius}) {
        if (to_string(m) == s) return m;
    }
    throw ConfigError("neighbors.metric: unknown metric '" + std::string(s) + "'");
}

/// How the first shell is chosen. `count` drives CoordinationCount; the radius
/// variants take everything within `radius` (first shell) and within
/// `radius2` (second shell). WeightedRadius scales dx^2, dy^2 by `weights`.
struct NeighborMetric {
    MetricKind kind = MetricKind::CoordinationCount;
    int count = 4;
    double radius = 1.0;
    double radius2 = 2.0;
    Vec2 weights{1.0, 1.0};

    double measure(Vec2 d) const {
        if (kind == MetricKind::WeightedRadius) return std::sqrt(weights.x * d.x * d.x + weights.y * d.y * d.y);
        return norm(d);
    }

    void validate(int shells) const {
        if (shells != 1 && shells != 2) throw ConfigError("neighbors.shells must be 1 or 2");
        if (kind == MetricKind::CoordinationCount) {
            if (count < 1) throw ConfigError("neighbors.count must be at least 1");
            return;
        }
        if (!(radius > 0.0)) throw ConfigError("neighbors.radius must be positive");
        if (shells == 2 && !(radius2 > radius)) throw ConfigError("neighbors.radius2 must exceed neighbors.radius");
        if (kind == MetricKind::WeightedRadius && !(weights.x > 0.0 && weights.y > 0.0))
            throw ConfigError("neighbors.weights must be positive");
    }

    friend bool operator==(const NeighborMetric&, const NeighborMetric&) = default;
};

/// Lagrangian neighbour lists fixed at t0.
struct NeighborGraph {
    std::vector<std::vector<ParticleId>> shell1;
    std::vector<std::vector<ParticleId>> shell2;
    NeighborMetric metric;
    int shells = 1;

    std::size_t size() const { return shell1.size(); }
};

namespace detail {

// Distances quantized to 1e-9 so that lattice-equal distances compare equal and
// the id decides.
inline std::int64_t quantize(double d) { return static_cast<std::int64_t>(std::llround(d * 1e9)); }

struct Ranked {
    std::int64_t qdist;
    ParticleId id;
    friend auto operator<=>(const Ranked&, const Ranked&) = default;
};

inline std::vector<Ranked> ranked_candidates(std::span<const Vec2> pts, ParticleId j, const NeighborMetric& m) {
    std::vector<Ranked> out;
    out.reserve(pts.size());
    for (ParticleId k = 0; k < pts.size(); ++k) {
        if (k == j) continue;
        out.push_back({quantize(m.measure(pts[k] - pts[j])), k});
    }
    return out;
}

inline std::vector<ParticleId> first_shell(std::span<const Vec2> pts, ParticleId j, const NeighborMetric& m) {
    std::vector<Ranked> cand = ranked_candidates(pts, j, m);
    std::vector<ParticleId> ids;
    if (m.kind == MetricKind::CoordinationCount) {
        const auto n = static_cast<std::size_t>(m.count);
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(n), cand.end());
        for (std::size_t i = 0; i < n; ++i) ids.push_back(cand[i].id);
        return ids;
    }
    const std::int64_t limit = quantize(m.radius);
    std::sort(cand.begin(), cand.end());
    for (const Ranked& r : cand) {
        if (r.qdist > limit) break;
        ids.push_back(r.id);
    }
    return ids;
}

inline void sort_by_distance(std::vector<ParticleId>& ids, std::span<const Vec2> pts, Vec2 origin,
                             const NeighborMetric& m) {
    std::vector<Ranked> r;
    r.reserve(ids.size());
    for (ParticleId k : ids) r.push_back({quantize(m.measure(pts[k] - origin)), k});
    std::sort(r.begin(), r.end());
    for (std::size_t i = 0; i < r.size(); ++i) ids[i] = r[i].id;
}

inline std::vector<ParticleId> second_shell(std::span<const Vec2> pts, ParticleId j, const NeighborMetric& m,
                                            const std::vector<ParticleId>& own_first,
                                            const std::vector<std::vector<ParticleId>>& firsts_of_first) {
    std::vector<ParticleId> ids;
    if (m.kind == MetricKind::CoordinationCount) {
        for (const auto& list : firsts_of_first) {
            for (ParticleId k : list) {
                if (k == j || std::find(own_first.begin(), own_first.end(), k) != own_first.end()) continue;
                if (std::find(ids.begin(), ids.end(), k) == ids.end()) ids.push_back(k);
            }
        }
    } else {
        const std::int64_t lo = quantize(m.radius);
        const std::int64_t hi = quantize(m.radius2);
        for (const Ranked& r : ranked_candidates(pts, j, m)) {
            if (r.qdist > lo && r.qdist <= hi) ids.push_back(r.id);
        }
    }
    sort_by_distance(ids, pts, pts[j], m);
    return ids;
}

}  // namespace detail

/// Builds shell lists over `points`. Ties at equal distance go to the lower id.
/// No symmetry is enforced: near a boundary, CoordinationCount reaches for
/// farther points, which build_frame later replaces by frame particles.
inline NeighborGraph build_neighbor_graph(std::span<const Vec2> points, const NeighborMetric& metric, int shells) {
    metric.validate(shells);
    if (points.empty()) throw ConfigError("cannot build a neighbour graph over zero points");
    if (metric.kind == MetricKind::CoordinationCount && static_cast<std::size_t>(metric.count) > points.size() - 1) {
        throw ConfigError("neighbors.count " + std::to_string(metric.count) + " exceeds the " +
                          std::to_string(points.size() - 1) + " available points");
    }
    NeighborGraph g;
    g.metric = metric;
    g.shells = shells;
    g.shell1.resize(points.size());
    g.shell2.resize(points.size());
    for (ParticleId j = 0; j < points.size(); ++j) g.shell1[j] = detail::first_shell(points, j, metric);
    if (shells == 2) {
        for (ParticleId j = 0; j < points.size(); ++j) {
            std::vector<std::vector<ParticleId>> nn;
            for (ParticleId k : g.shell1[j]) nn.push_back(g.shell1[k]);
            g.shell2[j] = detail::second_shell(points, j, metric, g.shell1[j], nn);
        }
    }
    return g;
}

/// Neighbour offsets of an interior node, one entry per motif site.
struct NeighborPattern {
    std::vector<std::vector<Vec2>> shell1;
    std::vector<std::vector<Vec2>> shell2;
};

/// Reads the interior neighbourhood off a large patch of the infinite lattice,
/// using the same selection (and id tie-breaking) as build_neighbor_graph.
inline NeighborPattern ideal_pattern(const LatticeKind& kind, const NeighborMetric& metric, int shells) {
    metric.validate(shells);
    const LatticeBasis basis = lattice_basis(kind);
    const double cell = std::max(norm(basis.a1), norm(basis.a2));
    double half = 0.0;
    if (metric.kind == MetricKind::CoordinationCount) {
        half = cell * (6.0 + 2.0 * std::sqrt(static_cast<double>(metric.count)));
    } else {
        const double wmin = std::min(metric.weights.x, metric.weights.y);
        const double reach = (shells == 2 ? metric.radius2 : metric.radius) /
                             (metric.kind == MetricKind::WeightedRadius ? std::sqrt(wmin) : 1.0);
        half = 2.0 * reach + 4.0 * cell;
    }
    const std::vector<LatticeNode> nodes = generate_nodes(kind, {-half, -half, half, half});
    std::vector<Vec2> pts;
    for (const LatticeNode& n : nodes) pts.push_back(n.position);

    NeighborPattern pattern;
    for (std::size_t s = 0; s < basis.sites.size(); ++s) {
        ParticleId center = pts.size();
        for (ParticleId k = 0; k < nodes.size(); ++k) {
            if (nodes[k].i == 0 && nodes[k].j == 0 && nodes[k].site == s) center = k;
        }
        if (center == pts.size()) throw ConfigError("lattice patch is missing its reference node");
        const std::vector<ParticleId> first = detail::first_shell(pts, center, metric);
        std::vector<Vec2> off1;
        for (ParticleId k : first) off1.push_back(pts[k] - pts[center]);
        std::vector<Vec2> off2;
        if (shells == 2) {
            std::vector<std::vector<ParticleId>> nn;
            if (metric.kind == MetricKind::CoordinationCount) {
                for (ParticleId k : first) nn.push_back(detail::first_shell(pts, k, metric));
            }
            for (ParticleId k : detail::second_shell(pts, center, metric, first, nn)) off2.push_back(pts[k] - pts[center]);
        }
        pattern.shell1.push_back(std::move(off1));
        pattern.shell2.push_back(std::move(off2));
    }
    return pattern;
}

/// Frame particle ids are contiguous from `first_frame`; `assigned[f]` lists the
/// body particles whose displacement frame particle first_frame + f copies.
struct FrameAssignment {
    ParticleId first_frame = 0;
    std::vector<std::vector<ParticleId>> assigned;
    int shells = 1;

    std::size_t size() const { return assigned.size(); }
    bool is_frame(ParticleId id) const { return id >= first_frame && id < first_frame + assigned.size(); }
    const std::vector<ParticleId>& of(ParticleId frame_id) const { return assigned.at(frame_id - first_frame); }
};

struct FrameBuild {
    std::vector<Vec2> frame_points;
    FrameAssignment assignment;
    NeighborGraph graph;  // body lists rewritten; sized body + frame
};

namespace detail {

// Hash grid for "is there already a point here" queries.
class PointIndex {
public:
    explicit PointIndex(double cell) : cell_(cell) {}

    void insert(Vec2 p, ParticleId id) { cells_[key(p)].push_back({p, id}); }

    std::optional<ParticleId> find(Vec2 p, double tol) const {
        const auto [cx, cy] = key(p);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = cells_.find({cx + dx, cy + dy});
                if (it == cells_.end()) continue;
                for (const auto& [q, id] : it->second) {
                    if (distance(p, q) <= tol) return id;
                }
            }
        }
        return std::nullopt;
    }

private:
    using Key = std::pair<std::int64_t, std::int64_t>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<std::int64_t>{}(k.first) * 1000003u ^ std::hash<std::int64_t>{}(k.second);
        }
    };
    Key key(Vec2 p) const {
        return {static_cast<std::int64_t>(std::floor(p.x / cell_)), static_cast<std::int64_t>(std::floor(p.y / cell_))};
    }

    double cell_;
    std::unordered_map<Key, std::vector<std::pair<Vec2, ParticleId>>, KeyHash> cells_;
};

}  // namespace detail

/// Surrounds the body with frame particles so that every body particle sees
/// the full interior neighbourhood. Each body particle's lists are rebuilt
/// from the ideal offsets: slots occupied by a body node keep it, empty slots
/// get a frame particle (shared between all particles that need that spot).
/// A frame particle is assigned to the particles that reference it in their
/// first shell, or failing that, in their second.
inline FrameBuild build_frame(std::span<const Vec2> body, const NeighborGraph& graph, int shells,
                              const LatticeKind& kind) {
    if (graph.size() != body.size()) throw ConfigError("neighbour graph does not match the body");
    const NeighborPattern pattern = ideal_pattern(kind, graph.metric, shells);
    const double tol = 1e-7 * characteristic_length(kind);

    detail::PointIndex body_index(0.5 * characteristic_length(kind));
    for (ParticleId j = 0; j < body.size(); ++j) body_index.insert(body[j], j);
    detail::PointIndex frame_index(0.5 * characteristic_length(kind));

    FrameBuild out;
    out.assignment.first_frame = body.size();
    out.assignment.shells = shells;
    std::vector<std::vector<ParticleId>> req1, req2;

    auto resolve = [&](ParticleId j, Vec2 p, int shell) -> ParticleId {
        if (auto hit = body_index.find(p, tol)) return *hit;
        std::size_t f = 0;
        if (auto hit = frame_index.find(p, tol)) {
            f = *hit;
        } else {
            f = out.frame_points.size();
            out.frame_points.push_back(p);
            frame_index.insert(p, f);
            req1.emplace_back();
            req2.emplace_back();
        }
        auto& req = shell == 1 ? req1[f] : req2[f];
        if (req.empty() || req.back() != j) req.push_back(j);
        return body.size() + f;
    };

    NeighborGraph g;
    g.metric = graph.metric;
    g.shells = shells;
    g.shell1.resize(body.size());
    g.shell2.resize(body.size());
    for (ParticleId j = 0; j < body.size(); ++j) {
        const std::size_t s = sublattice_of(kind, body[j]);
        for (Vec2 o : pattern.shell1[s]) g.shell1[j].push_back(resolve(j, body[j] + o, 1));
        if (shells == 2) {
            for (Vec2 o : pattern.shell2[s]) g.shell2[j].push_back(resolve(j, body[j] + o, 2));
        }
    }

    std::vector<Vec2> all(body.begin(), body.end());
    all.insert(all.end(), out.frame_points.begin(), out.frame_points.end());
    for (ParticleId j = 0; j < body.size(); ++j) {
        detail::sort_by_distance(g.shell1[j], all, all[j], g.metric);
        detail::sort_by_distance(g.shell2[j], all, all[j], g.metric);
    }
    g.shell1.resize(all.size());
    g.shell2.resize(all.size());

    for (std::size_t f = 0; f < out.frame_points.size(); ++f) {
        out.assignment.assigned.push_back(req1[f].empty() ? req2[f] : req1[f]);
    }
    out.graph = std::move(g);
    return out;
}

}  // namespace swarmlat
