#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "swarmlat/geometry.hpp"
#include "swarmlat/neighbors.hpp"
#include "swarmlat/particle.hpp"
#include "swarmlat/rules.hpp"

namespace swarmlat {

/// Constant velocity (length per step) over steps start..end inclusive.
struct Segment {
    int start = 1;
    int end = 1;
    Vec2 velocity;
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct LeaderGroup {
    std::string name;
    std::vector<ParticleId> members;
    std::vector<Segment> segments;

    Vec2 velocity_at(int step) const {
        for (const Segment& s : segments)
            if (step >= s.start && step <= s.end) return s.velocity;
        return {};
    }
};

/// Leader <-> follower switch at the start of `step`. A particle turned leader
/// moves with `group` when one is given, otherwise it stays put.
struct CategoryChange {
    int step = 1;
    std::vector<ParticleId> ids;
    Role role = Role::Follower;
    std::optional<std::size_t> group;
};

struct LeaderScript {
    std::vector<LeaderGroup> groups;
    std::vector<CategoryChange> changes;

    void validate(std::size_t body_count) const {
        std::vector<int> owner(body_count, -1);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const LeaderGroup& grp = groups[g];
            for (ParticleId id : grp.members) {
                if (id >= body_count) throw ConfigError("leaders." + grp.name + ": id out of range");
                if (owner[id] >= 0)
                    throw ConfigError("leaders." + grp.name + ": particle " + std::to_string(id) +
                                      " already belongs to group " + groups[owner[id]].name);
                owner[id] = static_cast<int>(g);
            }
            std::vector<Segment> segs = grp.segments;
            std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.start < b.start; });
            for (std::size_t i = 0; i < segs.size(); ++i) {
                if (segs[i].start < 1 || segs[i].end < segs[i].start)
                    throw ConfigError("leaders." + grp.name + ".segments: a segment must satisfy 1 <= start <= end");
                if (i > 0 && segs[i].start <= segs[i - 1].end)
                    throw ConfigError("leaders." + grp.name + ".segments: segments overlap");
                if (!is_finite(segs[i].velocity)) throw ConfigError("leaders." + grp.name + ".segments: velocity must be finite");
            }
        }
        for (const CategoryChange& c : changes) {
            if (c.step < 1) throw ConfigError("leaders.changes: step must be at least 1");
            if (c.role != Role::Leader && c.role != Role::Follower)
                throw ConfigError("leaders.changes: only leader/follower switches are allowed");
            if (c.group && *c.group >= groups.size()) throw ConfigError("leaders.changes: unknown group");
            for (ParticleId id : c.ids)
                if (id >= body_count) throw ConfigError("leaders.changes: id out of range");
        }
    }
};

/// Threshold fracture. Links in the first shell break beyond `threshold`,
/// second-shell links beyond `threshold2`. A broken neighbour is replaced by a
/// fictitious particle kept at `scale` times the original lattice offset.
struct FractureSpec {
    bool enabled = false;
    double threshold = 1.0;
    double threshold2 = 2.0;
    double scale = 1.0;
    bool symmetric = false;

    void validate() const {
        if (!(threshold > 0.0)) throw ConfigError("fracture.threshold must be positive");
        if (!(threshold2 > 0.0)) throw ConfigError("fracture.threshold2 must be positive");
        if (!(scale > 0.0)) throw ConfigError("fracture.fictitious_scale must be positive");
    }

    friend bool operator==(const FractureSpec&, const FractureSpec&) = default;
};

/// Everything fixed at t0. Particle ids: body [0, body_count), then frame.
struct Model {
    std::vector<Vec2> initial;
    std::vector<Role> roles;
    std::size_t body_count = 0;
    NeighborGraph graph;
    FrameAssignment frame;
    LeaderScript script;
    RuleSpec rule;
    FractureSpec fracture;
    std::vector<Vec2> rest_offset;  // per particle; zero for frame particles

    std::size_t particle_count() const { return initial.size(); }
};

/// Directed link: `from` no longer sees `to`.
struct Link {
    ParticleId from = 0;
    ParticleId to = 0;
    friend auto operator<=>(const Link&, const Link&) = default;
};

/// C_t: positions plus the state that fracture and category changes mutate.
/// Fictitious particles are appended after the model's particles.
struct Configuration {
    int step = 0;
    std::vector<Vec2> positions;
    std::vector<Vec2> initial;
    std::vector<Role> roles;
    std::vector<int> group;  // leader group index, -1 when none
    std::vector<std::vector<ParticleId>> shell1;
    std::vector<std::vector<ParticleId>> shell2;
    std::set<Link> broken;
    std::map<Link, ParticleId> fictitious;
    ParticleId first_fictitious = 0;
    std::vector<Link> ghost_links;  // by (id - first_fictitious)

    bool is_fictitious(ParticleId id) const { return id >= first_fictitious; }
    const Link& ghost_link(ParticleId id) const { return ghost_links.at(id - first_fictitious); }
};

struct FractureEvent {
    int step = 0;
    ParticleId from = 0;
    ParticleId to = 0;
    ParticleId fictitious = 0;
};

/// Per-particle additive correction making the t0 configuration an exact
/// fixed point of the rule. It is zero (up to rounding) for centrosymmetric
/// neighbourhoods and only matters for odd counts such as coordination 5.
inline std::vector<Vec2> rest_offsets(const Model& m) {
    std::vector<Vec2> out(m.particle_count());
    std::vector<Vec2> nb1, nb2;
    for (ParticleId j = 0; j < m.body_count; ++j) {
        nb1.clear();
        nb2.clear();
        for (ParticleId k : m.graph.shell1[j]) nb1.push_back(m.initial[k]);
        for (ParticleId k : m.graph.shell2[j]) nb2.push_back(m.initial[k]);
        if (nb1.empty() && nb2.empty()) continue;
        const Neighborhood nb{nb1, nb2, m.rule.w1, m.rule.w2};
        // The lateral term of the Poisson rule vanishes at rest once x is
        // corrected, so its offset is the barycenter's.
        const Vec2 raw = m.rule.kind == RuleKind::PoissonMixed ? barycenter_update(nb)
                                                               : apply_rule(m.rule, m.initial[j], m.initial[j], nb);
        out[j] = m.initial[j] - raw;
    }
    return out;
}

inline Configuration initial_configuration(const Model& m) {
    Configuration c;
    c.positions = m.initial;
    c.initial = m.initial;
    c.roles = m.roles;
    c.group.assign(m.particle_count(), -1);
    for (std::size_t g = 0; g < m.script.groups.size(); ++g)
        for (ParticleId id : m.script.groups[g].members) c.group[id] = static_cast<int>(g);
    c.shell1 = m.graph.shell1;
    c.shell2 = m.graph.shell2;
    c.shell1.resize(m.particle_count());
    c.shell2.resize(m.particle_count());
    c.first_fictitious = m.particle_count();
    return c;
}

/// Ghost position for broken link j -> k: j's current position plus the
/// scaled t0 offset from j to k.
inline Vec2 place_fictitious(ParticleId j, ParticleId k, const Configuration& c, double scale) {
    return c.positions[j] + scale * (c.initial[k] - c.initial[j]);
}

/// Marks j -> k broken and swaps k for a fictitious particle in j's lists.
/// Idempotent: an already broken link returns its existing ghost.
inline ParticleId fracture_substitute(ParticleId j, ParticleId k, Configuration& c, const FractureSpec& spec) {
    const Link link{j, k};
    if (auto it = c.fictitious.find(link); it != c.fictitious.end()) return it->second;
    const ParticleId ghost = c.positions.size();
    c.positions.push_back(place_fictitious(j, k, c, spec.scale));
    c.initial.push_back(c.initial[j] + spec.scale * (c.initial[k] - c.initial[j]));
    c.roles.push_back(Role::Fictitious);
    c.group.push_back(-1);
    c.shell1.emplace_back();
    c.shell2.emplace_back();
    c.ghost_links.push_back(link);
    c.fictitious.emplace(link, ghost);
    c.broken.insert(link);
    for (auto* shell : {&c.shell1[j], &c.shell2[j]})
        std::replace(shell->begin(), shell->end(), k, ghost);
    return ghost;
}

struct StepOptions {
    int threads = 1;
    bool leaders_active = true;  // false during relaxation
};

namespace detail {

struct PendingBreak {
    ParticleId from;
    ParticleId to;
};

}  // namespace detail

/// Advances `c` from step t-1 to t:
///   1. category changes for step t, then leaders move by their script;
///   2. Jacobi follower pass reading leaders at t and everything else at t-1,
///      with the fracture check on the same positions the rule reads;
///   3. fictitious positions refreshed, frame particles copy their followers.
/// Breaks found in the pass are applied afterwards in ascending (from, to)
/// order, so the result does not depend on `threads`.
inline std::vector<FractureEvent> advance(const Model& m, Configuration& c, const StepOptions& opt = {}) {
    const int t = c.step + 1;

    for (const CategoryChange& change : m.script.changes) {
        if (change.step != t) continue;
        for (ParticleId id : change.ids) {
            c.roles[id] = change.role;
            c.group[id] = change.role == Role::Leader && change.group ? static_cast<int>(*change.group) : -1;
        }
    }

    if (opt.leaders_active) {
        for (ParticleId id = 0; id < m.body_count; ++id) {
            if (c.roles[id] != Role::Leader || c.group[id] < 0) continue;
            c.positions[id] += m.script.groups[static_cast<std::size_t>(c.group[id])].velocity_at(t);
        }
    }

    std::vector<ParticleId> followers;
    for (ParticleId id = 0; id < m.body_count; ++id)
        if (c.roles[id] == Role::Follower) followers.push_back(id);

    // c.positions now holds the mixed view: leaders at t, the rest at t-1.
    std::vector<Vec2> next = c.positions;
    const FractureSpec& fs = m.fracture;

    auto evaluate = [&](std::size_t lo, std::size_t hi, std::vector<detail::PendingBreak>& breaks) {
        std::vector<Vec2> nb1, nb2;
        std::vector<detail::PendingBreak> local;
        for (std::size_t f = lo; f < hi; ++f) {
            const ParticleId j = followers[f];
            const Vec2 xj = c.positions[j];
            local.clear();
            auto collect = [&](const std::vector<ParticleId>& shell, double threshold, std::vector<Vec2>& out) {
                out.clear();
                for (ParticleId k : shell) {
                    const Vec2 pk = c.positions[k];
                    if (fs.enabled && !c.is_fictitious(k) && distance(xj, pk) > threshold) {
                        local.push_back({j, k});
                        out.push_back(xj + fs.scale * (c.initial[k] - c.initial[j]));
                    } else {
                        out.push_back(pk);
                    }
                }
            };
            collect(c.shell1[j], fs.threshold, nb1);
            collect(c.shell2[j], fs.threshold2, nb2);
            const Neighborhood nb{nb1, nb2, m.rule.w1, m.rule.w2};
            next[j] = apply_rule(m.rule, xj, c.initial[j], nb, m.rest_offset[j]);
            std::sort(local.begin(), local.end(), [](const auto& a, const auto& b) { return a.to < b.to; });
            breaks.insert(breaks.end(), local.begin(), local.end());
        }
    };

    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.threads, 1)), followers.size()));
    std::vector<std::vector<detail::PendingBreak>> breaks(workers);
    if (workers == 1) {
        evaluate(0, followers.size(), breaks[0]);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (followers.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = std::min(followers.size(), w * chunk);
            const std::size_t hi = std::min(followers.size(), lo + chunk);
            pool.emplace_back([&, lo, hi, w] { evaluate(lo, hi, breaks[w]); });
        }
    }

    c.positions = std::move(next);

    std::vector<FractureEvent> events;
    for (const auto& chunk : breaks) {
        for (const auto& b : chunk) {
            const ParticleId ghost = fracture_substitute(b.from, b.to, c, fs);
            events.push_back({t, b.from, b.to, ghost});
            if (fs.symmetric && b.to < m.body_count && !c.broken.contains(Link{b.to, b.from})) {
                const auto has = [&](const std::vector<ParticleId>& s) {
                    return std::find(s.begin(), s.end(), b.from) != s.end();
                };
                if (has(c.shell1[b.to]) || has(c.shell2[b.to])) {
                    const ParticleId back = fracture_substitute(b.to, b.from, c, fs);
                    events.push_back({t, b.to, b.from, back});
                }
            }
        }
    }

    for (ParticleId g = c.first_fictitious; g < c.positions.size(); ++g) {
        const Link& l = c.ghost_link(g);
        c.positions[g] = place_fictitious(l.from, l.to, c, fs.scale);
    }

    std::vector<Vec2> disp;
    for (std::size_t f = 0; f < m.frame.size(); ++f) {
        const ParticleId id = m.frame.first_frame + f;
        disp.clear();
        for (ParticleId a : m.frame.assigned[f]) disp.push_back(c.positions[a] - c.initial[a]);
        c.positions[id] = frame_update(c.initial[id], disp);
    }

    for (ParticleId id = 0; id < c.positions.size(); ++id) {
        if (!is_finite(c.positions[id])) {
            throw SimulationError("non-finite position for particle " + std::to_string(id) + " (" +
                                  std::string(to_string(c.roles[id])) + ") at step " + std::to_string(t));
        }
    }
    c.step = t;
    return events;
}

/// Functional form of advance().
inline Configuration step(const Model& m, const Configuration& prev, const StepOptions& opt = {}) {
    Configuration next = prev;
    advance(m, next, opt);
    return next;
}

}  // namespace swarmlat
