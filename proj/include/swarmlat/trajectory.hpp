#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swarmlat/stepper.hpp"

namespace swarmlat {

/// One recorded configuration. Vectors are indexed by particle id and include
/// the fictitious particles that exist at this step.
struct Snapshot {
    int step = 0;
    std::vector<Vec2> positions;
    std::vector<Role> roles;
    std::vector<double> step_displacement;  // |x(t) - x(t-1)|, 0 at t0 and for new ghosts
    std::vector<std::uint8_t> fractured;     // particle has lost at least one link
};

struct Trajectory {
    std::size_t body_count = 0;
    std::vector<Vec2> initial;                            // model particles
    std::vector<std::vector<ParticleId>> initial_neighbors;  // both shells at t0
    std::vector<Snapshot> snapshots;
    std::vector<FractureEvent> events;
    std::optional<int> first_fracture_step;
    std::vector<double> step_seconds;

    bool has_step(int step) const {
        return std::any_of(snapshots.begin(), snapshots.end(), [&](const Snapshot& s) { return s.step == step; });
    }

    const Snapshot& at(int step) const {
        const auto it = std::lower_bound(snapshots.begin(), snapshots.end(), step,
                                         [](const Snapshot& s, int v) { return s.step < v; });
        if (it == snapshots.end() || it->step != step)
            throw std::out_of_range("step " + std::to_string(step) + " was not recorded");
        return *it;
    }

    std::vector<int> steps() const {
        std::vector<int> out;
        for (const Snapshot& s : snapshots) out.push_back(s.step);
        return out;
    }
};

struct RunOptions {
    int traction_steps = 1;
    int relaxation_steps = 0;
    int record_stride = 1;
    std::vector<int> record_steps;  // always recorded, on top of the stride
    int threads = 1;
    double converge_eps = 0.0;      // > 0: stop relaxing once every step moves less than this
    std::function<void(int step, const std::vector<FractureEvent>&)> on_step;
};

namespace detail {

inline Snapshot take_snapshot(const Configuration& c, const std::vector<Vec2>& previous) {
    Snapshot s;
    s.step = c.step;
    s.positions = c.positions;
    s.roles = c.roles;
    s.step_displacement.assign(c.positions.size(), 0.0);
    for (std::size_t i = 0; i < previous.size(); ++i) s.step_displacement[i] = distance(c.positions[i], previous[i]);
    s.fractured.assign(c.positions.size(), 0);
    for (const Link& l : c.broken) s.fractured[l.from] = 1;
    return s;
}

}  // namespace detail

/// Runs traction then relaxation, recording step 0, every `record_stride`-th
/// step, the requested steps and the final one.
inline Trajectory run(const Model& m, const RunOptions& opt, Configuration* final_state = nullptr) {
    if (opt.traction_steps < 1) throw ConfigError("run.traction_steps must be at least 1");
    if (opt.relaxation_steps < 0) throw ConfigError("run.relaxation_steps must not be negative");
    if (opt.record_stride < 1) throw ConfigError("output.record_stride must be at least 1");

    Trajectory traj;
    traj.body_count = m.body_count;
    traj.initial = m.initial;
    traj.initial_neighbors.resize(m.particle_count());
    for (ParticleId j = 0; j < m.body_count; ++j) {
        auto& nb = traj.initial_neighbors[j];
        nb = m.graph.shell1[j];
        nb.insert(nb.end(), m.graph.shell2[j].begin(), m.graph.shell2[j].end());
    }

    const std::set<int> wanted(opt.record_steps.begin(), opt.record_steps.end());
    const int total = opt.traction_steps + opt.relaxation_steps;

    Configuration c = initial_configuration(m);
    traj.snapshots.push_back(detail::take_snapshot(c, c.positions));

    for (int t = 1; t <= total; ++t) {
        const std::vector<Vec2> previous = c.positions;
        const auto t0 = std::chrono::steady_clock::now();
        const StepOptions so{opt.threads, t <= opt.traction_steps};
        std::vector<FractureEvent> events = advance(m, c, so);
        traj.step_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        if (!events.empty() && !traj.first_fracture_step) traj.first_fracture_step = t;
        if (opt.on_step) opt.on_step(t, events);
        traj.events.insert(traj.events.end(), events.begin(), events.end());

        bool converged = false;
        if (opt.converge_eps > 0.0 && t > opt.traction_steps) {
            double worst = 0.0;
            for (std::size_t i = 0; i < previous.size(); ++i) worst = std::max(worst, distance(c.positions[i], previous[i]));
            converged = worst < opt.converge_eps;
        }
        if (t % opt.record_stride == 0 || wanted.contains(t) || t == total || converged) {
            traj.snapshots.push_back(detail::take_snapshot(c, previous));
        }
        if (converged) break;
    }
    if (final_state) *final_state = std::move(c);
    return traj;
}

}  // namespace swarmlat
