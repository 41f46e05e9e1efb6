#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swarmlat/trajectory.hpp"

namespace swarmlat {

// Pseudoenergies are bookkeeping quantities, not mechanical energies:
//   PE1(t, j) = sum over j's t0 neighbours k of (|x_k(t) - x_j(t)| - |x_k(t0) - x_j(t0)|)^2
//   PE2(t, j) = |x_j(t) - x_j(t-1)|
// Both are defined on followers only. PE1 always uses the true t0 neighbours,
// broken or not.

enum class FieldKind { PE1, PE2 };

inline std::string_view to_string(FieldKind f) { return f == FieldKind::PE1 ? "pe1" : "pe2"; }

namespace detail {

inline void require_follower(const Snapshot& s, ParticleId j, std::string_view what) {
    if (j >= s.roles.size() || s.roles[j] != Role::Follower) {
        throw std::domain_error(std::string(what) + ": particle " + std::to_string(j) + " is not a follower at step " +
                                std::to_string(s.step));
    }
}

inline double pe1_unchecked(const Trajectory& traj, const Snapshot& s, ParticleId j) {
    double sum = 0.0;
    for (ParticleId k : traj.initial_neighbors[j]) {
        const double now = distance(s.positions[k], s.positions[j]);
        const double then = distance(traj.initial[k], traj.initial[j]);
        sum += (now - then) * (now - then);
    }
    return sum;
}

}  // namespace detail

inline double pe1(const Trajectory& traj, int t, ParticleId j) {
    const Snapshot& s = traj.at(t);
    detail::require_follower(s, j, "pe1");
    return detail::pe1_unchecked(traj, s, j);
}

inline double pe2(const Trajectory& traj, int t, ParticleId j) {
    if (t < 1) throw std::domain_error("pe2: undefined at step 0");
    const Snapshot& s = traj.at(t);
    detail::require_follower(s, j, "pe2");
    return s.step_displacement[j];
}

struct PseudoEnergyField {
    int step = 0;
    FieldKind kind = FieldKind::PE1;
    std::vector<ParticleId> ids;
    std::vector<double> values;
    bool after_fracture = false;  // PE1 loses meaning once links break
};

inline PseudoEnergyField field(const Trajectory& traj, int t, FieldKind kind) {
    if (kind == FieldKind::PE2 && t < 1) throw std::domain_error("pe2: undefined at step 0");
    const Snapshot& s = traj.at(t);
    PseudoEnergyField out;
    out.step = t;
    out.kind = kind;
    out.after_fracture = traj.first_fracture_step && t >= *traj.first_fracture_step;
    for (ParticleId j = 0; j < traj.body_count; ++j) {
        if (s.roles[j] != Role::Follower) continue;
        out.ids.push_back(j);
        out.values.push_back(kind == FieldKind::PE1 ? detail::pe1_unchecked(traj, s, j) : s.step_displacement[j]);
    }
    return out;
}

enum class Axis { X, Y };

/// (step, coordinate) over every recorded step at which `j` exists.
inline std::vector<std::pair<int, double>> track(const Trajectory& traj, ParticleId j, Axis axis) {
    if (traj.snapshots.empty() || j >= traj.snapshots.back().positions.size())
        throw std::out_of_range("track: unknown particle " + std::to_string(j));
    std::vector<std::pair<int, double>> out;
    for (const Snapshot& s : traj.snapshots) {
        if (j >= s.positions.size()) continue;
        out.emplace_back(s.step, axis == Axis::X ? s.positions[j].x : s.positions[j].y);
    }
    return out;
}

}  // namespace swarmlat
