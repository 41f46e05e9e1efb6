#pragma once

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "swarmlat/diagnostics.hpp"
#include "swarmlat/selector.hpp"

namespace swarmlat {

inline constexpr std::string_view csv_header = "step,id,role,x,y,pe1,pe2,fractured";

namespace detail {

inline std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// One row per particle per recorded step. pe1 is blank for non-followers,
/// pe2 is blank at step 0.
inline void write_csv(std::ostream& out, const Trajectory& traj) {
    out << csv_header << '\n';
    for (const Snapshot& s : traj.snapshots) {
        for (ParticleId id = 0; id < s.positions.size(); ++id) {
            out << s.step << ',' << id << ',' << to_string(s.roles[id]) << ',' << detail::format17(s.positions[id].x)
                << ',' << detail::format17(s.positions[id].y) << ',';
            if (s.roles[id] == Role::Follower) out << detail::format17(detail::pe1_unchecked(traj, s, id));
            out << ',';
            if (s.step > 0) out << detail::format17(s.step_displacement[id]);
            out << ',' << int(s.fractured[id]) << '\n';
        }
    }
}

struct CsvFrame {
    int step = 0;
    std::vector<ParticleId> ids;
    std::vector<Role> roles;
    std::vector<Vec2> positions;
    std::vector<std::optional<double>> pe1;
    std::vector<std::optional<double>> pe2;
    std::vector<std::uint8_t> fractured;
};

/// Frames in file order. Throws ConfigError on malformed input.
inline std::vector<CsvFrame> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != csv_header)
        throw ConfigError("trajectory csv: expected header '" + std::string(csv_header) + "'");
    std::vector<CsvFrame> frames;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split(line, ',');
        const std::string at = "trajectory csv line " + std::to_string(line_no);
        if (cells.size() != 8) throw ConfigError(at + ": expected 8 columns");
        const int step = static_cast<int>(detail::parse_int(cells[0], at));
        if (frames.empty() || frames.back().step != step) {
            if (!frames.empty() && step < frames.back().step) throw ConfigError(at + ": steps out of order");
            frames.emplace_back();
            frames.back().step = step;
        }
        CsvFrame& f = frames.back();
        f.ids.push_back(static_cast<ParticleId>(detail::parse_int(cells[1], at)));
        f.roles.push_back(role_from_string(cells[2]));
        f.positions.push_back({detail::parse_double(cells[3], at), detail::parse_double(cells[4], at)});
        auto opt = [&](const std::string& c) -> std::optional<double> {
            if (c.empty()) return std::nullopt;
            return detail::parse_double(c, at);
        };
        f.pe1.push_back(opt(cells[5]));
        f.pe2.push_back(opt(cells[6]));
        f.fractured.push_back(static_cast<std::uint8_t>(detail::parse_int(cells[7], at) != 0));
    }
    return frames;
}

/// step,id,x,y for the tracked ids over every recorded step.
inline void write_track_csv(std::ostream& out, const Trajectory& traj, const std::vector<ParticleId>& ids) {
    out << "step,id,x,y\n";
    for (const Snapshot& s : traj.snapshots)
        for (ParticleId id : ids)
            out << s.step << ',' << id << ',' << detail::format17(s.positions[id].x) << ','
                << detail::format17(s.positions[id].y) << '\n';
}

}  // namespace swarmlat
