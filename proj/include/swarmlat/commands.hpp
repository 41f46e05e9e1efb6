#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "swarmlat/csv.hpp"
#include "swarmlat/presets.hpp"
#include "swarmlat/scenario.hpp"
#include "swarmlat/svg.hpp"

namespace swarmlat {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct RunOverrides {
    std::optional<int> threads;
    std::optional<int> record_stride;
};

struct RunResult {
    std::vector<fs::path> files;
    std::size_t particles = 0;
    std::size_t recorded_steps = 0;
    std::size_t fracture_events = 0;
};

namespace detail {

/// Removes everything registered unless released.
class OutputGuard {
public:
    void add(fs::path p) { files_.push_back(std::move(p)); }
    std::vector<fs::path> release() { return std::exchange(files_, {}); }
    ~OutputGuard() {
        std::error_code ec;
        for (const auto& f : files_) fs::remove(f, ec);
    }

private:
    std::vector<fs::path> files_;
};

inline std::ofstream open_out(const fs::path& p, OutputGuard& guard) {
    guard.add(p);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

}  // namespace detail

/// Runs a scenario and writes trajectory.csv, scenario.resolved, run.log and,
/// when particles are tracked, track.csv. On failure nothing is left behind.
inline RunResult run_scenario(Scenario scenario, const fs::path& out_dir, const RunOverrides& over = {}) {
    if (over.threads) scenario.threads = *over.threads;
    if (over.record_stride) scenario.output.record_stride = *over.record_stride;
    if (scenario.threads < 1) throw ConfigError("threads must be at least 1");
    if (scenario.output.record_stride < 1) throw ConfigError("record stride must be at least 1");

    const BuiltScenario built = build_scenario(scenario);
    fs::create_directories(out_dir);
    detail::OutputGuard guard;

    std::ostringstream log;
    RunOptions opt = built.run;
    opt.on_step = [&](int t, const std::vector<FractureEvent>& events) {
        for (const FractureEvent& e : events)
            log << "fracture step " << t << " link " << e.from << " -> " << e.to << " fictitious " << e.fictitious
                << "\n";
    };
    const Trajectory traj = run(built.model, opt);

    {
        auto out = detail::open_out(out_dir / "scenario.resolved", guard);
        out << emit_scenario(built.scenario);
    }
    {
        auto out = detail::open_out(out_dir / "trajectory.csv", guard);
        write_csv(out, traj);
        if (!out) throw std::runtime_error("failed writing trajectory.csv");
    }
    if (!built.tracked.empty()) {
        auto out = detail::open_out(out_dir / "track.csv", guard);
        write_track_csv(out, traj, built.tracked);
    }
    {
        auto out = detail::open_out(out_dir / "run.log", guard);
        out << "particles " << built.model.particle_count() << " (body " << built.model.body_count << ", frame "
            << built.model.frame.size() << ")\n";
        out << "steps " << traj.step_seconds.size() << " recorded " << traj.snapshots.size() << "\n";
        out << "fracture events " << traj.events.size() << "\n";
        out << log.str();
        for (std::size_t i = 0; i < traj.step_seconds.size(); ++i)
            out << "step " << i + 1 << " seconds " << traj.step_seconds[i] << "\n";
    }

    RunResult r;
    r.files = guard.release();
    r.particles = built.model.particle_count();
    r.recorded_steps = traj.snapshots.size();
    r.fracture_events = traj.events.size();
    return r;
}

inline RunResult run_command(const fs::path& scenario_file, const fs::path& out_dir, const RunOverrides& over = {}) {
    return run_scenario(parse_scenario(read_file(scenario_file)), out_dir, over);
}

/// One snapshot_<step>.svg per requested step. All panels share one view box.
inline std::vector<fs::path> plot_command(const fs::path& csv, const std::vector<int>& steps,
                                          std::optional<FieldKind> field, const fs::path& out_dir) {
    std::ifstream in(csv);
    if (!in) throw ConfigError("cannot open " + csv.string());
    const std::vector<CsvFrame> frames = read_csv(in);
    if (frames.empty()) throw ConfigError(csv.string() + " has no rows");

    std::vector<const CsvFrame*> chosen;
    for (int step : steps) {
        const auto it = std::find_if(frames.begin(), frames.end(), [&](const CsvFrame& f) { return f.step == step; });
        if (it == frames.end()) {
            std::string msg = "step " + std::to_string(step) + " was not recorded; available steps:";
            for (const CsvFrame& f : frames) msg += " " + std::to_string(f.step);
            throw ConfigError(msg);
        }
        chosen.push_back(&*it);
    }

    BBox view = frame_bounds(*chosen.front());
    for (const CsvFrame* f : chosen) {
        const BBox b = frame_bounds(*f);
        view = {std::min(view.x_min, b.x_min), std::min(view.y_min, b.y_min), std::max(view.x_max, b.x_max),
                std::max(view.y_max, b.y_max)};
    }
    const double radius = detail::marker_radius(frames.front());

    fs::create_directories(out_dir);
    detail::OutputGuard guard;
    for (const CsvFrame* f : chosen) {
        auto out = detail::open_out(out_dir / ("snapshot_" + std::to_string(f->step) + ".svg"), guard);
        out << render_svg(*f, field, view, radius);
    }
    return guard.release();
}

inline std::string preset_command(std::string_view name) { return preset_text(name); }

}  // namespace swarmlat
