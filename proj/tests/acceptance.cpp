// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// non-zero when any of them fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <queue>
#include <sstream>

#include "reference_stepper.hpp"
#include "swarmlat.hpp"

using namespace swarmlat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

// BFS layer of every body particle from the given leaders over t0 shell-1 links.
std::vector<int> layers(const Model& m, const std::vector<ParticleId>& sources) {
    std::vector<std::vector<ParticleId>> viewers(m.particle_count());
    for (ParticleId j = 0; j < m.body_count; ++j)
        for (ParticleId k : m.graph.shell1[j]) viewers[k].push_back(j);
    std::vector<int> layer(m.body_count, -1);
    std::queue<ParticleId> q;
    for (ParticleId s : sources) layer[s] = 0, q.push(s);
    while (!q.empty()) {
        const ParticleId k = q.front();
        q.pop();
        for (ParticleId j : viewers[k])
            if (j < m.body_count && layer[j] < 0) layer[j] = layer[k] + 1, q.push(j);
    }
    return layer;
}

Outcome fixed_point() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    std::string worst_name;
    for (const auto& name : preset_names()) {
        BuiltScenario b = build_scenario(preset(name));
        for (auto& g : b.model.script.groups)
            for (auto& s : g.segments) s.velocity = {};
        Configuration c = initial_configuration(b.model);
        for (int t = 0; t < 100; ++t) advance(b.model, c);
        for (ParticleId i = 0; i < b.model.particle_count(); ++i) {
            const Vec2 d = c.positions[i] - b.model.initial[i];
            const double drift = std::max(std::abs(d.x), std::abs(d.y));
            if (drift > worst || worst_name.empty()) worst = std::max(worst, drift), worst_name = name;
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 1.0,
            "max drift " + num(worst) + " over 22 presets x 100 steps (" + worst_name + "), " + num(secs) + " s"};
}

Outcome propagation_delay() {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario s;
    s.body = Rectangle{19, 19};
    s.groups = {{"pull", parse_selector("max-x"), {{1, 40, {0.1, 0.0}}}}};
    s.traction_steps = 40;
    const BuiltScenario b = build_scenario(s);
    const Trajectory tr = run(b.model, b.run);
    const std::vector<int> layer = layers(b.model, b.model.script.groups[0].members);
    int mismatches = 0, checked = 0;
    for (ParticleId j = 0; j < b.model.body_count; ++j) {
        if (b.model.roles[j] != Role::Follower) continue;
        int first = -1;
        for (const Snapshot& snap : tr.snapshots)
            if (snap.step > 0 && snap.step_displacement[j] > 1e-15) {
                first = snap.step;
                break;
            }
        ++checked;
        mismatches += first != layer[j];
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 1.0,
            std::to_string(checked) + " followers, " + std::to_string(mismatches) + " mismatches, " + num(secs) + " s"};
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    int breaks = 0;
    for (bool fracture : {false, true}) {
        Scenario s;
        s.body = Rectangle{4, 4};
        s.groups = {{"pull", parse_selector("max-x"), {{1, 20, {0.1, 0.0}}}}};
        s.traction_steps = 20;
        if (fracture) s.fracture = {true, 1.5, 3.0, 1.0, false};
        const BuiltScenario b = build_scenario(s);
        const ref::Result r = ref::simulate({5, 20, {0.1, 0.0}, fracture, 1.5});
        breaks += r.breaks;
        Configuration c = initial_configuration(b.model);
        for (int t = 1; t <= 20; ++t) {
            advance(b.model, c);
            for (ParticleId j = 0; j < 25; ++j)
                worst = std::max({worst, std::abs(c.positions[j].x - r.body[t][j].x),
                                  std::abs(c.positions[j].y - r.body[t][j].y)});
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && breaks > 0 && secs < 1.0,
            "max |diff| " + num(worst) + ", reference breaks " + std::to_string(breaks) + ", " + num(secs) + " s"};
}

Outcome thread_determinism() {
    const BuiltScenario b = build_scenario(preset("tensile-square"));
    std::vector<std::string> csv;
    for (int threads : {1, 2, 8}) {
        RunOptions o = b.run;
        o.threads = threads;
        std::ostringstream out;
        write_csv(out, run(b.model, o));
        csv.push_back(out.str());
    }
    const bool same = csv[0] == csv[1] && csv[0] == csv[2];
    return {same, "tensile-square trajectory.csv with 1/2/8 workers: " + std::to_string(csv[0].size()) + " bytes, " +
                      (same ? "identical" : "different")};
}

Outcome pe_identities() {
    // PE1 at t0 on every preset
    double pe1_t0 = 0;
    for (const auto& name : preset_names()) {
        Scenario s = preset(name);
        s.traction_steps = 1;
        s.relaxation_steps = 0;
        s.output.snapshot_steps.clear();
        const BuiltScenario b = build_scenario(s);
        const Trajectory tr = run(b.model, b.run);
        for (double v : field(tr, 0, FieldKind::PE1).values) pe1_t0 = std::max(pe1_t0, v);
    }
    // rigid motion of a deformed configuration pair
    Scenario s = preset("shear-poisson");
    s.traction_steps = 40;
    s.output.snapshot_steps.clear();
    const BuiltScenario b = build_scenario(s);
    const Trajectory tr = run(b.model, b.run);
    Trajectory moved = tr;
    const double c = std::cos(1.1), sn = std::sin(1.1);
    auto rigid = [&](Vec2 p, Vec2 shift) { return Vec2{c * p.x - sn * p.y, sn * p.x + c * p.y} + shift; };
    for (auto& snap : moved.snapshots)
        for (Vec2& p : snap.positions) p = rigid(p, {12.5, -3.0});
    for (Vec2& p : moved.initial) p = rigid(p, {-4.0, 7.0});
    const auto a = field(tr, 40, FieldKind::PE1), m = field(moved, 40, FieldKind::PE1);
    double rigid_err = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) rigid_err = std::max(rigid_err, std::abs(a.values[i] - m.values[i]));
    // PE2 of a (0.3, 0.4) step
    Trajectory step;
    step.body_count = 1;
    step.initial = {{2, 2}};
    step.initial_neighbors = {{}};
    step.snapshots = {Snapshot{0, {{2, 2}}, {Role::Follower}, {0.0}, {0}},
                      Snapshot{1, {{2.3, 2.4}}, {Role::Follower}, {distance({2.3, 2.4}, {2, 2})}, {0}}};
    const double pe2_err = std::abs(pe2(step, 1, 0) - 0.5);
    return {pe1_t0 == 0.0 && rigid_err <= 1e-12 && pe2_err <= 1e-15,
            "PE1(t0) max " + num(pe1_t0) + ", rigid-motion change " + num(rigid_err) + ", |PE2 - 0.5| " + num(pe2_err)};
}

Outcome shear_argmax() {
    const BuiltScenario b = build_scenario(preset("shear-square"));
    const Trajectory tr = run(b.model, b.run);
    const std::vector<int> layer = layers(b.model, b.model.script.groups[0].members);
    std::string detail;
    bool ok = true;
    for (int t : {45, 85}) {
        const auto f = field(tr, t, FieldKind::PE2);
        const auto it = std::max_element(f.values.begin(), f.values.end());
        const ParticleId j = f.ids[std::size_t(it - f.values.begin())];
        ok = ok && layer[j] >= 1 && layer[j] <= 2;
        detail += "step " + std::to_string(t) + ": argmax id " + std::to_string(j) + " at layer " +
                  std::to_string(layer[j]) + "; ";
    }
    return {ok, detail};
}

struct TrackStats {
    double up_dy = 0, down_dy = 0, mirror = 0, excursion = 0;
};

TrackStats poisson_tracks(const std::string& name) {
    const BuiltScenario b = build_scenario(preset(name));
    const Trajectory tr = run(b.model, b.run);
    const ParticleId up = b.tracked.at(0), down = b.tracked.at(1);
    const double axis = b.model.rule.axis;
    TrackStats s;
    const int end = b.scenario.traction_steps;
    s.up_dy = tr.at(end).positions[up].y - b.model.initial[up].y;
    s.down_dy = tr.at(end).positions[down].y - b.model.initial[down].y;
    for (const Snapshot& snap : tr.snapshots) {
        s.mirror = std::max(s.mirror, std::abs((snap.positions[up].y - axis) + (snap.positions[down].y - axis)));
        for (ParticleId id : {up, down})
            s.excursion = std::max(s.excursion, std::abs(snap.positions[id].y - b.model.initial[id].y));
    }
    return s;
}

Outcome poisson_sign() {
    const BuiltScenario b = build_scenario(preset("shear-poisson"));
    const double axis = b.model.rule.axis;
    const bool placed = b.model.initial[b.tracked[0]].y > axis && b.model.initial[b.tracked[1]].y < axis;
    const TrackStats s = poisson_tracks("shear-poisson");
    return {placed && s.up_dy < 0 && s.down_dy > 0 && s.mirror <= 1e-10,
            "above dy " + num(s.up_dy) + ", below dy " + num(s.down_dy) + ", mirror error " + num(s.mirror)};
}

struct Fragment {
    std::size_t size = 0, pairs = 0, events = 0;
    double max_dev = 0, mean0 = 0, mean1 = 0;
};

// Followers that no moving leader can influence through unbroken links,
// frame particles included.
Fragment detached_fragment(double scale) {
    Scenario s = preset("tensile-square");
    s.fracture.scale = scale;
    const BuiltScenario b = build_scenario(s);
    const Model& m = b.model;
    Configuration fin;
    const Trajectory tr = run(m, b.run, &fin);

    std::vector<std::vector<ParticleId>> viewers(fin.positions.size());
    for (ParticleId j = 0; j < m.body_count; ++j)
        for (const auto* shell : {&fin.shell1[j], &fin.shell2[j]})
            for (ParticleId k : *shell) viewers[k].push_back(j);
    for (std::size_t f = 0; f < m.frame.size(); ++f)
        for (ParticleId a : m.frame.assigned[f]) viewers[a].push_back(m.frame.first_frame + f);
    std::vector<char> reached(fin.positions.size(), 0);
    std::queue<ParticleId> q;
    for (const LeaderGroup& g : m.script.groups) {
        if (g.segments.empty()) continue;
        for (ParticleId id : g.members) reached[id] = 1, q.push(id);
    }
    while (!q.empty()) {
        const ParticleId k = q.front();
        q.pop();
        for (ParticleId j : viewers[k])
            if (!reached[j]) reached[j] = 1, q.push(j);
    }

    Fragment out;
    out.events = tr.events.size();
    double sum0 = 0, sum1 = 0;
    for (ParticleId j = 0; j < m.body_count; ++j) {
        if (fin.roles[j] != Role::Follower || reached[j]) continue;
        ++out.size;
        for (ParticleId k : m.graph.shell1[j]) {
            if (k >= m.body_count || reached[k] || fin.roles[k] != Role::Follower) continue;
            const double d0 = distance(m.initial[j], m.initial[k]);
            const double d1 = distance(fin.positions[j], fin.positions[k]);
            out.max_dev = std::max(out.max_dev, std::abs(d1 - d0));
            sum0 += d0;
            sum1 += d1;
            ++out.pairs;
        }
    }
    if (out.pairs) out.mean0 = sum0 / double(out.pairs), out.mean1 = sum1 / double(out.pairs);
    return out;
}

Outcome fracture_relaxation() {
    const auto t0 = std::chrono::steady_clock::now();
    const Fragment elastic = detached_fragment(1.0);
    const Fragment plastic = detached_fragment(0.8);
    const double secs = seconds_since(t0);
    const bool ok = elastic.events > 0 && elastic.pairs > 0 && elastic.max_dev <= 1e-6 && plastic.pairs > 0 &&
                    plastic.mean1 < plastic.mean0 && secs < 10.0;
    return {ok, "s=1: " + std::to_string(elastic.events) + " events, fragment " + std::to_string(elastic.size) +
                    " followers, max deviation " + num(elastic.max_dev) + "; s=0.8: mean link " + num(plastic.mean1) +
                    " vs " + num(plastic.mean0) + "; " + num(secs) + " s"};
}

Outcome second_gradient() {
    const TrackStats one = poisson_tracks("shear-poisson");
    const TrackStats two = poisson_tracks("shear-poisson-2g");
    return {two.excursion < one.excursion,
            "max |y excursion| first gradient " + num(one.excursion) + ", second gradient " + num(two.excursion)};
}

Outcome full_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path root = fs::temp_directory_path() / "swarmlat_acceptance";
    fs::remove_all(root);
    std::size_t done = 0, svgs = 0;
    std::string failures;
    for (const auto& name : preset_names()) {
        try {
            const Scenario s = preset(name);
            const fs::path dir = root / name;
            run_scenario(s, dir);
            std::ifstream in(dir / "trajectory.csv");
            const auto frames = read_csv(in);
            std::vector<int> steps = s.output.snapshot_steps;
            if (steps.empty()) steps.push_back(frames.back().step);
            svgs += plot_command(dir / "trajectory.csv", steps, s.output.field, dir).size();
            ++done;
        } catch (const std::exception& e) {
            failures += " " + name + " (" + e.what() + ")";
        }
    }
    fs::remove_all(root);
    const double secs = seconds_since(t0);
    return {done == preset_names().size() && secs < 300.0,
            std::to_string(done) + "/" + std::to_string(preset_names().size()) + " presets, " + std::to_string(svgs) +
                " snapshots, " + num(secs) + " s" + failures};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"fixed point", fixed_point},
        {"propagation delay", propagation_delay},
        {"oracle equivalence", oracle_equivalence},
        {"determinism under parallelism", thread_determinism},
        {"pseudoenergy identities", pe_identities},
        {"shear PE2 argmax near leaders", shear_argmax},
        {"Poisson sign and mirror symmetry", poisson_sign},
        {"fracture and relaxation", fracture_relaxation},
        {"second-gradient stiffness", second_gradient},
        {"full preset suite", full_suite},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
