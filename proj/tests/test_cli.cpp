#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

#include <gtest/gtest.h>

#include "swarmlat.hpp"

using namespace swarmlat;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("swarmlat_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<CsvFrame> load(const fs::path& p) {
    std::ifstream in(p);
    return read_csv(in);
}

int cli(const std::string& args) {
    const int rc = std::system((std::string(SWARMLAT_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Csv, HeaderAndExactRoundTrip) {
    Scenario s = preset("shear-fracture");
    s.traction_steps = 80;
    s.relaxation_steps = 0;
    s.output.snapshot_steps.clear();
    const BuiltScenario b = build_scenario(s);
    const Trajectory tr = run(b.model, b.run);
    std::stringstream buf;
    write_csv(buf, tr);
    std::string header;
    std::getline(buf, header);
    EXPECT_EQ(header, "step,id,role,x,y,pe1,pe2,fractured");
    buf.seekg(0);
    const auto frames = read_csv(buf);
    ASSERT_EQ(frames.size(), tr.snapshots.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const Snapshot& snap = tr.snapshots[f];
        ASSERT_EQ(frames[f].positions.size(), snap.positions.size());
        for (std::size_t i = 0; i < snap.positions.size(); ++i) {
            EXPECT_EQ(frames[f].positions[i], snap.positions[i]);
            EXPECT_EQ(frames[f].roles[i], snap.roles[i]);
            EXPECT_EQ(frames[f].pe1[i].has_value(), snap.roles[i] == Role::Follower);
            EXPECT_EQ(frames[f].pe2[i].has_value(), snap.step > 0);
        }
    }
    std::set<Role> seen(frames.back().roles.begin(), frames.back().roles.end());
    EXPECT_TRUE(seen.contains(Role::Fictitious));
}

TEST(Csv, MalformedInput) {
    std::stringstream bad_header("step,id,x,y\n");
    EXPECT_THROW(read_csv(bad_header), ConfigError);
    std::stringstream short_row("step,id,role,x,y,pe1,pe2,fractured\n0,0,follower,1\n");
    EXPECT_THROW(read_csv(short_row), ConfigError);
}

TEST(RunCommand, ShearWritesEveryStep) {
    const fs::path dir = scratch("shear");
    const RunResult r = run_scenario(preset("shear-square"), dir);
    EXPECT_EQ(r.recorded_steps, 101u);
    const auto frames = load(dir / "trajectory.csv");
    ASSERT_EQ(frames.size(), 101u);
    for (const auto& f : frames) EXPECT_EQ(f.positions.size(), r.particles);
    EXPECT_TRUE(fs::exists(dir / "scenario.resolved"));
    EXPECT_TRUE(fs::exists(dir / "run.log"));
    EXPECT_TRUE(fs::exists(dir / "track.csv"));
    const Scenario resolved = parse_scenario(read_file(dir / "scenario.resolved"));
    EXPECT_TRUE(resolved.rule.axis.has_value());
}

TEST(RunCommand, Reproducible) {
    const fs::path a = scratch("rep_a"), b = scratch("rep_b");
    Scenario s = preset("tensile-hexagonal");
    s.relaxation_steps = 100;
    run_scenario(s, a);
    run_scenario(s, b);
    EXPECT_EQ(read_file(a / "trajectory.csv"), read_file(b / "trajectory.csv"));
}

TEST(RunCommand, RelaxationOnlyHasZeroPe2) {
    const fs::path dir = scratch("still");
    Scenario s = preset("tensile-square");
    for (auto& g : s.groups) g.segments.clear();
    s.traction_steps = 1;
    s.relaxation_steps = 30;
    run_scenario(s, dir);
    for (const auto& f : load(dir / "trajectory.csv"))
        for (const auto& v : f.pe2)
            EXPECT_EQ(v.value_or(0.0), 0.0);
}

TEST(RunCommand, TensileLogsFractureWhenALinkPassesSix) {
    const fs::path dir = scratch("tensile");
    Scenario s = preset("tensile-square");
    s.relaxation_steps = 10;
    s.output.record_stride = 1;
    run_scenario(s, dir);
    const std::string log = read_file(dir / "run.log");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(log, m, std::regex("fracture step (\\d+) link (\\d+) -> (\\d+)")));
    const int first = std::stoi(m[1]);

    // Oracle from the trajectory: first step at which a follower's link to a
    // leader, measured in the mixed view, exceeds 6.
    const BuiltScenario b = build_scenario(s);
    const auto frames = load(dir / "trajectory.csv");
    int oracle = -1;
    for (std::size_t f = 1; f < frames.size() && oracle < 0; ++f)
        for (ParticleId j = 0; j < b.model.body_count && oracle < 0; ++j) {
            if (b.model.roles[j] != Role::Follower) continue;
            for (ParticleId k : b.model.graph.shell1[j]) {
                const Vec2 pk = b.model.roles[k] == Role::Leader ? frames[f].positions[k] : frames[f - 1].positions[k];
                if (distance(frames[f - 1].positions[j], pk) > 6.0) oracle = frames[f].step;
            }
        }
    EXPECT_EQ(first, oracle);
}

TEST(RunCommand, FailureLeavesNothingBehind) {
    const fs::path dir = scratch("fail");
    Scenario s = preset("shear-square");
    s.groups[0].segments = {{1, 100, {1e308, 0}}};
    EXPECT_THROW(run_scenario(s, dir), SimulationError);
    EXPECT_TRUE(fs::is_empty(dir));
}

TEST(PlotCommand, FourShearPanels) {
    const fs::path dir = scratch("plot");
    run_scenario(preset("shear-square"), dir);
    const auto files = plot_command(dir / "trajectory.csv", {2, 45, 85, 100}, FieldKind::PE2, dir);
    ASSERT_EQ(files.size(), 4u);
    for (const auto& f : files) {
        const std::string svg = read_file(f);
        EXPECT_EQ(svg.rfind("<svg", 0), 0u);
        EXPECT_NE(svg.find(std::string(leader_color)), std::string::npos);
        EXPECT_NE(svg.find(std::string(frame_color)), std::string::npos);
        EXPECT_NE(svg.find("</svg>"), std::string::npos);
    }
}

TEST(PlotCommand, StepZeroIsUniform) {
    const fs::path dir = scratch("plot0");
    run_scenario(preset("shear-square"), dir);
    const auto files = plot_command(dir / "trajectory.csv", {0}, FieldKind::PE1, dir);
    const std::string svg = read_file(files.at(0));
    std::set<std::string> fills;
    std::regex follower("class=\"follower\"[^>]*fill=\"(#[0-9a-f]{6})\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), follower); it != std::sregex_iterator(); ++it)
        fills.insert((*it)[1]);
    EXPECT_EQ(fills.size(), 1u);
}

TEST(PlotCommand, FictitiousAreHollow) {
    const fs::path dir = scratch("plotghost");
    Scenario s = preset("tensile-square");
    s.relaxation_steps = 50;
    run_scenario(s, dir);
    const auto files = plot_command(dir / "trajectory.csv", {200}, std::nullopt, dir);
    const std::string svg = read_file(files.at(0));
    EXPECT_NE(svg.find("class=\"fictitious\""), std::string::npos);
    EXPECT_NE(svg.find("fill=\"none\""), std::string::npos);
}

TEST(PlotCommand, MissingStepListsAvailable) {
    const fs::path dir = scratch("plotmiss");
    Scenario s = preset("shear-square");
    s.traction_steps = 4;
    s.output.snapshot_steps.clear();
    run_scenario(s, dir);
    try {
        plot_command(dir / "trajectory.csv", {7}, std::nullopt, dir);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("available steps: 0 1 2 3 4"), std::string::npos) << e.what();
    }
}

TEST(PresetCommand, AstmFractureText) {
    const std::string text = preset_command("astm-fracture");
    EXPECT_NE(text.find("threshold = 11\n"), std::string::npos);
    EXPECT_NE(text.find("1-150: 0.6 0"), std::string::npos);
}

TEST(Binary, ExitCodes) {
    const fs::path dir = scratch("bin");
    EXPECT_EQ(cli("list-presets"), 0);
    EXPECT_EQ(cli(""), 1);
    EXPECT_EQ(cli("run"), 1);
    EXPECT_EQ(cli("plot x.csv --steps 1 --field pe3"), 1);
    EXPECT_EQ(cli("preset no-such-preset"), 2);
    EXPECT_EQ(cli("run " + (dir / "missing.ini").string()), 2);
    std::ofstream(dir / "shear.ini") << preset_command("shear-square");
    EXPECT_EQ(cli("run " + (dir / "shear.ini").string() + " -o " + dir.string() + " --threads 2 --record-stride 10"), 0);
    EXPECT_EQ(load(dir / "trajectory.csv").size(), 14u);  // 0, 10..100, plus 2, 45, 85
    EXPECT_EQ(cli("plot " + (dir / "trajectory.csv").string() + " --steps 2,45 --field pe2 -o " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "snapshot_45.svg"));
    EXPECT_EQ(cli("plot " + (dir / "trajectory.csv").string() + " --steps 3"), 2);
}
