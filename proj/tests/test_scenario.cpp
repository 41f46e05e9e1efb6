#include <gtest/gtest.h>

#include "swarmlat.hpp"

using namespace swarmlat;

namespace {

const char* minimal = R"(
[lattice]
kind = square

[body]
shape = rectangle
width = 4
height = 4

[leaders]
pull.select = max-x
pull.segments = 1-10: 0.1 0

[rule]
kind = barycenter

[run]
traction_steps = 10
)";

std::string with_line(const std::string& base, const std::string& section, const std::string& line) {
    std::string s = base;
    const auto at = s.find("[" + section + "]");
    const auto eol = s.find('\n', at);
    s.insert(eol + 1, line + "\n");
    return s;
}

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Parse, MinimalFile) {
    const Scenario s = parse_scenario(minimal);
    EXPECT_EQ(s.lattice.type, LatticeType::Square);
    EXPECT_EQ(std::get<Rectangle>(s.body), (Rectangle{4, 4}));
    ASSERT_EQ(s.groups.size(), 1u);
    EXPECT_EQ(s.groups[0].segments, (std::vector<Segment>{{1, 10, {0.1, 0}}}));
    EXPECT_EQ(s.traction_steps, 10);
    EXPECT_EQ(s.relaxation_steps, 0);
    const BuiltScenario b = build_scenario(s);
    EXPECT_EQ(b.model.body_count, 25u);
}

TEST(Parse, NegativeThreshold) {
    const std::string text = std::string(minimal) + "[fracture]\nthreshold = -1\n";
    EXPECT_NE(error_of(text).find("threshold must be positive"), std::string::npos) << error_of(text);
}

TEST(Parse, UnknownKeyIsAnError) {
    const std::string e = error_of(with_line(minimal, "rule", "kapa = 3"));
    EXPECT_NE(e.find("rule.kapa"), std::string::npos) << e;
    EXPECT_NE(e.find("line"), std::string::npos) << e;
}

TEST(Parse, SyntaxErrorsCarryLineNumbers) {
    EXPECT_NE(error_of(with_line(minimal, "rule", "just words")).find("line 15"), std::string::npos)
        << error_of(with_line(minimal, "rule", "just words"));
    EXPECT_NE(error_of("[lattice\nkind = square\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("kind = square\n").find("outside of any section"), std::string::npos);
    EXPECT_NE(error_of(std::string(minimal) + "[extras]\n").find("unknown section"), std::string::npos);
    EXPECT_NE(error_of(with_line(minimal, "rule", "kind = poisson")).find("duplicate key"), std::string::npos);
}

TEST(Parse, SemanticErrorsNameTheField) {
    EXPECT_NE(error_of(with_line(minimal, "lattice", "a = 0")).find("lattice.a"), std::string::npos);
    EXPECT_NE(error_of(with_line(minimal, "lattice", "b = 2")).find("lattice.b"), std::string::npos);
    std::string t = minimal;
    t.replace(t.find("traction_steps = 10"), 19, "traction_steps = 0");
    EXPECT_NE(error_of(t).find("run.traction_steps"), std::string::npos);
    EXPECT_NE(error_of(with_line(minimal, "rule", "K = abc")).find("rule.K"), std::string::npos);
    EXPECT_NE(error_of(with_line(minimal, "leaders", "pull.segments = 5-2: 1 0")).size(), 0u);
    EXPECT_NE(error_of(with_line(minimal, "leaders", "changes = 3: max-x -> frame")).size(), 0u);
}

TEST(Parse, UnresolvableSelectorFailsAtBuild) {
    std::string t = minimal;
    t.replace(t.find("max-x"), 5, "ids:1000");
    const Scenario s = parse_scenario(t);
    EXPECT_THROW(build_scenario(s), ConfigError);
}

TEST(Parse, GroupsKeepFileOrder) {
    std::string t = minimal;
    t.replace(t.find("pull.select = max-x"), 19, "zeta.select = min-x\npull.select = max-x");
    const Scenario s = parse_scenario(t);
    ASSERT_EQ(s.groups.size(), 2u);
    EXPECT_EQ(s.groups[0].name, "zeta");
    EXPECT_EQ(parse_scenario(emit_scenario(s)), s);
}

TEST(Presets, RoundTripEveryPreset) {
    const auto names = preset_names();
    EXPECT_EQ(names.size(), 22u);
    for (const auto& n : names) {
        const Scenario s = preset(n);
        EXPECT_EQ(parse_scenario(emit_scenario(s)), s) << n;
        EXPECT_EQ(parse_scenario(preset_text(n)), s) << n;
    }
}

TEST(Presets, UnknownNameListsValidOnes) {
    try {
        preset("tensile-cubic");
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        for (const auto& n : preset_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
    }
}

TEST(Presets, QuotedParameters) {
    const Scenario shear = preset("shear-square");
    EXPECT_EQ(shear.groups[0].segments, (std::vector<Segment>{{1, 100, {0.1, 0}}}));
    EXPECT_EQ(shear.traction_steps, 100);
    EXPECT_FALSE(shear.fracture.enabled);

    const Scenario sf = preset("shear-fracture");
    EXPECT_TRUE(sf.fracture.enabled);
    EXPECT_EQ(sf.fracture.threshold, 2.5);

    const Scenario tens = preset("tensile-square");
    EXPECT_EQ(tens.fracture.threshold, 6.0);
    EXPECT_EQ(tens.groups[1].segments, (std::vector<Segment>{{1, 150, {0.5, 0}}}));
    EXPECT_EQ(tens.traction_steps, 150);

    const Scenario ob = preset("tensile-oblique");
    EXPECT_EQ(ob.fracture.threshold, 10.0);
    EXPECT_EQ(ob.groups[1].segments[0].velocity, (Vec2{0.4, 0}));

    const Scenario astm = preset("astm-square");
    EXPECT_EQ(astm.groups[1].segments, (std::vector<Segment>{{1, 150, {2.5, 0}}}));
    EXPECT_EQ(astm.traction_steps, 150);
    EXPECT_EQ(astm.relaxation_steps, 2500);

    const Scenario af = preset("astm-fracture");
    EXPECT_EQ(af.fracture.threshold, 11.0);
    EXPECT_EQ(af.groups[1].segments[0].velocity, (Vec2{0.6, 0}));
}

TEST(Presets, ShearChecklist) {
    // lattice, shape, leaders, leader motion, rule, neighbours, fracture, steps
    const Scenario s = preset("shear-square");
    EXPECT_EQ(s.lattice.type, LatticeType::Square);
    EXPECT_EQ(std::get<Rectangle>(s.body), (Rectangle{12, 12}));
    EXPECT_EQ(to_string(s.groups[0].select), "max-x");
    EXPECT_EQ(s.rule.kind, RuleKind::Barycenter);
    EXPECT_EQ(s.metric.kind, MetricKind::CoordinationCount);
    EXPECT_EQ(s.metric.count, 4);
    EXPECT_EQ(s.shells, 1);
    const BuiltScenario b = build_scenario(s);
    EXPECT_EQ(b.model.body_count, 169u);  // 13 x 13
}

TEST(Presets, ObliqueHasFiveMovingLeaders) {
    const BuiltScenario b = build_scenario(preset("tensile-oblique"));
    EXPECT_EQ(b.model.script.groups[1].members.size(), 5u);
}

TEST(Presets, AstmLeadersAreBothGrips) {
    const BuiltScenario b = build_scenario(preset("astm-square"));
    const Dogbone d = std::get<Dogbone>(b.scenario.body);
    std::size_t grip_nodes = 0;
    for (ParticleId j = 0; j < b.model.body_count; ++j) {
        const Vec2 p = b.model.initial[j];
        const bool in_grip = d.left_grip().contains(p) || d.right_grip().contains(p);
        grip_nodes += in_grip;
        EXPECT_EQ(b.model.roles[j] == Role::Leader, in_grip) << j;
    }
    EXPECT_GT(grip_nodes, 0u);
}

TEST(Build, AxisDefaultsToBodyMiddle) {
    const BuiltScenario b = build_scenario(preset("shear-poisson"));
    EXPECT_EQ(b.model.rule.axis, 6.0);
    EXPECT_EQ(*b.scenario.rule.axis, 6.0);
    // the resolved text parses back to the same model
    const BuiltScenario again = build_scenario(parse_scenario(emit_scenario(b.scenario)));
    EXPECT_EQ(again.model.rule, b.model.rule);
}
