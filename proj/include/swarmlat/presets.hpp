#pragma once

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlat/scenario.hpp"

namespace swarmlat {

namespace detail {

inline Selector sel(std::string_view text) { return parse_selector(text); }

inline Scenario shear_base() {
    Scenario s;
    s.lattice = {LatticeType::Square, 1.0, 1.0, std::numbers::pi / 2};
    s.body = Rectangle{12.0, 12.0};
    s.groups = {{"pull", sel("max-x"), {{1, 100, {0.1, 0.0}}}}};
    s.metric.count = 4;
    s.traction_steps = 100;
    s.output.snapshot_steps = {2, 45, 85, 100};
    s.output.track = {sel("nearest:9,9"), sel("nearest:9,3")};
    s.output.field = FieldKind::PE2;
    return s;
}

inline Scenario tensile_base(double speed, double threshold) {
    Scenario s;
    s.lattice = {LatticeType::Square, 1.0, 1.0, std::numbers::pi / 2};
    s.body = Rectangle{12.0, 12.0};
    s.groups = {{"clamp", sel("min-x"), {}}, {"pull", sel("max-x"), {{1, 150, {speed, 0.0}}}}};
    s.metric.count = 4;
    s.fracture = {true, threshold, 2.0 * threshold, 1.0, false};
    s.traction_steps = 150;
    s.relaxation_steps = 2850;
    s.output.record_stride = 5;
    s.output.track = {sel("nearest:6,6")};
    s.output.field = FieldKind::PE1;
    return s;
}

inline Scenario astm_base() {
    Scenario s;
    s.lattice = {LatticeType::Square, 1.0, 1.0, std::numbers::pi / 2};
    s.body = Dogbone{};
    s.groups = {{"clamp", sel("grip-left"), {}}, {"pull", sel("grip-right"), {{1, 150, {2.5, 0.0}}}}};
    s.metric.count = 4;
    s.traction_steps = 150;
    s.relaxation_steps = 2500;
    s.output.record_stride = 50;
    s.output.snapshot_steps = {1, 40, 160, 2500};
    s.output.track = {sel("nearest:30,9"), sel("nearest:30,5")};
    s.output.field = FieldKind::PE1;
    return s;
}

inline LatticeKind rect_centered() { return {LatticeType::RectangularCentered, 1.0, 1.5, std::numbers::pi / 2}; }
inline LatticeKind honeycomb() { return {LatticeType::Honeycomb, 1.0, 1.0, std::numbers::pi / 2}; }

inline void poisson(Scenario& s) {
    s.rule.kind = RuleKind::PoissonMixed;
    s.rule.k = 0.05;
}

struct PresetEntry {
    std::string_view name;
    std::string_view about;
    Scenario (*make)();
};

inline const std::vector<PresetEntry>& preset_table() {
    static const std::vector<PresetEntry> table = {
        {"shear-square", "square block, right column dragged sideways at 0.1 per step",
         [] { return shear_base(); }},
        {"shear-honeycomb", "honeycomb block, right zigzag edge dragged at 0.1 per step",
         [] {
             Scenario s = shear_base();
             s.lattice = honeycomb();
             s.groups[0].select = sel("max-x:0.9");
             s.metric.count = 3;
             return s;
         }},
        {"shear-poisson", "square block dragged sideways, lateral coupling K = 0.05",
         [] {
             Scenario s = shear_base();
             poisson(s);
             return s;
         }},
        {"shear-poisson-2g", "as shear-poisson with two neighbour shells",
         [] {
             Scenario s = shear_base();
             poisson(s);
             s.shells = 2;
             return s;
         }},
        {"shear-fracture", "square block dragged sideways, links break above 2.5",
         [] {
             Scenario s = shear_base();
             s.fracture = {true, 2.5, 5.0, 1.0, false};
             s.relaxation_steps = 100;
             s.output.snapshot_steps = {2, 45, 85, 114};
             s.output.field = FieldKind::PE1;
             return s;
         }},
        {"tensile-square", "square plate, left column clamped, right column pulled at 0.5",
         [] {
             Scenario s = tensile_base(0.5, 6.0);
             s.output.snapshot_steps = {1, 36, 37, 38, 40, 100};
             return s;
         }},
        {"tensile-rectcentered-2g", "centred rectangular plate, two shells, pulled at 0.5",
         [] {
             Scenario s = tensile_base(0.5, 6.0);
             s.lattice = rect_centered();
             s.metric.count = 6;
             s.shells = 2;
             s.output.snapshot_steps = {1, 23, 33, 38, 40, 63};
             return s;
         }},
        {"tensile-rectcentered-n5", "centred rectangular plate, five neighbours, pulled at 0.5",
         [] {
             Scenario s = tensile_base(0.5, 6.0);
             s.lattice = rect_centered();
             s.metric.count = 5;
             s.output.snapshot_steps = {1, 23, 33, 38, 40, 63};
             return s;
         }},
        {"tensile-hexagonal", "hexagonal plate pulled at 0.5",
         [] {
             Scenario s = tensile_base(0.5, 6.0);
             s.lattice = {LatticeType::Hexagonal, 1.0, 1.0, std::numbers::pi / 2};
             s.metric.count = 6;
             s.output.snapshot_steps = {1, 42, 47, 80};
             return s;
         }},
        {"tensile-oblique", "oblique plate, five right-edge leaders pulled at 0.4, threshold 10",
         [] {
             Scenario s = tensile_base(0.4, 10.0);
             s.lattice = {LatticeType::Oblique, 1.0, 1.2, 70.0 * std::numbers::pi / 180.0};
             s.groups = {{"clamp", sel("min-x:0.5"), {}}, {"pull", sel("box:11,3.5,13,9.5"), {{1, 150, {0.4, 0.0}}}}};
             s.output.snapshot_steps = {1, 32, 55, 82, 90, 101, 113, 200};
             return s;
         }},
        {"tensile-honeycomb-1g", "honeycomb plate pulled at 0.5, one shell",
         [] {
             Scenario s = tensile_base(0.5, 6.0);
             s.lattice = honeycomb();
             s.groups[0].select = sel("min-x:0.9");
             s.groups[1].select = sel("max-x:0.9");
             s.metric.count = 3;
             s.output.snapshot_steps = {1, 22, 40, 54};
             return s;
         }},
        {"tensile-honeycomb-2g", "honeycomb plate pulled at 0.5, two shells",
         [] {
             Scenario s = tensile_base(0.5, 6.0);
             s.lattice = honeycomb();
             s.groups[0].select = sel("min-x:0.9");
             s.groups[1].select = sel("max-x:0.9");
             s.metric.count = 3;
             s.shells = 2;
             s.output.snapshot_steps = {1, 22, 40, 54};
             return s;
         }},
        {"astm-square", "dogbone on a square lattice, right grip pulled at 2.5",
         [] { return astm_base(); }},
        {"astm-rect-shape", "plain 60 x 14 strip gripped over the dogbone grip lengths",
         [] {
             Scenario s = astm_base();
             s.body = Rectangle{60.0, 14.0};
             s.groups[0].select = sel("box:0,0,11,14");
             s.groups[1].select = sel("box:49,0,60,14");
             s.output.track = {sel("nearest:30,11"), sel("nearest:30,3")};
             return s;
         }},
        {"astm-square-2g", "dogbone on a square lattice with two shells",
         [] {
             Scenario s = astm_base();
             s.shells = 2;
             return s;
         }},
        {"astm-rectcentered", "dogbone on a centred rectangular lattice",
         [] {
             Scenario s = astm_base();
             s.lattice = rect_centered();
             s.metric.count = 6;
             return s;
         }},
        {"astm-rectcentered-n5", "dogbone on a centred rectangular lattice, five neighbours",
         [] {
             Scenario s = astm_base();
             s.lattice = rect_centered();
             s.metric.count = 5;
             return s;
         }},
        {"astm-honeycomb", "dogbone on a honeycomb lattice",
         [] {
             Scenario s = astm_base();
             s.lattice = honeycomb();
             s.metric.count = 3;
             return s;
         }},
        {"astm-poisson", "dogbone, square lattice, lateral coupling K = 0.05",
         [] {
             Scenario s = astm_base();
             poisson(s);
             return s;
         }},
        {"astm-poisson-2g", "as astm-poisson with two shells",
         [] {
             Scenario s = astm_base();
             poisson(s);
             s.shells = 2;
             return s;
         }},
        {"astm-poisson-n5", "dogbone, centred rectangular lattice, five neighbours, lateral coupling",
         [] {
             Scenario s = astm_base();
             s.lattice = rect_centered();
             s.metric.count = 5;
             poisson(s);
             s.output.snapshot_steps = {1, 40, 100, 120, 160};
             return s;
         }},
        {"astm-fracture", "dogbone, centred rectangular lattice, five neighbours, pulled at 0.6, threshold 11",
         [] {
             Scenario s = astm_base();
             s.lattice = rect_centered();
             s.metric.count = 5;
             s.groups[1].segments = {{1, 150, {0.6, 0.0}}};
             s.fracture = {true, 11.0, 22.0, 1.0, false};
             return s;
         }},
    };
    return table;
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& e : detail::preset_table()) out.emplace_back(e.name);
    return out;
}

inline const detail::PresetEntry& preset_entry(std::string_view name) {
    for (const auto& e : detail::preset_table())
        if (e.name == name) return e;
    std::string msg = "unknown preset '" + std::string(name) + "'; valid names:";
    for (const auto& e : detail::preset_table()) msg += " " + std::string(e.name);
    throw ConfigError(msg);
}

inline Scenario preset(std::string_view name) { return preset_entry(name).make(); }

/// Scenario text with a short comment header.
inline std::string preset_text(std::string_view name) {
    const auto& e = preset_entry(name);
    return "# " + std::string(e.name) + ": " + std::string(e.about) + "\n\n" + emit_scenario(e.make());
}

}  // namespace swarmlat
