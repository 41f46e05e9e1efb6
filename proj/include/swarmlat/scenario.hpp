#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlat/body.hpp"
#include "swarmlat/diagnostics.hpp"
#include "swarmlat/lattice.hpp"
#include "swarmlat/neighbors.hpp"
#include "swarmlat/rules.hpp"
#include "swarmlat/selector.hpp"
#include "swarmlat/stepper.hpp"
#include "swarmlat/trajectory.hpp"

namespace swarmlat {

struct GroupSpec {
    std::string name;
    Selector select;
    std::vector<Segment> segments;  // empty: a stationary clamp
    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

struct ChangeSpec {
    int step = 1;
    Selector select;
    Role role = Role::Follower;
    std::string group;  // leader group to join, may be empty
    friend bool operator==(const ChangeSpec&, const ChangeSpec&) = default;
};

struct RuleConfig {
    RuleKind kind = RuleKind::Barycenter;
    double k = 0.05;
    std::optional<double> axis;        // default: mid-height of the body
    AxisForm da_form = AxisForm::SignedLinear;
    std::optional<double> axis_scale;  // default: largest |y - axis| over the body
    double w1 = 1.0;
    double w2 = 1.0;
    bool calibrate_rest = true;
    friend bool operator==(const RuleConfig&, const RuleConfig&) = default;
};

struct OutputConfig {
    int record_stride = 1;
    std::vector<int> snapshot_steps;
    std::vector<Selector> track;
    std::optional<FieldKind> field;
    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct Scenario {
    LatticeKind lattice;
    BodyShape body = Rectangle{};
    std::vector<GroupSpec> groups;
    std::vector<ChangeSpec> changes;
    RuleConfig rule;
    NeighborMetric metric;
    int shells = 1;
    FractureSpec fracture;
    int traction_steps = 1;
    int relaxation_steps = 0;
    int threads = 1;
    double converge_eps = 0.0;
    OutputConfig output;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

class Reader {
public:
    explicit Reader(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return std::nullopt;
        auto e = s->second.find(key);
        if (e == s->second.end()) return std::nullopt;
        e->second.used = true;
        return e->second.value;
    }

    std::string require(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) throw ConfigError(section + "." + key + ": required");
        return *v;
    }

    double number(const std::string& section, const std::string& key, double fallback) {
        auto v = get(section, key);
        return v ? parse_double(*v, section + "." + key) : fallback;
    }

    int integer(const std::string& section, const std::string& key, int fallback) {
        auto v = get(section, key);
        return v ? static_cast<int>(parse_int(*v, section + "." + key)) : fallback;
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) {
        auto v = get(section, key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ConfigError(section + "." + key + ": expected true or false, got '" + *v + "'");
    }

    /// Keys in file order.
    std::vector<std::string> keys(const std::string& section) const {
        std::vector<std::pair<int, std::string>> found;
        if (auto s = sections_.find(section); s != sections_.end())
            for (const auto& [k, e] : s->second) found.emplace_back(e.line, k);
        std::sort(found.begin(), found.end());
        std::vector<std::string> out;
        for (auto& [_, k] : found) out.push_back(std::move(k));
        return out;
    }

    void reject_unused() const {
        for (const auto& [name, sec] : sections_)
            for (const auto& [key, e] : sec)
                if (!e.used)
                    throw ConfigError("line " + std::to_string(e.line) + ": unknown or unused key '" + name + "." +
                                      key + "'");
    }

private:
    std::map<std::string, Section> sections_;
};

inline Vec2 parse_pair(std::string_view text, const std::string& field) {
    std::string t(text);
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::string a, b, extra;
    if (!(in >> a >> b) || (in >> extra)) throw ConfigError(field + ": expected two numbers, got '" + std::string(text) + "'");
    return {parse_double(a, field), parse_double(b, field)};
}

inline std::vector<Segment> parse_segments(std::string_view text, const std::string& field) {
    std::vector<Segment> segs;
    if (trim(text).empty()) return segs;
    for (const std::string& part : split(text, ';')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw ConfigError(field + ": expected 'start-end: vx vy', got '" + part + "'");
        const std::string range = trim(part.substr(0, colon));
        Segment s;
        const auto dash = range.find('-');
        if (dash == std::string::npos) {
            s.start = s.end = static_cast<int>(parse_int(range, field));
        } else {
            s.start = static_cast<int>(parse_int(range.substr(0, dash), field));
            s.end = static_cast<int>(parse_int(range.substr(dash + 1), field));
        }
        s.velocity = parse_pair(part.substr(colon + 1), field);
        segs.push_back(s);
    }
    return segs;
}

inline std::vector<ChangeSpec> parse_changes(std::string_view text) {
    std::vector<ChangeSpec> out;
    if (trim(text).empty()) return out;
    for (const std::string& part : split(text, ';')) {
        const auto colon = part.find(':');
        const auto arrow = part.find("->");
        if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
            throw ConfigError("leaders.changes: expected 'step: selector -> role [group]', got '" + part + "'");
        ChangeSpec c;
        c.step = static_cast<int>(parse_int(part.substr(0, colon), "leaders.changes"));
        c.select = parse_selector(trim(part.substr(colon + 1, arrow - colon - 1)));
        std::istringstream rhs(part.substr(arrow + 2));
        std::string role, group, extra;
        rhs >> role >> group >> extra;
        if (!extra.empty()) throw ConfigError("leaders.changes: trailing text in '" + part + "'");
        c.role = role_from_string(role);
        if (c.role != Role::Leader && c.role != Role::Follower)
            throw ConfigError("leaders.changes: role must be leader or follower, got '" + role + "'");
        c.group = group;
        out.push_back(c);
    }
    return out;
}

inline std::map<std::string, Section> tokenize(std::string_view text) {
    static const std::vector<std::string> known = {"lattice", "body",     "leaders", "rule",
                                                   "neighbors", "fracture", "run",     "output"};
    std::map<std::string, Section> sections;
    std::string current;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string at = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(at + "unterminated section header");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (std::find(known.begin(), known.end(), current) == known.end())
                throw ConfigError(at + "unknown section [" + current + "]");
            if (sections.contains(current)) throw ConfigError(at + "duplicate section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(at + "expected 'key = value'");
        if (current.empty()) throw ConfigError(at + "key outside of any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ConfigError(at + "empty key");
        auto& sec = sections[current];
        if (sec.contains(key)) throw ConfigError(at + "duplicate key '" + current + "." + key + "'");
        sec[key] = Entry{trim(std::string_view(line).substr(eq + 1)), line_no, false};
    }
    return sections;
}

inline std::vector<int> parse_int_list(std::string_view text, const std::string& field) {
    std::vector<int> out;
    if (trim(text).empty()) return out;
    for (const std::string& part : split(text, ',')) out.push_back(static_cast<int>(parse_int(part, field)));
    return out;
}

}  // namespace detail

/// Parses the sectioned key-value format (see docs/scenario-format.md).
/// Unknown keys, duplicate keys and keys that do not apply to the chosen
/// variant are errors.
inline Scenario parse_scenario(std::string_view text) {
    detail::Reader r(detail::tokenize(text));
    Scenario s;

    s.lattice.type = lattice_type_from_string(r.require("lattice", "kind"));
    s.lattice.a = r.number("lattice", "a", s.lattice.a);
    if (s.lattice.uses_b()) s.lattice.b = r.number("lattice", "b", s.lattice.b);
    if (s.lattice.uses_theta()) s.lattice.theta = r.number("lattice", "theta", s.lattice.theta);
    s.lattice.validate();

    const std::string shape = r.require("body", "shape");
    if (shape == "rectangle") {
        s.body = Rectangle{r.number("body", "width", 0.0), r.number("body", "height", 0.0)};
    } else if (shape == "polygon") {
        Polygon p;
        for (const std::string& v : detail::split(r.require("body", "vertices"), ';'))
            p.vertices.push_back(detail::parse_pair(v, "body.vertices"));
        s.body = p;
    } else if (shape == "dogbone") {
        Dogbone d;
        d.gauge_width = r.number("body", "gauge_width", d.gauge_width);
        d.grip_width = r.number("body", "grip_width", d.grip_width);
        d.gauge_length = r.number("body", "gauge_length", d.gauge_length);
        d.total_length = r.number("body", "total_length", d.total_length);
        d.fillet_radius = r.number("body", "fillet_radius", d.fillet_radius);
        s.body = d;
    } else {
        throw ConfigError("body.shape: unknown shape '" + shape + "'");
    }
    validate_body(s.body);

    // Group order follows the first key that mentions the group.
    std::vector<std::string> names;
    for (const std::string& key : r.keys("leaders")) {
        const auto dot = key.find('.');
        if (dot == std::string::npos) continue;
        const std::string name = key.substr(0, dot);
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
    for (const std::string& name : names) {
        GroupSpec g;
        g.name = name;
        g.select = parse_selector(r.require("leaders", name + ".select"));
        if (auto seg = r.get("leaders", name + ".segments"))
            g.segments = detail::parse_segments(*seg, "leaders." + name + ".segments");
        s.groups.push_back(std::move(g));
    }
    if (s.groups.empty()) throw ConfigError("leaders: at least one group '<name>.select' is required");
    if (auto ch = r.get("leaders", "changes")) s.changes = detail::parse_changes(*ch);
    for (const ChangeSpec& c : s.changes) {
        if (!c.group.empty() &&
            std::none_of(s.groups.begin(), s.groups.end(), [&](const GroupSpec& g) { return g.name == c.group; }))
            throw ConfigError("leaders.changes: unknown group '" + c.group + "'");
    }

    s.rule.kind = rule_kind_from_string(r.get("rule", "kind").value_or("barycenter"));
    s.rule.k = r.number("rule", "K", s.rule.k);
    if (auto v = r.get("rule", "axis"); v && *v != "auto") s.rule.axis = detail::parse_double(*v, "rule.axis");
    if (auto v = r.get("rule", "da")) s.rule.da_form = axis_form_from_string(*v);
    if (auto v = r.get("rule", "axis_scale"); v && *v != "auto")
        s.rule.axis_scale = detail::parse_double(*v, "rule.axis_scale");
    s.rule.w1 = r.number("rule", "w1", s.rule.w1);
    s.rule.w2 = r.number("rule", "w2", s.rule.w2);
    s.rule.calibrate_rest = r.boolean("rule", "calibrate_rest", s.rule.calibrate_rest);
    RuleSpec probe{s.rule.kind, s.rule.k, s.rule.axis.value_or(0.0), s.rule.da_form, s.rule.axis_scale.value_or(1.0),
                   s.rule.w1, s.rule.w2};
    probe.validate();

    s.metric.kind = metric_kind_from_string(r.get("neighbors", "metric").value_or("coordination"));
    s.metric.count = r.integer("neighbors", "count", s.metric.count);
    s.metric.radius = r.number("neighbors", "radius", s.metric.radius);
    s.metric.radius2 = r.number("neighbors", "radius2", s.metric.radius2);
    if (auto v = r.get("neighbors", "weights")) s.metric.weights = detail::parse_pair(*v, "neighbors.weights");
    s.shells = r.integer("neighbors", "shells", s.shells);
    s.metric.validate(s.shells);

    s.fracture.enabled = r.boolean("fracture", "enabled", s.fracture.enabled);
    s.fracture.threshold = r.number("fracture", "threshold", s.fracture.threshold);
    s.fracture.threshold2 = r.number("fracture", "threshold2", s.fracture.threshold2);
    s.fracture.scale = r.number("fracture", "fictitious_scale", s.fracture.scale);
    s.fracture.symmetric = r.boolean("fracture", "symmetric", s.fracture.symmetric);
    s.fracture.validate();

    s.traction_steps = r.integer("run", "traction_steps", 0);
    s.relaxation_steps = r.integer("run", "relaxation_steps", 0);
    s.threads = r.integer("run", "threads", 1);
    s.converge_eps = r.number("run", "converge_eps", 0.0);
    if (s.traction_steps < 1) throw ConfigError("run.traction_steps must be at least 1");
    if (s.relaxation_steps < 0) throw ConfigError("run.relaxation_steps must not be negative");
    if (s.threads < 1) throw ConfigError("run.threads must be at least 1");
    if (s.converge_eps < 0.0) throw ConfigError("run.converge_eps must not be negative");

    s.output.record_stride = r.integer("output", "record_stride", 1);
    if (s.output.record_stride < 1) throw ConfigError("output.record_stride must be at least 1");
    if (auto v = r.get("output", "snapshot_steps"))
        s.output.snapshot_steps = detail::parse_int_list(*v, "output.snapshot_steps");
    for (int step : s.output.snapshot_steps)
        if (step < 0 || step > s.traction_steps + s.relaxation_steps)
            throw ConfigError("output.snapshot_steps: step " + std::to_string(step) + " is outside the run");
    if (auto v = r.get("output", "track"); v && !detail::trim(*v).empty())
        for (const std::string& part : detail::split(*v, ';')) s.output.track.push_back(parse_selector(part));
    if (auto v = r.get("output", "field")) {
        if (*v == "pe1") s.output.field = FieldKind::PE1;
        else if (*v == "pe2") s.output.field = FieldKind::PE2;
        else if (*v != "none") throw ConfigError("output.field: expected none, pe1 or pe2");
    }

    r.reject_unused();
    return s;
}

/// Writes every field explicitly, so parse_scenario(emit_scenario(s)) == s.
inline std::string emit_scenario(const Scenario& s) {
    using detail::format_double;
    std::ostringstream o;
    o << "[lattice]\nkind = " << to_string(s.lattice.type) << "\na = " << format_double(s.lattice.a) << "\n";
    if (s.lattice.uses_b()) o << "b = " << format_double(s.lattice.b) << "\n";
    if (s.lattice.uses_theta()) o << "theta = " << format_double(s.lattice.theta) << "\n";

    o << "\n[body]\n";
    if (const auto* r = std::get_if<Rectangle>(&s.body)) {
        o << "shape = rectangle\nwidth = " << format_double(r->width) << "\nheight = " << format_double(r->height) << "\n";
    } else if (const auto* p = std::get_if<Polygon>(&s.body)) {
        o << "shape = polygon\nvertices = ";
        for (std::size_t i = 0; i < p->vertices.size(); ++i)
            o << (i ? "; " : "") << format_double(p->vertices[i].x) << " " << format_double(p->vertices[i].y);
        o << "\n";
    } else {
        const auto& d = std::get<Dogbone>(s.body);
        o << "shape = dogbone\ngauge_width = " << format_double(d.gauge_width)
          << "\ngrip_width = " << format_double(d.grip_width) << "\ngauge_length = " << format_double(d.gauge_length)
          << "\ntotal_length = " << format_double(d.total_length)
          << "\nfillet_radius = " << format_double(d.fillet_radius) << "\n";
    }

    o << "\n[leaders]\n";
    for (const GroupSpec& g : s.groups) {
        o << g.name << ".select = " << to_string(g.select) << "\n" << g.name << ".segments = ";
        for (std::size_t i = 0; i < g.segments.size(); ++i) {
            const Segment& seg = g.segments[i];
            o << (i ? "; " : "") << seg.start << "-" << seg.end << ": " << format_double(seg.velocity.x) << " "
              << format_double(seg.velocity.y);
        }
        o << "\n";
    }
    if (!s.changes.empty()) {
        o << "changes = ";
        for (std::size_t i = 0; i < s.changes.size(); ++i) {
            const ChangeSpec& c = s.changes[i];
            o << (i ? "; " : "") << c.step << ": " << to_string(c.select) << " -> " << to_string(c.role);
            if (!c.group.empty()) o << " " << c.group;
        }
        o << "\n";
    }

    o << "\n[rule]\nkind = " << to_string(s.rule.kind) << "\nK = " << format_double(s.rule.k)
      << "\naxis = " << (s.rule.axis ? format_double(*s.rule.axis) : "auto") << "\nda = " << to_string(s.rule.da_form)
      << "\naxis_scale = " << (s.rule.axis_scale ? format_double(*s.rule.axis_scale) : "auto")
      << "\nw1 = " << format_double(s.rule.w1) << "\nw2 = " << format_double(s.rule.w2)
      << "\ncalibrate_rest = " << (s.rule.calibrate_rest ? "true" : "false") << "\n";

    o << "\n[neighbors]\nmetric = " << to_string(s.metric.kind) << "\ncount = " << s.metric.count
      << "\nradius = " << format_double(s.metric.radius) << "\nradius2 = " << format_double(s.metric.radius2)
      << "\nweights = " << format_double(s.metric.weights.x) << ", " << format_double(s.metric.weights.y)
      << "\nshells = " << s.shells << "\n";

    o << "\n[fracture]\nenabled = " << (s.fracture.enabled ? "true" : "false")
      << "\nthreshold = " << format_double(s.fracture.threshold)
      << "\nthreshold2 = " << format_double(s.fracture.threshold2)
      << "\nfictitious_scale = " << format_double(s.fracture.scale)
      << "\nsymmetric = " << (s.fracture.symmetric ? "true" : "false") << "\n";

    o << "\n[run]\ntraction_steps = " << s.traction_steps << "\nrelaxation_steps = " << s.relaxation_steps
      << "\nthreads = " << s.threads << "\nconverge_eps = " << format_double(s.converge_eps) << "\n";

    o << "\n[output]\nrecord_stride = " << s.output.record_stride << "\nsnapshot_steps = ";
    for (std::size_t i = 0; i < s.output.snapshot_steps.size(); ++i) o << (i ? ", " : "") << s.output.snapshot_steps[i];
    o << "\ntrack = ";
    for (std::size_t i = 0; i < s.output.track.size(); ++i) o << (i ? "; " : "") << to_string(s.output.track[i]);
    o << "\nfield = " << (s.output.field ? std::string(to_string(*s.output.field)) : "none") << "\n";
    return o.str();
}

/// A scenario turned into a runnable model.
struct BuiltScenario {
    Scenario scenario;  // with axis/axis_scale resolved
    Model model;
    RunOptions run;
    std::vector<ParticleId> tracked;
    std::vector<std::string> group_names;
};

inline std::vector<Vec2> body_points(const Scenario& s) {
    validate_body(s.body);
    return clip_to_body(generate_lattice(s.lattice, body_bbox(s.body)), s.body);
}

inline BuiltScenario build_scenario(const Scenario& scenario) {
    BuiltScenario out;
    out.scenario = scenario;
    Scenario& s = out.scenario;

    const std::vector<Vec2> pts = body_points(s);
    const NeighborGraph graph = build_neighbor_graph(pts, s.metric, s.shells);
    FrameBuild frame = build_frame(pts, graph, s.shells, s.lattice);

    Selector all_leaders;
    for (const GroupSpec& g : s.groups)
        all_leaders.terms.insert(all_leaders.terms.end(), g.select.terms.begin(), g.select.terms.end());
    std::vector<Role> roles = assign_roles(pts, all_leaders, s.body);

    LeaderScript script;
    for (const GroupSpec& g : s.groups) {
        LeaderGroup lg{g.name, select_points(g.select, pts, s.body), g.segments};
        if (lg.members.empty()) throw ConfigError("leaders." + g.name + ".select matches no particle");
        script.groups.push_back(std::move(lg));
        out.group_names.push_back(g.name);
    }
    for (const ChangeSpec& c : s.changes) {
        CategoryChange cc{c.step, select_points(c.select, pts, s.body), c.role, std::nullopt};
        if (cc.ids.empty()) throw ConfigError("leaders.changes: selector '" + to_string(c.select) + "' matches nothing");
        if (!c.group.empty()) {
            for (std::size_t g = 0; g < s.groups.size(); ++g)
                if (s.groups[g].name == c.group) cc.group = g;
        }
        script.changes.push_back(std::move(cc));
    }
    script.validate(pts.size());

    const BBox box = body_bbox(s.body);
    if (!s.rule.axis) s.rule.axis = 0.5 * (box.y_min + box.y_max);
    if (!s.rule.axis_scale) {
        double far = 0.0;
        for (const Vec2& p : pts) far = std::max(far, std::abs(p.y - *s.rule.axis));
        s.rule.axis_scale = far > 0.0 ? far : 1.0;
    }

    Model& m = out.model;
    m.body_count = pts.size();
    m.initial = pts;
    m.initial.insert(m.initial.end(), frame.frame_points.begin(), frame.frame_points.end());
    m.roles = roles;
    m.roles.resize(m.initial.size(), Role::Frame);
    m.graph = std::move(frame.graph);
    m.frame = std::move(frame.assignment);
    m.script = std::move(script);
    m.rule = RuleSpec{s.rule.kind, s.rule.k, *s.rule.axis, s.rule.da_form, *s.rule.axis_scale, s.rule.w1, s.rule.w2};
    m.rule.validate();
    m.fracture = s.fracture;
    m.rest_offset = s.rule.calibrate_rest ? rest_offsets(m) : std::vector<Vec2>(m.initial.size());

    for (const Selector& sel : s.output.track) {
        const auto ids = select_points(sel, pts, s.body);
        if (ids.empty()) throw ConfigError("output.track: selector '" + to_string(sel) + "' matches nothing");
        out.tracked.insert(out.tracked.end(), ids.begin(), ids.end());
    }

    out.run.traction_steps = s.traction_steps;
    out.run.relaxation_steps = s.relaxation_steps;
    out.run.record_stride = s.output.record_stride;
    out.run.record_steps = s.output.snapshot_steps;
    out.run.threads = s.threads;
    out.run.converge_eps = s.converge_eps;
    return out;
}

}  // namespace swarmlat
