#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlat/body.hpp"
#include "swarmlat/geometry.hpp"
#include "swarmlat/particle.hpp"

namespace swarmlat {

/// One geometric predicate over body nodes. Selectors are unions of terms,
/// written `term+term`, e.g. `min-x+ids:7,9` or `box:0,0,2,12`.
///
///   max-x[:depth] min-x[:depth] max-y[:depth] min-y[:depth]
///       nodes within `depth` of the extreme coordinate (default: the line itself)
///   grips | grip-left | grip-right     dogbone grip rectangles
///   ids:i,j,...                        explicit ids
///   box:x0,y0,x1,y1                    inclusive box
///   nearest:x,y                        the single node closest to (x, y)
struct SelectorTerm {
    enum class Kind { MaxX, MinX, MaxY, MinY, Grips, GripLeft, GripRight, Ids, Box, Nearest };
    Kind kind = Kind::MaxX;
    std::vector<double> args;

    friend bool operator==(const SelectorTerm&, const SelectorTerm&) = default;
};

struct Selector {
    std::vector<SelectorTerm> terms;
    friend bool operator==(const Selector&, const Selector&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view text, std::string_view field) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(std::string(field) + ": expected a number, got '" + t + "'");
    return v;
}

inline long parse_int(std::string_view text, std::string_view field) {
    const std::string t = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(std::string(field) + ": expected an integer, got '" + t + "'");
    return v;
}

/// Shortest text that reads back to the same double. Plain decimal notation
/// in the usual range, so no '+' from an exponent leaks into selectors.
inline std::string format_double(double v) {
    char buf[64];
    const double a = std::abs(v);
    const auto fmt = (a == 0.0 || (a >= 1e-4 && a < 1e15)) ? std::chars_format::fixed : std::chars_format::general;
    const auto res = std::to_chars(buf, buf + sizeof buf, v, fmt);
    return std::string(buf, res.ptr);
}

struct TermName {
    SelectorTerm::Kind kind;
    std::string_view name;
};

inline constexpr TermName term_names[] = {
    {SelectorTerm::Kind::MaxX, "max-x"},         {SelectorTerm::Kind::MinX, "min-x"},
    {SelectorTerm::Kind::MaxY, "max-y"},         {SelectorTerm::Kind::MinY, "min-y"},
    {SelectorTerm::Kind::Grips, "grips"},        {SelectorTerm::Kind::GripLeft, "grip-left"},
    {SelectorTerm::Kind::GripRight, "grip-right"}, {SelectorTerm::Kind::Ids, "ids"},
    {SelectorTerm::Kind::Box, "box"},            {SelectorTerm::Kind::Nearest, "nearest"},
};

}  // namespace detail

inline Selector parse_selector(std::string_view text) {
    Selector sel;
    for (const std::string& part : detail::split(text, '+')) {
        if (part.empty()) throw ConfigError("selector: empty term in '" + std::string(text) + "'");
        const auto colon = part.find(':');
        const std::string name = detail::trim(part.substr(0, colon));
        SelectorTerm term;
        bool known = false;
        for (const auto& tn : detail::term_names) {
            if (tn.name == name) {
                term.kind = tn.kind;
                known = true;
            }
        }
        if (!known) throw ConfigError("selector: unknown term '" + name + "'");
        if (colon != std::string::npos) {
            for (const std::string& a : detail::split(std::string_view(part).substr(colon + 1), ','))
                term.args.push_back(detail::parse_double(a, "selector " + name));
        }
        using K = SelectorTerm::Kind;
        const std::size_t n = term.args.size();
        switch (term.kind) {
            case K::MaxX: case K::MinX: case K::MaxY: case K::MinY:
                if (n > 1 || (n == 1 && term.args[0] < 0.0)) throw ConfigError("selector " + name + ": takes one non-negative depth");
                break;
            case K::Grips: case K::GripLeft: case K::GripRight:
                if (n != 0) throw ConfigError("selector " + name + ": takes no arguments");
                break;
            case K::Ids:
                if (n == 0) throw ConfigError("selector ids: needs at least one id");
                for (double v : term.args)
                    if (v < 0.0 || v != std::floor(v)) throw ConfigError("selector ids: ids must be non-negative integers");
                break;
            case K::Box:
                if (n != 4) throw ConfigError("selector box: needs x0,y0,x1,y1");
                break;
            case K::Nearest:
                if (n != 2) throw ConfigError("selector nearest: needs x,y");
                break;
        }
        sel.terms.push_back(std::move(term));
    }
    return sel;
}

inline std::string to_string(const Selector& sel) {
    std::string out;
    for (std::size_t t = 0; t < sel.terms.size(); ++t) {
        if (t) out += '+';
        const SelectorTerm& term = sel.terms[t];
        for (const auto& tn : detail::term_names)
            if (tn.kind == term.kind) out += tn.name;
        for (std::size_t i = 0; i < term.args.size(); ++i) {
            out += i == 0 ? ':' : ',';
            out += detail::format_double(term.args[i]);
        }
    }
    return out;
}

/// Ids of the points matched by `sel`, ascending.
inline std::vector<ParticleId> select_points(const Selector& sel, std::span<const Vec2> points,
                                             const BodyShape& body) {
    const double eps = 1e-9;
    std::vector<bool> hit(points.size(), false);
    const BBox box = bounding_box(points);
    for (const SelectorTerm& term : sel.terms) {
        using K = SelectorTerm::Kind;
        const double depth = term.args.empty() ? 0.0 : term.args[0];
        auto mark_if = [&](auto pred) {
            for (ParticleId i = 0; i < points.size(); ++i)
                if (pred(points[i])) hit[i] = true;
        };
        switch (term.kind) {
            case K::MaxX: mark_if([&](Vec2 p) { return p.x >= box.x_max - depth - eps; }); break;
            case K::MinX: mark_if([&](Vec2 p) { return p.x <= box.x_min + depth + eps; }); break;
            case K::MaxY: mark_if([&](Vec2 p) { return p.y >= box.y_max - depth - eps; }); break;
            case K::MinY: mark_if([&](Vec2 p) { return p.y <= box.y_min + depth + eps; }); break;
            case K::Grips: case K::GripLeft: case K::GripRight: {
                const auto* bone = std::get_if<Dogbone>(&body);
                if (!bone) throw ConfigError("selector grips: body is not a dogbone");
                if (term.kind != K::GripRight) mark_if([&](Vec2 p) { return bone->left_grip().contains(p, eps); });
                if (term.kind != K::GripLeft) mark_if([&](Vec2 p) { return bone->right_grip().contains(p, eps); });
                break;
            }
            case K::Ids:
                for (double v : term.args) {
                    const auto id = static_cast<ParticleId>(v);
                    if (id >= points.size())
                        throw ConfigError("selector ids: id " + std::to_string(id) + " is out of range");
                    hit[id] = true;
                }
                break;
            case K::Box: {
                const BBox b{term.args[0], term.args[1], term.args[2], term.args[3]};
                mark_if([&](Vec2 p) { return b.contains(p, eps); });
                break;
            }
            case K::Nearest: {
                const Vec2 target{term.args[0], term.args[1]};
                ParticleId best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (ParticleId i = 0; i < points.size(); ++i) {
                    const double d = distance(points[i], target);
                    if (d < best_d - 1e-12) {
                        best_d = d;
                        best = i;
                    }
                }
                if (!points.empty()) hit[best] = true;
                break;
            }
        }
    }
    std::vector<ParticleId> ids;
    for (ParticleId i = 0; i < points.size(); ++i)
        if (hit[i]) ids.push_back(i);
    return ids;
}

/// Selected points become leaders, the rest followers.
inline std::vector<Role> assign_roles(std::span<const Vec2> points, const Selector& leaders, const BodyShape& body) {
    const std::vector<ParticleId> ids = select_points(leaders, points, body);
    if (ids.empty()) throw ConfigError("leader selector '" + to_string(leaders) + "' matches no particle");
    if (ids.size() == points.size())
        throw ConfigError("leader selector '" + to_string(leaders) + "' matches every particle");
    std::vector<Role> roles(points.size(), Role::Follower);
    for (ParticleId id : ids) roles[id] = Role::Leader;
    return roles;
}

}  // namespace swarmlat
