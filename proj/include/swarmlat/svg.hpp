#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "swarmlat/csv.hpp"

namespace swarmlat {

inline constexpr std::string_view leader_color = "#d62728";
inline constexpr std::string_view follower_color = "#1f4fd8";
inline constexpr std::string_view frame_color = "#ff9f1c";
inline constexpr std::string_view ghost_color = "#555555";

namespace detail {

/// Blue-cyan-yellow-red ramp for u in [0, 1].
inline std::string ramp(double u) {
    u = std::clamp(u, 0.0, 1.0);
    const double r = std::clamp(1.5 - std::abs(4.0 * u - 3.0), 0.0, 1.0);
    const double g = std::clamp(1.5 - std::abs(4.0 * u - 2.0), 0.0, 1.0);
    const double b = std::clamp(1.5 - std::abs(4.0 * u - 1.0), 0.0, 1.0);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(std::lround(r * 255)), int(std::lround(g * 255)),
                  int(std::lround(b * 255)));
    return buf;
}

inline double marker_radius(const CsvFrame& f) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t probe = std::min<std::size_t>(f.positions.size(), 16);
    for (std::size_t i = 0; i < probe; ++i)
        for (std::size_t j = 0; j < f.positions.size(); ++j)
            if (i != j) {
                const double d = distance(f.positions[i], f.positions[j]);
                if (d > 1e-9) best = std::min(best, d);
            }
    return std::isfinite(best) ? 0.3 * best : 0.3;
}

}  // namespace detail

inline BBox frame_bounds(const CsvFrame& f) { return bounding_box(f.positions); }

/// Dots per particle, y pointing up. With a field, followers are shaded by
/// their value normalised to the frame's min..max.
inline std::string render_svg(const CsvFrame& f, std::optional<FieldKind> field, BBox view, double radius) {
    const double pad = 4.0 * radius;
    view = {view.x_min - pad, view.y_min - pad, view.x_max + pad, view.y_max + pad};
    const double w = view.x_max - view.x_min;
    const double h = view.y_max - view.y_min;
    const double px = 800.0 / std::max(w, h);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    auto value = [&](std::size_t i) -> std::optional<double> {
        if (!field || f.roles[i] != Role::Follower) return std::nullopt;
        const auto& v = *field == FieldKind::PE1 ? f.pe1[i] : f.pe2[i];
        return v.value_or(0.0);
    };
    for (std::size_t i = 0; i < f.positions.size(); ++i)
        if (auto v = value(i)) lo = std::min(lo, *v), hi = std::max(hi, *v);

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << std::lround(w * px) << "\" height=\""
      << std::lround(h * px) << "\" viewBox=\"0 0 " << w * px << ' ' << h * px << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"6\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\">step " << f.step;
    if (field) o << " " << to_string(*field) << " [" << (std::isfinite(lo) ? lo : 0.0) << ", "
                 << (std::isfinite(hi) ? hi : 0.0) << "]";
    o << "</text>\n";
    for (std::size_t i = 0; i < f.positions.size(); ++i) {
        const double cx = (f.positions[i].x - view.x_min) * px;
        const double cy = (view.y_max - f.positions[i].y) * px;
        o << "<circle class=\"" << to_string(f.roles[i]) << "\" data-id=\"" << f.ids[i] << "\" cx=\"" << cx
          << "\" cy=\"" << cy << "\" r=\"" << radius * px << "\" ";
        switch (f.roles[i]) {
            case Role::Leader: o << "fill=\"" << leader_color << "\""; break;
            case Role::Frame: o << "fill=\"" << frame_color << "\""; break;
            case Role::Fictitious:
                o << "fill=\"none\" stroke=\"" << ghost_color << "\" stroke-width=\"" << 0.25 * radius * px << "\"";
                break;
            case Role::Follower:
                if (auto v = value(i)) {
                    const double u = hi > lo ? (*v - lo) / (hi - lo) : 0.0;
                    o << "fill=\"" << detail::ramp(u) << "\"";
                } else {
                    o << "fill=\"" << follower_color << "\"";
                }
                break;
        }
        o << "/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

inline std::string render_svg(const CsvFrame& f, std::optional<FieldKind> field = std::nullopt) {
    return render_svg(f, field, frame_bounds(f), detail::marker_radius(f));
}

}  // namespace swarmlat
