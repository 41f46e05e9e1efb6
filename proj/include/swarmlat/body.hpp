#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "swarmlat/geometry.hpp"
#include "swarmlat/lattice.hpp"

namespace swarmlat {

/// Axis-aligned rectangle anchored at the origin.
struct Rectangle {
    double width = 1.0;
    double height = 1.0;
    friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

/// Simple counterclockwise polygon.
struct Polygon {
    std::vector<Vec2> vertices;
    friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Tensile specimen: two wide grips joined to a narrow gauge section by
/// circular fillets. Lies on [0, total_length] x [0, grip_width], symmetric
/// about y = grip_width / 2. The defaults are eyeballed proportions, not
/// standard dimensions.
struct Dogbone {
    double gauge_width = 6.0;
    double grip_width = 14.0;
    double gauge_length = 30.0;
    double total_length = 60.0;
    double fillet_radius = 4.0;

    double center_y() const { return 0.5 * grip_width; }

    // Horizontal extent of one fillet.
    double transition_length() const {
        if (fillet_radius <= 0.0) return 0.0;
        const double step = 0.5 * (grip_width - gauge_width);
        const double rise = std::min(step, fillet_radius);
        const double c = 1.0 - rise / fillet_radius;
        return fillet_radius * std::sqrt(std::max(0.0, 1.0 - c * c));
    }
    double grip_length() const { return 0.5 * (total_length - gauge_length - 2.0 * transition_length()); }
    double gauge_start() const { return grip_length() + transition_length(); }
    double gauge_end() const { return gauge_start() + gauge_length; }

    /// Half of the local section width at abscissa x.
    double half_width(double x) const {
        const double hg = 0.5 * gauge_width;
        const double x0 = gauge_start();
        const double x1 = gauge_end();
        if (x >= x0 && x <= x1) return hg;
        const double dx = x < x0 ? x0 - x : x - x1;
        if (dx < transition_length()) {
            return hg + fillet_radius - std::sqrt(fillet_radius * fillet_radius - dx * dx);
        }
        return 0.5 * grip_width;
    }

    BBox left_grip() const { return {0.0, 0.0, grip_length(), grip_width}; }
    BBox right_grip() const { return {total_length - grip_length(), 0.0, total_length, grip_width}; }

    friend bool operator==(const Dogbone&, const Dogbone&) = default;
};

using BodyShape = std::variant<Rectangle, Polygon, Dogbone>;

inline void validate_body(const BodyShape& body) {
    if (const auto* r = std::get_if<Rectangle>(&body)) {
        if (!(r->width > 0.0)) throw ConfigError("body.width must be positive");
        if (!(r->height > 0.0)) throw ConfigError("body.height must be positive");
    } else if (const auto* p = std::get_if<Polygon>(&body)) {
        if (p->vertices.size() < 3) throw ConfigError("body.vertices needs at least 3 points");
        if (!is_simple_polygon(p->vertices)) throw ConfigError("body.vertices must form a simple polygon");
        if (!(signed_area(p->vertices) > 0.0)) throw ConfigError("body.vertices must be counterclockwise");
    } else {
        const auto& d = std::get<Dogbone>(body);
        if (!(d.gauge_width > 0.0)) throw ConfigError("body.gauge_width must be positive");
        if (!(d.grip_width > d.gauge_width)) throw ConfigError("body.grip_width must exceed body.gauge_width");
        if (!(d.gauge_length > 0.0)) throw ConfigError("body.gauge_length must be positive");
        if (!(d.total_length > d.gauge_length)) throw ConfigError("body.total_length must exceed body.gauge_length");
        if (d.fillet_radius < 0.0) throw ConfigError("body.fillet_radius must not be negative");
        if (!(d.grip_length() > 0.0)) throw ConfigError("body.total_length leaves no room for the grips");
    }
}

inline BBox body_bbox(const BodyShape& body) {
    if (const auto* r = std::get_if<Rectangle>(&body)) return {0.0, 0.0, r->width, r->height};
    if (const auto* p = std::get_if<Polygon>(&body)) return bounding_box(p->vertices);
    const auto& d = std::get<Dogbone>(body);
    return {0.0, 0.0, d.total_length, d.grip_width};
}

/// Inclusive membership: points within `eps` of the boundary are inside.
inline bool body_contains(const BodyShape& body, Vec2 p, double eps = 1e-9) {
    if (const auto* r = std::get_if<Rectangle>(&body)) {
        return BBox{0.0, 0.0, r->width, r->height}.contains(p, eps);
    }
    if (const auto* poly = std::get_if<Polygon>(&body)) return polygon_contains(poly->vertices, p, eps);
    const auto& d = std::get<Dogbone>(body);
    if (p.x < -eps || p.x > d.total_length + eps) return false;
    const double x = std::clamp(p.x, 0.0, d.total_length);
    return std::abs(p.y - d.center_y()) <= d.half_width(x) + eps;
}

/// Boundary as a counterclockwise polyline (fillets sampled), for rendering.
inline std::vector<Vec2> body_outline(const BodyShape& body, int arc_segments = 12) {
    if (const auto* r = std::get_if<Rectangle>(&body)) {
        return {{0.0, 0.0}, {r->width, 0.0}, {r->width, r->height}, {0.0, r->height}};
    }
    if (const auto* poly = std::get_if<Polygon>(&body)) return poly->vertices;
    const auto& d = std::get<Dogbone>(body);
    const double c = d.center_y();
    const double hG = 0.5 * d.grip_width;
    const double t = d.transition_length();
    std::vector<Vec2> bottom{{0.0, c - hG}, {d.grip_length(), c - hG}};
    auto arc = [&](double x_at_gauge, double sign) {
        std::vector<Vec2> pts;
        for (int k = arc_segments; k >= 0; --k) {
            const double dx = t * k / arc_segments;
            const double x = x_at_gauge + sign * dx;
            pts.push_back({x, c - d.half_width(x)});
        }
        return pts;
    };
    if (t > 0.0) {
        auto left = arc(d.gauge_start(), -1.0);
        bottom.insert(bottom.end(), left.begin(), left.end());
        auto right = arc(d.gauge_end(), +1.0);
        std::reverse(right.begin(), right.end());
        bottom.insert(bottom.end(), right.begin(), right.end());
    } else {
        bottom.push_back({d.gauge_start(), c - 0.5 * d.gauge_width});
        bottom.push_back({d.gauge_end(), c - 0.5 * d.gauge_width});
    }
    bottom.push_back({d.total_length - d.grip_length(), c - hG});
    bottom.push_back({d.total_length, c - hG});

    std::vector<Vec2> outline = bottom;
    for (auto it = bottom.rbegin(); it != bottom.rend(); ++it) outline.push_back({it->x, 2.0 * c - it->y});
    return outline;
}

/// Keeps the points inside (or on the boundary of) the body, order preserved.
inline std::vector<Vec2> clip_to_body(std::span<const Vec2> points, const BodyShape& body, double eps = 1e-9) {
    validate_body(body);
    std::vector<Vec2> kept;
    for (const Vec2& p : points) {
        if (body_contains(body, p, eps)) kept.push_back(p);
    }
    if (kept.empty()) throw ConfigError("body contains no lattice nodes");
    return kept;
}

}  // namespace swarmlat
