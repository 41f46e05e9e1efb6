#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlat/geometry.hpp"

namespace swarmlat {

/// The five plane Bravais lattices plus the (non-Bravais) honeycomb.
enum class LatticeType { Square, Rectangular, RectangularCentered, Hexagonal, Oblique, Honeycomb };

inline std::string_view to_string(LatticeType t) {
    switch (t) {
        case LatticeType::Square: return "square";
        case LatticeType::Rectangular: return "rectangular";
        case LatticeType::RectangularCentered: return "rectangular-centered";
        case LatticeType::Hexagonal: return "hexagonal";
        case LatticeType::Oblique: return "oblique";
        case LatticeType::Honeycomb: return "honeycomb";
    }
    return "?";
}

inline LatticeType lattice_type_from_string(std::string_view s) {
    for (LatticeType t : {LatticeType::Square, LatticeType::Rectangular, LatticeType::RectangularCentered,
                          LatticeType::Hexagonal, LatticeType::Oblique, LatticeType::Honeycomb}) {
        if (to_string(t) == s) return t;
    }
    throw ConfigError("lattice.kind: unknown lattice '" + std::string(s) + "'");
}

/// Lattice variant and its basis parameters. `a` is the primary spacing (the
/// edge length for honeycomb); `b` and `theta` are read only by the variants
/// that use them.
struct LatticeKind {
    LatticeType type = LatticeType::Square;
    double a = 1.0;
    double b = 1.0;
    double theta = std::numbers::pi / 2.0;

    bool is_bravais() const { return type != LatticeType::Honeycomb; }
    bool uses_b() const {
        return type == LatticeType::Rectangular || type == LatticeType::RectangularCentered ||
               type == LatticeType::Oblique;
    }
    bool uses_theta() const { return type == LatticeType::Oblique; }

    void validate() const {
        if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("lattice.a must be positive");
        if (uses_b() && (!(b > 0.0) || !std::isfinite(b))) throw ConfigError("lattice.b must be positive");
        if (uses_theta() && !(theta > 0.0 && theta < std::numbers::pi))
            throw ConfigError("lattice.theta must lie strictly between 0 and pi");
    }

    friend bool operator==(const LatticeKind&, const LatticeKind&) = default;
};

/// Two primitive vectors and the sites of the motif attached to every cell.
struct LatticeBasis {
    Vec2 a1;
    Vec2 a2;
    std::vector<Vec2> sites;
};

namespace detail {

// cos(pi/2) is 6e-17 in floating point; snapping keeps an oblique lattice with
// a right angle bit-identical to the rectangular one.
inline double snap_unit(double v) {
    if (std::abs(v) < 1e-12) return 0.0;
    if (std::abs(std::abs(v) - 1.0) < 1e-12) return std::copysign(1.0, v);
    return v;
}

}  // namespace detail

inline LatticeBasis lattice_basis(const LatticeKind& kind) {
    kind.validate();
    const double a = kind.a;
    const double b = kind.b;
    const double r3 = std::numbers::sqrt3;
    switch (kind.type) {
        case LatticeType::Square: return {{a, 0.0}, {0.0, a}, {{0.0, 0.0}}};
        case LatticeType::Rectangular: return {{a, 0.0}, {0.0, b}, {{0.0, 0.0}}};
        case LatticeType::RectangularCentered: return {{a, 0.0}, {0.0, b}, {{0.0, 0.0}, {0.5 * a, 0.5 * b}}};
        case LatticeType::Hexagonal: return {{a, 0.0}, {0.5 * a, 0.5 * r3 * a}, {{0.0, 0.0}}};
        case LatticeType::Oblique:
            return {{a, 0.0},
                    {b * detail::snap_unit(std::cos(kind.theta)), b * detail::snap_unit(std::sin(kind.theta))},
                    {{0.0, 0.0}}};
        case LatticeType::Honeycomb: return {{r3 * a, 0.0}, {0.5 * r3 * a, 1.5 * a}, {{0.0, 0.0}, {0.0, a}}};
    }
    return {};
}

/// Nearest-neighbour spacing scale used for tolerances.
inline double characteristic_length(const LatticeKind& kind) {
    return kind.uses_b() ? std::min(kind.a, kind.b) : kind.a;
}

struct LatticeNode {
    Vec2 position;
    long i = 0;
    long j = 0;
    std::size_t site = 0;
};

/// All nodes inside `region`, ordered by (row j, column i, site).
inline std::vector<LatticeNode> generate_nodes(const LatticeKind& kind, const BBox& region) {
    if (region.degenerate()) throw ConfigError("lattice region is degenerate");
    const LatticeBasis basis = lattice_basis(kind);
    const double det = cross(basis.a1, basis.a2);
    auto to_cell = [&](Vec2 p) {
        return Vec2{cross(p, basis.a2) / det, cross(basis.a1, p) / det};
    };

    double i_lo = 1e300, i_hi = -1e300, j_lo = 1e300, j_hi = -1e300;
    for (const Vec2& site : basis.sites) {
        for (Vec2 corner : {Vec2{region.x_min, region.y_min}, Vec2{region.x_max, region.y_min},
                            Vec2{region.x_min, region.y_max}, Vec2{region.x_max, region.y_max}}) {
            const Vec2 q = to_cell(corner - site);
            i_lo = std::min(i_lo, q.x);
            i_hi = std::max(i_hi, q.x);
            j_lo = std::min(j_lo, q.y);
            j_hi = std::max(j_hi, q.y);
        }
    }
    const double eps = 1e-9 * characteristic_length(kind);
    std::vector<LatticeNode> nodes;
    for (long j = static_cast<long>(std::floor(j_lo)) - 1; j <= static_cast<long>(std::ceil(j_hi)) + 1; ++j) {
        for (long i = static_cast<long>(std::floor(i_lo)) - 1; i <= static_cast<long>(std::ceil(i_hi)) + 1; ++i) {
            for (std::size_t s = 0; s < basis.sites.size(); ++s) {
                const Vec2 p = static_cast<double>(i) * basis.a1 + static_cast<double>(j) * basis.a2 + basis.sites[s];
                if (region.contains(p, eps)) nodes.push_back({p, i, j, s});
            }
        }
    }
    return nodes;
}

inline std::vector<Vec2> generate_lattice(const LatticeKind& kind, const BBox& region) {
    std::vector<Vec2> out;
    for (const LatticeNode& n : generate_nodes(kind, region)) out.push_back(n.position);
    return out;
}

/// Index of the motif site `p` belongs to, for a lattice anchored at the origin.
inline std::size_t sublattice_of(const LatticeKind& kind, Vec2 p) {
    const LatticeBasis basis = lattice_basis(kind);
    const double det = cross(basis.a1, basis.a2);
    for (std::size_t s = 0; s < basis.sites.size(); ++s) {
        const Vec2 d = p - basis.sites[s];
        const double qi = cross(d, basis.a2) / det;
        const double qj = cross(basis.a1, d) / det;
        if (std::abs(qi - std::round(qi)) < 1e-6 && std::abs(qj - std::round(qj)) < 1e-6) return s;
    }
    throw ConfigError("point is not a node of the lattice");
}

}  // namespace swarmlat
