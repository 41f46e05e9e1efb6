#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "swarmlat/geometry.hpp"

namespace swarmlat {

enum class Role : std::uint8_t { Leader, Follower, Frame, Fictitious };

inline std::string_view to_string(Role r) {
    switch (r) {
        case Role::Leader: return "leader";
        case Role::Follower: return "follower";
        case Role::Frame: return "frame";
        case Role::Fictitious: return "fictitious";
    }
    return "?";
}

inline Role role_from_string(std::string_view s) {
    for (Role r : {Role::Leader, Role::Follower, Role::Frame, Role::Fictitious}) {
        if (to_string(r) == s) return r;
    }
    throw ConfigError("unknown role '" + std::string(s) + "'");
}

struct Particle {
    ParticleId id = 0;
    Role role = Role::Follower;
    Vec2 position;
    Vec2 initial_position;
};

}  // namespace swarmlat
