#pragma once

#include "swarmlat/geometry.hpp"
#include "swarmlat/lattice.hpp"
#include "swarmlat/body.hpp"
#include "swarmlat/neighbors.hpp"
#include "swarmlat/particle.hpp"
#include "swarmlat/selector.hpp"
#include "swarmlat/rules.hpp"
#include "swarmlat/stepper.hpp"
#include "swarmlat/trajectory.hpp"
#include "swarmlat/diagnostics.hpp"
#include "swarmlat/scenario.hpp"
#include "swarmlat/presets.hpp"
#include "swarmlat/csv.hpp"
#include "swarmlat/svg.hpp"
#include "swarmlat/commands.hpp"
