#pragma once

// Umbrella header for the whole library.

#include "meshforge/cli.hpp"
#include "meshforge/csg.hpp"
#include "meshforge/deform.hpp"
#include "meshforge/error.hpp"
#include "meshforge/match.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/model_io.hpp"
#include "meshforge/primitives.hpp"
#include "meshforge/scene.hpp"
#include "meshforge/topology.hpp"
#include "meshforge/vec3.hpp"
#include "meshforge/voxel.hpp"
