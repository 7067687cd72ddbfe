#pragma once

#include "ftle/engine.hpp"
#include "ftle/errors.hpp"
#include "ftle/face_index.hpp"
#include "ftle/flows.hpp"
#include "ftle/ftle_kernel.hpp"
#include "ftle/mesh.hpp"
#include "ftle/mesh_io.hpp"
#include "ftle/partition.hpp"
#include "ftle/schedule_sim.hpp"
