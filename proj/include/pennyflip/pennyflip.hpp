#pragma once

#include "pennyflip/core.hpp"
#include "pennyflip/gamesim.hpp"
#include "pennyflip/nash.hpp"
#include "pennyflip/qalg.hpp"
#include "pennyflip/solver.hpp"
#include "pennyflip/specio.hpp"
