#pragma once

#include "fgopt/bregman.hpp"
#include "fgopt/game.hpp"
#include "fgopt/learners.hpp"
#include "fgopt/losses.hpp"
#include "fgopt/momentum.hpp"
#include "fgopt/networks.hpp"
#include "fgopt/objective.hpp"
#include "fgopt/projection_free.hpp"
#include "fgopt/prox.hpp"
#include "fgopt/rng.hpp"
#include "fgopt/saddle.hpp"
#include "fgopt/sets.hpp"
#include "fgopt/spectrahedron.hpp"
#include "fgopt/trace.hpp"
#include "fgopt/types.hpp"
#include "fgopt/weights.hpp"
