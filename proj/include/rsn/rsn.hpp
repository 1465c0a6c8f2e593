#pragma once

#include "rsn/geometry.hpp"
#include "rsn/specfun.hpp"
#include "rsn/analytic.hpp"
#include "rsn/cell_grid.hpp"
#include "rsn/rgg.hpp"
#include "rsn/coverage.hpp"
#include "rsn/protocol.hpp"
#include "rsn/harness.hpp"
