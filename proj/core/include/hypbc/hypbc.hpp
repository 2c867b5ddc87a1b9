#pragma once

#include "hypbc/apps.hpp"
#include "hypbc/congruence.hpp"
#include "hypbc/elliptic.hpp"
#include "hypbc/error.hpp"
#include "hypbc/grid.hpp"
#include "hypbc/linalg.hpp"
#include "hypbc/modes.hpp"
#include "hypbc/operators.hpp"
#include "hypbc/solver.hpp"
