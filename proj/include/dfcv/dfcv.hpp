#pragma once

// Umbrella header.

#include "dfcv/dual.hpp"
#include "dfcv/errors.hpp"
#include "dfcv/expr.hpp"
#include "dfcv/fraccalc.hpp"
#include "dfcv/golden_section.hpp"
#include "dfcv/grid.hpp"
#include "dfcv/identities.hpp"
#include "dfcv/lagrangian.hpp"
#include "dfcv/linalg.hpp"
#include "dfcv/nelder_mead.hpp"
#include "dfcv/solver.hpp"
#include "dfcv/special.hpp"
#include "dfcv/variational.hpp"
