#pragma once

#include "accretive/matcore.hpp"
#include "accretive/numrange.hpp"
#include "accretive/matrix_function.hpp"
#include "accretive/powers.hpp"
#include "accretive/cones.hpp"
#include "accretive/funcalc.hpp"
#include "accretive/support.hpp"
#include "accretive/random.hpp"
#include "accretive/report.hpp"
#include "accretive/rcp.hpp"
#include "accretive/json_io.hpp"
#include "accretive/verify.hpp"
