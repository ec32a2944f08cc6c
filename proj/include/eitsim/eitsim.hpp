#pragma once

#include "eitsim/checks.hpp"
#include "eitsim/config.hpp"
#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/gauss_hermite.hpp"
#include "eitsim/lineshape.hpp"
#include "eitsim/motion.hpp"
#include "eitsim/multilevel.hpp"
#include "eitsim/optics.hpp"
#include "eitsim/presets.hpp"
#include "eitsim/runner.hpp"
#include "eitsim/steady.hpp"
#include "eitsim/svg.hpp"
#include "eitsim/timedomain.hpp"
#include "eitsim/types.hpp"
#include "eitsim/units.hpp"
