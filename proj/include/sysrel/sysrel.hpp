#pragma once

// Umbrella header.

#include "sysrel/common.hpp"
#include "sysrel/error_analysis.hpp"
#include "sysrel/grid.hpp"
#include "sysrel/io.hpp"
#include "sysrel/model.hpp"
#include "sysrel/numeric.hpp"
#include "sysrel/orders.hpp"
#include "sysrel/rng.hpp"
#include "sysrel/simulate.hpp"
#include "sysrel/subset_rates.hpp"
#include "sysrel/system.hpp"
