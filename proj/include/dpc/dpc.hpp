#pragma once

// Umbrella header for the density-peaks clustering library.

#include "dpc/approx_dpc.hpp"
#include "dpc/core.hpp"
#include "dpc/ex_dpc.hpp"
#include "dpc/generate.hpp"
#include "dpc/grid.hpp"
#include "dpc/io.hpp"
#include "dpc/kd_tree.hpp"
#include "dpc/labeling.hpp"
#include "dpc/s_approx_dpc.hpp"
#include "dpc/scan_dpc.hpp"
#include "dpc/scheduler.hpp"
