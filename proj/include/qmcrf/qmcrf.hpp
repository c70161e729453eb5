#pragma once

// Umbrella header for the qmcrf library: randomized quasi-Monte Carlo
// random features for shift-invariant kernel approximation and kernel ridge
// regression, with the benchmark harness used by the CLI.

#include "qmcrf/discrepancy.hpp"
#include "qmcrf/errors.hpp"
#include "qmcrf/experiment.hpp"
#include "qmcrf/feature_map.hpp"
#include "qmcrf/halton.hpp"
#include "qmcrf/kernels.hpp"
#include "qmcrf/krr.hpp"
#include "qmcrf/net_check.hpp"
#include "qmcrf/point_set.hpp"
#include "qmcrf/quantile.hpp"
#include "qmcrf/report.hpp"
#include "qmcrf/rng.hpp"
#include "qmcrf/scramble.hpp"
#include "qmcrf/sobol.hpp"
#include "qmcrf/targets.hpp"
#include "qmcrf/version.hpp"
