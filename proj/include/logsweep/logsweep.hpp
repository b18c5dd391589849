#pragma once

#include "logsweep/cadlag_path.hpp"
#include "logsweep/core/errors.hpp"
#include "logsweep/core/numeric.hpp"
#include "logsweep/core/rng.hpp"
#include "logsweep/gw_branching.hpp"
#include "logsweep/harness/config.hpp"
#include "logsweep/harness/experiment.hpp"
#include "logsweep/harness/json_io.hpp"
#include "logsweep/harness/parallel.hpp"
#include "logsweep/harness/presets.hpp"
#include "logsweep/harness/stats.hpp"
#include "logsweep/m1_metric.hpp"
#include "logsweep/model_params.hpp"
#include "logsweep/moran.hpp"
#include "logsweep/multi_moran.hpp"
#include "logsweep/pit.hpp"
#include "logsweep/scaling_house.hpp"
#include "logsweep/sweep_io.hpp"
#include "logsweep/time_change.hpp"
#include "logsweep/walk_lab.hpp"
#include "logsweep/walk_probs.hpp"
