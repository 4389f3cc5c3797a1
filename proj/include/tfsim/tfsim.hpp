#pragma once

#include "tfsim/arrivals.hpp"
#include "tfsim/baselines.hpp"
#include "tfsim/buffer_layout.hpp"
#include "tfsim/calibrate.hpp"
#include "tfsim/config.hpp"
#include "tfsim/core.hpp"
#include "tfsim/cost_model.hpp"
#include "tfsim/error.hpp"
#include "tfsim/fusion_engine.hpp"
#include "tfsim/metrics.hpp"
#include "tfsim/random.hpp"
#include "tfsim/scenario.hpp"
#include "tfsim/shuffle.hpp"
#include "tfsim/suite.hpp"
#include "tfsim/trace.hpp"
#include "tfsim/workload.hpp"
