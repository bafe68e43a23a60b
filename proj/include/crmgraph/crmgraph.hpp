#pragma once

// Umbrella header for the crmgraph library.

#include "crmgraph/config.hpp"
#include "crmgraph/csv.hpp"
#include "crmgraph/eda.hpp"
#include "crmgraph/error.hpp"
#include "crmgraph/evaluation.hpp"
#include "crmgraph/experiment.hpp"
#include "crmgraph/gcn.hpp"
#include "crmgraph/metrics.hpp"
#include "crmgraph/mlp.hpp"
#include "crmgraph/one_hot.hpp"
#include "crmgraph/projection.hpp"
#include "crmgraph/property_graph.hpp"
#include "crmgraph/random_forest.hpp"
#include "crmgraph/record.hpp"
#include "crmgraph/rng.hpp"
