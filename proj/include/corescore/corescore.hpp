#pragma once

#include "corescore/baselines.hpp"
#include "corescore/centrality.hpp"
#include "corescore/core_score.hpp"
#include "corescore/graph.hpp"
#include "corescore/ingest.hpp"
#include "corescore/synth.hpp"
#include "corescore/version.hpp"
