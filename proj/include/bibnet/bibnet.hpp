#pragma once

// Umbrella header: the whole library in one include.

#include "bibnet/common.hpp"
#include "bibnet/graph.hpp"
#include "bibnet/io.hpp"
#include "bibnet/records.hpp"
#include "bibnet/anf.hpp"
#include "bibnet/measures.hpp"
#include "bibnet/sampling.hpp"
#include "bibnet/stats.hpp"
#include "bibnet/mds.hpp"
#include "bibnet/report.hpp"
#include "bibnet/pipeline.hpp"
