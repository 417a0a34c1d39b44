// Umbrella header for the library and pipeline.
#pragma once

#include "recip/activity_metrics.hpp"
#include "recip/flow_matrix.hpp"
#include "recip/graph_core.hpp"
#include "recip/planted_network.hpp"
#include "recip/reciprocity_map.hpp"
#include "recip/stats_tests.hpp"
#include "recip/text.hpp"
#include "recip/types.hpp"
#include "recip/vocab_extract.hpp"

#include "recip/io/edges.hpp"
#include "recip/io/profiles.hpp"
#include "recip/io/tables.hpp"
#include "recip/io/timeline.hpp"
#include "recip/io/tsv.hpp"

#include "recip/pipeline/checksum.hpp"
#include "recip/pipeline/config.hpp"
#include "recip/pipeline/report.hpp"
#include "recip/pipeline/stages.hpp"
#include "recip/pipeline/synth.hpp"
