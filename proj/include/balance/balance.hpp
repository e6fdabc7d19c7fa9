#pragma once

#include "balance/errors.hpp"
#include "balance/ingest.hpp"
#include "balance/report.hpp"
#include "balance/signed_graph.hpp"
#include "balance/stats.hpp"
#include "balance/surrogates.hpp"
#include "balance/transitions.hpp"
#include "balance/triad_census.hpp"
