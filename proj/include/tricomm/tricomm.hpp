#pragma once

// Everything except the HTTP binding (tricomm/http_api.hpp), which pulls in cpp-httplib.

#include "tricomm/attributed.hpp"
#include "tricomm/benchgen.hpp"
#include "tricomm/detection.hpp"
#include "tricomm/graph.hpp"
#include "tricomm/metrics.hpp"
#include "tricomm/partition.hpp"
#include "tricomm/random.hpp"
#include "tricomm/session.hpp"
#include "tricomm/stats.hpp"
#include "tricomm/triangles.hpp"
