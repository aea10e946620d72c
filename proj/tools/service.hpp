#pragma once

#include <httplib.h>

#include "mmsearch.h"

namespace mmsearch_tools {

// Wires the query endpoint onto an httplib server:
//   GET  /health           engine status, doc count, snapshot digest
//   POST /search           JSON body: {"query": ..., "filters": ..., ...}
//   GET  /search?q=...     query-string form of the same request
// Handlers call the C API only; errors come back as structured JSON with a
// 4xx status and the mms status name as the error code.
void attach_routes(httplib::Server& server, mms_engine* engine);

}  // namespace mmsearch_tools
