#include "service.hpp"

#include <string>

#include <nlohmann/json.hpp>

namespace mmsearch_tools {

using nlohmann::json;

namespace {

int http_status_for(mms_status status) {
  switch (status) {
    case MMS_OK:
      return 200;
    case MMS_ERR_IO:
    case MMS_ERR_INTERNAL:
      return 500;
    case MMS_ERR_SNAPSHOT_NOT_LOADED:
      return 503;
    default:
      return 400;
  }
}

void reply_error(httplib::Response& res, mms_status status, const std::string& message) {
  json body;
  body["error"] = {{"code", mms_status_name(status)}, {"message", message}};
  res.status = http_status_for(status);
  res.set_content(body.dump(), "application/json");
}

void run_search(mms_engine* engine, const std::string& request_json, httplib::Response& res) {
  char* response = nullptr;
  mms_status status = mms_engine_search(engine, request_json.c_str(), &response);
  if (status != MMS_OK) {
    reply_error(res, status, mms_last_error());
    return;
  }
  res.status = 200;
  res.set_content(response, "application/json");
  mms_string_free(response);
}

}  // namespace

void attach_routes(httplib::Server& server, mms_engine* engine) {
  server.Get("/health", [engine](const httplib::Request&, httplib::Response& res) {
    char* health = nullptr;
    mms_status status = mms_engine_health(engine, &health);
    if (status != MMS_OK) {
      reply_error(res, status, mms_last_error());
      return;
    }
    res.status = 200;
    res.set_content(health, "application/json");
    mms_string_free(health);
  });

  server.Post("/search", [engine](const httplib::Request& req, httplib::Response& res) {
    run_search(engine, req.body, res);
  });

  server.Get("/search", [engine](const httplib::Request& req, httplib::Response& res) {
    json body;
    body["query"] = req.get_param_value("q");
    json filters = json::object();
    for (const char* key : {"language", "region", "behavior", "license"}) {
      if (req.has_param(key)) filters[key] = req.get_param_value(key);
    }
    if (!filters.empty()) body["filters"] = filters;
    if (req.has_param("page")) body["page"] = std::stoul(req.get_param_value("page"));
    if (req.has_param("page_size")) body["page_size"] = std::stoul(req.get_param_value("page_size"));
    if (req.has_param("explain")) body["explain"] = req.get_param_value("explain") == "true";
    if (req.has_param("timings")) body["timings"] = req.get_param_value("timings") == "true";
    run_search(engine, body.dump(), res);
  });
}

}  // namespace mmsearch_tools
