#pragma once

#include <exception>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tricomm/session.hpp"

namespace tricomm {

namespace detail {

inline void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, {{"error", message}});
}

/// Runs a handler body, mapping library exceptions onto HTTP statuses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const StateConflict& e) {
    reply_error(res, 409, e.what());
  } catch (const TimeBudgetExceeded& e) {
    reply_error(res, 503, e.what());
  } catch (const nlohmann::json::exception& e) {
    reply_error(res, 400, e.what());
  } catch (const std::invalid_argument& e) {
    reply_error(res, 400, e.what());
  } catch (const std::out_of_range& e) {
    reply_error(res, 404, e.what());
  } catch (const std::exception& e) {
    reply_error(res, 500, e.what());
  }
}

inline nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  auto j = nlohmann::json::parse(req.body);
  if (!j.is_object()) throw std::invalid_argument("request body must be a JSON object");
  return j;
}

inline DetectionConfig detection_config_from_json(const nlohmann::json& j) {
  DetectionConfig cfg;
  if (j.contains("omega")) {
    if (!j.at("omega").is_number()) throw std::invalid_argument("omega must be a number");
    cfg.omega = j.at("omega").get<double>();
  }
  if (j.contains("sort_choice")) {
    if (!j.at("sort_choice").is_string()) throw std::invalid_argument("sort_choice must be a string");
    cfg.sort_choice = parse_sort_choice(j.at("sort_choice").get<std::string>());
  }
  if (j.contains("scan")) {
    if (!j.at("scan").is_string()) throw std::invalid_argument("scan must be a string");
    cfg.scan = parse_adjacency_scan(j.at("scan").get<std::string>());
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw std::invalid_argument("seed must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.validate();
  return cfg;
}

inline nlohmann::json community_list(const SessionSnapshot& snap) {
  auto list = nlohmann::json::array();
  for (const auto& c : summarize(*snap.detection))
    list.push_back({{"id", c.id}, {"size", c.size}, {"iw", c.iw}, {"wd", c.wd}});
  return list;
}

inline nlohmann::json detection_to_json(const SessionSnapshot& snap) {
  auto nodes = nlohmann::json::array();
  for (const auto& n : snap.view->nodes) nodes.push_back(n.id);
  return {{"config",
           {{"omega", snap.config.omega},
            {"sort_choice", std::string(to_string(snap.config.sort_choice))},
            {"scan", std::string(to_string(snap.config.scan))},
            {"seed", snap.config.seed}}},
          {"nodes", std::move(nodes)},
          {"partition", partition_to_json(snap.detection->partition)},
          {"metrics", report_to_json(snap.report)},
          {"communities", community_list(snap)}};
}

}  // namespace detail

/**
 * Routes backing the explorer UI:
 *   POST /load                    attributed-graph JSON body
 *   GET  /graph                   current filtered graph, attributed-graph JSON
 *   POST /filter                  {min_degree, edge_type, themes, medias, date_from, date_to}
 *   POST /detect                  {omega, sort_choice, seed, scan}
 *   GET  /communities             size, iw, wd per community
 *   GET  /communities/{id}/stats  ?theme=&media=
 */
inline void register_routes(httplib::Server& server, Session& session) {
  using detail::guarded;
  using detail::reply;

  server.Post("/load", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      session.load(dataset_from_json(nlohmann::json::parse(req.body)));
      reply(res, 200, view_summary(*session.snapshot()->view));
    });
  });

  server.Get("/graph", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, view_to_json(*session.require_loaded()->view)); });
  });

  server.Post("/filter", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, session.filter(filter_request_from_json(detail::parse_body(req)))); });
  });

  server.Post("/detect", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto cfg = detail::detection_config_from_json(detail::parse_body(req));
      reply(res, 200, detail::detection_to_json(*session.detect(cfg)));
    });
  });

  server.Get("/communities", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      auto snap = session.require_loaded();
      if (!snap->detection) throw StateConflict("no detection has been run on the current graph");
      reply(res, 200, {{"k", snap->detection->partition.community_count()},
                       {"communities", detail::community_list(*snap)}});
    });
  });

  server.Get(R"(/communities/(\d+)/stats)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto snap = session.require_loaded();
      if (!snap->detection) throw StateConflict("no detection has been run on the current graph");
      const auto id = std::stoull(req.matches[1].str());
      const auto& p = snap->detection->partition;
      if (id >= p.community_count()) {
        detail::reply_error(res, 404, "unknown community " + req.matches[1].str());
        return;
      }
      Selection sel;
      if (req.has_param("theme") && !req.get_param_value("theme").empty()) sel.theme = req.get_param_value("theme");
      if (req.has_param("media") && !req.get_param_value("media").empty()) sel.media = req.get_param_value("media");
      const auto stats = community_stats(p, snap->view->records, static_cast<CommunityId>(id), sel);
      const auto& nodes = snap->view->nodes;
      reply(res, 200, stats_to_json(stats, [&](NodeId n) { return nodes[n].id; }));
    });
  });
}

}  // namespace tricomm
