#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tricomm/attributed.hpp"
#include "tricomm/detection.hpp"
#include "tricomm/graph.hpp"
#include "tricomm/metrics.hpp"
#include "tricomm/stats.hpp"

namespace tricomm {

/// Everything the filter panel can set. Applied as records -> edge type -> degree.
struct FilterRequest {
  std::size_t min_degree = 0;
  std::optional<EdgeType> edge_type;
  RecordFilter records;
};

inline FilterRequest filter_request_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("filter body must be a JSON object");
  FilterRequest f;
  if (j.contains("min_degree") && !j.at("min_degree").is_null()) {
    const auto& v = j.at("min_degree");
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw std::invalid_argument("min_degree must be a non-negative integer");
    f.min_degree = v.get<std::size_t>();
  }
  if (j.contains("edge_type") && !j.at("edge_type").is_null()) {
    if (!j.at("edge_type").is_string()) throw std::invalid_argument("edge_type must be a string");
    f.edge_type = parse_edge_type(j.at("edge_type").get<std::string>());
  }
  auto string_set = [&](const char* key) -> std::optional<std::set<std::string>> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const auto& v = j.at(key);
    if (!v.is_array()) throw std::invalid_argument(std::string(key) + " must be an array of strings");
    std::set<std::string> out;
    for (const auto& item : v) {
      if (!item.is_string()) throw std::invalid_argument(std::string(key) + " must be an array of strings");
      out.insert(item.get<std::string>());
    }
    return out;
  };
  f.records.themes = string_set("themes");
  f.records.medias = string_set("medias");
  auto date = [&](const char* key) -> std::optional<Date> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_string()) throw std::invalid_argument(std::string(key) + " must be an ISO-8601 date");
    return Date::parse(j.at(key).get<std::string>());
  };
  f.records.date_from = date("date_from");
  f.records.date_to = date("date_to");
  return f;
}

inline nlohmann::json filter_request_to_json(const FilterRequest& f) {
  auto opt_set = [](const std::optional<std::set<std::string>>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
  };
  auto opt_date = [](const std::optional<Date>& d) { return d ? nlohmann::json(d->str()) : nlohmann::json(nullptr); };
  return {{"min_degree", f.min_degree},
          {"edge_type", f.edge_type ? nlohmann::json(std::string(to_string(*f.edge_type))) : nlohmann::json(nullptr)},
          {"themes", opt_set(f.records.themes)},
          {"medias", opt_set(f.records.medias)},
          {"date_from", opt_date(f.records.date_from)},
          {"date_to", opt_date(f.records.date_to)}};
}

/// A dataset seen through a filter. Graph ids are dense over the surviving
/// nodes; labels are the dataset ids.
struct FilteredView {
  WeightedGraph graph;
  std::vector<NodeId> dataset_node;   // graph id -> dataset node index
  std::vector<NodeAttributes> nodes;  // per graph id
  std::vector<AttributedEdge> edges;  // endpoints in graph ids
  std::vector<TweetRecord> records;   // authors in graph ids
};

inline FilteredView apply_filters(const AttributedDataset& ds, const FilterRequest& f) {
  auto kept_records = filter_records(ds.records, f.records);
  auto by_degree = filter_by_degree_mapped(select_edges(ds, f.edge_type), f.min_degree);

  FilteredView view;
  view.graph = std::move(by_degree.graph);
  view.dataset_node = std::move(by_degree.original);
  constexpr auto gone = static_cast<NodeId>(-1);
  std::vector<NodeId> to_view(ds.nodes.size(), gone);
  for (NodeId i = 0; i < view.dataset_node.size(); ++i) {
    to_view[view.dataset_node[i]] = i;
    view.nodes.push_back(ds.nodes[view.dataset_node[i]]);
  }
  for (const auto& e : ds.edges) {
    if (f.edge_type && e.type != *f.edge_type) continue;
    if (to_view[e.source] == gone || to_view[e.target] == gone) continue;
    view.edges.push_back({to_view[e.source], to_view[e.target], e.type, e.weight});
  }
  std::vector<std::optional<std::size_t>> record_index(kept_records.size());
  for (std::size_t i = 0; i < kept_records.size(); ++i) {
    const auto& r = kept_records[i];
    if (to_view[r.author] == gone) continue;
    record_index[i] = view.records.size();
    view.records.push_back(r);
    view.records.back().author = to_view[r.author];
  }
  for (auto& r : view.records) {
    if (r.retweet_of) r.retweet_of = record_index[*r.retweet_of];
  }
  if (!ds.records.empty()) {
    for (auto& n : view.nodes) n.tweet_count = 0;
    for (const auto& r : view.records) ++view.nodes[r.author].tweet_count;
  }
  return view;
}

/// The view in the attributed-graph format.
inline nlohmann::json view_to_json(const FilteredView& v) {
  AttributedDataset ds{v.nodes, v.edges, v.records};
  return dataset_to_json(ds);
}

inline nlohmann::json view_summary(const FilteredView& v) {
  return {{"nodes", v.graph.node_count()},
          {"edges", v.graph.edge_count()},
          {"total_weight", v.graph.total_weight()},
          {"records", v.records.size()}};
}

/// 409-class conditions: the request needs state that does not exist yet.
class StateConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SessionSnapshot {
  std::shared_ptr<const AttributedDataset> dataset;
  FilterRequest filter;
  std::shared_ptr<const FilteredView> view;
  std::shared_ptr<const DetectionResult> detection;  // null until detect runs on this view
  DetectionConfig config;
  MetricsReport report;
};

/**
 * One loaded dataset with its current filter and detection.
 *
 * State is published as immutable snapshots. Mutations (load, filter, detect)
 * are serialized by a writer mutex and swap in a new snapshot when done, so
 * readers keep seeing the previous state during a long detection.
 */
class Session {
 public:
  explicit Session(std::chrono::milliseconds detect_budget = std::chrono::seconds(120))
      : detect_budget_(detect_budget) {}

  void load(AttributedDataset ds) {
    std::lock_guard writer(writer_);
    auto snap = std::make_shared<SessionSnapshot>();
    snap->dataset = std::make_shared<const AttributedDataset>(std::move(ds));
    snap->view = std::make_shared<const FilteredView>(apply_filters(*snap->dataset, snap->filter));
    publish(std::move(snap));
  }

  /// Null before anything is loaded.
  std::shared_ptr<const SessionSnapshot> snapshot() const {
    std::shared_lock lock(state_mutex_);
    return current_;
  }

  /// Re-filters the loaded dataset; drops any previous detection.
  nlohmann::json filter(const FilterRequest& f) {
    std::lock_guard writer(writer_);
    auto base = require_loaded();
    auto snap = std::make_shared<SessionSnapshot>();
    snap->dataset = base->dataset;
    snap->filter = f;
    snap->view = std::make_shared<const FilteredView>(apply_filters(*snap->dataset, f));
    auto summary = view_summary(*snap->view);
    summary["filter"] = filter_request_to_json(f);
    publish(std::move(snap));
    return summary;
  }

  /// Runs detection on the current view within the time budget.
  std::shared_ptr<const SessionSnapshot> detect(const DetectionConfig& cfg) {
    cfg.validate();
    std::lock_guard writer(writer_);
    auto base = require_loaded();
    const auto started = std::chrono::steady_clock::now();
    DetectOptions opts;
    opts.deadline = started + detect_budget_;
    auto result = std::make_shared<const DetectionResult>(detect_full(base->view->graph, cfg, opts));
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

    auto snap = std::make_shared<SessionSnapshot>(*base);
    snap->detection = result;
    snap->config = cfg;
    snap->report = make_report(&base->view->graph, result->partition, nullptr, elapsed.count());
    publish(snap);
    return snap;
  }

  std::shared_ptr<const SessionSnapshot> require_loaded() const {
    auto snap = snapshot();
    if (!snap) throw StateConflict("no graph is loaded");
    return snap;
  }

 private:
  void publish(std::shared_ptr<const SessionSnapshot> snap) {
    std::unique_lock lock(state_mutex_);
    current_ = std::move(snap);
  }

  std::chrono::milliseconds detect_budget_;
  std::mutex writer_;
  mutable std::shared_mutex state_mutex_;
  std::shared_ptr<const SessionSnapshot> current_;
};

}  // namespace tricomm
