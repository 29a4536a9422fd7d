// Command-line front end: generate | detect | triangles | metrics | stats | serve

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tricomm/http_api.hpp"
#include "tricomm/tricomm.hpp"

using namespace tricomm;
using nlohmann::json;

namespace {

/// Failure reported as a one-line JSON object on stderr.
struct CliError : std::runtime_error {
  CliError(std::string kind, const std::string& what) : std::runtime_error(what), kind(std::move(kind)) {}
  std::string kind;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("io", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
  if (!path || *path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw CliError("io", "cannot write '" + *path + "'");
  out << content;
}

bool is_json_path(const std::string& p) { return p.size() >= 5 && p.compare(p.size() - 5, 5, ".json") == 0; }

struct InputOptions {
  std::string input;
  std::string format = "edgelist";
  std::optional<std::string> ground_truth;
  std::size_t min_degree = 0;
  std::optional<std::string> edge_type;
};

void add_input_options(CLI::App* cmd, InputOptions& o, bool with_truth = true) {
  cmd->add_option("--input", o.input, "graph file")->required();
  cmd->add_option("--format", o.format, "edgelist, json or lfr")
      ->check(CLI::IsMember({"edgelist", "json", "lfr"}));
  if (with_truth)
    cmd->add_option("--ground-truth", o.ground_truth, "reference partition (community file for lfr)");
  cmd->add_option("--min-degree", o.min_degree, "keep components with a node of at least this degree");
  cmd->add_option("--edge-type", o.edge_type, "retweet or mention (json input)")
      ->check(CLI::IsMember({"retweet", "mention"}));
}

struct LoadedGraph {
  WeightedGraph graph;
  std::optional<Partition> truth;
};

Partition restrict_partition(const Partition& p, const std::vector<NodeId>& kept) {
  std::vector<CommunityId> labels;
  labels.reserve(kept.size());
  for (auto n : kept) labels.push_back(p[n]);
  return Partition::from_labels(labels);
}

Partition read_partition_file(const std::string& path, const WeightedGraph* g) {
  const auto text = read_file(path);
  return is_json_path(path) ? partition_from_json(json::parse(text)) : read_partition_text(text, g);
}

LoadedGraph load_graph(const InputOptions& o) {
  LoadedGraph out;
  if (o.format == "json") {
    FilterRequest f;
    f.min_degree = o.min_degree;
    if (o.edge_type) f.edge_type = parse_edge_type(*o.edge_type);
    out.graph = apply_filters(dataset_from_json(json::parse(read_file(o.input))), f).graph;
    if (o.ground_truth) out.truth = read_partition_file(*o.ground_truth, &out.graph);
    return out;
  }
  WeightedGraph full;
  std::optional<Partition> truth;
  if (o.format == "lfr") {
    if (!o.ground_truth) throw CliError("usage", "--format lfr needs the community file as --ground-truth");
    auto lfr = read_lfr(read_file(o.input), read_file(*o.ground_truth));
    full = std::move(lfr.graph);
    truth = std::move(lfr.ground_truth);
  } else {
    full = load_edge_list(read_file(o.input));
    if (o.ground_truth) truth = read_partition_file(*o.ground_truth, &full);
  }
  if (truth && truth->node_count() != full.node_count())
    throw CliError("validation", "ground truth does not cover the graph");
  if (o.min_degree > 0) {
    auto filtered = filter_by_degree_mapped(full, o.min_degree);
    if (truth) truth = restrict_partition(*truth, filtered.original);
    out.graph = std::move(filtered.graph);
  } else {
    out.graph = std::move(full);
  }
  out.truth = std::move(truth);
  return out;
}

std::string partition_text(const Partition& p, const WeightedGraph& g, bool as_json) {
  if (as_json) return partition_to_json(p).dump() + "\n";
  std::ostringstream out;
  write_partition_text(out, p, &g);
  return out.str();
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", message}, {"kind", kind}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangle-seeded community detection for weighted graphs"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a planted-partition instance");
  std::optional<std::string> gen_spec_path, gen_preset, gen_truth_out;
  std::string gen_out;
  double gen_mu_t = 0.1, gen_mu_w = -1.0, gen_avg_degree = 20.0;
  std::size_t gen_k = 25, gen_size = 40;
  std::uint64_t gen_seed = 1;
  gen->add_option("--spec", gen_spec_path, "GenSpec JSON file");
  gen->add_option("--preset", gen_preset, "recovery, small or large")
      ->check(CLI::IsMember({"recovery", "small", "large"}));
  gen->add_option("--communities", gen_k, "community count (equal sizes)");
  gen->add_option("--community-size", gen_size, "nodes per community");
  gen->add_option("--avg-degree", gen_avg_degree, "mean degree");
  gen->add_option("--mu-t", gen_mu_t, "topological mixing");
  gen->add_option("--mu-w", gen_mu_w, "weight mixing (defaults to mu-t)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--output", gen_out, "edge-list output")->required();
  gen->add_option("--truth-output", gen_truth_out, "community file output (default: <output>.communities)");

  // detect
  auto* det = app.add_subcommand("detect", "run community detection");
  InputOptions det_in;
  add_input_options(det, det_in);
  double omega = 0.1;
  std::string sort = "iw", rule = "trace", scan = "snapshot";
  std::uint64_t seed = 0;
  std::optional<std::string> det_out, det_report;
  det->add_option("--omega", omega, "Ω in [0, 0.5]");
  det->add_option("--sort", sort, "initial order: random, wd or iw")->check(CLI::IsMember({"random", "wd", "iw"}));
  det->add_option("--seed", seed, "seed for --sort random");
  det->add_option("--external-rule", rule, "trace (WD-2IW-INW) or literal (WD-IW-INW)")
      ->check(CLI::IsMember({"trace", "literal"}));
  det->add_option("--scan", scan, "adjacency scan per turn: snapshot or rescan")
      ->check(CLI::IsMember({"snapshot", "rescan"}));
  det->add_option("--output", det_out, "partition file (.json for JSON, text otherwise)");
  det->add_option("--report", det_report, "metrics report (default stdout)");

  // triangles
  auto* tri = app.add_subcommand("triangles", "enumerate triangles and pack them");
  InputOptions tri_in;
  add_input_options(tri, tri_in, false);
  std::string mode = "eval";
  bool tri_all = false;
  std::optional<std::string> tri_out;
  tri->add_option("--mode", mode, "eval, weight or exact")->check(CLI::IsMember({"eval", "weight", "exact"}));
  tri->add_flag("--all", tri_all, "also list every triangle with its overlap degree and score");
  tri->add_option("--output", tri_out, "JSON output (default stdout)");

  // metrics
  auto* met = app.add_subcommand("metrics", "compare a partition with a reference");
  std::string met_partition;
  std::optional<std::string> met_truth, met_graph, met_out;
  std::string met_format = "edgelist";
  met->add_option("--partition", met_partition, "partition file")->required();
  met->add_option("--ground-truth", met_truth, "reference partition file");
  met->add_option("--input", met_graph, "graph, for modularity and label resolution");
  met->add_option("--format", met_format, "graph format: edgelist or json")
      ->check(CLI::IsMember({"edgelist", "json"}));
  met->add_option("--output", met_out, "report output (default stdout)");

  // stats
  auto* sta = app.add_subcommand("stats", "per-community theme/media statistics");
  std::string sta_input;
  std::optional<std::string> sta_partition, sta_edge_type, sta_theme, sta_media, sta_out, sta_from, sta_to;
  std::optional<std::size_t> sta_community;
  std::size_t sta_min_degree = 0;
  std::vector<std::string> sta_themes, sta_medias;
  sta->add_option("--input", sta_input, "attributed-graph JSON")->required();
  sta->add_option("--partition", sta_partition, "partition of the filtered graph (detects when absent)");
  sta->add_option("--community", sta_community, "community id (all when absent)");
  sta->add_option("--theme", sta_theme, "selected theme for member shares");
  sta->add_option("--media", sta_media, "selected media for member shares");
  sta->add_option("--min-degree", sta_min_degree, "degree filter");
  sta->add_option("--edge-type", sta_edge_type, "retweet or mention")->check(CLI::IsMember({"retweet", "mention"}));
  sta->add_option("--filter-theme", sta_themes, "keep records of these themes");
  sta->add_option("--filter-media", sta_medias, "keep records of these medias");
  sta->add_option("--date-from", sta_from, "first date kept (YYYY-MM-DD)");
  sta->add_option("--date-to", sta_to, "last date kept (YYYY-MM-DD)");
  sta->add_option("--omega", omega, "Ω for detection");
  sta->add_option("--sort", sort, "initial order for detection")->check(CLI::IsMember({"random", "wd", "iw"}));
  sta->add_option("--seed", seed, "seed for detection");
  sta->add_option("--output", sta_out, "JSON output (default stdout)");

  // serve
  auto* srv = app.add_subcommand("serve", "serve the HTTP API");
  std::optional<std::string> srv_input;
  std::string host = "127.0.0.1";
  int port = 8080;
  double budget_s = 120.0;
  srv->add_option("--input", srv_input, "attributed-graph JSON to load at start");
  srv->add_option("--host", host, "bind address");
  srv->add_option("--port", port, "listen port");
  srv->add_option("--budget", budget_s, "detection time budget in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*gen) {
      GenSpec spec;
      if (gen_spec_path) {
        spec = genspec_from_json(json::parse(read_file(*gen_spec_path)));
      } else {
        json j{{"mu_t", gen_mu_t}, {"mu_w", gen_mu_w < 0 ? gen_mu_t : gen_mu_w}, {"seed", gen_seed}};
        if (gen_preset) {
          j["preset"] = *gen_preset;
        } else {
          j["communities"] = gen_k;
          j["community_size"] = gen_size;
          j["avg_degree"] = gen_avg_degree;
        }
        spec = genspec_from_json(j);
      }
      const auto inst = generate_planted(spec);
      std::ostringstream edges, truth;
      write_edge_list(edges, inst.graph);
      write_partition_text(truth, inst.ground_truth, &inst.graph);
      write_output(gen_out, edges.str());
      write_output(gen_truth_out.value_or(gen_out + ".communities"), truth.str());
      std::cout << json{{"nodes", inst.graph.node_count()},
                        {"edges", inst.graph.edge_count()},
                        {"communities", inst.ground_truth.community_count()}}
                       .dump()
                << "\n";
    } else if (*det) {
      const auto loaded = load_graph(det_in);
      DetectionConfig cfg{omega, parse_sort_choice(sort), seed,
                          rule == "trace" ? ExternalWeightRule::kTraceConsistent : ExternalWeightRule::kLiteral,
                          parse_adjacency_scan(scan)};
      cfg.validate();
      const auto started = std::chrono::steady_clock::now();
      const auto partition = detect(loaded.graph, cfg);
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - started)
                               .count();
      const auto report = make_report(&loaded.graph, partition, loaded.truth ? &*loaded.truth : nullptr, elapsed);
      if (det_out) write_output(det_out, partition_text(partition, loaded.graph, is_json_path(*det_out)));
      write_output(det_report, report_to_json(report).dump() + "\n");
    } else if (*tri) {
      const auto loaded = load_graph(tri_in);
      PackingResult packing;
      if (mode == "eval") {
        packing = pack_greedy_eval(loaded.graph);
      } else if (mode == "weight") {
        packing = pack_greedy_weight(loaded.graph);
      } else {
        packing = pack_exact(loaded.graph);
      }
      auto out = packing_to_json(packing);
      out["mode"] = mode;
      const auto all = enumerate_triangles(loaded.graph);
      out["count"] = all.size();
      if (tri_all) {
        const auto lambda = overlap_degrees(all);
        auto list = json::array();
        for (std::size_t i = 0; i < all.size(); ++i) {
          auto item = triangle_to_json(all[i]);
          item["overlap"] = lambda[i];
          item["score"] = eval_score(all[i].weight, lambda[i]);
          list.push_back(std::move(item));
        }
        out["all"] = std::move(list);
      }
      write_output(tri_out, out.dump() + "\n");
    } else if (*met) {
      std::optional<WeightedGraph> graph;
      if (met_graph) {
        InputOptions o;
        o.input = *met_graph;
        o.format = met_format;
        graph = load_graph(o).graph;
      }
      const auto* g = graph ? &*graph : nullptr;
      const auto p = read_partition_file(met_partition, g);
      std::optional<Partition> truth;
      if (met_truth) truth = read_partition_file(*met_truth, g);
      if (g && p.node_count() != g->node_count()) throw CliError("validation", "partition does not cover the graph");
      if (truth && truth->node_count() != p.node_count())
        throw CliError("validation", "partitions differ in node count");
      const auto report = make_report(g, p, truth ? &*truth : nullptr, 0);
      write_output(met_out, report_to_json(report).dump() + "\n");
    } else if (*sta) {
      FilterRequest f;
      f.min_degree = sta_min_degree;
      if (sta_edge_type) f.edge_type = parse_edge_type(*sta_edge_type);
      if (!sta_themes.empty()) f.records.themes = std::set<std::string>(sta_themes.begin(), sta_themes.end());
      if (!sta_medias.empty()) f.records.medias = std::set<std::string>(sta_medias.begin(), sta_medias.end());
      if (sta_from) f.records.date_from = Date::parse(*sta_from);
      if (sta_to) f.records.date_to = Date::parse(*sta_to);
      const auto view = apply_filters(dataset_from_json(json::parse(read_file(sta_input))), f);
      Partition p;
      if (sta_partition) {
        p = read_partition_file(*sta_partition, &view.graph);
        if (p.node_count() != view.graph.node_count())
          throw CliError("validation", "partition does not cover the filtered graph");
      } else {
        DetectionConfig cfg{omega, parse_sort_choice(sort), seed};
        cfg.validate();
        p = detect(view.graph, cfg);
      }
      Selection sel{sta_theme, sta_media};
      auto label = [&](NodeId n) { return view.nodes[n].id; };
      json out;
      if (sta_community) {
        out = stats_to_json(community_stats(p, view.records, static_cast<CommunityId>(*sta_community), sel), label);
      } else {
        out = json::array();
        for (CommunityId c = 0; c < p.community_count(); ++c)
          out.push_back(stats_to_json(community_stats(p, view.records, c, sel), label));
      }
      write_output(sta_out, out.dump() + "\n");
    } else if (*srv) {
      Session session(std::chrono::milliseconds(static_cast<std::int64_t>(budget_s * 1000.0)));
      if (srv_input) session.load(dataset_from_json(json::parse(read_file(*srv_input))));
      httplib::Server server;
      register_routes(server, session);
      std::cerr << "listening on " << host << ":" << port << std::endl;
      if (!server.listen(host, port)) throw CliError("io", "cannot listen on " + host + ":" + std::to_string(port));
    }
  } catch (const CliError& e) {
    print_error(e.kind, e.what());
    return 1;
  } catch (const ParseError& e) {
    print_error("parse", e.what());
    return 1;
  } catch (const json::exception& e) {
    print_error("json", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    print_error("validation", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 1;
  }
  return 0;
}
