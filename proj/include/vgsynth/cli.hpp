// Copyright 2026 The vgsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. run() is the whole program; tools/vgsynth.cpp only
// forwards argv to it so tests can drive every subcommand in-process.

#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vgsynth/catalog.hpp"
#include "vgsynth/collect.hpp"
#include "vgsynth/error.hpp"
#include "vgsynth/eval.hpp"
#include "vgsynth/infer.hpp"
#include "vgsynth/mock_client.hpp"
#include "vgsynth/openai_client.hpp"
#include "vgsynth/relations.hpp"
#include "vgsynth/scene.hpp"
#include "vgsynth/textio.hpp"

namespace vgsynth::cli {

inline constexpr std::string_view kVersion = "0.1.0";

// Exit codes: 0 success, 1 runtime failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Opens `path` for writing; "-" means the provided stdout stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& stdout_stream) : path_(path) {
    if (path == "-") {
      stream_ = &stdout_stream;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorCode::kIoError, "cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }
  bool is_file() const { return path_ != "-"; }
  void close() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorCode::kIoError, "write failed for " + path_);
    if (file_.is_open()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

struct Manifest {
  std::string command;
  ordered_json config = ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::string started_at = utc_now();

  // Written as <primary output>.manifest.json; no manifest when the primary
  // output is stdout.
  void write() const {
    if (outputs.empty() || outputs.front() == "-") return;
    ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["config"] = config;
    j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["started_at"] = started_at;
    j["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string path = outputs.front() + ".manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
    out << j.dump(2) << '\n';
  }
};

inline ordered_json endpoint_to_json(const EndpointConfig& e) {
  ordered_json j;
  j["base_url"] = e.base_url;
  j["model_name"] = e.model_name;
  j["api_key_env_var"] = e.api_key_env_var;
  j["temperature"] = e.temperature;
  j["max_in_flight"] = e.max_in_flight;
  j["max_retries"] = e.max_retries;
  j["timeout_seconds"] = e.timeout_seconds;
  return j;
}

inline void add_endpoint_options(CLI::App& sub, EndpointConfig& e) {
  sub.add_option("--endpoint", e.base_url, "Chat-completions base URL")
      ->capture_default_str();
  sub.add_option("--model", e.model_name, "Model name")->capture_default_str();
  sub.add_option("--api-key-env", e.api_key_env_var,
                 "Environment variable holding the API key (empty: no auth)")
      ->capture_default_str();
  sub.add_option("--temperature", e.temperature)->capture_default_str();
  sub.add_option("--max-in-flight", e.max_in_flight, "Concurrent requests")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub.add_option("--max-retries", e.max_retries)->capture_default_str();
  sub.add_option("--timeout", e.timeout_seconds, "Per-request timeout in seconds")
      ->capture_default_str();
}

inline std::unique_ptr<ModelClient> make_wire_client(const EndpointConfig& e) {
  return std::make_unique<ChatCompletionsClient>(e.base_url, e.timeout_seconds);
}

inline std::vector<InferenceQuery> load_queries(const std::string& path) {
  return read_jsonl<InferenceQuery>(path, [](const nlohmann::json& j) {
    return InferenceQuery{j.at("scene_id").get<std::string>(),
                          j.at("query_id").get<std::string>(),
                          j.at("query").get<std::string>()};
  });
}

inline std::string stats_table(const std::map<SpatialRelation, std::size_t>& counts) {
  std::string header = "| Relationship |";
  std::string row = "| # of data    |";
  std::size_t total = 0;
  for (auto r : kAllRelations) {
    const std::string title(relation_title(r));
    const auto it = counts.find(r);
    const std::size_t n = it == counts.end() ? 0 : it->second;
    total += n;
    const std::string value = std::to_string(n);
    const std::size_t width = std::max(title.size(), value.size());
    header += " " + std::string(width - title.size(), ' ') + title + " |";
    row += " " + std::string(width - value.size(), ' ') + value + " |";
  }
  return header + "\n" + row + "\nTotal: " + std::to_string(total) + "\n";
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::ordered_json;

  CLI::App app{"Synthetic 3D visual-grounding data and evaluation toolkit", "vgsynth"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "INI/TOML file with option defaults");
  app.require_subcommand(1);

  // generate
  SceneConfig scene_cfg;
  std::string gen_relation = "all";
  int gen_count = 500;
  std::string gen_out;
  std::string catalog_path;
  std::string templates_path;
  auto* gen = app.add_subcommand("generate", "Generate scene layouts per relation");
  gen->add_option("--relation", gen_relation, "Relation name or 'all'")->capture_default_str();
  gen->add_option("--count", gen_count, "Scenes per relation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", scene_cfg.seed, "First seed; scene i uses seed + i")
      ->capture_default_str();
  gen->add_option("--min-objects", scene_cfg.min_objects)->capture_default_str();
  gen->add_option("--jitter", scene_cfg.jitter, "Per-axis size variation")
      ->capture_default_str();
  gen->add_option("--margin", scene_cfg.margin, "Relation margin in meters")
      ->capture_default_str();
  gen->add_option("--margin-ratio", scene_cfg.margin_ratio)->capture_default_str();
  gen->add_option("--room-width", scene_cfg.room_width)->capture_default_str();
  gen->add_option("--room-length", scene_cfg.room_length)->capture_default_str();
  gen->add_option("--candidates-min", scene_cfg.candidate_count_min)->capture_default_str();
  gen->add_option("--candidates-max", scene_cfg.candidate_count_max)->capture_default_str();
  gen->add_option("--next-to-radius", scene_cfg.next_to_radius)->capture_default_str();
  gen->add_option("--max-retries", scene_cfg.max_placement_retries)->capture_default_str();
  gen->add_option("--catalog", catalog_path, "Catalog JSONL (default: built-in)");
  gen->add_option("--templates", templates_path, "Template bank JSONL (default: built-in)");
  gen->add_option("--out", gen_out, "Layout file, '-' for stdout")->required();

  // prompt
  std::string prompt_in, prompt_out;
  auto* prm = app.add_subcommand("prompt", "Render collection prompts for layouts");
  prm->add_option("--in", prompt_in, "Layout file")->required();
  prm->add_option("--out", prompt_out, "Prompt file, '-' for stdout")->required();

  // collect
  EndpointConfig endpoint;
  std::string collect_in, collect_out, resume_path;
  std::optional<double> mock_wrong_rate;
  std::uint64_t mock_seed = 0;
  auto* col = app.add_subcommand("collect", "Collect and verify reasoning responses");
  col->add_option("--in", collect_in, "Layout file")->required();
  col->add_option("--out", collect_out, "Verified-sample file")->required();
  col->add_option("--resume", resume_path, "Resume file of completed scene ids");
  col->add_option("--mock-wrong-rate", mock_wrong_rate,
                  "Use the built-in oracle mock, wrong with this probability");
  col->add_option("--seed", mock_seed, "Seed for the mock model")->capture_default_str();
  detail::add_endpoint_options(*col, endpoint);

  // emit
  std::string emit_in, emit_out;
  auto* emt = app.add_subcommand("emit", "Write training records from verified samples");
  emt->add_option("--in", emit_in, "Verified-sample file")->required();
  emt->add_option("--out", emit_out, "Training-record file")->required();

  // infer
  std::string infer_proposals, infer_queries, infer_out;
  bool infer_mock = false;
  auto* inf = app.add_subcommand("infer", "Predict target ids for benchmark queries");
  inf->add_option("--proposals", infer_proposals, "Proposal file")->required();
  inf->add_option("--queries", infer_queries, "Query or ground-truth file")->required();
  inf->add_option("--out", infer_out, "Prediction file, '-' for stdout")->required();
  inf->add_flag("--mock", infer_mock, "Use the scripted class-match predictor");
  detail::add_endpoint_options(*inf, endpoint);

  // score
  std::string score_gt, score_pred, score_proposals, score_out, score_protocol = "box";
  std::vector<double> thresholds = {0.25, 0.5};
  auto* scr = app.add_subcommand("score", "Score predictions against ground truth");
  scr->add_option("--gt", score_gt, "Ground-truth file")->required();
  scr->add_option("--pred", score_pred, "Prediction file")->required();
  scr->add_option("--proposals", score_proposals, "Proposal file for id-to-box lookup");
  scr->add_option("--protocol", score_protocol, "box or id")
      ->capture_default_str()
      ->check(CLI::IsMember({"box", "id"}));
  scr->add_option("--thresholds", thresholds, "IoU thresholds")->capture_default_str();
  scr->add_option("--out", score_out, "Machine-readable report (JSON)");

  // stats
  std::string stats_in, stats_out;
  auto* sts = app.add_subcommand("stats", "Per-relation counts of a collected dataset");
  sts->add_option("--in", stats_in, "Verified-sample or training-record file")->required();
  sts->add_option("--out", stats_out, "Counts as JSON");

  // validate
  std::string validate_in, validate_out;
  auto* val = app.add_subcommand("validate", "Check layout invariants");
  val->add_option("--in", validate_in, "Layout file")->required();
  val->add_option("--out", validate_out, "Violation report (JSONL)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    err << "error: Usage: " << detail::one_line(e.what()) << '\n';
    return kExitUsage;
  }

  auto log = [&err](const std::string& msg) { err << msg << '\n'; };

  try {
    detail::Manifest manifest;
    if (gen->parsed()) {
      manifest.command = "generate";
      const Catalog catalog = catalog_path.empty() ? builtin_catalog() : load_catalog(catalog_path);
      const TemplateBank templates =
          templates_path.empty() ? builtin_templates() : load_templates(templates_path);
      std::vector<SpatialRelation> relations;
      if (gen_relation == "all") {
        relations.assign(kAllRelations.begin(), kAllRelations.end());
      } else if (auto r = parse_relation(gen_relation)) {
        relations.push_back(*r);
      } else {
        err << "error: Usage: unknown relation '" << gen_relation << "'\n";
        return kExitUsage;
      }
      detail::Output sink(gen_out, out);
      const std::uint64_t first_seed = scene_cfg.seed;
      for (auto r : relations) {
        for (int i = 0; i < gen_count; ++i) {
          SceneConfig cfg = scene_cfg;
          cfg.seed = first_seed + static_cast<std::uint64_t>(i);
          sink.stream() << layout_to_line(generate_scene(r, cfg, catalog, templates)) << '\n';
        }
      }
      sink.close();
      manifest.seed = first_seed;
      manifest.config = config_to_json(scene_cfg);
      manifest.config["relation"] = gen_relation;
      manifest.config["count"] = gen_count;
      manifest.config["catalog"] = catalog_path.empty() ? "builtin" : catalog_path;
      manifest.config["templates"] = templates_path.empty() ? "builtin" : templates_path;
      manifest.outputs = {gen_out};
    } else if (prm->parsed()) {
      manifest.command = "prompt";
      const auto layouts = load_layouts(prompt_in);
      detail::Output sink(prompt_out, out);
      for (const auto& l : layouts) {
        ordered_json j;
        j["scene_id"] = l.scene_id;
        j["query"] = l.query;
        j["prompt"] = build_collection_prompt(serialize_scene(l.objects), l.query);
        sink.stream() << j.dump() << '\n';
      }
      sink.close();
      manifest.inputs = {prompt_in};
      manifest.outputs = {prompt_out};
    } else if (col->parsed()) {
      manifest.command = "collect";
      const auto layouts = load_layouts(collect_in);
      std::unique_ptr<ModelClient> client;
      if (mock_wrong_rate) {
        if (col->count("--api-key-env") == 0) endpoint.api_key_env_var.clear();
        client = std::make_unique<OracleMockClient>(layouts, *mock_wrong_rate, mock_seed);
      } else {
        client = detail::make_wire_client(endpoint);
      }
      CollectionOptions options;
      options.log = log;
      if (!resume_path.empty()) options.resume_path = resume_path;
      const auto result = run_collection(layouts, endpoint, *client, options);
      write_verified_samples(result.kept, collect_out, !resume_path.empty());
      const std::string stats_path = collect_out + ".stats.json";
      {
        std::ofstream s(stats_path, std::ios::binary | std::ios::trunc);
        if (!s) throw Error(ErrorCode::kIoError, "cannot write " + stats_path);
        s << stats_to_json(result.stats).dump(2) << '\n';
      }
      err << "collected " << result.stats.kept << "/" << result.stats.attempted
          << " (wrong " << result.stats.dropped_wrong << ", malformed "
          << result.stats.dropped_malformed << ", resumed " << result.skipped_resumed
          << ")\n";
      manifest.config = detail::endpoint_to_json(endpoint);
      manifest.config["client"] = mock_wrong_rate ? "oracle_mock" : "chat_completions";
      if (mock_wrong_rate) {
        manifest.config["mock_wrong_rate"] = *mock_wrong_rate;
        manifest.seed = mock_seed;
      }
      manifest.inputs = {collect_in};
      manifest.outputs = {collect_out, stats_path};
      if (!resume_path.empty()) manifest.outputs.push_back(resume_path);
    } else if (emt->parsed()) {
      manifest.command = "emit";
      const auto samples = read_verified_samples(emit_in);
      const auto n = emit_training_records(samples, emit_out);
      err << "wrote " << n << " training records\n";
      manifest.inputs = {emit_in};
      manifest.outputs = {emit_out};
    } else if (inf->parsed()) {
      manifest.command = "infer";
      const auto proposals = load_proposals(infer_proposals);
      const auto queries = detail::load_queries(infer_queries);
      std::unique_ptr<ModelClient> client;
      if (infer_mock) {
        if (inf->count("--api-key-env") == 0) endpoint.api_key_env_var.clear();
        client = std::make_unique<ClassMatchMockClient>();
      } else {
        client = detail::make_wire_client(endpoint);
      }
      const auto result = run_inference(queries, proposals, endpoint, *client, {}, log);
      detail::Output sink(infer_out, out);
      for (const auto& p : result.predictions) {
        sink.stream() << prediction_to_json(p).dump() << '\n';
      }
      sink.close();
      err << "predicted " << result.predictions.size() - result.failures << "/"
          << result.predictions.size() << " queries\n";
      manifest.config = detail::endpoint_to_json(endpoint);
      manifest.config["client"] = infer_mock ? "class_match_mock" : "chat_completions";
      manifest.inputs = {infer_proposals, infer_queries};
      manifest.outputs = {infer_out};
    } else if (scr->parsed()) {
      manifest.command = "score";
      const auto items = load_eval_items(score_gt);
      const auto records = load_predictions(score_pred);
      MetricsReport report;
      if (score_protocol == "id") {
        report = score_id_protocol(items, to_id_predictions(records));
      } else {
        std::vector<ProposalSet> proposals;
        if (!score_proposals.empty()) proposals = load_proposals(score_proposals);
        report = score_box_protocol(items, to_box_predictions(records, proposals), thresholds);
      }
      out << report_to_text(report);
      if (!score_out.empty()) {
        std::ofstream s(score_out, std::ios::binary | std::ios::trunc);
        if (!s) throw Error(ErrorCode::kIoError, "cannot write " + score_out);
        s << report_to_json(report).dump(2) << '\n';
        manifest.outputs = {score_out};
      }
      manifest.config["protocol"] = score_protocol;
      manifest.config["thresholds"] = thresholds;
      manifest.inputs = {score_gt, score_pred};
      if (!score_proposals.empty()) manifest.inputs.push_back(score_proposals);
    } else if (sts->parsed()) {
      manifest.command = "stats";
      std::map<SpatialRelation, std::size_t> counts;
      std::ifstream probe(stats_in);
      std::string first;
      std::getline(probe, first);
      if (first.find("\"completion\"") != std::string::npos) {
        for (const auto& r : read_training_records(stats_in)) ++counts[r.relation];
      } else {
        for (const auto& s : read_verified_samples(stats_in)) ++counts[s.scene.relation];
      }
      out << detail::stats_table(counts);
      if (!stats_out.empty()) {
        ordered_json j;
        for (auto r : kAllRelations) j[std::string(relation_name(r))] = counts[r];
        std::ofstream s(stats_out, std::ios::binary | std::ios::trunc);
        if (!s) throw Error(ErrorCode::kIoError, "cannot write " + stats_out);
        s << j.dump(2) << '\n';
        manifest.outputs = {stats_out};
      }
      manifest.inputs = {stats_in};
    } else if (val->parsed()) {
      manifest.command = "validate";
      const auto layouts = load_layouts(validate_in);
      std::size_t bad = 0;
      std::optional<detail::Output> sink;
      if (!validate_out.empty()) sink.emplace(validate_out, out);
      for (const auto& l : layouts) {
        const auto violations = validate_scene(l);
        if (violations.empty()) continue;
        ++bad;
        std::vector<std::string> lines;
        for (const auto& v : violations) lines.push_back(v.to_string());
        if (sink) {
          ordered_json j;
          j["scene_id"] = l.scene_id;
          j["violations"] = lines;
          sink->stream() << j.dump() << '\n';
        }
        for (const auto& line : lines) out << l.scene_id << ": " << line << '\n';
      }
      if (sink) {
        sink->close();
        manifest.outputs = {validate_out};
      }
      out << layouts.size() - bad << "/" << layouts.size() << " scenes valid\n";
      manifest.inputs = {validate_in};
      manifest.write();
      if (bad) {
        err << "error: ValidationFailed: " << bad << " scenes violate invariants\n";
        return kExitFailure;
      }
      return kExitOk;
    }
    manifest.write();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << detail::one_line(e.what()) << '\n';
    return kExitFailure;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace vgsynth::cli
