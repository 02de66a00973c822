// Copyright 2026 The curaudit Authors
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

// curaudit: command-line front end wiring the simulator, probes, ingestion
// and analytics into reproducible audit runs.
//
// Exit codes: 0 ok, 2 config error, 3 empty/invalid input, 4 network
// required but unavailable.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/curator.hpp"
#include "curaudit/ingest.hpp"
#include "curaudit/locations.hpp"
#include "curaudit/log_io.hpp"
#include "curaudit/manifest.hpp"
#include "curaudit/metrics.hpp"
#include "curaudit/probes.hpp"
#include "curaudit/report.hpp"
#include "curaudit/sim.hpp"
#include "curaudit/text.hpp"
#include "curaudit/timeutil.hpp"
#include "curaudit/version.hpp"

#include <httplib.h>

namespace {

using namespace curaudit;
namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g_command_line;

CuratorConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  CuratorConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config: " + path);
    nlohmann::json j;
    try {
      in >> j;
      cfg = parse_curator_config(j);
    } catch (const std::exception& e) {
      throw ConfigError("bad config " + path + ": " + e.what());
    }
  }
  if (seed_override) cfg.seed = *seed_override;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ObservationLog load_log(const std::string& path) {
  try {
    return read_log_file(path);
  } catch (const std::exception& e) {
    throw InputError("cannot load log " + path + ": " + e.what());
  }
}

RunManifest make_manifest(const CuratorConfig* cfg, std::vector<std::string> inputs,
                          std::vector<std::string> outputs, std::int64_t vstart,
                          std::int64_t vend) {
  RunManifest m;
  m.command_line = g_command_line;
  if (cfg != nullptr) {
    m.config_digest = config_digest(*cfg);
    m.seed = cfg->seed;
  }
  m.inputs = std::move(inputs);
  m.outputs = std::move(outputs);
  m.virtual_start = vstart;
  m.virtual_end = vend;
  return m;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

void write_json_artifact(const std::string& path, const RunManifest& manifest,
                         const std::string& key, const nlohmann::json& payload) {
  nlohmann::json doc{{"manifest", manifest}, {key, payload}};
  write_file(path, doc.dump(2) + "\n");
}

std::vector<Section> parse_sections(const std::string& spec) {
  std::vector<Section> sections;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    sections.push_back(section_from_string(item));
  }
  if (sections.empty()) throw ConfigError("no sections given");
  return sections;
}

std::int64_t duration_arg(const std::string& text, const char* what) {
  try {
    return parse_duration(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

// Live resolver for --live runs: 10 s timeouts and a polite 1 s per-host
// delay. Everything else in the tool runs offline.
class LiveFetcher final : public Fetcher {
 public:
  FetchResponse fetch(const std::string& url) override {
    std::string scheme = "http";
    std::string rest = url;
    std::size_t scheme_end = url.find("://");
    if (scheme_end != std::string::npos) {
      scheme = url.substr(0, scheme_end);
      rest = url.substr(scheme_end + 3);
    }
    std::size_t slash = rest.find('/');
    std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

    {
      std::lock_guard<std::mutex> lock(mu_);
      auto now = std::chrono::steady_clock::now();
      auto it = last_fetch_.find(host);
      if (it != last_fetch_.end()) {
        auto due = it->second + std::chrono::seconds(1);
        if (due > now) std::this_thread::sleep_until(due);
      }
      last_fetch_[host] = std::chrono::steady_clock::now();
    }

    httplib::Client client((scheme + "://" + host).c_str());
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(10, 0);
    client.set_follow_location(false);
    auto res = client.Get(path.c_str());
    if (!res) return FetchResponse{};
    FetchResponse out;
    out.status = res->status;
    if (res->has_header("Location")) out.location = res->get_header_value("Location");
    out.body = res->body;
    return out;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::chrono::steady_clock::time_point> last_fetch_;
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string config_path;
  std::string duration = "24h";
  std::string poll_interval = "2m";
  std::string sections = "trending,top";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::int64_t start = 0;
};

int cmd_simulate(const SimulateArgs& args) {
  CuratorConfig cfg = load_config(args.config_path, args.seed);
  CollectionOptions opt;
  opt.start = args.start;
  opt.duration = duration_arg(args.duration, "duration");
  opt.poll_interval = duration_arg(args.poll_interval, "poll-interval");
  opt.sections = parse_sections(args.sections);
  SimCurator curator(cfg, args.start);
  ObservationLog log;
  try {
    log = run_extended_collection(curator, opt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  RunManifest manifest = make_manifest(&cfg, {}, {args.out}, opt.start, opt.start + opt.duration);
  log.metadata["manifest"] = nlohmann::json(manifest).dump();
  write_log_file(args.out, log);
  std::cout << "wrote " << log.snapshots.size() << " snapshots to " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// probe

struct ProbeArgs {
  std::string config_path;
  std::string replay_log;
  std::optional<std::uint64_t> seed;
  std::int64_t start = 0;
  std::string out;

  // freq
  std::string duration = "24h";
  std::string poll_interval = "2m";
  bool keep_open = false;

  // localization
  std::string locations_path;
  std::int64_t now = 0;
  bool set_mode = false;
  bool stop_at_first = false;

  // personalization
  std::string control_log;
  std::string user_log;
  int users = 5;
  int lag_depth = 1;
  std::string precision = "minute";
};

std::unique_ptr<Curator> make_curator(const ProbeArgs& args) {
  if (!args.replay_log.empty()) {
    return std::make_unique<LogReplayCurator>(load_log(args.replay_log));
  }
  CuratorConfig cfg = load_config(args.config_path, args.seed);
  return std::make_unique<SimCurator>(cfg, args.start);
}

void emit_probe_report(const ProbeArgs& args, const std::string& key,
                       const nlohmann::json& payload, const std::string& table,
                       const CuratorConfig* cfg, std::int64_t vstart, std::int64_t vend) {
  std::cout << table;
  if (!args.out.empty()) {
    std::vector<std::string> inputs;
    if (!args.config_path.empty()) inputs.push_back(args.config_path);
    if (!args.replay_log.empty()) inputs.push_back(args.replay_log);
    if (!args.control_log.empty()) inputs.push_back(args.control_log);
    if (!args.user_log.empty()) inputs.push_back(args.user_log);
    RunManifest manifest = make_manifest(cfg, inputs, {args.out}, vstart, vend);
    write_json_artifact(args.out, manifest, key, payload);
  }
}

int cmd_probe_freq(const ProbeArgs& args) {
  auto curator = make_curator(args);
  FrequencyProbeOptions opt;
  opt.start = args.start;
  opt.duration = duration_arg(args.duration, "duration");
  opt.poll_interval = duration_arg(args.poll_interval, "poll-interval");
  opt.reset_cache = !args.keep_open;
  UpdateFrequencyReport report;
  try {
    report = measure_update_frequency(*curator, opt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::vector<std::string>> rows = {
      {"metric", "value"},
      {"polls", std::to_string(report.polls)},
      {"updates detected", std::to_string(report.updates_detected)},
      {"mean interval (min)", fmt_double(report.mean, 2)},
      {"min", fmt_double(report.min, 2)},
      {"max", fmt_double(report.max, 2)},
      {"median", fmt_double(report.median, 2)},
      {"sd", fmt_double(report.sd, 2)},
      {"resets cache", report.resets_cache ? "yes" : "no"},
  };
  CuratorConfig cfg;
  bool have_cfg = args.replay_log.empty();
  if (have_cfg) cfg = load_config(args.config_path, args.seed);
  emit_probe_report(args, "update_frequency", report, render_table(rows),
                    have_cfg ? &cfg : nullptr, opt.start, opt.start + opt.duration);
  return 0;
}

int cmd_probe_localization(const ProbeArgs& args) {
  auto curator = make_curator(args);
  std::vector<GeoLocation> locations;
  if (args.locations_path.empty()) {
    locations = us_state_capitals();
  } else {
    try {
      locations = locations_from_file(args.locations_path);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  }
  LocalizationOptions opt;
  opt.now = args.now;
  opt.set_mode = args.set_mode;
  opt.stop_at_first = args.stop_at_first;
  LocalizationReport report = check_localization(*curator, locations, opt);
  std::vector<std::vector<std::string>> rows = {{"location", "differed"}};
  for (const LocalizationEntry& e : report.per_location) {
    rows.push_back({e.location.label, e.differed ? "yes" : "no"});
  }
  std::string table = render_table(rows);
  table += std::string("localized: ") + (report.localized ? "yes" : "no") + "\n";
  CuratorConfig cfg;
  bool have_cfg = args.replay_log.empty();
  if (have_cfg) cfg = load_config(args.config_path, args.seed);
  emit_probe_report(args, "localization", report, table, have_cfg ? &cfg : nullptr,
                    args.now, args.now);
  return 0;
}

int cmd_probe_personalization(const ProbeArgs& args) {
  PersonalizationOptions opt;
  opt.lag_depth = args.lag_depth;
  if (args.precision == "minute") {
    opt.precision = PersonalizationOptions::MatchPrecision::kMinute;
  } else if (args.precision == "second") {
    opt.precision = PersonalizationOptions::MatchPrecision::kSecond;
  } else {
    throw ConfigError("precision must be minute or second");
  }

  ObservationLog control;
  std::vector<Snapshot> users;
  CuratorConfig cfg;
  bool have_cfg = false;
  std::int64_t vstart = args.start, vend = args.start;
  if (!args.control_log.empty() && !args.user_log.empty()) {
    control = load_log(args.control_log);
    users = load_log(args.user_log).snapshots;
    if (!control.snapshots.empty()) {
      vstart = control.snapshots.front().timestamp;
      vend = control.snapshots.back().timestamp;
    }
  } else if (!args.control_log.empty() || !args.user_log.empty()) {
    throw ConfigError("personalization file mode needs both --control and --user-log");
  } else {
    cfg = load_config(args.config_path, args.seed);
    have_cfg = true;
    std::int64_t duration = duration_arg(args.duration, "duration");
    std::int64_t poll = duration_arg(args.poll_interval, "poll-interval");
    SimCurator curator(cfg, args.start);
    UserCollectionOptions uopt;
    uopt.start = args.start;
    uopt.duration = duration;
    uopt.poll_interval = poll;
    uopt.user_count = args.users;
    try {
      PersonalizationCollection streams = collect_personalization_streams(curator, uopt);
      control = std::move(streams.control);
      users = std::move(streams.users);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    vend = args.start + duration;
  }

  PersonalizationReport report;
  try {
    report = check_personalization(control, users, opt);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::vector<std::vector<std::string>> rows = {
      {"metric", "value"},
      {"snapshots scored", std::to_string(report.per_snapshot.size())},
      {"excluded mistimed", std::to_string(report.excluded_mistimed)},
      {"mean overlap", fmt_double(report.mean_overlap, 4)},
      {"mean overlap with lag", fmt_double(report.mean_overlap_with_lag, 4)},
  };
  emit_probe_report(args, "personalization", report, render_table(rows),
                    have_cfg ? &cfg : nullptr, vstart, vend);
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::vector<std::string> logs;
  std::string analyses = "report";
  std::string out_dir = ".";
  int tz_offset = 0;
  std::int64_t min_count = 2;
  int top = 20;
  bool export_stories = false;
};

struct LabeledLog {
  std::string label;
  ObservationLog log;
};

// Two explicit logs analyze side by side; a single mixed log splits into its
// sections so the report compares algorithmic vs editorial curation.
std::vector<LabeledLog> gather_logs(const AnalyzeArgs& args) {
  if (args.logs.empty() || args.logs.size() > 2) {
    throw ConfigError("analyze takes one or two --log files");
  }
  std::vector<LabeledLog> out;
  if (args.logs.size() == 1) {
    ObservationLog log = load_log(args.logs[0]);
    if (log.snapshots.empty()) throw InputError("empty log: " + args.logs[0]);
    if (log.section_tag() == "mixed") {
      out.push_back({"trending", filter_section(log, Section::kTrending)});
      out.push_back({"top", filter_section(log, Section::kTop)});
    } else {
      out.push_back({log.section_tag(), std::move(log)});
    }
  } else {
    for (std::size_t i = 0; i < args.logs.size(); ++i) {
      ObservationLog log = load_log(args.logs[i]);
      if (log.snapshots.empty()) throw InputError("empty log: " + args.logs[i]);
      std::string label = log.section_tag();
      out.push_back({label, std::move(log)});
    }
    if (out[0].label == out[1].label) {
      out[0].label += "1";
      out[1].label += "2";
    }
  }
  for (const LabeledLog& l : out) {
    if (l.log.snapshots.empty()) throw InputError("log has no snapshots for " + l.label);
  }
  return out;
}

int cmd_analyze(const AnalyzeArgs& args) {
  std::set<std::string> analyses;
  {
    std::stringstream ss(args.analyses);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (item != "diversity" && item != "churn" && item != "ngrams" && item != "report") {
        throw ConfigError("unknown analysis: " + item);
      }
      analyses.insert(item);
    }
    if (analyses.empty()) throw ConfigError("no analyses requested");
  }
  std::vector<LabeledLog> logs = gather_logs(args);
  fs::create_directories(args.out_dir);
  auto out_path = [&](const std::string& name) {
    return (fs::path(args.out_dir) / name).string();
  };
  RunManifest manifest = make_manifest(nullptr, args.logs, {}, 0, 0);
  if (!logs.empty()) {
    manifest.virtual_start = logs.front().log.snapshots.front().timestamp;
    manifest.virtual_end = logs.front().log.snapshots.back().timestamp;
  }

  if (args.export_stories) {
    for (const LabeledLog& l : logs) {
      write_file(out_path("stories_" + l.label + ".csv"),
                 manifest_csv_comment(manifest) + log_to_csv(l.log));
    }
  }

  if (analyses.count("report")) {
    std::vector<ObservationLog> raw;
    for (const LabeledLog& l : logs) raw.push_back(l.log);
    AuditReport report = build_audit_report(raw, args.tz_offset);
    for (std::size_t i = 0; i < logs.size(); ++i) report.sections[i].label = logs[i].label;
    std::cout << render_audit_report(report);
    write_json_artifact(out_path("report.json"), manifest, "report", report);
  }

  if (analyses.count("diversity")) {
    nlohmann::json payload = nlohmann::json::array();
    for (const LabeledLog& l : logs) {
      SourceShares shares = source_shares(l.log);
      SourceDistribution analyzed = shares.distribution;
      if (analyzed.counts.count("(unknown)")) {
        analyzed.total -= analyzed.counts.at("(unknown)");
        analyzed.counts.erase("(unknown)");
      }
      if (analyzed.total == 0) throw InputError("no resolved sources in " + l.label);
      DiversityResult div = diversity(analyzed);
      payload.push_back(nlohmann::json{{"label", l.label},
                                       {"diversity", div},
                                       {"shares", shares}});
      write_file(out_path("shares_" + l.label + ".csv"),
                 manifest_csv_comment(manifest) + shares_to_csv(shares));
      std::vector<std::vector<std::string>> rows = {
          {"metric", "value"},
          {"shannon H (nats)", fmt_double(div.shannon_h)},
          {"equitability J", fmt_double(div.equitability_j)},
          {"richness S", std::to_string(div.richness_s)},
          {"top-10 share", fmt_percent(shares.top10_share)},
      };
      std::cout << "diversity: " << l.label << "\n" << render_table(rows);
    }
    write_json_artifact(out_path("diversity.json"), manifest, "diversity", payload);
  }

  if (analyses.count("churn")) {
    nlohmann::json payload = nlohmann::json::array();
    for (const LabeledLog& l : logs) {
      int slots = 0;
      for (const Snapshot& s : l.log.snapshots) {
        slots = std::max<int>(slots, static_cast<int>(s.stories.size()));
      }
      ChurnReport churn;
      try {
        churn = churn_stats(l.log, slots, args.tz_offset);
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("churn(") + l.label + "): " + e.what());
      }
      payload.push_back(nlohmann::json{{"label", l.label}, {"churn", churn}});
      write_file(out_path("hourly_" + l.label + ".csv"),
                 manifest_csv_comment(manifest) + hourly_to_csv(churn.hourly_first_appearance));
      std::vector<std::vector<std::string>> rows = {
          {"metric", "value"},
          {"distinct stories", std::to_string(churn.distinct_stories)},
          {"avg duration (hrs)", fmt_double(churn.avg_story_duration_hours, 2)},
          {"stories/day", fmt_double(churn.stories_per_day, 1)},
          {"stories/day/slot", fmt_double(churn.stories_per_day_per_slot, 1)},
      };
      std::cout << "churn: " << l.label << "\n" << render_table(rows);
    }
    write_json_artifact(out_path("churn.json"), manifest, "churn", payload);
  }

  if (analyses.count("ngrams")) {
    if (logs.size() != 2) {
      throw ConfigError("ngrams needs two corpora: two logs or one mixed log");
    }
    Corpus a = Corpus::from_log(logs[0].log);
    Corpus b = Corpus::from_log(logs[1].log);
    std::vector<SalienceRow> ab, ba;
    try {
      ab = log_ratio_salience(a, b, args.min_count);
      ba = log_ratio_salience(b, a, args.min_count);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    write_file(out_path("ngrams.csv"), manifest_csv_comment(manifest) + salience_to_csv(ab));
    auto render_side = [&](const std::string& label, const std::vector<SalienceRow>& rows) {
      std::vector<std::vector<std::string>> table = {{"ngram", "log_ratio", "count"}};
      for (std::size_t i = 0; i < rows.size() && i < static_cast<std::size_t>(args.top); ++i) {
        table.push_back({rows[i].ngram, fmt_double(rows[i].log_ratio, 2),
                         std::to_string(rows[i].count_a)});
      }
      std::cout << "salient in " << label << "\n" << render_table(table);
    };
    render_side(logs[0].label, ab);
    render_side(logs[1].label, ba);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
  std::string log_path;
  std::string out;
  std::string fixtures;
  bool live = false;
  int max_redirects = 10;
  int jobs = 1;

  std::string csv_path;
  std::string section = "trending";
  bool lenient = false;
};

int cmd_ingest_resolve(const IngestArgs& args) {
  ObservationLog log = load_log(args.log_path);
  std::unique_ptr<Fetcher> fetcher;
  if (!args.fixtures.empty()) {
    try {
      fetcher = std::make_unique<FixtureFetcher>(FixtureFetcher::from_file(args.fixtures));
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  } else if (args.live) {
    fetcher = std::make_unique<LiveFetcher>();
  } else {
    throw NetworkError("resolution needs --fixtures or an explicit --live");
  }
  PublicSuffixList psl;
  ObservationLog resolved =
      resolve_log(log, *fetcher, psl, args.max_redirects, /*use_cache=*/true, args.jobs);
  std::int64_t vstart = log.snapshots.empty() ? 0 : log.snapshots.front().timestamp;
  std::int64_t vend = log.snapshots.empty() ? 0 : log.snapshots.back().timestamp;
  RunManifest manifest = make_manifest(nullptr, {args.log_path}, {args.out}, vstart, vend);
  resolved.metadata["manifest"] = nlohmann::json(manifest).dump();
  write_log_file(args.out, resolved);
  std::cout << "resolved log written to " << args.out << " (failures: "
            << resolved.metadata["resolve_failures"] << ")\n";
  return 0;
}

int cmd_ingest_import(const IngestArgs& args) {
  std::ifstream in(args.csv_path, std::ios::binary);
  if (!in) throw InputError("cannot read " + args.csv_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ImportResult result;
  try {
    result = import_csv(buf.str(), section_from_string(args.section));
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  for (const RowError& e : result.row_errors) {
    std::cerr << "row error at line " << e.line << ": " << e.message << "\n";
  }
  if (!result.row_errors.empty() && !args.lenient) {
    throw InputError(std::to_string(result.row_errors.size()) +
                     " row errors (use --lenient to import the valid rows)");
  }
  if (result.log.snapshots.empty()) throw InputError("no importable rows");
  std::int64_t vstart = result.log.snapshots.front().timestamp;
  std::int64_t vend = result.log.snapshots.back().timestamp;
  RunManifest manifest = make_manifest(nullptr, {args.csv_path}, {args.out}, vstart, vend);
  result.log.metadata["manifest"] = nlohmann::json(manifest).dump();
  write_log_file(args.out, result.log);
  std::cout << "imported " << result.log.snapshots.size() << " snapshots ("
            << result.row_errors.size() << " row errors)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream cmdline;
  for (int i = 0; i < argc; ++i) {
    if (i) cmdline << ' ';
    cmdline << argv[i];
  }
  g_command_line = cmdline.str();

  CLI::App app{"curaudit: audit toolkit for news curation systems"};
  app.set_version_flag("--version", curaudit::kToolVersion);
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "run the simulated curator and record a log");
  sim->add_option("--config", sim_args.config_path, "curator config JSON (defaults used if omitted)");
  sim->add_option("--duration", sim_args.duration, "virtual duration, e.g. 24h or 62d")->required();
  sim->add_option("--poll-interval", sim_args.poll_interval, "poll spacing (default 2m)");
  sim->add_option("--sections", sim_args.sections, "comma list: trending,top");
  sim->add_option("--seed", sim_args.seed, "override config seed");
  sim->add_option("--start", sim_args.start, "virtual start time (UTC seconds)");
  sim->add_option("--out", sim_args.out, "output log path")->required();

  ProbeArgs probe_args;
  CLI::App* probe = app.add_subcommand("probe", "run a mechanism probe");
  probe->require_subcommand(1);
  auto add_backend_opts = [&](CLI::App* p) {
    p->add_option("--config", probe_args.config_path, "curator config JSON");
    p->add_option("--log", probe_args.replay_log, "replay a recorded log instead");
    p->add_option("--seed", probe_args.seed, "override config seed");
    p->add_option("--start", probe_args.start, "virtual start time");
    p->add_option("--out", probe_args.out, "write the JSON report here");
  };
  CLI::App* freq = probe->add_subcommand("freq", "update-frequency probe");
  add_backend_opts(freq);
  freq->add_option("--duration", probe_args.duration, "window (default 24h)");
  freq->add_option("--poll-interval", probe_args.poll_interval, "poll spacing (default 2m)");
  freq->add_flag("--keep-open", probe_args.keep_open, "keep one session open (user-specific mode)");

  CLI::App* loc = probe->add_subcommand("localization", "sock-puppet localization probe");
  add_backend_opts(loc);
  loc->add_option("--locations", probe_args.locations_path,
                  "JSON array of locations (default: 50 US state capitals)");
  loc->add_option("--now", probe_args.now, "virtual probe instant");
  loc->add_flag("--set-mode", probe_args.set_mode, "compare story sets, not ordered lists");
  loc->add_flag("--stop-at-first", probe_args.stop_at_first, "stop at the first difference");

  CLI::App* pers = probe->add_subcommand("personalization", "overlap-coefficient probe");
  add_backend_opts(pers);
  pers->add_option("--control", probe_args.control_log, "control stream log file");
  pers->add_option("--user-log", probe_args.user_log, "user snapshots log file");
  pers->add_option("--users", probe_args.users, "synthetic users (config mode)");
  pers->add_option("--duration", probe_args.duration, "window (config mode)");
  pers->add_option("--poll-interval", probe_args.poll_interval, "poll spacing (config mode)");
  pers->add_option("--lag-depth", probe_args.lag_depth, "preceding control sets to union (default 1)");
  pers->add_option("--precision", probe_args.precision, "match precision: minute|second");

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand("analyze", "content analytics over logs");
  analyze->add_option("--log", analyze_args.logs, "log file (repeat for two)")->required();
  analyze->add_option("--analyses", analyze_args.analyses,
                      "comma list of diversity,churn,ngrams,report");
  analyze->add_option("--out-dir", analyze_args.out_dir, "artifact directory (default .)");
  analyze->add_option("--tz-offset", analyze_args.tz_offset, "display timezone offset, minutes");
  analyze->add_option("--min-count", analyze_args.min_count, "ngram min count (default 2)");
  analyze->add_option("--top", analyze_args.top, "rows per rendered salience table");
  analyze->add_flag("--export-stories", analyze_args.export_stories,
                    "also write the flattened story CSV per log");

  IngestArgs ingest_args;
  CLI::App* ingest = app.add_subcommand("ingest", "resolve share links or import captures");
  ingest->require_subcommand(1);
  CLI::App* resolve = ingest->add_subcommand("resolve", "resolve share links in a log");
  resolve->add_option("--log", ingest_args.log_path, "input log")->required();
  resolve->add_option("--out", ingest_args.out, "output log")->required();
  resolve->add_option("--fixtures", ingest_args.fixtures, "fixture fetcher JSON map");
  resolve->add_flag("--live", ingest_args.live, "use the live HTTP fetcher");
  resolve->add_option("--max-redirects", ingest_args.max_redirects, "redirect cap (default 10)");
  resolve->add_option("--jobs", ingest_args.jobs, "parallel fetch workers (default 1)");
  CLI::App* import = ingest->add_subcommand("import", "import a flat CSV capture");
  import->add_option("--csv", ingest_args.csv_path, "input CSV")->required();
  import->add_option("--out", ingest_args.out, "output log")->required();
  import->add_option("--section", ingest_args.section, "section of the capture (default trending)");
  import->add_flag("--lenient", ingest_args.lenient, "keep valid rows despite row errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (probe->parsed()) {
      if (freq->parsed()) return cmd_probe_freq(probe_args);
      if (loc->parsed()) return cmd_probe_localization(probe_args);
      if (pers->parsed()) return cmd_probe_personalization(probe_args);
    }
    if (analyze->parsed()) return cmd_analyze(analyze_args);
    if (ingest->parsed()) {
      if (resolve->parsed()) return cmd_ingest_resolve(ingest_args);
      if (import->parsed()) return cmd_ingest_import(ingest_args);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NetworkError& e) {
    std::cerr << "network error: " << e.what() << "\n";
    return 4;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
