// Copyright 2026 The SOL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sol/app.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "sol/config.hpp"
#include "sol/errors.hpp"
#include "sol/experiment.hpp"
#include "sol/threshold_opt.hpp"
#include "sol/verify.hpp"

namespace sol {

namespace {

std::string csv_text(const CsvTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

EncodedDataset load_encoded(const Json& root) {
  const DataSource source = data_from_json(root.at("data"));
  const PreprocessPlan plan = plan_from_json(root.contains("plan") ? root.at("plan") : Json::object());
  return clean_and_encode(TabularDataset::from_csv(source.load(), plan.missing_token), plan);
}

void require_data(const Json& root) {
  if (!root.contains("data")) throw ConfigError("config: missing key 'data'");
  data_from_json(root.at("data"));
  if (root.contains("plan")) plan_from_json(root.at("plan"));
}

CommandOutcome run_prepare(const Json& root) {
  require_keys(root, "config", {"schema_version", "data", "plan", "seed", "jobs"});
  require_data(root);
  const EncodedDataset data = load_encoded(root);
  Json summary = {{"rows", data.features.rows()},
                  {"features", data.features.cols()},
                  {"feature_names", data.feature_names}};
  if (!data.labels.empty()) {
    summary["positives"] = data.positives();
    summary["negatives"] = data.labels.size() - data.positives();
  }
  CommandOutcome out;
  out.summary = summary.dump();
  out.artifacts = {{"encoded.csv", csv_text(to_csv(data))}, {"summary.json", json_text(summary)}};
  return out;
}

CommandOutcome run_train(const Json& root) {
  require_keys(root, "config", {"schema_version", "data", "plan", "network", "train", "loss", "score", "seed", "jobs"});
  require_data(root);
  TrainConfig tc = train_from_json(root.contains("train") ? root.at("train") : Json::object());
  if (!root.contains("loss")) throw ConfigError("config: missing key 'loss'");
  tc.objective.loss = loss_from_json(root.at("loss"));
  tc.seed = root.value("seed", std::uint64_t{1});
  const auto hidden = hidden_from_json(root.contains("network") ? root.at("network") : Json::object());
  const ScoreKind score = parse_score_kind(root.value("score", std::string("f1")));
  tc.validate();

  const EncodedDataset data = load_encoded(root);
  if (data.labels.empty()) throw ConfigError("train needs a label rule in the plan");
  const NetworkSpec spec = NetworkSpec::with_hidden(static_cast<std::size_t>(data.features.cols()), hidden);
  const TrainReport report = fit(spec, tc, data.features, data.labels);

  std::ostringstream weights;
  save_weights(weights, report.final_weights);
  CsvTable history;
  history.header = {"epoch", "train_loss", "validation_loss"};
  for (std::size_t e = 0; e < report.history.size(); ++e) {
    history.rows.push_back({std::to_string(e + 1), format_number(report.history[e].train_loss),
                            format_number(report.history[e].validation_loss)});
  }
  const Eigen::VectorXd p = forward(spec, report.final_weights, data.features);
  CsvTable predictions;
  predictions.header = {"prediction", "label"};
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    predictions.rows.push_back({format_number(p[i]), std::to_string(data.labels[static_cast<std::size_t>(i)])});
  }
  const LabeledBatch batch(std::vector<double>(p.data(), p.data() + p.size()), data.labels);
  const ThresholdSweepResult best = sweep(batch, score);

  Json summary = {{"loss", loss_label(tc.objective.loss)},
                  {"layer_widths", spec.layer_widths},
                  {"rows", data.features.rows()},
                  {"positives", data.positives()},
                  {"epochs_run", report.epochs_run},
                  {"best_epoch", report.best_epoch},
                  {"best_validation_loss", number_or_null(report.best_validation_loss)},
                  {"success", report.success},
                  {"score", to_string(score)},
                  {"score_half", score_value(score, classical_cm(batch, 0.5))},
                  {"tau_star", best.tau_star},
                  {"score_tau_star", best.best_score}};
  CommandOutcome out;
  out.summary = summary.dump();
  out.artifacts = {{"weights.txt", weights.str()},
                   {"history.csv", csv_text(history)},
                   {"predictions.csv", csv_text(predictions)},
                   {"train_report.json", json_text(summary)}};
  return out;
}

CommandOutcome run_sweep(const Json& root) {
  require_keys(root, "config", {"schema_version", "input", "score", "seed", "jobs"});
  if (!root.contains("input") || !root.at("input").is_string()) throw ConfigError("config: 'input' must be a path");
  const ScoreKind score = parse_score_kind(root.value("score", std::string("f1")));
  const CsvTable table = read_csv_file(root.at("input").get<std::string>());
  const std::size_t pc = table.column("prediction");
  const std::size_t lc = table.column("label");
  std::vector<double> predictions;
  std::vector<int> labels;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    double p = 0.0;
    double y = 0.0;
    if (!parse_number(table.rows[r][pc], p) || !parse_number(table.rows[r][lc], y) || (y != 0.0 && y != 1.0)) {
      throw DataError("row " + std::to_string(r + 2) + ": expected a numeric prediction and a 0/1 label");
    }
    predictions.push_back(p);
    labels.push_back(static_cast<int>(y));
  }
  LabeledBatch batch = [&] {
    try {
      return LabeledBatch(std::move(predictions), std::move(labels));
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
  }();
  const ThresholdSweepResult best = sweep(batch, score);
  CsvTable curve;
  curve.header = {"tau", "score"};
  for (const auto& point : best.score_curve) curve.rows.push_back({format_number(point.tau), format_number(point.score)});
  const ClassicalConfusion cm = classical_cm(batch, best.tau_star);
  Json summary = {{"score", to_string(score)},
                  {"tau_star", best.tau_star},
                  {"best_score", best.best_score},
                  {"plateau_lower", best.plateau_lower},
                  {"plateau_upper", best.plateau_upper},
                  {"score_half", score_value(score, classical_cm(batch, 0.5))},
                  {"confusion_tau_star", {{"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}, {"tp", cm.tp}}}};
  CommandOutcome out;
  out.summary = summary.dump();
  out.artifacts = {{"curve.csv", csv_text(curve)}, {"sweep.json", json_text(summary)}};
  return out;
}

CommandOutcome run_verify(const Json& root) {
  require_keys(root, "config", {"schema_version", "verify", "seed", "jobs"});
  VerifySuiteConfig c = verify_from_json(root.contains("verify") ? root.at("verify") : Json::object());
  c.seed = root.value("seed", c.seed);
  c.jobs = root.value("jobs", c.jobs);
  c.validate();
  const std::vector<VerifyRow> rows = run_verify_suite(c);
  CsvTable report;
  report.header = {"check", "parameters", "lhs", "rhs", "std_error", "asserted", "pass"};
  std::size_t asserted = 0;
  std::size_t violations = 0;
  for (const auto& r : rows) {
    report.rows.push_back({r.check, r.parameters, format_number(r.lhs), format_number(r.rhs),
                           format_number(r.std_error), r.asserted ? "1" : "0", r.pass ? "1" : "0"});
    if (r.asserted) {
      ++asserted;
      if (!r.pass) ++violations;
    }
  }
  Json summary = {{"rows", rows.size()}, {"asserted", asserted}, {"violations", violations}, {"seed", c.seed}};
  CommandOutcome out;
  out.code = violations == 0 ? ExitCode::Ok : ExitCode::Verification;
  if (violations != 0) out.error = std::to_string(violations) + " asserted check(s) failed";
  out.summary = summary.dump();
  out.artifacts = {{"verify_report.csv", csv_text(report)}, {"verify_summary.json", json_text(summary)}};
  return out;
}

Json to_json(const MeanStd& m) { return {{"mean", number_or_null(m.mean)}, {"std", number_or_null(m.stddev)}}; }

CommandOutcome run_experiment_command(const Json& root) {
  require_keys(root, "config", {"schema_version", "data", "plan", "network", "train", "losses", "score", "repeats",
                                "resample", "seed", "histogram_bins", "jobs"});
  const ExperimentConfig config = experiment_from_json(root);
  const ExperimentResult result = run_experiment(config);

  Json aggregate = Json::array();
  for (const auto& row : result.aggregate) {
    aggregate.push_back({{"loss", row.loss},
                         {"runs", row.runs},
                         {"success", row.success},
                         {"out_of_support", row.out_of_support},
                         {"epochs", to_json(row.epochs)},
                         {"tau_star", to_json(row.tau_star)},
                         {"score_tau_star", to_json(row.score_tau_star)},
                         {"score_half", to_json(row.score_half)},
                         {"test_score_tau_star", to_json(row.test_score_tau_star)},
                         {"test_score_half", to_json(row.test_score_half)}});
  }
  std::string runs;
  for (const auto& r : result.runs) {
    const Json line = {{"repeat", r.repeat},
                       {"loss", r.loss},
                       {"success", r.success},
                       {"failure", r.failure},
                       {"out_of_support", r.out_of_support},
                       {"epochs", r.epochs},
                       {"tau_star", number_or_null(r.tau_star)},
                       {"train_score_tau_star", number_or_null(r.train_score_tau_star)},
                       {"train_score_half", number_or_null(r.train_score_half)},
                       {"test_score_tau_star", number_or_null(r.test_score_tau_star)},
                       {"test_score_half", number_or_null(r.test_score_half)},
                       {"train_rows", r.train_rows},
                       {"train_positives", r.train_positives},
                       {"test_rows", r.test_rows},
                       {"test_positives", r.test_positives}};
    runs += line.dump() + "\n";
  }

  CommandOutcome out;
  Json histograms = Json::array();
  const bool any_success = std::any_of(result.runs.begin(), result.runs.end(), [](const RunRecord& r) { return r.success; });
  CsvTable hist;
  hist.header = {"loss", "bin_left", "bin_right", "count", "density", "pdf"};
  if (any_success) {
    for (const auto& report : threshold_distribution_report(result, config.losses, config.histogram_bins)) {
      histograms.push_back({{"loss", report.loss},
                            {"mean", report.histogram.mean},
                            {"std", report.histogram.stddev}});
      for (auto row : histogram_csv(report).rows) {
        row.insert(row.begin(), report.loss);
        hist.rows.push_back(std::move(row));
      }
    }
  }
  Json summary = {{"score", result.score},
                  {"rows", result.rows},
                  {"positives", result.positives},
                  {"features", result.features},
                  {"repeats", config.repeats},
                  {"aggregate", aggregate},
                  {"thresholds", histograms}};
  out.summary = summary.dump();
  out.artifacts = {{"aggregate.csv", csv_text(aggregate_csv(result))},
                   {"aggregate.json", json_text(summary)},
                   {"runs.jsonl", runs},
                   {"thresholds.csv", csv_text(hist)}};
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string manifest_json(std::string_view command, const std::vector<Artifact>& artifacts) {
  Json files = Json::array();
  for (const auto& a : artifacts) {
    files.push_back({{"path", a.name}, {"bytes", a.content.size()}, {"sha256", sha256_hex(a.content)}});
  }
  return json_text({{"schema_version", kSchemaVersion}, {"command", command}, {"files", files}});
}

CommandOutcome run_command(std::string_view subcommand, std::string_view config_text,
                           const std::vector<std::string>& overrides) {
  CommandOutcome out;
  try {
    Json root = parse_config(config_text);
    for (const auto& o : overrides) apply_override(root, o);
    if (subcommand == "prepare") {
      out = run_prepare(root);
    } else if (subcommand == "train") {
      out = run_train(root);
    } else if (subcommand == "sweep") {
      out = run_sweep(root);
    } else if (subcommand == "verify") {
      out = run_verify(root);
    } else if (subcommand == "experiment") {
      out = run_experiment_command(root);
    } else {
      throw ConfigError("unknown subcommand '" + std::string(subcommand) + "'");
    }
    if (out.code == ExitCode::Ok || out.code == ExitCode::Verification) {
      out.artifacts.push_back({"config.json", json_text(root)});
    }
  } catch (const ConfigError& e) {
    out = {ExitCode::Config, "", e.what(), {}};
  } catch (const DataError& e) {
    out = {ExitCode::Data, "", e.what(), {}};
  } catch (const NumericError& e) {
    out = {ExitCode::Numeric, "", e.what(), {}};
  } catch (const Json::exception& e) {
    out = {ExitCode::Config, "", e.what(), {}};
  } catch (const std::exception& e) {
    out = {ExitCode::Internal, "", e.what(), {}};
  }
  return out;
}

void write_outputs(const std::filesystem::path& out_dir, std::string_view command,
                   const std::vector<Artifact>& artifacts) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(out_dir / name, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw DataError("cannot write " + (out_dir / name).string());
  };
  for (const auto& a : artifacts) write(a.name, a.content);
  write("manifest.json", manifest_json(command, artifacts));
}

}  // namespace sol
