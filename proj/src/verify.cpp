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

#include "sol/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sol/errors.hpp"
#include "sol/parallel.hpp"

namespace sol {

namespace {

constexpr double kSigmas = 3.0;
// Absolute slack for comparisons that are exact in real arithmetic.
constexpr double kRoundoff = 1e-12;

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanAndError mean_and_error(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  // Shifted by the first value; a constant sample has an exact mean.
  const double pivot = values.front();
  double shifted = 0.0;
  for (double v : values) shifted += v - pivot;
  const double mean = pivot + shifted / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = values.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(variance / n)};
}

std::array<double, 4> vec(const ExpectedConfusion& cm) { return {cm.tn, cm.fp, cm.fn, cm.tp}; }

void require_samples(std::span<const ClassicalConfusion> samples) {
  if (samples.empty()) throw std::invalid_argument("no Monte-Carlo samples");
}

std::string format_params(const LabeledBatch& batch, const ThresholdDistribution& dist,
                          const std::string& extra = {}) {
  std::ostringstream out;
  out << "n=" << batch.size() << " n_pos=" << batch.positives() << " dist=" << dist.label();
  if (!extra.empty()) out << ' ' << extra;
  return out.str();
}

}  // namespace

std::string to_string(Entry entry) {
  switch (entry) {
    case Entry::TN: return "tn";
    case Entry::FP: return "fp";
    case Entry::FN: return "fn";
    case Entry::TP: return "tp";
  }
  return "?";
}

std::vector<ClassicalConfusion> sample_confusions(const LabeledBatch& batch,
                                                  const ThresholdDistribution& dist,
                                                  std::size_t draws, Rng& rng) {
  if (draws == 0) throw std::invalid_argument("draw count must be positive");
  const ThresholdCounter counter(batch);
  std::vector<ClassicalConfusion> out;
  out.reserve(draws);
  for (std::size_t k = 0; k < draws; ++k) out.push_back(counter.at(dist.sample_one(rng)));
  return out;
}

std::vector<ThresholdPiece> threshold_pieces(const LabeledBatch& batch, const ThresholdDistribution& dist) {
  std::vector<double> cuts(batch.predictions().begin(), batch.predictions().end());
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const ThresholdCounter counter(batch);
  std::vector<ThresholdPiece> pieces;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    ThresholdPiece p;
    p.lower = cuts[k];
    p.upper = cuts[k + 1];
    p.probability = dist.cdf(p.upper) - dist.cdf(p.lower);
    p.cm = counter.at(0.5 * (p.lower + p.upper));
    pieces.push_back(p);
  }
  return pieces;
}

double exact_expectation(std::span<const ThresholdPiece> pieces,
                         const std::function<double(const ClassicalConfusion&)>& g) {
  double total = 0.0;
  for (const auto& p : pieces) {
    if (p.probability > 0.0) total += p.probability * g(p.cm);
  }
  return total;
}

std::array<EntryExpectation, 4> check_expectation_identity(const LabeledBatch& batch,
                                                           const ThresholdDistribution& dist,
                                                           std::span<const ClassicalConfusion> samples) {
  require_samples(samples);
  const auto expected = expected_cm(batch, dist);
  const double draws = static_cast<double>(samples.size());
  std::array<EntryExpectation, 4> out;
  const std::array<Entry, 4> entries = {Entry::TN, Entry::FP, Entry::FN, Entry::TP};
  for (std::size_t k = 0; k < 4; ++k) {
    const Entry e = entries[k];
    double sum = 0.0;
    for (const auto& cm : samples) sum += static_cast<double>(entry_of(cm, e));
    auto& r = out[k];
    r.entry = e;
    r.mc_mean = sum / draws;
    r.expected = entry_of(expected, e);
    const double row = static_cast<double>(is_negative_row(e) ? batch.negatives() : batch.positives());
    const double p = row > 0.0 ? std::clamp(r.expected / row, 0.0, 1.0) : 0.0;
    r.std_error = row * std::sqrt(p * (1.0 - p) / draws);
    r.passes = std::abs(r.mc_mean - r.expected) <= kSigmas * r.std_error + kRoundoff;
  }
  return out;
}

bool BoundCheckReport::any_violation() const {
  return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.violated; });
}

double hoeffding_bound(double epsilon, double range_sq) {
  if (epsilon <= 0.0) return 2.0;
  if (range_sq <= 0.0) return 0.0;
  return 2.0 * std::exp(-2.0 * epsilon * epsilon / range_sq);
}

namespace {

BoundCheckReport tail_report(std::string name, std::span<const double> deviations,
                             std::span<const double> epsilon_grid, double range_sq) {
  BoundCheckReport report;
  report.name = std::move(name);
  const double draws = static_cast<double>(deviations.size());
  for (double eps : epsilon_grid) {
    BoundCheckRow row;
    row.epsilon = eps;
    std::size_t hits = 0;
    // Deviations within roundoff of eps count as reaching it.
    for (double d : deviations) hits += d >= eps - kRoundoff ? 1 : 0;
    row.empirical_tail = static_cast<double>(hits) / draws;
    row.bound = hoeffding_bound(eps, range_sq);
    row.std_error = std::sqrt(row.empirical_tail * (1.0 - row.empirical_tail) / draws);
    row.violated = row.empirical_tail > row.bound + kSigmas * row.std_error;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace

BoundCheckReport check_entry_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           Entry entry, std::span<const double> epsilon_grid,
                                           std::span<const ClassicalConfusion> samples) {
  require_samples(samples);
  const double center = entry_of(expected_cm(batch, dist), entry);
  std::vector<double> deviations;
  deviations.reserve(samples.size());
  for (const auto& cm : samples) deviations.push_back(std::abs(static_cast<double>(entry_of(cm, entry)) - center));
  const double row = static_cast<double>(is_negative_row(entry) ? batch.negatives() : batch.positives());
  return tail_report("entry_concentration_" + to_string(entry), deviations, epsilon_grid, row * row);
}

BoundCheckReport check_entry_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           Entry entry, std::span<const double> epsilon_grid,
                                           std::size_t mc_draws, Rng& rng) {
  const auto samples = sample_confusions(batch, dist, mc_draws, rng);
  return check_entry_concentration(batch, dist, entry, epsilon_grid, samples);
}

BoundCheckReport check_trace_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           std::span<const double> epsilon_grid,
                                           std::span<const ClassicalConfusion> samples) {
  require_samples(samples);
  const double center = expected_cm(batch, dist).trace();
  std::vector<double> deviations;
  deviations.reserve(samples.size());
  for (const auto& cm : samples) deviations.push_back(std::abs(static_cast<double>(cm.trace()) - center));
  const double neg = static_cast<double>(batch.negatives());
  const double pos = static_cast<double>(batch.positives());
  return tail_report("trace_concentration", deviations, epsilon_grid, neg * neg + pos * pos);
}

BoundCheckReport check_trace_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           std::span<const double> epsilon_grid, std::size_t mc_draws,
                                           Rng& rng) {
  const auto samples = sample_confusions(batch, dist, mc_draws, rng);
  return check_trace_concentration(batch, dist, epsilon_grid, samples);
}

ScoreExpectationReport check_score_expectation(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                               ScoreKind kind, std::span<const ClassicalConfusion> samples) {
  require_samples(samples);
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& cm : samples) values.push_back(score_value(kind, cm));
  const auto stats = mean_and_error(values);
  ScoreExpectationReport r;
  r.mc_mean = stats.mean;
  r.std_error = stats.std_error;
  r.expected_score = score_value(kind, expected_cm(batch, dist));
  r.gap = r.mc_mean - r.expected_score;
  r.asserted = is_linear_on_rows(kind);
  r.passes = !r.asserted || std::abs(r.gap) <= kSigmas * r.std_error + kRoundoff;
  return r;
}

ScoreExpectationReport check_score_expectation(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                               ScoreKind kind, std::size_t mc_draws, Rng& rng) {
  const auto samples = sample_confusions(batch, dist, mc_draws, rng);
  return check_score_expectation(batch, dist, kind, samples);
}

std::array<std::array<double, 4>, 4> score_hessian(ScoreKind kind, const ExpectedConfusion& at) {
  std::array<std::array<double, 4>, 4> h{};
  const auto x = vec(at);
  for (std::size_t k = 0; k < 4; ++k) {
    const double step = 1e-5 * std::max(1.0, std::abs(x[k]));
    auto plus = x;
    auto minus = x;
    plus[k] += step;
    double width = 2.0 * step;
    if (x[k] - step >= 0.0) {
      minus[k] -= step;
    } else {
      width = step;  // forward difference at the boundary of the orthant
    }
    const auto gp = score_gradient_wrt_entries(kind, {plus[0], plus[1], plus[2], plus[3]});
    const auto gm = score_gradient_wrt_entries(kind, {minus[0], minus[1], minus[2], minus[3]});
    for (std::size_t j = 0; j < 4; ++j) h[j][k] = (gp[j] - gm[j]) / width;
  }
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t k = j + 1; k < 4; ++k) {
      const double s = 0.5 * (h[j][k] + h[k][j]);
      h[j][k] = h[k][j] = s;
    }
  }
  return h;
}

namespace {

// Weighted moments of d = vec(CM) - vec(center).
struct DeviationMoments {
  double mean_score = 0.0;
  std::array<double, 4> first{};
  std::array<std::array<double, 4>, 4> second{};
};

TaylorReport taylor_from_moments(ScoreKind kind, const ExpectedConfusion& center, const DeviationMoments& m) {
  TaylorReport r;
  r.mean_score = m.mean_score;
  r.expected_score = score_value(kind, center);
  const auto g = score_gradient_wrt_entries(kind, center);
  const auto h = score_hessian(kind, center);
  double first = 0.0;
  for (std::size_t j = 0; j < 4; ++j) first += g[j] * m.first[j];
  double second = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t k = 0; k < 4; ++k) second += 0.5 * h[j][k] * m.second[j][k];
  }
  r.zeroth_gap = r.mean_score - r.expected_score;
  r.first_order_gap = r.zeroth_gap - first;
  r.second_order_gap = r.first_order_gap - second;
  return r;
}

void accumulate(DeviationMoments& m, ScoreKind kind, const ClassicalConfusion& cm,
                const ExpectedConfusion& center, double weight) {
  const auto x = vec(to_real(cm));
  const auto c = vec(center);
  std::array<double, 4> d{};
  for (std::size_t j = 0; j < 4; ++j) d[j] = x[j] - c[j];
  m.mean_score += weight * score_value(kind, cm);
  for (std::size_t j = 0; j < 4; ++j) {
    m.first[j] += weight * d[j];
    for (std::size_t k = 0; k < 4; ++k) m.second[j][k] += weight * d[j] * d[k];
  }
}

}  // namespace

TaylorReport taylor_correction(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::span<const ClassicalConfusion> samples) {
  require_samples(samples);
  const auto center = expected_cm(batch, dist);
  DeviationMoments m;
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const auto& cm : samples) accumulate(m, kind, cm, center, w);
  return taylor_from_moments(kind, center, m);
}

TaylorReport taylor_correction(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::size_t mc_draws, Rng& rng) {
  const auto samples = sample_confusions(batch, dist, mc_draws, rng);
  return taylor_correction(batch, dist, kind, samples);
}

TaylorReport taylor_correction_exact(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                     ScoreKind kind) {
  const auto center = expected_cm(batch, dist);
  DeviationMoments m;
  for (const auto& p : threshold_pieces(batch, dist)) {
    if (p.probability > 0.0) accumulate(m, kind, p.cm, center, p.probability);
  }
  return taylor_from_moments(kind, center, m);
}

double estimate_lipschitz(ScoreKind kind, std::size_t negatives, std::size_t positives,
                          std::size_t refinement, std::span<const ExpectedConfusion> extra) {
  if (refinement == 0) throw std::invalid_argument("lattice refinement must be positive");
  auto sup_norm = [kind](const ExpectedConfusion& cm) {
    double best = 0.0;
    for (double g : score_gradient_wrt_entries(kind, cm)) best = std::max(best, std::abs(g));
    return best;
  };
  const double neg = static_cast<double>(negatives);
  const double pos = static_cast<double>(positives);
  const double r = static_cast<double>(refinement);
  double best = 0.0;
  for (std::size_t a = 0; a <= negatives * refinement; ++a) {
    const double tn = static_cast<double>(a) / r;
    for (std::size_t b = 0; b <= positives * refinement; ++b) {
      const double tp = static_cast<double>(b) / r;
      best = std::max(best, sup_norm({tn, neg - tn, pos - tp, tp}));
    }
  }
  for (const auto& cm : extra) best = std::max(best, sup_norm(cm));
  return best;
}

MadBoundReport check_mad_bound(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::span<const ClassicalConfusion> samples) {
  require_samples(samples);
  const auto center = expected_cm(batch, dist);
  const double s_bar = score_value(kind, center);
  const std::array<ExpectedConfusion, 1> observed = {center};
  MadBoundReport r;
  r.lipschitz = estimate_lipschitz(kind, batch.negatives(), batch.positives(), 1, observed);

  const double draws = static_cast<double>(samples.size());
  std::vector<double> slack;
  slack.reserve(samples.size());
  for (const auto& cm : samples) {
    const double dtn = std::abs(static_cast<double>(cm.tn) - center.tn);
    const double dtp = std::abs(static_cast<double>(cm.tp) - center.tp);
    const double ds = std::abs(score_value(kind, cm) - s_bar);
    const double j = std::abs(dtn - dtp);
    r.lhs += ds;
    r.j_f += j;
    r.mad_tn += dtn;
    r.mad_tp += dtp;
    slack.push_back(ds - 0.5 * r.lipschitz * (j + dtn + dtp));
  }
  r.lhs /= draws;
  r.j_f /= draws;
  r.mad_tn /= draws;
  r.mad_tp /= draws;
  r.rhs = 0.5 * r.lipschitz * (r.j_f + r.mad_tn + r.mad_tp);
  r.std_error = mean_and_error(slack).std_error;
  r.passes = r.lhs - r.rhs <= kSigmas * r.std_error + kRoundoff;
  return r;
}

MadBoundReport check_mad_bound(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::size_t mc_draws, Rng& rng) {
  const auto samples = sample_confusions(batch, dist, mc_draws, rng);
  return check_mad_bound(batch, dist, kind, samples);
}

void VerifySuiteConfig::validate() const {
  if (draws < 10000) throw ConfigError("verify draws must be at least 10^4");
  if (batches == 0) throw ConfigError("verify needs at least one batch");
  if (max_batch_size < 2) throw ConfigError("verify max_batch_size must be >= 2");
  if (distributions.empty()) throw ConfigError("verify needs at least one distribution");
  if (jobs == 0) throw ConfigError("jobs must be positive");
  for (double e : epsilons) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("epsilon grid values must be finite and >= 0");
  }
}

LabeledBatch random_batch(Rng& rng, std::size_t max_n) {
  if (max_n < 2) throw std::invalid_argument("random batch needs max_n >= 2");
  std::uniform_int_distribution<std::size_t> size(2, max_n);
  const std::size_t n = size(rng);
  std::vector<double> p(n);
  std::vector<int> y(n);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = open_unit(rng);
    y[i] = coin(rng) ? 1 : 0;
  }
  // Both classes present.
  y[0] = 0;
  y[1] = 1;
  return LabeledBatch(std::move(p), std::move(y));
}

namespace {

void append_suite_rows(std::vector<VerifyRow>& rows, const LabeledBatch& batch,
                       const ThresholdDistribution& dist, const VerifySuiteConfig& config,
                       std::size_t batch_index, Rng& rng) {
  const auto samples = sample_confusions(batch, dist, config.draws, rng);
  const std::string base = "batch=" + std::to_string(batch_index) + " " + format_params(batch, dist);

  for (const auto& e : check_expectation_identity(batch, dist, samples)) {
    rows.push_back({"expectation_identity", base + " entry=" + to_string(e.entry), e.mc_mean, e.expected,
                    e.std_error, true, e.passes});
  }

  const auto cm = expected_cm(batch, dist);
  const double row_error = std::max(std::abs(cm.negatives() - static_cast<double>(batch.negatives())),
                                    std::abs(cm.positives() - static_cast<double>(batch.positives())));
  rows.push_back({"row_sums", base, row_error, 1e-9, 0.0, true, row_error < 1e-9});

  std::vector<double> grid = config.epsilons;
  grid.push_back(static_cast<double>(std::max(batch.negatives(), batch.positives())));
  for (Entry e : {Entry::TN, Entry::FP, Entry::FN, Entry::TP}) {
    const auto report = check_entry_concentration(batch, dist, e, grid, samples);
    for (const auto& r : report.rows) {
      std::ostringstream p;
      p << base << " eps=" << r.epsilon;
      rows.push_back({report.name, p.str(), r.empirical_tail, r.bound, r.std_error, true, !r.violated});
    }
  }
  const auto trace = check_trace_concentration(batch, dist, grid, samples);
  for (const auto& r : trace.rows) {
    std::ostringstream p;
    p << base << " eps=" << r.epsilon;
    rows.push_back({trace.name, p.str(), r.empirical_tail, r.bound, r.std_error, true, !r.violated});
  }

  for (ScoreKind kind : {ScoreKind::Accuracy, ScoreKind::F1, ScoreKind::TSS, ScoreKind::CSI}) {
    const auto s = check_score_expectation(batch, dist, kind, samples);
    rows.push_back({"score_expectation", base + " score=" + to_string(kind), s.mc_mean, s.expected_score,
                    s.std_error, s.asserted, s.passes});
    const auto mad = check_mad_bound(batch, dist, kind, samples);
    rows.push_back({"mad_bound", base + " score=" + to_string(kind), mad.lhs, mad.rhs, mad.std_error, true,
                    mad.passes});
  }
  for (ScoreKind kind : {ScoreKind::F1, ScoreKind::CSI}) {
    const auto t = taylor_correction(batch, dist, kind, samples);
    rows.push_back({"taylor_correction", base + " score=" + to_string(kind), std::abs(t.second_order_gap),
                    std::abs(t.zeroth_gap), 0.0, false, true});
  }
  const double k_acc = estimate_lipschitz(ScoreKind::Accuracy, batch.negatives(), batch.positives());
  const double one_over_n = 1.0 / static_cast<double>(batch.size());
  rows.push_back({"lipschitz_accuracy", base, k_acc, one_over_n, 0.0, true, k_acc == one_over_n});
}

}  // namespace

std::vector<VerifyRow> run_verify_suite(const VerifySuiteConfig& config) {
  config.validate();
  // Each (batch, distribution) task owns an independently seeded stream, so
  // results do not depend on the worker count.
  const std::size_t tasks = config.batches * config.distributions.size();
  std::vector<std::vector<VerifyRow>> per_task(tasks);
  std::vector<LabeledBatch> batches;
  Rng batch_rng(derive_seed(config.seed, 0, 0xBA7C));
  for (std::size_t b = 0; b < config.batches; ++b) batches.push_back(random_batch(batch_rng, config.max_batch_size));

  parallel_for(tasks, config.jobs, [&](std::size_t t) {
    const std::size_t b = t / config.distributions.size();
    const std::size_t d = t % config.distributions.size();
    Rng rng(derive_seed(config.seed, t + 1));
    append_suite_rows(per_task[t], batches[b], config.distributions[d], config, b, rng);
  });

  std::vector<VerifyRow> rows;
  for (auto& chunk : per_task) rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

}  // namespace sol
