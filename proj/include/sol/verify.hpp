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

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sol/confusion.hpp"
#include "sol/distributions.hpp"
#include "sol/scores.hpp"

namespace sol {

enum class Entry { TN, FP, FN, TP };

std::string to_string(Entry entry);
template <class T>
T entry_of(const ConfusionMatrix<T>& cm, Entry e) {
  switch (e) {
    case Entry::TN: return cm.tn;
    case Entry::FP: return cm.fp;
    case Entry::FN: return cm.fn;
    case Entry::TP: return cm.tp;
  }
  return T{};
}
/// True for TN and FP, whose row sums to the number of negatives.
inline bool is_negative_row(Entry e) { return e == Entry::TN || e == Entry::FP; }

/// Classical matrices at `draws` thresholds sampled from `dist`.
std::vector<ClassicalConfusion> sample_confusions(const LabeledBatch& batch,
                                                  const ThresholdDistribution& dist,
                                                  std::size_t draws, Rng& rng);

/// The threshold axis split into the pieces on which CM(tau) is constant,
/// each with its probability under `dist`. Expectations over tau are exact
/// finite sums over these pieces.
struct ThresholdPiece {
  double lower = 0.0;
  double upper = 0.0;
  double probability = 0.0;
  ClassicalConfusion cm;
};
std::vector<ThresholdPiece> threshold_pieces(const LabeledBatch& batch, const ThresholdDistribution& dist);

/// E_tau[g(CM(tau))] computed exactly over the pieces.
double exact_expectation(std::span<const ThresholdPiece> pieces,
                         const std::function<double(const ClassicalConfusion&)>& g);

// --- Expectation identity ----------------------------------------------------

struct EntryExpectation {
  Entry entry = Entry::TN;
  double mc_mean = 0.0;
  double expected = 0.0;
  /// Binomial-style standard error: row * sqrt(p (1 - p) / draws) with
  /// p = expected / row, an upper bound for any variable bounded by the row.
  double std_error = 0.0;
  bool passes = true;
};

/// Monte-Carlo mean of every classical entry against the expected matrix, at
/// 3 binomial-style standard errors.
std::array<EntryExpectation, 4> check_expectation_identity(const LabeledBatch& batch,
                                                           const ThresholdDistribution& dist,
                                                           std::span<const ClassicalConfusion> samples);

// --- Concentration bounds ----------------------------------------------------

struct BoundCheckRow {
  double epsilon = 0.0;
  double empirical_tail = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  bool violated = false;
};

struct BoundCheckReport {
  std::string name;
  std::vector<BoundCheckRow> rows;
  bool any_violation() const;
};

/// Hoeffding-type bound 2 exp(-2 eps^2 / range_sq); 2 at eps = 0 and 0 when
/// the range is zero.
double hoeffding_bound(double epsilon, double range_sq);

/// Tail P(|N(tau) - N_bar| >= eps) of one entry against
/// 2 exp(-2 eps^2 / row^2), where row is n- for TN/FP and n+ for FN/TP.
BoundCheckReport check_entry_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           Entry entry, std::span<const double> epsilon_grid,
                                           std::size_t mc_draws, Rng& rng);
BoundCheckReport check_entry_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           Entry entry, std::span<const double> epsilon_grid,
                                           std::span<const ClassicalConfusion> samples);

/// Tail of the trace TN + TP against 2 exp(-2 eps^2 / ((n-)^2 + (n+)^2)).
BoundCheckReport check_trace_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           std::span<const double> epsilon_grid, std::size_t mc_draws,
                                           Rng& rng);
BoundCheckReport check_trace_concentration(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                           std::span<const double> epsilon_grid,
                                           std::span<const ClassicalConfusion> samples);

// --- Score expectation -------------------------------------------------------

struct ScoreExpectationReport {
  double mc_mean = 0.0;
  double expected_score = 0.0;  // score of the expected matrix
  double gap = 0.0;             // mc_mean - expected_score
  double std_error = 0.0;       // sample standard error of mc_mean
  bool asserted = false;        // equality asserted only for row-linear scores
  bool passes = true;
};

ScoreExpectationReport check_score_expectation(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                               ScoreKind kind, std::size_t mc_draws, Rng& rng);
ScoreExpectationReport check_score_expectation(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                               ScoreKind kind, std::span<const ClassicalConfusion> samples);

// --- Taylor correction -------------------------------------------------------

struct TaylorReport {
  double mean_score = 0.0;
  double expected_score = 0.0;
  double zeroth_gap = 0.0;        // E[s] - s_bar
  double first_order_gap = 0.0;   // E[s] - (s_bar + grad . E[d])
  double second_order_gap = 0.0;  // ... - (1/2) sum H_jk E[d_j d_k]
};

/// Gap between E_tau[s(CM(tau))] and s(CM_bar) before and after adding the
/// first- and second-order terms of the multivariate Taylor expansion around
/// CM_bar. Moments of d = vec(CM(tau) - CM_bar) come from the samples.
TaylorReport taylor_correction(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::size_t mc_draws, Rng& rng);
TaylorReport taylor_correction(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::span<const ClassicalConfusion> samples);
/// Same with exact moments from the threshold pieces (no sampling noise).
TaylorReport taylor_correction_exact(const LabeledBatch& batch, const ThresholdDistribution& dist,
                                     ScoreKind kind);

/// Hessian of the score w.r.t. (tn, fp, fn, tp) by central differences of the
/// analytic gradient.
std::array<std::array<double, 4>, 4> score_hessian(ScoreKind kind, const ExpectedConfusion& at);

// --- Mean absolute deviation bound -------------------------------------------

/// max ||grad s||_inf over the lattice TN in {0, 1/r, ..., n-}, TP in
/// {0, 1/r, ..., n+} of the row-constrained set (r = refinement), plus any
/// extra matrices supplied.
double estimate_lipschitz(ScoreKind kind, std::size_t negatives, std::size_t positives,
                          std::size_t refinement = 1, std::span<const ExpectedConfusion> extra = {});

struct MadBoundReport {
  double lhs = 0.0;  // E|s(tau) - s_bar|
  double rhs = 0.0;  // (1/2) K (J + mad[TN] + mad[TP])
  double lipschitz = 0.0;
  double j_f = 0.0;
  double mad_tn = 0.0;
  double mad_tp = 0.0;
  double std_error = 0.0;  // of the per-draw difference lhs - rhs
  bool passes = true;
};

MadBoundReport check_mad_bound(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::size_t mc_draws, Rng& rng);
MadBoundReport check_mad_bound(const LabeledBatch& batch, const ThresholdDistribution& dist, ScoreKind kind,
                               std::span<const ClassicalConfusion> samples);

// --- Default suite -----------------------------------------------------------

/// One machine-readable result line.
struct VerifyRow {
  std::string check;
  std::string parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;
  bool asserted = true;
  bool pass = true;
};

struct VerifySuiteConfig {
  std::uint64_t seed = 20260101;
  std::size_t draws = 100000;
  std::size_t batches = 20;
  std::size_t max_batch_size = 50;
  std::vector<ThresholdDistribution> distributions = {
      ThresholdDistribution::uniform(), ThresholdDistribution::raised_cosine(0.5, 0.1),
      ThresholdDistribution::raised_cosine(0.3, 0.3)};
  std::vector<double> epsilons = {0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0};
  std::size_t jobs = 1;

  void validate() const;
};

/// Random batch with n in [2, max_n], uniform predictions and both classes present.
LabeledBatch random_batch(Rng& rng, std::size_t max_n);

/// Runs expectation identity, row sums, concentration, score expectation,
/// Taylor and mad checks over random batches x distributions.
std::vector<VerifyRow> run_verify_suite(const VerifySuiteConfig& config);

}  // namespace sol
