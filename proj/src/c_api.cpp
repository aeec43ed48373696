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

#include "sol/sol.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "sol/app.hpp"
#include "sol/confusion.hpp"
#include "sol/distributions.hpp"
#include "sol/errors.hpp"
#include "sol/network.hpp"
#include "sol/scores.hpp"
#include "sol/threshold_opt.hpp"

struct sol_distribution {
  sol::ThresholdDistribution dist;
};

struct sol_batch {
  sol::LabeledBatch batch;
};

struct sol_model {
  sol::NetworkSpec spec;
  sol::WeightSet weights;
};

namespace {

thread_local std::string last_error;

sol_status fail(sol_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
sol_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return SOL_OK;
  } catch (const sol::ConfigError& e) {
    return fail(SOL_ERR_CONFIG, e.what());
  } catch (const sol::DataError& e) {
    return fail(SOL_ERR_DATA, e.what());
  } catch (const sol::NumericError& e) {
    return fail(SOL_ERR_NUMERIC, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SOL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(SOL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SOL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SOL_ERR_INTERNAL, "unknown error");
  }
}

sol::ScoreKind to_kind(sol_score score) {
  switch (score) {
    case SOL_SCORE_ACCURACY:
      return sol::ScoreKind::Accuracy;
    case SOL_SCORE_F1:
      return sol::ScoreKind::F1;
    case SOL_SCORE_TSS:
      return sol::ScoreKind::TSS;
    case SOL_SCORE_CSI:
      return sol::ScoreKind::CSI;
  }
  throw std::invalid_argument("unknown score");
}

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

sol_confusion to_c(const sol::ExpectedConfusion& cm) { return {cm.tn, cm.fp, cm.fn, cm.tp}; }

char* duplicate(const std::string& text) {
  auto* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* sol_version(void) { return "1.0.0"; }

const char* sol_last_error(void) { return last_error.c_str(); }

sol_status sol_distribution_uniform(sol_distribution** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new sol_distribution{sol::ThresholdDistribution::uniform()};
  });
}

sol_status sol_distribution_raised_cosine(double mu, double delta, sol_distribution** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = new sol_distribution{sol::ThresholdDistribution::raised_cosine(mu, delta)};
  });
}

void sol_distribution_free(sol_distribution* dist) { delete dist; }

sol_status sol_distribution_pdf(const sol_distribution* dist, double x, double* out) {
  return guarded([&] {
    require(dist != nullptr && out != nullptr, "arguments must not be NULL");
    *out = dist->dist.pdf(x);
  });
}

sol_status sol_distribution_cdf(const sol_distribution* dist, double x, double* out) {
  return guarded([&] {
    require(dist != nullptr && out != nullptr, "arguments must not be NULL");
    *out = dist->dist.cdf(x);
  });
}

sol_status sol_distribution_quantile(const sol_distribution* dist, double p, double* out) {
  return guarded([&] {
    require(dist != nullptr && out != nullptr, "arguments must not be NULL");
    *out = dist->dist.quantile(p);
  });
}

sol_status sol_distribution_sample(const sol_distribution* dist, uint64_t seed, size_t count, double* out) {
  return guarded([&] {
    require(dist != nullptr && (out != nullptr || count == 0), "arguments must not be NULL");
    sol::Rng rng(seed);
    const auto draws = dist->dist.sample(rng, count);
    std::copy(draws.begin(), draws.end(), out);
  });
}

sol_status sol_batch_create(const double* predictions, const int* labels, size_t n, sol_batch** out) {
  return guarded([&] {
    require(out != nullptr && predictions != nullptr && labels != nullptr, "arguments must not be NULL");
    *out = new sol_batch{sol::LabeledBatch(std::vector<double>(predictions, predictions + n),
                                           std::vector<int>(labels, labels + n))};
  });
}

void sol_batch_free(sol_batch* batch) { delete batch; }

sol_status sol_classical_cm(const sol_batch* batch, double tau, sol_confusion* out) {
  return guarded([&] {
    require(batch != nullptr && out != nullptr, "arguments must not be NULL");
    *out = to_c(sol::to_real(sol::classical_cm(batch->batch, tau)));
  });
}

sol_status sol_expected_cm(const sol_batch* batch, const sol_distribution* dist, sol_confusion* out) {
  return guarded([&] {
    require(batch != nullptr && dist != nullptr && out != nullptr, "arguments must not be NULL");
    *out = to_c(sol::expected_cm(batch->batch, dist->dist));
  });
}

sol_status sol_score_value(sol_score score, const sol_confusion* cm, double* out) {
  return guarded([&] {
    require(cm != nullptr && out != nullptr, "arguments must not be NULL");
    *out = sol::score_value(to_kind(score), sol::ExpectedConfusion{cm->tn, cm->fp, cm->fn, cm->tp});
  });
}

sol_status sol_loss_value(const sol_batch* batch, sol_score score, const sol_distribution* dist, double* out) {
  return guarded([&] {
    require(batch != nullptr && dist != nullptr && out != nullptr, "arguments must not be NULL");
    *out = sol::sol_loss(sol::SolLoss{to_kind(score), dist->dist}, batch->batch);
  });
}

sol_status sol_loss_gradient(const sol_batch* batch, sol_score score, const sol_distribution* dist, double* grad) {
  return guarded([&] {
    require(batch != nullptr && dist != nullptr && grad != nullptr, "arguments must not be NULL");
    const auto g = sol::sol_loss_gradient(sol::SolLoss{to_kind(score), dist->dist}, batch->batch);
    std::copy(g.begin(), g.end(), grad);
  });
}

sol_status sol_sweep(const sol_batch* batch, sol_score score, double* tau_star, double* best_score) {
  return guarded([&] {
    require(batch != nullptr && tau_star != nullptr && best_score != nullptr, "arguments must not be NULL");
    const auto result = sol::sweep(batch->batch, to_kind(score));
    *tau_star = result.tau_star;
    *best_score = result.best_score;
  });
}

sol_status sol_model_load(const char* path, sol_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "arguments must not be NULL");
    std::ifstream in(path);
    if (!in) throw sol::DataError(std::string("cannot open ") + path);
    sol::WeightSet weights = sol::load_weights(in);
    sol::NetworkSpec spec{weights.layer_widths()};
    spec.validate();
    *out = new sol_model{std::move(spec), std::move(weights)};
  });
}

void sol_model_free(sol_model* model) { delete model; }

sol_status sol_model_input_width(const sol_model* model, size_t* out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "arguments must not be NULL");
    *out = model->spec.input_width();
  });
}

sol_status sol_model_predict(const sol_model* model, const double* rows, size_t n, double* out) {
  return guarded([&] {
    require(model != nullptr && (n == 0 || (rows != nullptr && out != nullptr)), "arguments must not be NULL");
    const auto d = static_cast<Eigen::Index>(model->spec.input_width());
    const Eigen::MatrixXd inputs =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            rows, static_cast<Eigen::Index>(n), d);
    const Eigen::VectorXd p = sol::forward(model->spec, model->weights, inputs);
    std::copy(p.data(), p.data() + p.size(), out);
  });
}

sol_status sol_run_command(const char* subcommand, const char* config_json, const char* const* overrides,
                           size_t override_count, const char* out_dir, char** summary) {
  last_error.clear();
  if (subcommand == nullptr || config_json == nullptr || (override_count > 0 && overrides == nullptr)) {
    return fail(SOL_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  }
  if (summary != nullptr) *summary = nullptr;
  std::vector<std::string> list(overrides, overrides + override_count);
  const sol::CommandOutcome outcome = sol::run_command(subcommand, config_json, list);
  const auto status = static_cast<sol_status>(outcome.code);
  if (status != SOL_OK && status != SOL_ERR_VERIFICATION) return fail(status, outcome.error);
  const sol_status written = guarded([&] {
    if (out_dir != nullptr) sol::write_outputs(out_dir, subcommand, outcome.artifacts);
    if (summary != nullptr) *summary = duplicate(outcome.summary);
  });
  if (written != SOL_OK) return written;
  if (status == SOL_ERR_VERIFICATION) return fail(status, outcome.error);
  return SOL_OK;
}

void sol_string_free(char* text) { std::free(text); }

}  // extern "C"
