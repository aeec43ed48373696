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

#ifndef SOL_SOL_H_
#define SOL_SOL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SOL_BUILDING_LIBRARY)
#define SOL_API __attribute__((visibility("default")))
#else
#define SOL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes of the command-line tool. */
typedef enum sol_status {
  SOL_OK = 0,
  SOL_ERR_INTERNAL = 1,
  SOL_ERR_CONFIG = 2,
  SOL_ERR_DATA = 3,
  SOL_ERR_NUMERIC = 4,
  SOL_ERR_VERIFICATION = 5,
  SOL_ERR_INVALID_ARGUMENT = 6
} sol_status;

typedef enum sol_score {
  SOL_SCORE_ACCURACY = 0,
  SOL_SCORE_F1 = 1,
  SOL_SCORE_TSS = 2,
  SOL_SCORE_CSI = 3
} sol_score;

typedef struct sol_distribution sol_distribution;
typedef struct sol_batch sol_batch;
typedef struct sol_model sol_model;

typedef struct sol_confusion {
  double tn;
  double fp;
  double fn;
  double tp;
} sol_confusion;

SOL_API const char* sol_version(void);

/* Message of the last failed call on this thread; "" when there is none. */
SOL_API const char* sol_last_error(void);

/* Threshold distributions. */
SOL_API sol_status sol_distribution_uniform(sol_distribution** out);
SOL_API sol_status sol_distribution_raised_cosine(double mu, double delta, sol_distribution** out);
SOL_API void sol_distribution_free(sol_distribution* dist);
SOL_API sol_status sol_distribution_pdf(const sol_distribution* dist, double x, double* out);
SOL_API sol_status sol_distribution_cdf(const sol_distribution* dist, double x, double* out);
SOL_API sol_status sol_distribution_quantile(const sol_distribution* dist, double p, double* out);
/* Writes `count` draws generated from `seed` into `out`. */
SOL_API sol_status sol_distribution_sample(const sol_distribution* dist, uint64_t seed, size_t count, double* out);

/* Predictions in [0, 1] with 0/1 labels. The data is copied. */
SOL_API sol_status sol_batch_create(const double* predictions, const int* labels, size_t n, sol_batch** out);
SOL_API void sol_batch_free(sol_batch* batch);

/* A prediction equal to tau counts as negative. tau must lie in (0, 1). */
SOL_API sol_status sol_classical_cm(const sol_batch* batch, double tau, sol_confusion* out);
SOL_API sol_status sol_expected_cm(const sol_batch* batch, const sol_distribution* dist, sol_confusion* out);
SOL_API sol_status sol_score_value(sol_score score, const sol_confusion* cm, double* out);

/* Score-oriented loss: minus the score of the expected confusion matrix. */
SOL_API sol_status sol_loss_value(const sol_batch* batch, sol_score score, const sol_distribution* dist, double* out);
/* Writes d(loss)/d(prediction_i) for every sample into `grad` (length n). */
SOL_API sol_status sol_loss_gradient(const sol_batch* batch, sol_score score, const sol_distribution* dist,
                                     double* grad);

/* Exact threshold maximizing the score on the batch. */
SOL_API sol_status sol_sweep(const sol_batch* batch, sol_score score, double* tau_star, double* best_score);

/* Trained networks saved by the train command. */
SOL_API sol_status sol_model_load(const char* path, sol_model** out);
SOL_API void sol_model_free(sol_model* model);
SOL_API sol_status sol_model_input_width(const sol_model* model, size_t* out);
/* `rows` is row-major n x input_width; writes n probabilities into `out`. */
SOL_API sol_status sol_model_predict(const sol_model* model, const double* rows, size_t n, double* out);

/* Runs "prepare", "train", "sweep", "verify" or "experiment" on a JSON
 * config with "key=value" overrides. When `out_dir` is not NULL the outputs
 * and manifest.json are written there. On success, and on a failed
 * verification, `*summary` (if not NULL) receives a JSON string to release
 * with sol_string_free. */
SOL_API sol_status sol_run_command(const char* subcommand, const char* config_json, const char* const* overrides,
                                   size_t override_count, const char* out_dir, char** summary);
SOL_API void sol_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* SOL_SOL_H_ */
