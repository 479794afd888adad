/*
 * Copyright 2026 The CoPhIK Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COPHIK_COPHIK_H
#define COPHIK_COPHIK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(COPHIK_BUILDING_LIBRARY)
#define COPHIK_API __declspec(dllexport)
#else
#define COPHIK_API __declspec(dllimport)
#endif
#else
#define COPHIK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns a status; on failure the message is available
 * from cophik_last_error() on the calling thread until the next call. */
typedef enum cophik_status {
    COPHIK_OK = 0,
    COPHIK_ERR_CONFIG = 1,    /* invalid configuration, arguments or inputs */
    COPHIK_ERR_NUMERICAL = 2, /* factorization or optimization failure */
    COPHIK_ERR_IO = 3,        /* unreadable, unwritable or malformed files */
    COPHIK_ERR_INVALID_ARGUMENT = 4, /* null handle or out-of-range index */
    COPHIK_ERR_INTERNAL = 5
} cophik_status;

typedef struct cophik_config cophik_config;
typedef struct cophik_grid cophik_grid;
typedef struct cophik_field cophik_field;
typedef struct cophik_ensemble cophik_ensemble;
typedef struct cophik_obs cophik_obs;
typedef struct cophik_model cophik_model;
typedef struct cophik_trajectory cophik_trajectory;
typedef struct cophik_report cophik_report;

COPHIK_API const char* cophik_version(void);
COPHIK_API const char* cophik_last_error(void);
/* Frees strings returned through char** out-parameters. */
COPHIK_API void cophik_string_free(char* s);

/* ---- configuration ---- */
COPHIK_API cophik_status cophik_config_default(cophik_config** out);
COPHIK_API cophik_status cophik_config_load(const char* path, cophik_config** out);
/* Sets one key as if it appeared in a configuration file. */
COPHIK_API cophik_status cophik_config_set(cophik_config* cfg, const char* key, const char* value);
COPHIK_API cophik_status cophik_config_seed(const cophik_config* cfg, uint64_t* seed);
COPHIK_API cophik_status cophik_config_n_max(const cophik_config* cfg, size_t* n_max);
/* Every setting, defaults included, as "key = value" lines. */
COPHIK_API cophik_status cophik_config_to_text(const cophik_config* cfg, char** out);
COPHIK_API void cophik_config_free(cophik_config* cfg);

/* ---- grids ---- */
/* "l1:u1:n1,l2:u2:n2,..." */
COPHIK_API cophik_status cophik_grid_parse(const char* spec, cophik_grid** out);
COPHIK_API cophik_status cophik_grid_from_config(const cophik_config* cfg, cophik_grid** out);
COPHIK_API size_t cophik_grid_dim(const cophik_grid* g);
COPHIK_API size_t cophik_grid_node_count(const cophik_grid* g);
/* Writes dim coordinates of node `index`. */
COPHIK_API cophik_status cophik_grid_node(const cophik_grid* g, size_t index, double* coords);
COPHIK_API cophik_status cophik_grid_spec(const cophik_grid* g, char** out);
COPHIK_API void cophik_grid_free(cophik_grid* g);

/* ---- fields ---- */
COPHIK_API cophik_status cophik_field_create(const cophik_grid* g, const double* values, size_t count,
                                             cophik_field** out);
COPHIK_API cophik_status cophik_field_read(const char* path, cophik_field** out);
COPHIK_API cophik_status cophik_field_write(const cophik_field* f, const char* path);
COPHIK_API size_t cophik_field_size(const cophik_field* f);
/* Borrowed pointer, valid until the field is freed. */
COPHIK_API const double* cophik_field_values(const cophik_field* f);
COPHIK_API cophik_status cophik_field_grid(const cophik_field* f, cophik_grid** out);
/* ||reconstructed - reference||_F / ||reference||_F */
COPHIK_API cophik_status cophik_field_relative_error(const cophik_field* reconstructed, const cophik_field* reference,
                                                     double* out);
COPHIK_API void cophik_field_free(cophik_field* f);

/* ---- ensembles ---- */
COPHIK_API cophik_status cophik_ensemble_read(const char* dir, cophik_ensemble** out);
/* Writes member files and a manifest recording `generator` and `seed`. */
COPHIK_API cophik_status cophik_ensemble_write(const cophik_ensemble* e, const char* dir);
/* Realizations of the stochastic Branin model; member m uses substream m of `seed`. */
COPHIK_API cophik_status cophik_ensemble_generate_branin(const cophik_grid* g, size_t members, uint64_t seed,
                                                         cophik_ensemble** out);
COPHIK_API size_t cophik_ensemble_size(const cophik_ensemble* e);
COPHIK_API cophik_status cophik_ensemble_grid(const cophik_ensemble* e, cophik_grid** out);
COPHIK_API cophik_status cophik_ensemble_mean(const cophik_ensemble* e, cophik_field** out);
COPHIK_API void cophik_ensemble_free(cophik_ensemble* e);

/* ---- observations ---- */
/* coords is row-major count x dim. */
COPHIK_API cophik_status cophik_obs_create(size_t dim, size_t count, const double* coords, const double* values,
                                           cophik_obs** out);
COPHIK_API cophik_status cophik_obs_read(const char* path, cophik_obs** out);
COPHIK_API cophik_status cophik_obs_write(const cophik_obs* o, const char* path);
COPHIK_API size_t cophik_obs_size(const cophik_obs* o);
COPHIK_API size_t cophik_obs_dim(const cophik_obs* o);
COPHIK_API cophik_status cophik_obs_get(const cophik_obs* o, size_t i, double* coords, double* value);
/* Moves every location to its nearest grid node. `distances` (may be null)
 * receives count snap distances. */
COPHIK_API cophik_status cophik_obs_snap(const cophik_obs* o, const cophik_grid* g, cophik_obs** out,
                                         double* distances);
COPHIK_API void cophik_obs_free(cophik_obs* o);

/* ---- models ---- */
/* Learner names: "kriging", "phik", "modified-phik", "cophik". A null
 * learner uses the configured one. Ensemble learners require `ens` and
 * on-node observations; Kriging requires ens == NULL. */
COPHIK_API cophik_status cophik_fit(const cophik_config* cfg, const char* learner, const cophik_grid* g,
                                    const cophik_ensemble* ens, const cophik_obs* obs, cophik_model** out);
COPHIK_API cophik_status cophik_model_save(const cophik_model* m, const char* path);
COPHIK_API cophik_status cophik_model_load(const char* path, const cophik_ensemble* ens, cophik_model** out);
COPHIK_API cophik_status cophik_model_learner(const cophik_model* m, char** out);
COPHIK_API cophik_status cophik_model_predict_node(const cophik_model* m, size_t node, double* mean, double* variance);
/* Posterior mean and posterior standard deviation on every node. */
COPHIK_API cophik_status cophik_model_predict_grid(const cophik_model* m, cophik_field** mean, cophik_field** rmse);
/* Fitted parameters as "key = value" lines. */
COPHIK_API cophik_status cophik_model_to_text(const cophik_model* m, char** out);
COPHIK_API void cophik_model_free(cophik_model* m);

/* ---- active learning ---- */
COPHIK_API cophik_status cophik_active_learn(const cophik_config* cfg, const char* learner, const cophik_field* truth,
                                             const cophik_ensemble* ens, const cophik_obs* initial, size_t n_max,
                                             cophik_trajectory** out);
COPHIK_API size_t cophik_trajectory_steps(const cophik_trajectory* t);
/* Nonzero when a fit failed; the steps before the failure are kept. */
COPHIK_API int cophik_trajectory_failed(const cophik_trajectory* t);
COPHIK_API double cophik_trajectory_initial_error(const cophik_trajectory* t);
COPHIK_API cophik_status cophik_trajectory_step(const cophik_trajectory* t, size_t k, size_t* node, double* value,
                                                double* max_mse, double* relative_error);
COPHIK_API cophik_status cophik_trajectory_write_csv(const cophik_trajectory* t, const char* path);
COPHIK_API cophik_status cophik_trajectory_summary(const cophik_trajectory* t, char** out);
/* Posterior of the last fit; either out-parameter may be null. */
COPHIK_API cophik_status cophik_trajectory_final(const cophik_trajectory* t, cophik_field** mean, cophik_field** rmse);
COPHIK_API cophik_status cophik_trajectory_observations(const cophik_trajectory* t, cophik_obs** out);
COPHIK_API void cophik_trajectory_free(cophik_trajectory* t);

/* ---- constraint bounds ---- */
/* Operators: "point:<node>,...", "point:boundary", "deriv:<axis>", "laplacian".
 * With constraint_value == NULL the right-hand sides are the operator
 * applied to each member; otherwise every member uses *constraint_value.
 * With eps == NULL the tolerance is estimated from the members. Only
 * PhIK, modified PhIK and CoPhIK models are supported. */
COPHIK_API cophik_status cophik_verify_bound(const cophik_model* m, const char* op, const double* constraint_value,
                                             const double* eps, cophik_report** out);
COPHIK_API int cophik_report_pass(const cophik_report* r);
COPHIK_API double cophik_report_lhs(const cophik_report* r);
COPHIK_API double cophik_report_rhs(const cophik_report* r);
COPHIK_API cophik_status cophik_report_to_text(const cophik_report* r, char** out);
COPHIK_API void cophik_report_free(cophik_report* r);

/* ---- benchmark ---- */
/* Runs the Branin benchmark with the configured grid, members, seed,
 * learners and observation counts and writes all outputs under out_dir. */
COPHIK_API cophik_status cophik_bench_branin(const cophik_config* cfg, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* COPHIK_COPHIK_H */
