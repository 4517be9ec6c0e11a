/*
 * Copyright 2026 The clevy Authors
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

/*
 * C interface to libclevy.
 *
 * Objects are opaque handles created by *_parse / *_simulate / ... functions
 * and released with the matching *_free function (NULL is accepted). Every
 * fallible call returns a clevy_status; on failure the out-parameter is left
 * untouched and clevy_last_error() describes the problem. Strings handed out
 * through char** parameters are NUL-terminated, owned by the caller and
 * released with clevy_string_free.
 *
 * Handles are immutable after construction and may be shared between threads.
 * clevy_last_error() is thread-local.
 */

#ifndef CLEVY_CLEVY_H
#define CLEVY_CLEVY_H

#include <stddef.h>
#include <stdint.h>

#if defined(CLEVY_BUILDING_LIBRARY)
#define CLEVY_API __attribute__((visibility("default")))
#else
#define CLEVY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clevy_status {
  CLEVY_OK = 0,
  CLEVY_ERR_INVALID_ARGUMENT = 1,
  CLEVY_ERR_PARSE = 2,
  CLEVY_ERR_SHAPE_MISMATCH = 3,
  CLEVY_ERR_CAP_EXCEEDED = 4,
  CLEVY_ERR_NOT_EXCHANGEABLE = 5,
  CLEVY_ERR_NOT_NORMALIZED = 6,
  CLEVY_ERR_IO = 7,
  CLEVY_ERR_NUMERIC = 8,
  CLEVY_ERR_INTERNAL = 99
} clevy_status;

typedef struct clevy_structure clevy_structure;
typedef struct clevy_measure clevy_measure;
typedef struct clevy_walk clevy_walk;
typedef struct clevy_intensity clevy_intensity;
typedef struct clevy_levy clevy_levy;

CLEVY_API const char* clevy_version(void);
CLEVY_API const char* clevy_rng_algorithm(void);
CLEVY_API const char* clevy_last_error(void);
CLEVY_API const char* clevy_status_name(clevy_status status);
CLEVY_API void clevy_string_free(char* s);

/* Structures ------------------------------------------------------------- */

CLEVY_API clevy_status clevy_structure_parse(const char* text, clevy_structure** out);
/* signature in the "(i1,...,ik)" form. */
CLEVY_API clevy_status clevy_structure_empty(const char* signature, size_t n,
                                             clevy_structure** out);
CLEVY_API clevy_status clevy_structure_serialize(const clevy_structure* s, char** out);
CLEVY_API clevy_status clevy_structure_size(const clevy_structure* s, size_t* out);
CLEVY_API clevy_status clevy_structure_increment(const clevy_structure* a,
                                                 const clevy_structure* b,
                                                 clevy_structure** out);
CLEVY_API clevy_status clevy_structure_restrict(const clevy_structure* s, size_t m,
                                                clevy_structure** out);
/* image[i] = sigma(i + 1), a bijection of {1..n}. */
CLEVY_API clevy_status clevy_structure_relabel(const clevy_structure* s, const uint32_t* image,
                                               size_t n, clevy_structure** out);
CLEVY_API clevy_status clevy_structure_agreement_level(const clevy_structure* a,
                                                       const clevy_structure* b, size_t* out);
CLEVY_API clevy_status clevy_structure_canonical_form(const clevy_structure* s,
                                                      clevy_structure** out);
CLEVY_API clevy_status clevy_structure_orbit_size(const clevy_structure* s, uint64_t* out);
CLEVY_API void clevy_structure_free(clevy_structure* s);

/* Orbits: JSON list of {canonical, size}. */
CLEVY_API clevy_status clevy_orbits_json(const char* signature, size_t n, char** out_json);

/* Measures ---------------------------------------------------------------- */

CLEVY_API clevy_status clevy_measure_from_json(const char* json, clevy_measure** out);
CLEVY_API clevy_status clevy_measure_to_json(const clevy_measure* mu, char** out_json);
CLEVY_API clevy_status clevy_measure_total_mass(const clevy_measure* mu, double* out);
CLEVY_API clevy_status clevy_measure_is_exchangeable(const clevy_measure* mu, double tol,
                                                     int* out);
CLEVY_API clevy_status clevy_measure_symmetrize(const clevy_measure* mu, clevy_measure** out);
/* Orbit weights JSON {signature, n, weights: [{orbit, p}]}. */
CLEVY_API clevy_status clevy_measure_decompose_json(const clevy_measure* mu, char** out_json);
CLEVY_API clevy_status clevy_measure_recompose_json(const char* weights_json,
                                                    clevy_measure** out);
CLEVY_API void clevy_measure_free(clevy_measure* mu);

/* Discrete-time walks ------------------------------------------------------ */

/* x0 may be NULL for the empty initial state. stream selects the replicate. */
CLEVY_API clevy_status clevy_walk_simulate(const clevy_measure* mu, const clevy_structure* x0,
                                           size_t steps, uint64_t seed, uint64_t stream,
                                           clevy_walk** out);
CLEVY_API clevy_status clevy_walk_from_csv(const char* csv, clevy_walk** out);
CLEVY_API clevy_status clevy_walk_to_csv(const clevy_walk* w, char** out_csv);
CLEVY_API clevy_status clevy_walk_steps(const clevy_walk* w, size_t* out);
CLEVY_API clevy_status clevy_walk_estimate_jumps(const clevy_walk* w, clevy_measure** out);
/* Report JSON {statistic, df, p_value, cells_used, pooled_cells, inconclusive, alphas}. */
CLEVY_API clevy_status clevy_walk_test_exchangeability(const clevy_walk* w, const double* alphas,
                                                       size_t alpha_count, char** out_json);
CLEVY_API void clevy_walk_free(clevy_walk* w);

/* Continuous-time Levy processes --------------------------------------------- */

CLEVY_API clevy_status clevy_intensity_from_json(const char* json, clevy_intensity** out);
CLEVY_API clevy_status clevy_intensity_signature(const clevy_intensity* in, char** out);
CLEVY_API clevy_status clevy_intensity_restricted_rate(const clevy_intensity* in, size_t n,
                                                       double* out);
CLEVY_API void clevy_intensity_free(clevy_intensity* in);

CLEVY_API clevy_status clevy_levy_simulate(const clevy_intensity* in, size_t n, double horizon,
                                           uint64_t seed, uint64_t stream, clevy_levy** out);
CLEVY_API clevy_status clevy_levy_from_csv(const char* csv, clevy_levy** out);
CLEVY_API clevy_status clevy_levy_from_jsonl(const char* jsonl, clevy_levy** out);
CLEVY_API clevy_status clevy_levy_to_csv(const clevy_levy* x, char** out_csv);
CLEVY_API clevy_status clevy_levy_to_jsonl(const clevy_levy* x, uint64_t seed, char** out);
CLEVY_API clevy_status clevy_levy_jump_count(const clevy_levy* x, size_t* out);
CLEVY_API clevy_status clevy_levy_restrict(const clevy_levy* x, size_t m, clevy_levy** out);
CLEVY_API clevy_status clevy_levy_jump_chain(const clevy_levy* x, clevy_walk** out);
/* CSV time,pattern,density over the given grid. */
CLEVY_API clevy_status clevy_levy_limit_path_csv(const clevy_levy* x, size_t level,
                                                 const double* grid, size_t grid_len,
                                                 char** out_csv);
CLEVY_API void clevy_levy_free(clevy_levy* x);

/* Densities and numerics ------------------------------------------------------ */

/* CSV pattern,density over L_[level]. */
CLEVY_API clevy_status clevy_density_csv(const clevy_structure* s, size_t level, char** out_csv);
CLEVY_API clevy_status clevy_hom_density(const clevy_structure* pattern,
                                         const clevy_structure* s, double* out);
CLEVY_API clevy_status clevy_chi2_upper_tail(double x, unsigned df, double* out);
CLEVY_API clevy_status clevy_marginal_flip_probability(double c, double t, double* out);
/* q and out are dim x dim row-major. */
CLEVY_API clevy_status clevy_expm(const double* q, size_t dim, double t, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CLEVY_CLEVY_H */
