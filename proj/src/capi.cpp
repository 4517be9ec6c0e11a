// Copyright 2026 The clevy Authors
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


#include "clevy/clevy.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "clevy/error.hpp"
#include "clevy/expm.hpp"
#include "clevy/inference.hpp"
#include "clevy/io.hpp"
#include "clevy/levy.hpp"
#include "clevy/limits.hpp"
#include "clevy/measures.hpp"
#include "clevy/orbits.hpp"
#include "clevy/rng.hpp"
#include "clevy/structure.hpp"
#include "clevy/walk.hpp"

struct clevy_structure {
  clevy::Structure value;
};
struct clevy_measure {
  clevy::FiniteMeasure value;
};
struct clevy_walk {
  clevy::WalkTrajectory value;
};
struct clevy_intensity {
  clevy::LevyIntensity value;
};
struct clevy_levy {
  clevy::LevyTrajectory value;
};

namespace {

thread_local std::string g_last_error;

clevy_status set_error(clevy_status st, const char* what) {
  g_last_error = what ? what : "";
  return st;
}

template <class F>
clevy_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CLEVY_OK;
  } catch (const clevy::Error& e) {
    return set_error(static_cast<clevy_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CLEVY_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CLEVY_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(CLEVY_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) clevy::fail(clevy::ErrorCode::kInvalidArgument, std::string(name) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

template <class H, class T>
void emit(H** out, T&& value) {
  *out = new H{std::forward<T>(value)};
}

}  // namespace

extern "C" {

const char* clevy_version(void) { return CLEVY_VERSION_STRING; }

const char* clevy_rng_algorithm(void) { return clevy::Rng::kAlgorithm.data(); }

const char* clevy_last_error(void) { return g_last_error.c_str(); }

const char* clevy_status_name(clevy_status status) {
  if (status == CLEVY_OK) return "ok";
  return clevy::error_code_name(static_cast<clevy::ErrorCode>(static_cast<int>(status)));
}

void clevy_string_free(char* s) { std::free(s); }

clevy_status clevy_structure_parse(const char* text, clevy_structure** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    emit(out, clevy::parse_structure(text));
  });
}

clevy_status clevy_structure_empty(const char* signature, size_t n, clevy_structure** out) {
  return guard([&] {
    require(signature, "signature");
    require(out, "out");
    emit(out, clevy::empty_structure(clevy::Signature::parse(signature), n));
  });
}

clevy_status clevy_structure_serialize(const clevy_structure* s, char** out) {
  return guard([&] {
    require(s, "structure");
    require(out, "out");
    *out = dup_string(clevy::serialize(s->value));
  });
}

clevy_status clevy_structure_size(const clevy_structure* s, size_t* out) {
  return guard([&] {
    require(s, "structure");
    require(out, "out");
    *out = s->value.size();
  });
}

clevy_status clevy_structure_increment(const clevy_structure* a, const clevy_structure* b,
                                       clevy_structure** out) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    emit(out, clevy::increment(a->value, b->value));
  });
}

clevy_status clevy_structure_restrict(const clevy_structure* s, size_t m, clevy_structure** out) {
  return guard([&] {
    require(s, "structure");
    require(out, "out");
    emit(out, clevy::restrict(s->value, m));
  });
}

clevy_status clevy_structure_relabel(const clevy_structure* s, const uint32_t* image, size_t n,
                                     clevy_structure** out) {
  return guard([&] {
    require(s, "structure");
    require(out, "out");
    if (n > 0) require(image, "image");
    std::vector<clevy::Label> img(image, image + n);
    emit(out, clevy::relabel(s->value, clevy::Permutation(std::move(img))));
  });
}

clevy_status clevy_structure_agreement_level(const clevy_structure* a, const clevy_structure* b,
                                             size_t* out) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = clevy::agreement_level(a->value, b->value);
  });
}

clevy_status clevy_structure_canonical_form(const clevy_structure* s, clevy_structure** out) {
  return guard([&] {
    require(s, "structure");
    require(out, "out");
    emit(out, clevy::canonical_form(s->value));
  });
}

clevy_status clevy_structure_orbit_size(const clevy_structure* s, uint64_t* out) {
  return guard([&] {
    require(s, "structure");
    require(out, "out");
    *out = clevy::orbit_size(s->value);
  });
}

void clevy_structure_free(clevy_structure* s) { delete s; }

clevy_status clevy_orbits_json(const char* signature, size_t n, char** out_json) {
  return guard([&] {
    require(signature, "signature");
    require(out_json, "out");
    const auto& table = clevy::enumerate_orbits(clevy::Signature::parse(signature), n);
    *out_json = dup_string(clevy::io::orbit_table_to_json(table));
  });
}

clevy_status clevy_measure_from_json(const char* json, clevy_measure** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    emit(out, clevy::io::measure_from_json(json));
  });
}

clevy_status clevy_measure_to_json(const clevy_measure* mu, char** out_json) {
  return guard([&] {
    require(mu, "measure");
    require(out_json, "out");
    *out_json = dup_string(clevy::io::measure_to_json(mu->value));
  });
}

clevy_status clevy_measure_total_mass(const clevy_measure* mu, double* out) {
  return guard([&] {
    require(mu, "measure");
    require(out, "out");
    *out = mu->value.total_mass();
  });
}

clevy_status clevy_measure_is_exchangeable(const clevy_measure* mu, double tol, int* out) {
  return guard([&] {
    require(mu, "measure");
    require(out, "out");
    *out = clevy::is_exchangeable(mu->value, tol) ? 1 : 0;
  });
}

clevy_status clevy_measure_symmetrize(const clevy_measure* mu, clevy_measure** out) {
  return guard([&] {
    require(mu, "measure");
    require(out, "out");
    emit(out, clevy::symmetrize(mu->value));
  });
}

clevy_status clevy_measure_decompose_json(const clevy_measure* mu, char** out_json) {
  return guard([&] {
    require(mu, "measure");
    require(out_json, "out");
    *out_json = dup_string(clevy::io::orbit_weights_to_json(clevy::decompose_exchangeable(mu->value)));
  });
}

clevy_status clevy_measure_recompose_json(const char* weights_json, clevy_measure** out) {
  return guard([&] {
    require(weights_json, "json");
    require(out, "out");
    emit(out, clevy::recompose(clevy::io::orbit_weights_from_json(weights_json)));
  });
}

void clevy_measure_free(clevy_measure* mu) { delete mu; }

clevy_status clevy_walk_simulate(const clevy_measure* mu, const clevy_structure* x0, size_t steps,
                                 uint64_t seed, uint64_t stream, clevy_walk** out) {
  return guard([&] {
    require(mu, "measure");
    require(out, "out");
    clevy::Rng rng(seed, stream);
    if (x0 != nullptr) {
      emit(out, clevy::simulate_walk(mu->value, x0->value, steps, rng));
    } else {
      emit(out, clevy::simulate_walk(mu->value, steps, rng));
    }
  });
}

clevy_status clevy_walk_from_csv(const char* csv, clevy_walk** out) {
  return guard([&] {
    require(csv, "csv");
    require(out, "out");
    emit(out, clevy::io::walk_from_csv(csv));
  });
}

clevy_status clevy_walk_to_csv(const clevy_walk* w, char** out_csv) {
  return guard([&] {
    require(w, "walk");
    require(out_csv, "out");
    *out_csv = dup_string(clevy::io::walk_to_csv(w->value));
  });
}

clevy_status clevy_walk_steps(const clevy_walk* w, size_t* out) {
  return guard([&] {
    require(w, "walk");
    require(out, "out");
    *out = w->value.steps();
  });
}

clevy_status clevy_walk_estimate_jumps(const clevy_walk* w, clevy_measure** out) {
  return guard([&] {
    require(w, "walk");
    require(out, "out");
    emit(out, clevy::empirical_jump_measure(w->value));
  });
}

clevy_status clevy_walk_test_exchangeability(const clevy_walk* w, const double* alphas,
                                             size_t alpha_count, char** out_json) {
  return guard([&] {
    require(w, "walk");
    require(out_json, "out");
    if (alpha_count > 0) require(alphas, "alphas");
    std::vector<double> a(alphas, alphas + alpha_count);
    *out_json = dup_string(clevy::io::report_to_json(clevy::chi_square_exchangeability(w->value, a)));
  });
}

void clevy_walk_free(clevy_walk* w) { delete w; }

clevy_status clevy_intensity_from_json(const char* json, clevy_intensity** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    emit(out, clevy::io::intensity_from_json(json));
  });
}

clevy_status clevy_intensity_signature(const clevy_intensity* in, char** out) {
  return guard([&] {
    require(in, "intensity");
    require(out, "out");
    *out = dup_string(in->value.signature().to_string());
  });
}

clevy_status clevy_intensity_restricted_rate(const clevy_intensity* in, size_t n, double* out) {
  return guard([&] {
    require(in, "intensity");
    require(out, "out");
    *out = clevy::restricted_measure(in->value, n).total_rate();
  });
}

void clevy_intensity_free(clevy_intensity* in) { delete in; }

clevy_status clevy_levy_simulate(const clevy_intensity* in, size_t n, double horizon,
                                 uint64_t seed, uint64_t stream, clevy_levy** out) {
  return guard([&] {
    require(in, "intensity");
    require(out, "out");
    clevy::Rng rng(seed, stream);
    emit(out, clevy::simulate_levy(in->value, n, horizon, rng));
  });
}

clevy_status clevy_levy_from_csv(const char* csv, clevy_levy** out) {
  return guard([&] {
    require(csv, "csv");
    require(out, "out");
    emit(out, clevy::io::levy_from_csv(csv));
  });
}

clevy_status clevy_levy_from_jsonl(const char* jsonl, clevy_levy** out) {
  return guard([&] {
    require(jsonl, "jsonl");
    require(out, "out");
    emit(out, clevy::io::levy_from_jsonl(jsonl));
  });
}

clevy_status clevy_levy_to_csv(const clevy_levy* x, char** out_csv) {
  return guard([&] {
    require(x, "trajectory");
    require(out_csv, "out");
    *out_csv = dup_string(clevy::io::levy_to_csv(x->value));
  });
}

clevy_status clevy_levy_to_jsonl(const clevy_levy* x, uint64_t seed, char** out) {
  return guard([&] {
    require(x, "trajectory");
    require(out, "out");
    *out = dup_string(clevy::io::levy_to_jsonl(x->value, seed));
  });
}

clevy_status clevy_levy_jump_count(const clevy_levy* x, size_t* out) {
  return guard([&] {
    require(x, "trajectory");
    require(out, "out");
    *out = x->value.jump_count();
  });
}

clevy_status clevy_levy_restrict(const clevy_levy* x, size_t m, clevy_levy** out) {
  return guard([&] {
    require(x, "trajectory");
    require(out, "out");
    emit(out, clevy::restrict_trajectory(x->value, m));
  });
}

clevy_status clevy_levy_jump_chain(const clevy_levy* x, clevy_walk** out) {
  return guard([&] {
    require(x, "trajectory");
    require(out, "out");
    emit(out, clevy::jump_chain(x->value));
  });
}

clevy_status clevy_levy_limit_path_csv(const clevy_levy* x, size_t level, const double* grid,
                                       size_t grid_len, char** out_csv) {
  return guard([&] {
    require(x, "trajectory");
    require(out_csv, "out");
    if (grid_len > 0) require(grid, "grid");
    std::vector<double> g(grid, grid + grid_len);
    const auto path = clevy::limit_path(x->value, level, g);
    *out_csv = dup_string(clevy::io::limit_path_to_csv(g, path));
  });
}

void clevy_levy_free(clevy_levy* x) { delete x; }

clevy_status clevy_density_csv(const clevy_structure* s, size_t level, char** out_csv) {
  return guard([&] {
    require(s, "structure");
    require(out_csv, "out");
    *out_csv = dup_string(clevy::io::density_to_csv(clevy::density_vector(s->value, level)));
  });
}

clevy_status clevy_hom_density(const clevy_structure* pattern, const clevy_structure* s,
                               double* out) {
  return guard([&] {
    require(pattern, "pattern");
    require(s, "structure");
    require(out, "out");
    *out = clevy::hom_density_exact(pattern->value, s->value);
  });
}

clevy_status clevy_chi2_upper_tail(double x, unsigned df, double* out) {
  return guard([&] {
    require(out, "out");
    *out = clevy::chi2_upper_tail(x, df);
  });
}

clevy_status clevy_marginal_flip_probability(double c, double t, double* out) {
  return guard([&] {
    require(out, "out");
    *out = clevy::marginal_flip_probability(c, t);
  });
}

clevy_status clevy_expm(const double* q, size_t dim, double t, double* out) {
  return guard([&] {
    require(q, "q");
    require(out, "out");
    clevy::SquareMatrix m(dim);
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) m(i, j) = q[i * dim + j];
    const clevy::SquareMatrix r = clevy::expm_small(m, t);
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) out[i * dim + j] = r(i, j);
  });
}

}  // extern "C"
