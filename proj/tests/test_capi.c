/* Exercises the shared library through its C header only. */
#include "bhgs/bhgs.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                         \
  do {                                                                      \
    if (!(cond)) {                                                          \
      fprintf(stderr, "%s:%d: CHECK(%s) failed [%s]\n", __FILE__, __LINE__, \
              #cond, bhgs_last_error());                                    \
      ++failures;                                                           \
    }                                                                       \
  } while (0)

static const double pi = 3.14159265358979323846;

static bhgs_field* gaussian(const bhgs_grid* grid, double a) {
  size_t n = bhgs_grid_size(grid);
  double* r = malloc(n * sizeof(double));
  double* w = malloc(n * sizeof(double));
  bhgs_field* f = NULL;
  bhgs_grid_nodes(grid, r, n);
  for (size_t i = 0; i < n; ++i) w[i] = a * exp(-0.5 * r[i] * r[i]);
  CHECK(bhgs_field_create(grid, 1, w, &f) == BHGS_OK);
  free(r);
  free(w);
  return f;
}

static void test_errors(void) {
  bhgs_grid* grid = NULL;
  CHECK(bhgs_grid_create(4, 10.0, &grid) == BHGS_ERR_PARAMETER);
  CHECK(grid == NULL);
  CHECK(strlen(bhgs_last_error()) > 0);
  CHECK(bhgs_grid_create(32, 10.0, NULL) == BHGS_ERR_PARAMETER);
  CHECK(bhgs_grid_create(32, 10.0, &grid) == BHGS_OK);
  CHECK(strlen(bhgs_last_error()) == 0);
  double small[3];
  CHECK(bhgs_grid_nodes(grid, small, 3) == BHGS_ERR_PARAMETER);
  bhgs_potential* pot = NULL;
  CHECK(bhgs_potential_defocusing_well(1, 2.0, &pot) == BHGS_ERR_PARAMETER);
  CHECK(bhgs_potential_from_json("{\"kind\": \"cubic\"}", &pot) == BHGS_ERR_CONFIG);
  CHECK(bhgs_potential_from_json("not json", &pot) == BHGS_ERR_CONFIG);
  CHECK(bhgs_potential_from_json("{\"kind\": \"table\", \"table\": {\"t\": [0,1,2,3], \"G\": [0,1,2,3]}}", &pot) ==
        BHGS_OK);
  CHECK(bhgs_potential_validate(pot, 200) == BHGS_ERR_ADMISSIBILITY);
  bhgs_potential_free(pot);
  CHECK(strcmp(bhgs_status_name(BHGS_ERR_NOT_EXTREMIZER), "not_extremizer") == 0);
  CHECK(strcmp(bhgs_status_name(BHGS_OK), "ok") == 0);
  bhgs_grid_free(grid);
  bhgs_grid_free(NULL);
  bhgs_field_free(NULL);
  bhgs_potential_free(NULL);
  bhgs_result_free(NULL);
}

static void test_functionals(void) {
  bhgs_grid* grid = NULL;
  bhgs_potential* log_pot = NULL;
  CHECK(bhgs_grid_create(128, 16.0, &grid) == BHGS_OK);
  CHECK(bhgs_potential_logarithmic(1, &log_pot) == BHGS_OK);
  CHECK(bhgs_potential_validate(log_pot, 1000) == BHGS_OK);

  size_t n = bhgs_grid_size(grid);
  double* wts = malloc(n * sizeof(double));
  CHECK(bhgs_grid_weights(grid, wts, n) == BHGS_OK);
  double total = 0.0;
  double* r = malloc(n * sizeof(double));
  bhgs_grid_nodes(grid, r, n);
  for (size_t i = 0; i < n; ++i) total += wts[i] * exp(-r[i] * r[i]);
  CHECK(fabs(total - pi * pi) <= 1e-8 * pi * pi);
  free(wts);
  free(r);

  bhgs_field* u = gaussian(grid, 1.0);
  CHECK(bhgs_field_size(u) == 128);
  CHECK(bhgs_field_components(u) == 1);
  bhgs_energy en;
  CHECK(bhgs_field_action(u, log_pot, &en) == BHGS_OK);
  CHECK(fabs(en.K - 3.0 * pi * pi) <= 1e-7);
  CHECK(fabs(en.V + pi * pi) <= 1e-7);
  CHECK(fabs(en.hess_sq - 6.0 * pi * pi) <= 1e-7);

  bhgs_field* v = NULL;
  CHECK(bhgs_field_dilate(u, 2.0, &v) == BHGS_OK);
  bhgs_energy ev;
  CHECK(bhgs_field_action(v, log_pot, &ev) == BHGS_OK);
  CHECK(fabs(ev.K - en.K) <= 1e-6 * en.K);
  CHECK(fabs(ev.l2_sq - 16.0 * en.l2_sq) <= 1e-6 * ev.l2_sq);
  CHECK(bhgs_field_dilate(u, -1.0, &v) == BHGS_ERR_PARAMETER);
  bhgs_field_free(v);

  double lambda = 0.0, residual = 0.0;
  /* int g(u) u = 2 entropy + l2 = -pi^2 for the unit Gaussian. */
  CHECK(bhgs_extract_lambda(u, log_pot, &lambda) == BHGS_ERR_DEGENERATE);
  bhgs_field* u2 = gaussian(grid, 2.0);
  CHECK(bhgs_extract_lambda(u2, log_pot, &lambda) == BHGS_OK);
  CHECK(fabs(lambda - (8.0 * log(2.0) - 4.0) * pi * pi / (6.0 * 4.0 * pi * pi)) <= 1e-7);
  bhgs_field_free(u2);
  CHECK(bhgs_pde_residual(u, log_pot, &residual) == BHGS_OK);
  CHECK(residual > 0.1);

  bhgs_report rep;
  CHECK(bhgs_interpolation(u, &rep) == BHGS_OK);
  CHECK(fabs(rep.lhs / rep.rhs - 2.0 / sqrt(6.0)) <= 1e-6);
  CHECK(rep.satisfied);
  CHECK(bhgs_classical_lsi(u, &rep) == BHGS_ERR_NORMALIZATION);
  bhgs_field* un = gaussian(grid, 1.0 / pi);
  CHECK(bhgs_classical_lsi(un, &rep) == BHGS_OK);
  CHECK(fabs(rep.gap) <= 1e-6);
  CHECK(fabs(rep.lhs + 1.0 + log(pi)) <= 1e-6);
  CHECK(bhgs_biharmonic_lsi(un, 2.0 * pow(pi * exp(1.0), 2), &rep) == BHGS_OK);
  CHECK(fabs(rep.gap - (0.5 * log(6.0) - log(2.0))) <= 1e-7);
  CHECK(bhgs_constant_bound(36.0, &rep) == BHGS_OK);
  CHECK(!rep.satisfied);
  CHECK(bhgs_constant_bound(211.0, &rep) == BHGS_OK);
  CHECK(rep.satisfied);

  const double* none = NULL;
  bhgs_field* bad = NULL;
  CHECK(bhgs_field_create(grid, 1, none, &bad) == BHGS_ERR_PARAMETER);

  bhgs_field_free(un);
  bhgs_field_free(u);
  bhgs_potential_free(log_pot);
  bhgs_grid_free(grid);
}

static void test_solve(void) {
  bhgs_potential* pot = NULL;
  CHECK(bhgs_potential_defocusing_well(1, 4.0, &pot) == BHGS_OK);
  bhgs_result* res = NULL;
  CHECK(bhgs_minimize(pot, "{\"n\": 96, \"multistart\": 2, \"threads\": 1}", &res) == BHGS_OK);
  if (res) {
    CHECK(bhgs_result_T(res) > 0.0);
    CHECK(bhgs_result_lambda(res) > 0.0);
    CHECK(bhgs_result_pohozaev_residual(res) <= 1e-6);
    CHECK(bhgs_result_pde_residual(res) <= 1e-4);
    CHECK(fabs(bhgs_result_action(res) - bhgs_result_T(res)) <= 1e-4 * bhgs_result_T(res));
    bhgs_field* g = NULL;
    CHECK(bhgs_result_groundstate(res, &g) == BHGS_OK);
    double residual = 1.0;
    CHECK(bhgs_pde_residual(g, pot, &residual) == BHGS_OK);
    CHECK(residual <= 1e-4);
    CHECK(bhgs_field_write_csv(g, "capi_groundstate.csv") == BHGS_OK);
    bhgs_field* back = NULL;
    CHECK(bhgs_field_read("capi_groundstate.csv", &back) == BHGS_OK);
    double a[96], b[96];
    CHECK(bhgs_field_values(g, a, 96) == BHGS_OK);
    CHECK(bhgs_field_values(back, b, 96) == BHGS_OK);
    CHECK(memcmp(a, b, sizeof a) == 0);
    bhgs_field_free(back);
    bhgs_field_free(g);
    bhgs_result_free(res);
  }
  res = NULL;
  CHECK(bhgs_minimize(pot, "{\"n\": 96, \"multistart\": 1, \"max_outer\": 1, \"max_inner\": 5}", &res) ==
        BHGS_ERR_CONVERGENCE);
  CHECK(res != NULL);
  bhgs_result_free(res);
  res = NULL;
  CHECK(bhgs_minimize(pot, "{\"bogus\": 1}", &res) == BHGS_ERR_CONFIG);
  CHECK(res == NULL);
  bhgs_potential_free(pot);
}

static void test_run(void) {
  int code = -1;
  char* record = NULL;
  CHECK(bhgs_run("{\"command\": \"oracle\", \"output_dir\": \"capi_oracle\"}", &code, &record) == BHGS_OK);
  CHECK(code == 0);
  CHECK(record != NULL && strstr(record, "\"max_rel_error\"") != NULL);
  bhgs_string_free(record);
  record = NULL;
  CHECK(bhgs_run("{\"command\": \"solve\", \"output_dir\": \"capi_missing\"}", &code, &record) == BHGS_OK);
  CHECK(code == 2);
  bhgs_string_free(record);
  CHECK(bhgs_run("{\"command\": 7}", &code, NULL) == BHGS_ERR_CONFIG);
  CHECK(code == 2);

  FILE* f = fopen("capi_config.toml", "w");
  fputs("command = \"oracle\"\n[solver]\nn = 96\n", f);
  fclose(f);
  char* json = NULL;
  CHECK(bhgs_config_load("capi_config.toml", &json) == BHGS_OK);
  CHECK(json != NULL && strstr(json, "\"n\":96") != NULL);
  bhgs_string_free(json);
  CHECK(bhgs_config_load("capi_absent.toml", &json) == BHGS_ERR_IO);
}

int main(void) {
  CHECK(strlen(bhgs_version()) > 0);
  test_errors();
  test_functionals();
  test_solve();
  test_run();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
