/* C interface to the biharmonic ground-state library.
 *
 * All objects are opaque handles released with the matching *_free function.
 * Functions return a bhgs_status; on failure the thread-local message from
 * bhgs_last_error() describes the cause. Strings returned through char** are
 * owned by the caller and released with bhgs_string_free.
 */
#ifndef BHGS_H
#define BHGS_H

#include <stddef.h>

#if defined(_WIN32)
#define BHGS_API __declspec(dllexport)
#else
#define BHGS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bhgs_status {
  BHGS_OK = 0,
  BHGS_ERR_PARAMETER = 1,
  BHGS_ERR_ADMISSIBILITY = 2,
  BHGS_ERR_INFEASIBLE = 3,
  BHGS_ERR_CONVERGENCE = 4,
  BHGS_ERR_DEGENERATE = 5,
  BHGS_ERR_NORMALIZATION = 6,
  BHGS_ERR_NOT_EXTREMIZER = 7,
  BHGS_ERR_CONFIG = 8,
  BHGS_ERR_DEPENDENCY = 9,
  BHGS_ERR_IO = 10,
  BHGS_ERR_INTERNAL = 11
} bhgs_status;

typedef struct bhgs_grid bhgs_grid;
typedef struct bhgs_field bhgs_field;
typedef struct bhgs_potential bhgs_potential;
typedef struct bhgs_result bhgs_result;

typedef struct bhgs_energy {
  double K;
  double V;
  double S;
  double l2_sq;
  double grad_sq;
  double entropy;
  double hess_sq;
  double pohozaev_residual;
} bhgs_energy;

typedef struct bhgs_report {
  double lhs;
  double rhs;
  double gap;
  double tol;
  int satisfied;
} bhgs_report;

BHGS_API const char* bhgs_version(void);
BHGS_API const char* bhgs_status_name(bhgs_status status);
/* Message of the last failed call on this thread; empty after a success. */
BHGS_API const char* bhgs_last_error(void);
BHGS_API void bhgs_string_free(char* s);

BHGS_API bhgs_status bhgs_grid_create(size_t n, double r_max, bhgs_grid** out);
BHGS_API void bhgs_grid_free(bhgs_grid* grid);
BHGS_API size_t bhgs_grid_size(const bhgs_grid* grid);
BHGS_API bhgs_status bhgs_grid_nodes(const bhgs_grid* grid, double* out, size_t len);
BHGS_API bhgs_status bhgs_grid_weights(const bhgs_grid* grid, double* out, size_t len);

/* values holds n*m doubles, row i = w(r_i). */
BHGS_API bhgs_status bhgs_field_create(const bhgs_grid* grid, size_t m, const double* values,
                                       bhgs_field** out);
BHGS_API bhgs_status bhgs_field_read(const char* path, bhgs_field** out);
BHGS_API bhgs_status bhgs_field_write_csv(const bhgs_field* field, const char* path);
BHGS_API void bhgs_field_free(bhgs_field* field);
BHGS_API size_t bhgs_field_size(const bhgs_field* field);
BHGS_API size_t bhgs_field_components(const bhgs_field* field);
BHGS_API bhgs_status bhgs_field_values(const bhgs_field* field, double* out, size_t len);
/* x -> u(x / s) resampled on the same grid. */
BHGS_API bhgs_status bhgs_field_dilate(const bhgs_field* field, double s, bhgs_field** out);
BHGS_API bhgs_status bhgs_field_action(const bhgs_field* field, const bhgs_potential* potential,
                                       bhgs_energy* out);

BHGS_API bhgs_status bhgs_potential_from_json(const char* spec_json, bhgs_potential** out);
BHGS_API bhgs_status bhgs_potential_logarithmic(size_t m, bhgs_potential** out);
BHGS_API bhgs_status bhgs_potential_defocusing_well(size_t m, double p, bhgs_potential** out);
BHGS_API bhgs_status bhgs_potential_validate(const bhgs_potential* potential, size_t samples);
BHGS_API void bhgs_potential_free(bhgs_potential* potential);

/* solver_json may be NULL for defaults. On BHGS_ERR_CONVERGENCE *out, when non-NULL,
 * receives the best attempt. */
BHGS_API bhgs_status bhgs_minimize(const bhgs_potential* potential, const char* solver_json,
                                   bhgs_result** out);
BHGS_API void bhgs_result_free(bhgs_result* result);
BHGS_API double bhgs_result_T(const bhgs_result* result);
BHGS_API double bhgs_result_lambda(const bhgs_result* result);
BHGS_API double bhgs_result_pohozaev_residual(const bhgs_result* result);
BHGS_API double bhgs_result_pde_residual(const bhgs_result* result);
BHGS_API double bhgs_result_action(const bhgs_result* result);
BHGS_API bhgs_status bhgs_result_groundstate(const bhgs_result* result, bhgs_field** out);
BHGS_API bhgs_status bhgs_result_minimizer(const bhgs_result* result, bhgs_field** out);

BHGS_API bhgs_status bhgs_extract_lambda(const bhgs_field* field, const bhgs_potential* potential,
                                         double* out);
BHGS_API bhgs_status bhgs_pde_residual(const bhgs_field* field, const bhgs_potential* potential,
                                       double* out);

/* Log-Sobolev checks expect int |u|^2 = 1. */
BHGS_API bhgs_status bhgs_classical_lsi(const bhgs_field* field, bhgs_report* out);
BHGS_API bhgs_status bhgs_biharmonic_lsi(const bhgs_field* field, double T, bhgs_report* out);
BHGS_API bhgs_status bhgs_interpolation(const bhgs_field* field, bhgs_report* out);
BHGS_API bhgs_status bhgs_constant_bound(double T, bhgs_report* out);

/* Parses a TOML or JSON configuration file into a JSON string. */
BHGS_API bhgs_status bhgs_config_load(const char* path, char** json_out);
/* Runs a full command described by a JSON run configuration. *exit_code receives the
 * command-line exit code and *record_json (if non-NULL) the run record. The status
 * reports only failures to parse the configuration. */
BHGS_API bhgs_status bhgs_run(const char* config_json, int* exit_code, char** record_json);

#ifdef __cplusplus
}
#endif

#endif /* BHGS_H */
