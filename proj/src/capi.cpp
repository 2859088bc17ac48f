#include "bhgs/bhgs.h"

#include "bhgs/calculus.hpp"
#include "bhgs/inequalities.hpp"
#include "bhgs/io.hpp"
#include "bhgs/potential.hpp"
#include "bhgs/runner.hpp"
#include "bhgs/solver.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

struct bhgs_grid {
  bhgs::GridPtr grid;
};

struct bhgs_field {
  bhgs::RadialField field;
};

struct bhgs_potential {
  bhgs::PotentialModel model;
};

struct bhgs_result {
  std::shared_ptr<const bhgs::GroundStateResult> result;
};

namespace {

thread_local std::string last_error;

bhgs_status status_for(bhgs::ErrorKind kind) {
  using bhgs::ErrorKind;
  switch (kind) {
    case ErrorKind::parameter: return BHGS_ERR_PARAMETER;
    case ErrorKind::admissibility: return BHGS_ERR_ADMISSIBILITY;
    case ErrorKind::infeasible: return BHGS_ERR_INFEASIBLE;
    case ErrorKind::convergence: return BHGS_ERR_CONVERGENCE;
    case ErrorKind::degenerate: return BHGS_ERR_DEGENERATE;
    case ErrorKind::normalization: return BHGS_ERR_NORMALIZATION;
    case ErrorKind::not_extremizer: return BHGS_ERR_NOT_EXTREMIZER;
    case ErrorKind::config: return BHGS_ERR_CONFIG;
    case ErrorKind::dependency: return BHGS_ERR_DEPENDENCY;
    case ErrorKind::io: return BHGS_ERR_IO;
  }
  return BHGS_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes and the thread-local message.
template <class F>
bhgs_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return BHGS_OK;
  } catch (const bhgs::Error& e) {
    last_error = e.what();
    return status_for(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return BHGS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return BHGS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) bhgs::fail(bhgs::ErrorKind::parameter, std::string(what) + " is null");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(const bhgs::InequalityReport& r, bhgs_report* out) {
  out->lhs = r.lhs;
  out->rhs = r.rhs;
  out->gap = r.gap;
  out->tol = r.tol;
  out->satisfied = r.satisfied ? 1 : 0;
}

void copy_vector(const Eigen::VectorXd& v, double* out, size_t len) {
  require(out, "output buffer");
  if (len < static_cast<size_t>(v.size())) bhgs::fail(bhgs::ErrorKind::parameter, "output buffer too small");
  std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
}

}  // namespace

extern "C" {

const char* bhgs_version(void) { return bhgs::version(); }

const char* bhgs_status_name(bhgs_status status) {
  switch (status) {
    case BHGS_OK: return "ok";
    case BHGS_ERR_PARAMETER: return "parameter";
    case BHGS_ERR_ADMISSIBILITY: return "admissibility";
    case BHGS_ERR_INFEASIBLE: return "infeasible";
    case BHGS_ERR_CONVERGENCE: return "convergence";
    case BHGS_ERR_DEGENERATE: return "degenerate";
    case BHGS_ERR_NORMALIZATION: return "normalization";
    case BHGS_ERR_NOT_EXTREMIZER: return "not_extremizer";
    case BHGS_ERR_CONFIG: return "config";
    case BHGS_ERR_DEPENDENCY: return "dependency";
    case BHGS_ERR_IO: return "io";
    case BHGS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* bhgs_last_error(void) { return last_error.c_str(); }

void bhgs_string_free(char* s) { std::free(s); }

bhgs_status bhgs_grid_create(size_t n, double r_max, bhgs_grid** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bhgs_grid{bhgs::RadialGrid::build(n, r_max)};
  });
}

void bhgs_grid_free(bhgs_grid* grid) { delete grid; }

size_t bhgs_grid_size(const bhgs_grid* grid) { return grid ? grid->grid->size() : 0; }

bhgs_status bhgs_grid_nodes(const bhgs_grid* grid, double* out, size_t len) {
  return guarded([&] {
    require(grid, "grid");
    copy_vector(grid->grid->nodes(), out, len);
  });
}

bhgs_status bhgs_grid_weights(const bhgs_grid* grid, double* out, size_t len) {
  return guarded([&] {
    require(grid, "grid");
    copy_vector(grid->grid->weights(), out, len);
  });
}

bhgs_status bhgs_field_create(const bhgs_grid* grid, size_t m, const double* values, bhgs_field** out) {
  return guarded([&] {
    require(grid, "grid");
    require(values, "values");
    require(out, "out");
    if (m == 0) bhgs::fail(bhgs::ErrorKind::parameter, "a field needs at least one component");
    const auto n = static_cast<Eigen::Index>(grid->grid->size());
    Eigen::MatrixXd v(n, static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < v.cols(); ++k) v(i, k) = values[i * v.cols() + k];
    }
    *out = new bhgs_field{bhgs::RadialField(grid->grid, std::move(v))};
  });
}

bhgs_status bhgs_field_read(const char* path, bhgs_field** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const std::filesystem::path p(path);
    if (p.extension() == ".json") {
      *out = new bhgs_field{bhgs::io::field_from_json(nlohmann::json::parse(bhgs::io::read_text(p)))};
    } else {
      *out = new bhgs_field{bhgs::io::read_field_csv(p)};
    }
  });
}

bhgs_status bhgs_field_write_csv(const bhgs_field* field, const char* path) {
  return guarded([&] {
    require(field, "field");
    require(path, "path");
    bhgs::io::write_field_csv(path, field->field);
  });
}

void bhgs_field_free(bhgs_field* field) { delete field; }

size_t bhgs_field_size(const bhgs_field* field) { return field ? field->field.size() : 0; }

size_t bhgs_field_components(const bhgs_field* field) { return field ? field->field.components() : 0; }

bhgs_status bhgs_field_values(const bhgs_field* field, double* out, size_t len) {
  return guarded([&] {
    require(field, "field");
    require(out, "output buffer");
    const auto& v = field->field.values();
    if (len < static_cast<size_t>(v.size())) bhgs::fail(bhgs::ErrorKind::parameter, "output buffer too small");
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index k = 0; k < v.cols(); ++k) out[i * v.cols() + k] = v(i, k);
    }
  });
}

bhgs_status bhgs_field_dilate(const bhgs_field* field, double s, bhgs_field** out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = new bhgs_field{bhgs::dilate(field->field, s)};
  });
}

bhgs_status bhgs_field_action(const bhgs_field* field, const bhgs_potential* potential, bhgs_energy* out) {
  return guarded([&] {
    require(field, "field");
    require(potential, "potential");
    require(out, "out");
    const bhgs::EnergyReport r = bhgs::action(field->field, potential->model);
    *out = bhgs_energy{r.K, r.V, r.S, r.l2_sq, r.grad_sq, r.entropy, r.hess_sq, r.pohozaev_residual};
  });
}

bhgs_status bhgs_potential_from_json(const char* spec_json, bhgs_potential** out) {
  return guarded([&] {
    require(spec_json, "spec_json");
    require(out, "out");
    nlohmann::json spec;
    try {
      spec = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::parse_error& e) {
      bhgs::fail(bhgs::ErrorKind::config, e.what());
    }
    *out = new bhgs_potential{bhgs::potential_from_spec(spec)};
  });
}

bhgs_status bhgs_potential_logarithmic(size_t m, bhgs_potential** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bhgs_potential{bhgs::make_logarithmic(m)};
  });
}

bhgs_status bhgs_potential_defocusing_well(size_t m, double p, bhgs_potential** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bhgs_potential{bhgs::make_defocusing_well(m, p)};
  });
}

bhgs_status bhgs_potential_validate(const bhgs_potential* potential, size_t samples) {
  return guarded([&] {
    require(potential, "potential");
    bhgs::validate(potential->model, samples);
  });
}

void bhgs_potential_free(bhgs_potential* potential) { delete potential; }

bhgs_status bhgs_minimize(const bhgs_potential* potential, const char* solver_json, bhgs_result** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require(potential, "potential");
    require(out, "out");
    bhgs::SolverConfig config;
    if (solver_json) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(solver_json);
      } catch (const nlohmann::json::parse_error& e) {
        bhgs::fail(bhgs::ErrorKind::config, e.what());
      }
      config = bhgs::SolverConfig::from_json(j);
    }
    try {
      *out = new bhgs_result{std::make_shared<const bhgs::GroundStateResult>(bhgs::minimize(potential->model, config))};
    } catch (const bhgs::ConvergenceError& e) {
      if (e.best()) *out = new bhgs_result{e.best()};
      throw;
    }
  });
}

void bhgs_result_free(bhgs_result* result) { delete result; }

double bhgs_result_T(const bhgs_result* result) { return result ? result->result->T_estimate : 0.0; }
double bhgs_result_lambda(const bhgs_result* result) { return result ? result->result->lambda : 0.0; }
double bhgs_result_pohozaev_residual(const bhgs_result* result) {
  return result ? result->result->pohozaev_residual : 0.0;
}
double bhgs_result_pde_residual(const bhgs_result* result) { return result ? result->result->pde_residual : 0.0; }
double bhgs_result_action(const bhgs_result* result) { return result ? result->result->action_S : 0.0; }

bhgs_status bhgs_result_groundstate(const bhgs_result* result, bhgs_field** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = new bhgs_field{result->result->groundstate};
  });
}

bhgs_status bhgs_result_minimizer(const bhgs_result* result, bhgs_field** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = new bhgs_field{result->result->minimizer};
  });
}

bhgs_status bhgs_extract_lambda(const bhgs_field* field, const bhgs_potential* potential, double* out) {
  return guarded([&] {
    require(field, "field");
    require(potential, "potential");
    require(out, "out");
    *out = bhgs::extract_lambda(field->field, potential->model);
  });
}

bhgs_status bhgs_pde_residual(const bhgs_field* field, const bhgs_potential* potential, double* out) {
  return guarded([&] {
    require(field, "field");
    require(potential, "potential");
    require(out, "out");
    *out = bhgs::pde_residual(field->field, potential->model);
  });
}

bhgs_status bhgs_classical_lsi(const bhgs_field* field, bhgs_report* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    fill(bhgs::classical_lsi(field->field), out);
  });
}

bhgs_status bhgs_biharmonic_lsi(const bhgs_field* field, double T, bhgs_report* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    fill(bhgs::biharmonic_lsi(field->field, T), out);
  });
}

bhgs_status bhgs_interpolation(const bhgs_field* field, bhgs_report* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    fill(bhgs::interpolation(field->field), out);
  });
}

bhgs_status bhgs_constant_bound(double T, bhgs_report* out) {
  return guarded([&] {
    require(out, "out");
    fill(bhgs::constant_bound(T), out);
  });
}

bhgs_status bhgs_config_load(const char* path, char** json_out) {
  return guarded([&] {
    require(path, "path");
    require(json_out, "json_out");
    *json_out = duplicate(bhgs::io::load_config_file(path).dump());
  });
}

bhgs_status bhgs_run(const char* config_json, int* exit_code, char** record_json) {
  if (exit_code) *exit_code = bhgs::exit_config;
  if (record_json) *record_json = nullptr;
  return guarded([&] {
    require(config_json, "config_json");
    require(exit_code, "exit_code");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      bhgs::fail(bhgs::ErrorKind::config, e.what());
    }
    const bhgs::RunConfig config = bhgs::RunConfig::from_json(j);
    const bhgs::RunRecord record = bhgs::run(config);
    *exit_code = record.exit_code;
    if (record_json) *record_json = duplicate(record.data.dump(2));
  });
}

}  // extern "C"
