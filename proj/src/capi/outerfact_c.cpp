#include "outerfact/outerfact.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <variant>

#include "json.hpp"
#include "outerfact/coeff_io.hpp"
#include "outerfact/error.hpp"
#include "outerfact/factormd.hpp"
#include "outerfact/schur.hpp"

using nlohmann::json;
using namespace outerfact;

struct of_poly {
  AnyPoly value;
};

struct of_matrix {
  ComplexMatrix value;
};

struct of_report {
  json value;
};

namespace {

thread_local std::string last_error;

of_status set_error(of_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

of_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return OF_ERR_VALIDATION;
    case ErrorKind::io: return OF_ERR_IO;
    case ErrorKind::not_psd: return OF_ERR_NOT_PSD;
    case ErrorKind::numerical: return OF_ERR_NUMERICAL;
  }
  return OF_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes.
template <class F>
of_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const json::exception& e) {
    return set_error(OF_ERR_VALIDATION, std::string("malformed JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(OF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(OF_ERR_INTERNAL, e.what());
  }
}

void require_arg(const void* p, const char* name) {
  if (p == nullptr) fail(ErrorKind::validation, std::string(name) + " is NULL");
}

Tolerances to_core(const of_tolerances* t) {
  Tolerances out;
  if (t != nullptr) {
    out.herm_tol = t->herm_tol;
    out.psd_tol = t->psd_tol;
    out.rank_tol = t->rank_tol;
    out.conv_tol = t->conv_tol;
    out.residual_tol = t->residual_tol;
    out.max_trunc = t->max_trunc;
    out.grid_points_per_dim = t->grid_points_per_dim;
  }
  out.validate();
  return out;
}

json tolerances_json(const Tolerances& t, std::size_t dims) {
  return {{"herm_tol", t.herm_tol},           {"psd_tol", t.psd_tol},
          {"rank_tol", t.rank_tol},           {"conv_tol", t.conv_tol},
          {"residual_tol", t.residual_tol},   {"max_trunc", t.trunc_limit(dims)},
          {"grid_points_per_dim", t.grid_points(dims)}};
}

const LaurentPoly& laurent(const of_poly* q, std::size_t dims) {
  require_arg(q, "q");
  const auto* l = std::get_if<LaurentPoly>(&q->value);
  require(l != nullptr, "expected a Laurent coefficient file");
  require(dims == 0 || l->dims() == dims,
          "expected " + std::to_string(dims) + " variable(s), got " + std::to_string(l->dims()));
  return *l;
}

const char* outcome_name(of_status s) {
  switch (s) {
    case OF_OK: return "success";
    case OF_CONDITION_FAILED: return "condition_failed";
    case OF_NO_CONVERGENCE: return "no_convergence";
    default: return "error";
  }
}

of_status emit(of_report** report, const char* command, of_status s, const Tolerances& tol,
               std::size_t dims, json metrics, json detail = json::object()) {
  json r = std::move(detail);
  r["command"] = command;
  r["outcome"] = outcome_name(s);
  r["tolerances"] = tolerances_json(tol, dims);
  r["metrics"] = std::move(metrics);
  *report = new of_report{std::move(r)};
  return s;
}

json certificate_metrics(const OuterCertificates& c) {
  json m = {{"residual", c.residual},
            {"residual_ok", c.residual_ok},
            {"schur_gap", c.schur_gap},
            {"schur_outer", c.schur_outer},
            {"schur_converged", c.schur_converged},
            {"ranges_included", c.ranges_included}};
  if (c.min_root_modulus) m["min_root_modulus"] = *c.min_root_modulus;
  if (c.roots_outer) m["roots_outer"] = *c.roots_outer;
  return m;
}

json condition_metrics(const MultiConditionReport& c) {
  return {{"max_violation", c.max_violation}, {"rank_y", c.rank_y},
          {"condition_passed", c.passed},     {"converged", c.converged},
          {"trunc_gap", c.trunc_gap},         {"trunc_used", c.trunc_used},
          {"coherence_gap", c.coherence_gap}};
}

json violation_list(const MultiConditionReport& c) {
  json v = json::array();
  for (const auto& [m, val] : c.violation) v.push_back({{"index", m}, {"violation", val}});
  return v;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

void of_tolerances_default(of_tolerances* out) {
  if (out == nullptr) return;
  const Tolerances d;
  *out = {d.herm_tol, d.psd_tol, d.rank_tol, d.conv_tol, d.residual_tol, d.max_trunc,
          d.grid_points_per_dim};
}

const char* of_last_error(void) { return last_error.c_str(); }

const char* of_status_name(of_status s) {
  switch (s) {
    case OF_OK: return "ok";
    case OF_CONDITION_FAILED: return "condition_failed";
    case OF_NO_CONVERGENCE: return "no_convergence";
    case OF_ERR_VALIDATION: return "validation_error";
    case OF_ERR_IO: return "io_error";
    case OF_ERR_NOT_PSD: return "not_psd";
    case OF_ERR_NUMERICAL: return "numerical_error";
    case OF_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

void of_string_free(char* s) { std::free(s); }

of_status of_poly_parse(const char* json_text, double herm_tol, of_poly** out) {
  return guarded([&] {
    require_arg(json_text, "json_text");
    require_arg(out, "out");
    *out = new of_poly{poly_from_json(parse_json_text(json_text), herm_tol)};
    return OF_OK;
  });
}

of_status of_poly_read(const char* path, double herm_tol, of_poly** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    *out = new of_poly{poly_from_json(parse_json_text(read_text(path)), herm_tol)};
    return OF_OK;
  });
}

of_status of_poly_dump(const of_poly* p, char** out) {
  return guarded([&] {
    require_arg(p, "p");
    require_arg(out, "out");
    const json j = std::visit([](const auto& v) { return to_json(v); }, p->value);
    *out = dup_string(j.dump(2));
    return OF_OK;
  });
}

of_status of_poly_write(const of_poly* p, const char* path) {
  return guarded([&] {
    require_arg(p, "p");
    require_arg(path, "path");
    const json j = std::visit([](const auto& v) { return to_json(v); }, p->value);
    write_text(path, j.dump(2) + "\n");
    return OF_OK;
  });
}

of_status of_poly_info_get(const of_poly* p, of_poly_info* out) {
  return guarded([&] {
    require_arg(p, "p");
    require_arg(out, "out");
    if (const auto* l = std::get_if<LaurentPoly>(&p->value)) {
      *out = {OF_LAURENT, l->dims(), static_cast<size_t>(l->block_size()),
              static_cast<size_t>(l->block_size()), l->canonical().size()};
    } else {
      const auto& a = std::get<AnalyticPoly>(p->value);
      *out = {OF_ANALYTIC, a.dims(), static_cast<size_t>(a.rows()),
              static_cast<size_t>(a.cols()), a.coeffs().size()};
    }
    return OF_OK;
  });
}

of_status of_poly_degree(const of_poly* p, int* degree, size_t cap) {
  return guarded([&] {
    require_arg(p, "p");
    require_arg(degree, "degree");
    const auto& d = std::visit([](const auto& v) -> const std::vector<int>& { return v.degree(); },
                               p->value);
    for (size_t i = 0; i < d.size() && i < cap; ++i) degree[i] = d[i];
    return OF_OK;
  });
}

of_status of_poly_coeff(const of_poly* p, const int* index, double* re, double* im) {
  return guarded([&] {
    require_arg(p, "p");
    require_arg(index, "index");
    require_arg(re, "re");
    require_arg(im, "im");
    const ComplexMatrix c = std::visit(
        [&](const auto& v) {
          return v.coeff(Exponent(index, index + v.dims()));
        },
        p->value);
    for (Index i = 0; i < c.rows(); ++i) {
      for (Index j = 0; j < c.cols(); ++j) {
        re[i * c.cols() + j] = c(i, j).real();
        im[i * c.cols() + j] = c(i, j).imag();
      }
    }
    return OF_OK;
  });
}

void of_poly_free(of_poly* p) { delete p; }

of_status of_matrix_parse(const char* json_text, of_matrix** out) {
  return guarded([&] {
    require_arg(json_text, "json_text");
    require_arg(out, "out");
    *out = new of_matrix{matrix_from_json(parse_json_text(json_text))};
    return OF_OK;
  });
}

of_status of_matrix_read(const char* path, of_matrix** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    *out = new of_matrix{matrix_from_json(parse_json_text(read_text(path)))};
    return OF_OK;
  });
}

void of_matrix_free(of_matrix* m) { delete m; }

of_status of_factor_1d(const of_poly* q, const of_tolerances* tol, of_poly** factor,
                       of_report** report) {
  return guarded([&] {
    require_arg(report, "report");
    const Tolerances t = to_core(tol);
    const LaurentPoly& lq = laurent(q, 1);
    OuterFactorization f = factor_outer_1d(lq, t);
    json m = certificate_metrics(f.certificates);
    m["rank"] = f.rank;
    m["converged"] = f.converged;
    m["trunc_used"] = f.trunc_used;
    m["trunc_gap"] = f.trunc_gap;
    // Every PSD one-variable symbol factors, so a shortfall is numerical.
    const of_status s = f.converged && f.certificates.all_passed() ? OF_OK : OF_NO_CONVERGENCE;
    if (s == OF_OK && factor != nullptr) *factor = new of_poly{std::move(f.p)};
    return emit(report, "factor1", s, t, 1, std::move(m));
  });
}

of_status of_factor_2d(const of_poly* q, const of_tolerances* tol, of_poly** factor,
                       of_report** report) {
  return guarded([&] {
    require_arg(report, "report");
    const Tolerances t = to_core(tol);
    const LaurentPoly& lq = laurent(q, 2);
    Factor2dResult r = factor_outer_2d(lq, t);
    json m = condition_metrics(r.condition);
    json detail = {{"violations", violation_list(r.condition)}};
    of_status s = OF_OK;
    if (!r.condition.converged) {
      s = OF_NO_CONVERGENCE;
    } else if (!r.condition.passed) {
      s = OF_CONDITION_FAILED;
    } else {
      const OuterFactorization& f = *r.factor;
      m.update(certificate_metrics(f.certificates));
      m["rank"] = f.rank;
      if (!f.certificates.all_passed()) s = OF_NO_CONVERGENCE;
    }
    if (s == OF_OK && factor != nullptr) *factor = new of_poly{std::move(r.factor->p)};
    return emit(report, "factor2", s, t, 2, std::move(m), std::move(detail));
  });
}

of_status of_check_multi(const of_poly* q, const of_tolerances* tol, of_report** report) {
  return guarded([&] {
    require_arg(report, "report");
    const Tolerances t = to_core(tol);
    const MultiConditionReport c = check_multi_condition(laurent(q, 2), t);
    const of_status s =
        !c.converged ? OF_NO_CONVERGENCE : (c.passed ? OF_OK : OF_CONDITION_FAILED);
    return emit(report, "check-multi", s, t, 2, condition_metrics(c),
                {{"violations", violation_list(c)}});
  });
}

of_status of_check_2var(const of_poly* q, const of_tolerances* tol, of_report** report) {
  return guarded([&] {
    require_arg(report, "report");
    const Tolerances t = to_core(tol);
    const LaurentPoly& lq = laurent(q, 2);
    const TwoVarReport r = check_2var_decomposition(lq, t);
    const double threshold = decomposition_threshold(lq, t);
    const bool holds = r.holds(threshold);
    const of_status s = !r.converged ? OF_NO_CONVERGENCE : (holds ? OF_OK : OF_CONDITION_FAILED);
    json m = {{"schureq1_gap", r.schureq1_gap},       {"schureq2_gap", r.schureq2_gap},
              {"zero_pattern_gap", r.zero_pattern_gap}, {"threshold", threshold},
              {"holds", holds},                        {"converged", r.converged}};
    return emit(report, "check-2var", s, t, 2, std::move(m));
  });
}

of_status of_check_gw(const of_poly* q, const of_tolerances* tol, of_report** report) {
  return guarded([&] {
    require_arg(report, "report");
    const Tolerances t = to_core(tol);
    const GwReport r = check_gw_stability(laurent(q, 2), t);
    json m = {{"stable_factorable", r.stable_factorable}, {"max_entry", r.max_entry},
              {"inverse_norm", r.inverse_norm},           {"min_on_torus", r.min_on_torus},
              {"grid_points", r.grid_points}};
    return emit(report, "check-gw", r.stable_factorable ? OF_OK : OF_CONDITION_FAILED, t, 2,
                std::move(m));
  });
}

of_status of_verify(const of_poly* q, const of_poly* p, const of_tolerances* tol,
                    of_report** report) {
  return guarded([&] {
    require_arg(report, "report");
    require_arg(p, "p");
    const Tolerances t = to_core(tol);
    const LaurentPoly& lq = laurent(q, 0);
    const auto* ap = std::get_if<AnalyticPoly>(&p->value);
    require(ap != nullptr, "expected an analytic coefficient file for the factor");
    require(ap->dims() == lq.dims(), "factor and symbol have different numbers of variables");
    require(ap->cols() == lq.block_size(), "factor columns do not match the symbol block size");
    const OuterCertificates c = certify_factor(lq, *ap, t);
    of_status s = OF_OK;
    if (!c.residual_ok) {
      s = OF_CONDITION_FAILED;
    } else if (!c.schur_converged) {
      s = OF_NO_CONVERGENCE;
    } else if (!c.all_passed()) {
      s = OF_CONDITION_FAILED;
    }
    return emit(report, "verify", s, t, lq.dims(), certificate_metrics(c));
  });
}

of_status of_schur(const of_matrix* m, const size_t* lambda, size_t lambda_len,
                   const of_tolerances* tol, of_report** report) {
  return guarded([&] {
    require_arg(m, "m");
    require_arg(report, "report");
    require(lambda != nullptr || lambda_len == 0, "lambda is NULL");
    const Tolerances t = to_core(tol);
    require(m->value.rows() == m->value.cols(), "Schur complement needs a square matrix");
    const IndexSet set(std::vector<std::size_t>(lambda, lambda + lambda_len));
    const SchurResult r = schur_complement(PsdMatrix::validated(m->value, t), set, t);
    json metrics = {{"size", m->value.rows()},
                    {"lambda_size", lambda_len},
                    {"hermitian_defect", hermitian_defect(m->value)}};
    json detail = {{"lambda", set.members()},
                   {"compact", matrix_to_json(r.compact.matrix())},
                   {"padded", matrix_to_json(r.padded())}};
    return emit(report, "schur", OF_OK, t, 1, std::move(metrics), std::move(detail));
  });
}

of_status of_report_json(const of_report* r, char** out) {
  return guarded([&] {
    require_arg(r, "r");
    require_arg(out, "out");
    *out = dup_string(r->value.dump(2));
    return OF_OK;
  });
}

of_status of_report_metric(const of_report* r, const char* key, double* value) {
  return guarded([&] {
    require_arg(r, "r");
    require_arg(key, "key");
    require_arg(value, "value");
    const json& m = r->value.at("metrics");
    const auto it = m.find(key);
    require(it != m.end() && (it->is_number() || it->is_boolean()),
            std::string("report has no numeric metric '") + key + "'");
    *value = it->is_boolean() ? (it->get<bool>() ? 1.0 : 0.0) : it->get<double>();
    return OF_OK;
  });
}

void of_report_free(of_report* r) { delete r; }

}  // extern "C"
