// outerfact: command-line front end over the C API.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "outerfact/outerfact.h"

using nlohmann::json;

namespace {

struct Options {
  of_tolerances tol{};
  std::string report_path;
  std::string first;
  std::string second;
  std::vector<std::string> inputs;
  std::string output;
  std::vector<size_t> lambda;
};

int exit_code(of_status s) {
  switch (s) {
    case OF_OK: return 0;
    case OF_CONDITION_FAILED: return 2;
    case OF_NO_CONVERGENCE:
    case OF_ERR_NUMERICAL: return 3;
    default: return 1;
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol.residual_tol, "residual tolerance")->capture_default_str();
  cmd->add_option("--rank-tol", o.tol.rank_tol, "relative rank cutoff")->capture_default_str();
  cmd->add_option("--conv-tol", o.tol.conv_tol, "truncation convergence tolerance")
      ->capture_default_str();
  cmd->add_option("--herm-tol", o.tol.herm_tol, "Hermitian defect tolerance")->capture_default_str();
  cmd->add_option("--psd-tol", o.tol.psd_tol, "negative eigenvalue tolerance")->capture_default_str();
  cmd->add_option("--max-trunc", o.tol.max_trunc, "truncation points per variable (0 = auto)")
      ->capture_default_str();
  cmd->add_option("--grid", o.tol.grid_points_per_dim, "torus grid points per variable (0 = auto)")
      ->capture_default_str();
  cmd->add_option("--report", o.report_path, "write the JSON report here instead of stdout");
}

json tolerances_json(const of_tolerances& t) {
  return {{"herm_tol", t.herm_tol},         {"psd_tol", t.psd_tol},
          {"rank_tol", t.rank_tol},         {"conv_tol", t.conv_tol},
          {"residual_tol", t.residual_tol}, {"max_trunc", t.max_trunc},
          {"grid_points_per_dim", t.grid_points_per_dim}};
}

json take_report(of_report* r) {
  char* text = nullptr;
  json out;
  if (of_report_json(r, &text) == OF_OK) {
    out = json::parse(text);
    of_string_free(text);
  }
  of_report_free(r);
  return out;
}

void print_summary(const json& report) {
  std::fprintf(stderr, "%s: %s\n", report.value("command", "?").c_str(),
               report.value("outcome", "?").c_str());
  if (report.contains("error")) {
    std::fprintf(stderr, "  %s\n", report["error"].value("message", "").c_str());
  }
  if (!report.contains("metrics")) return;
  for (const auto& [key, value] : report["metrics"].items()) {
    std::fprintf(stderr, "  %-20s %s\n", key.c_str(), value.dump().c_str());
  }
}

bool emit_report(const json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::fprintf(stderr, "error: cannot write report to %s\n", path.c_str());
    return false;
  }
  return true;
}

class Run {
 public:
  Run(std::string command, const Options& o) : command_(std::move(command)), o_(o) {}

  // Turns a status plus optional report into the final JSON and exit code.
  int finish(of_status s, of_report* r) {
    json report;
    if (r != nullptr) {
      report = take_report(r);
    } else {
      report = {{"command", command_},
                {"outcome", "error"},
                {"tolerances", tolerances_json(o_.tol)},
                {"metrics", json::object()},
                {"error", {{"kind", of_status_name(s)}, {"message", of_last_error()}}}};
    }
    report["inputs"] = o_.inputs;
    if (!o_.output.empty()) report["output"] = o_.output;
    report["metrics"]["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    print_summary(report);
    if (!emit_report(report, o_.report_path)) return 1;
    return exit_code(s);
  }

 private:
  std::string command_;
  const Options& o_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Reads o.inputs[i] as a coefficient file; on failure returns the status.
of_status read_poly(const Options& o, size_t i, of_poly** out) {
  return of_poly_read(o.inputs[i].c_str(), o.tol.herm_tol, out);
}

int run_factor(const Options& o, bool two_var) {
  Run run(two_var ? "factor2" : "factor1", o);
  of_poly* q = nullptr;
  of_status s = read_poly(o, 0, &q);
  if (s != OF_OK) return run.finish(s, nullptr);
  of_poly* p = nullptr;
  of_report* r = nullptr;
  s = two_var ? of_factor_2d(q, &o.tol, &p, &r) : of_factor_1d(q, &o.tol, &p, &r);
  of_poly_free(q);
  if (s == OF_OK && p != nullptr && !o.output.empty()) {
    const of_status w = of_poly_write(p, o.output.c_str());
    if (w != OF_OK) {
      of_poly_free(p);
      of_report_free(r);
      return run.finish(w, nullptr);
    }
  }
  of_poly_free(p);
  return run.finish(s, r);
}

using CheckFn = of_status (*)(const of_poly*, const of_tolerances*, of_report**);

int run_check(const Options& o, const char* name, CheckFn fn) {
  Run run(name, o);
  of_poly* q = nullptr;
  of_status s = read_poly(o, 0, &q);
  if (s != OF_OK) return run.finish(s, nullptr);
  of_report* r = nullptr;
  s = fn(q, &o.tol, &r);
  of_poly_free(q);
  return run.finish(s, r);
}

int run_verify(const Options& o) {
  Run run("verify", o);
  of_poly* q = nullptr;
  of_poly* p = nullptr;
  of_status s = read_poly(o, 0, &q);
  if (s == OF_OK) s = read_poly(o, 1, &p);
  of_report* r = nullptr;
  if (s == OF_OK) s = of_verify(q, p, &o.tol, &r);
  of_poly_free(q);
  of_poly_free(p);
  return run.finish(s, r);
}

int run_schur(const Options& o) {
  Run run("schur", o);
  of_matrix* m = nullptr;
  of_status s = of_matrix_read(o.inputs[0].c_str(), &m);
  of_report* r = nullptr;
  if (s == OF_OK) s = of_schur(m, o.lambda.data(), o.lambda.size(), &o.tol, &r);
  of_matrix_free(m);
  return run.finish(s, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer factorization of PSD trigonometric polynomials"};
  app.require_subcommand(1);
  Options o;
  of_tolerances_default(&o.tol);

  auto* f1 = app.add_subcommand("factor1", "outer factor of a one-variable polynomial");
  f1->add_option("input", o.first, "Laurent coefficient file ('-' for stdin)")->required();
  f1->add_option("output", o.output, "where to write the analytic factor ('-' for stdout)")
      ->required();
  auto* f2 = app.add_subcommand("factor2", "outer factor of a two-variable polynomial");
  f2->add_option("input", o.first, "Laurent coefficient file")->required();
  f2->add_option("output", o.output, "where to write the factor when it exists");
  auto* cm = app.add_subcommand("check-multi", "single-square condition on Y");
  auto* c2 = app.add_subcommand("check-2var", "Schur complement decomposition identities");
  auto* gw = app.add_subcommand("check-gw", "stable factorization test (scalar)");
  for (auto* c : {cm, c2, gw}) {
    c->add_option("input", o.first, "Laurent coefficient file")->required();
  }
  auto* ve = app.add_subcommand("verify", "check a factor against a symbol");
  ve->add_option("symbol", o.first, "Laurent coefficient file")->required();
  ve->add_option("factor", o.second, "analytic coefficient file")->required();
  auto* sc = app.add_subcommand("schur", "Schur complement of a PSD matrix");
  sc->add_option("matrix", o.first, "matrix file")->required();
  sc->add_option("--lambda", o.lambda, "kept indices, comma separated")
      ->required()->delimiter(',');
  for (auto* c : {f1, f2, cm, c2, gw, ve, sc}) add_common(c, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  o.inputs.push_back(o.first);
  if (!o.second.empty()) o.inputs.push_back(o.second);

  if (f1->parsed()) return run_factor(o, false);
  if (f2->parsed()) return run_factor(o, true);
  if (cm->parsed()) return run_check(o, "check-multi", of_check_multi);
  if (c2->parsed()) return run_check(o, "check-2var", of_check_2var);
  if (gw->parsed()) return run_check(o, "check-gw", of_check_gw);
  if (ve->parsed()) return run_verify(o);
  return run_schur(o);
}
