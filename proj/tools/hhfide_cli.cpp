#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hhfide/bvp.hpp"
#include "hhfide/certificates.hpp"
#include "hhfide/config.hpp"
#include "hhfide/errors.hpp"
#include "hhfide/stability.hpp"
#include "hhfide/verification.hpp"

namespace {

using namespace hhfide;

// Bound of the boundary-condition defect accepted by `solve` and `example`.
constexpr double kBcDefectLimit = 1e-6;
// Weighted error accepted against a manufactured exact solution.
constexpr double kManufacturedLimit = 1e-3;

struct Flags {
  std::string config;
  std::optional<std::size_t> panels;
  std::optional<double> tol;
  std::string out;
  std::optional<double> phi;
  std::string level = "fast";
};

// Output stream that closes itself; stdout when no path is given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) {
      file_ = stdout;
      return;
    }
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw Error("cannot open output file " + path);
    owned_ = true;
  }
  ~Output() {
    if (owned_) std::fclose(file_);
  }
  Output(const Output&) = delete;
  Output& operator=(const Output&) = delete;

  FILE* get() const { return file_; }
  bool is_stdout() const { return !owned_; }

 private:
  FILE* file_ = nullptr;
  bool owned_ = false;
};

void kv(FILE* f, const char* key, double v) { std::fprintf(f, "%s = %.17g\n", key, v); }
void kv(FILE* f, const char* key, std::size_t v) { std::fprintf(f, "%s = %zu\n", key, v); }
void kv(FILE* f, const char* key, bool v) { std::fprintf(f, "%s = %s\n", key, v ? "true" : "false"); }

RunConfig load(const Flags& flags) {
  RunConfig cfg = load_config(flags.config);
  if (flags.panels) cfg.panels = *flags.panels;
  if (flags.tol) cfg.solver.tol = *flags.tol;
  if (flags.phi) {
    cfg.problem.phi = *flags.phi;
    cfg.phi_consistent = false;
  }
  if (!flags.out.empty()) cfg.output_path = flags.out;
  cfg.problem.validate();
  return cfg;
}

void write_report(FILE* f, const SolveReport& r) {
  kv(f, "iterations", r.iterations);
  kv(f, "final_update_norm", r.final_update_norm);
  kv(f, "residual_norm", r.residual_norm);
  kv(f, "bc_defect", r.bc_defect);
  kv(f, "inner_iteration_max", r.inner_iteration_max);
  kv(f, "z_coefficient", r.z_coefficient);
}

void write_solution_csv(FILE* f, const Solution& s) {
  std::fprintf(f, "t,log_t,weighted_value,raw_value,F_u\n");
  const LogGrid& g = s.u.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.t(i), g.x(i), s.u.weighted(i),
                 s.u.raw(i), s.f_u.raw(i));
  }
}

// Weighted sup error against the manufactured solution u* = sum a_j (log t)^(e_j).
double manufactured_error(const Solution& s, const std::vector<LogPowerTerm>& terms) {
  const LogGrid& g = s.u.grid();
  const double shift = 1.0 - s.u.gamma_weight();
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w = 0.0;
    for (const auto& t : terms) {
      const double e = t.exponent + shift;
      w += t.coefficient * (g.x(i) == 0.0 ? (std::abs(e) < 1e-12 ? 1.0 : 0.0) : std::pow(g.x(i), e));
    }
    err = std::max(err, std::abs(w - s.u.weighted(i)));
  }
  return err;
}

int cmd_solve(const Flags& flags) {
  const RunConfig cfg = load(flags);
  const LogGrid grid(cfg.problem.b, cfg.panels);
  const Solution s = picard_solve(cfg.problem, grid, cfg.solver);
  const double fide = residual_fide(s.u, cfg.problem, cfg.solver);

  Output csv(cfg.output_path);
  write_solution_csv(csv.get(), s);
  FILE* rep = csv.is_stdout() ? stderr : stdout;
  write_report(rep, s.report);
  kv(rep, "fide_residual", fide);
  bool ok = s.report.bc_defect <= kBcDefectLimit && s.report.residual_norm <= 2.0 * cfg.solver.tol;
  if (cfg.solution) {
    const double err = manufactured_error(s, *cfg.solution);
    kv(rep, "manufactured_error", err);
    ok = ok && err <= kManufacturedLimit;
  }
  kv(rep, "pass", ok);
  return ok ? 0 : 1;
}

int cmd_certify(const Flags& flags) {
  const RunConfig cfg = load(flags);
  std::optional<GridFunction> phi;
  double lambda = 0.0;
  if (cfg.phi_profile != PhiProfile::none) {
    phi = make_phi_profile(cfg.phi_profile, cfg.problem.order, LogGrid(cfg.problem.b, cfg.panels));
    lambda = cfg.lambda_phi.value_or(default_lambda_phi(cfg.phi_profile, cfg.problem.order, cfg.problem.b));
  }
  const Certificate cert = certify(cfg.problem, phi ? &*phi : nullptr, lambda);
  Output out(cfg.output_path);
  std::fputs(to_key_value(cert).c_str(), out.get());
  return cert.existence_ok && cert.uniqueness_ok ? 0 : 1;
}

std::vector<StabilityVerdict> stability_rows(const RunConfig& cfg, const LogGrid& grid) {
  std::vector<StabilityVerdict> rows;
  const auto phi = make_phi_profile(cfg.phi_profile, cfg.problem.order, grid);
  for (double eps : cfg.epsilons) {
    PerturbationSpec p;
    p.kind = cfg.perturbation;
    p.epsilon = eps;
    p.exponent = cfg.perturbation_exponent;
    p.table = cfg.perturbation_table;
    rows.push_back(run_uh_experiment(cfg.problem, p, grid, cfg.solver));
    rows.push_back(run_generalized_uh_experiment(cfg.problem, p, grid, cfg.solver));
    if (phi) {
      p.phi_profile = phi;
      const double lambda = cfg.lambda_phi.value_or(
          default_lambda_phi(cfg.phi_profile, cfg.problem.order, cfg.problem.b));
      rows.push_back(run_uhr_experiment(cfg.problem, p, lambda, grid, cfg.solver));
    }
  }
  return rows;
}

int cmd_stability(const Flags& flags) {
  const RunConfig cfg = load(flags);
  const LogGrid grid(cfg.problem.b, cfg.panels);
  const auto rows = stability_rows(cfg, grid);
  Output out(cfg.output_path);
  std::fprintf(out.get(), "%s\n", std::string(kVerdictCsvHeader).c_str());
  bool ok = true;
  for (const auto& v : rows) {
    std::fprintf(out.get(), "%s\n", to_csv_row(v).c_str());
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}

int cmd_verify(const Flags& flags) {
  VerificationLevel level;
  if (flags.level == "fast") {
    level = VerificationLevel::fast;
  } else if (flags.level == "full") {
    level = VerificationLevel::full;
  } else {
    throw DomainError("--level must be fast or full");
  }
  const auto rows = run_verification(plan_for(level));
  Output out(flags.out);
  std::fprintf(out.get(), "identity,sample,n_panels,max_error,tolerance,order,min_order,pass\n");
  bool ok = true;
  for (const auto& r : rows) {
    std::fprintf(out.get(), "%s,%s,%zu,%.17g,%.17g,%.17g,%.17g,%s\n", r.identity.c_str(),
                 r.sample.c_str(), r.n_panels, r.max_error, r.tolerance, r.order, r.min_order,
                 r.pass ? "true" : "false");
    if (!r.pass) {
      std::fprintf(stderr, "FAILED %s [%s]: error %.3e (tolerance %.3e), order %.2f\n",
                   r.identity.c_str(), r.sample.c_str(), r.max_error, r.tolerance, r.order);
    }
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

int cmd_example(const Flags& flags) {
  RunConfig cfg = example_config();
  if (flags.panels) cfg.panels = *flags.panels;
  if (flags.tol) cfg.solver.tol = *flags.tol;
  if (flags.phi) cfg.problem.phi = *flags.phi;
  Output out(flags.out);
  FILE* f = out.get();

  const Certificate cert = certify(cfg.problem);
  std::fprintf(f, "# alpha = 1/3, beta = 2/3, gamma = 7/9, b = e, c1 = 2, c2 = 1, phi = %.17g\n",
               cfg.problem.phi);
  std::fprintf(f, "K_f = %.17g, L_f = %.17g\n", cert.bounds.k_f, cert.bounds.l_f);
  kv(f, "A", cert.a_const);
  kv(f, "Omega", cert.omega);
  kv(f, "Omega_gamma_scaled", cert.omega_gamma_scaled);
  kv(f, "Lambda", cert.lambda_cap);
  if (cert.ball_radius) kv(f, "ball_radius", *cert.ball_radius);
  kv(f, "B", cert.b_const);
  kv(f, "C_f", cert.c_f);
  kv(f, "uniqueness_ok", cert.uniqueness_ok);
  kv(f, "existence_ok", cert.existence_ok);

  const LogGrid grid(cfg.problem.b, cfg.panels);
  const Solution s = picard_solve(cfg.problem, grid, cfg.solver);
  write_report(f, s.report);
  double ratio = 0.0;
  const auto& h = s.report.update_history;
  for (std::size_t k = 1; k + 1 < h.size(); ++k) ratio = std::max(ratio, h[k] / h[k - 1]);
  kv(f, "max_contraction_ratio", ratio);

  PerturbationSpec p;
  p.epsilon = 1e-3;
  const StabilityVerdict v = run_uh_experiment(cfg.problem, p, grid, cfg.solver);
  std::fprintf(f, "%s\n%s\n", std::string(kVerdictCsvHeader).c_str(), to_csv_row(v).c_str());

  const bool ok = cert.uniqueness_ok && s.report.bc_defect <= kBcDefectLimit && v.pass;
  kv(f, "pass", ok);
  return ok ? 0 : 1;
}

void add_common(CLI::App* sub, Flags& flags, bool needs_config) {
  if (needs_config) {
    sub->add_option("--config", flags.config, "problem configuration file")->required()->check(CLI::ExistingFile);
  }
  sub->add_option("--panels", flags.panels, "number of grid panels")->check(CLI::Range(8, 1 << 20));
  sub->add_option("--tol", flags.tol, "outer Picard tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", flags.out, "output path (default: stdout)");
  sub->add_option("--phi", flags.phi, "boundary value phi");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and certificates for implicit Hilfer-Hadamard fractional boundary value problems"};
  app.require_subcommand(1);
  Flags flags;

  auto* solve = app.add_subcommand("solve", "solve a configured problem; writes the solution CSV");
  add_common(solve, flags, true);
  auto* certify_cmd = app.add_subcommand("certify", "compute all certificate constants");
  add_common(certify_cmd, flags, true);
  auto* stability = app.add_subcommand("stability", "run Ulam-Hyers(-Rassias) experiments");
  add_common(stability, flags, true);
  auto* verify = app.add_subcommand("verify", "check discrete operators against closed forms and identities");
  verify->add_option("--level", flags.level, "fast (N = 128) or full (N = 512)")
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--out", flags.out, "output path (default: stdout)");
  auto* example = app.add_subcommand("example", "reproduce the worked example");
  add_common(example, flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(flags);
    if (certify_cmd->parsed()) return cmd_certify(flags);
    if (stability->parsed()) return cmd_stability(flags);
    if (verify->parsed()) return cmd_verify(flags);
    if (example->parsed()) return cmd_example(flags);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
