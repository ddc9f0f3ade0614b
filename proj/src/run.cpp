#include "pucci/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>

#include "pucci/analysis.hpp"
#include "pucci/barrier.hpp"
#include "pucci/eigen_estimator.hpp"
#include "pucci/parallel.hpp"
#include "pucci/records.hpp"

namespace pucci {

namespace {

namespace fs = std::filesystem;

void write_operator(JsonWriter& w, const OperatorSpec& op) {
  w.begin_object();
  w.kv("a", op.a);
  w.kv("A", op.A);
  w.kv("alpha", op.alpha);
  w.kv("sign", to_string(op.sign));
  w.kv("eps_reg", op.eps_reg);
  w.end_object();
}

void write_domain(JsonWriter& w, const DomainSpec& d) {
  w.begin_object();
  if (d.is_ball()) {
    w.kv("type", "ball");
    w.kv("dim", d.ball().dim);
    w.key("center").begin_array().value(d.ball().center(0)).value(d.ball().center(1)).end_array();
    w.kv("radius", d.ball().radius);
  } else if (d.is_box()) {
    w.kv("type", "box");
    w.kv("dim", d.box().dim);
    w.key("lo").begin_array().value(d.box().lo(0)).value(d.box().lo(1)).end_array();
    w.key("hi").begin_array().value(d.box().hi(0)).value(d.box().hi(1)).end_array();
  } else {
    w.kv("type", "star");
    w.kv("rho0", d.star().c0);
    w.key("rho_cos").begin_array();
    for (double v : d.star().cos_coef) w.value(v);
    w.end_array();
    w.key("rho_sin").begin_array();
    for (double v : d.star().sin_coef) w.value(v);
    w.end_array();
  }
  w.end_object();
}

void write_config_echo(JsonWriter& w, const RunConfig& cfg) {
  w.begin_object();
  for (const auto& [k, v] : cfg.resolved) w.kv(k, v);
  w.end_object();
}

struct Runner {
  const RunConfig& cfg;
  const RunOptions& opts;
  fs::path dir;

  fs::path path(const std::string& suffix) const { return dir / (cfg.prefix + suffix); }

  void write_record(const JsonWriter& w, const std::string& suffix = ".json") const {
    write_text_file(path(suffix).string(), w.str() + "\n");
  }

  void diagnostic(const std::string& message, int code) const {
    JsonWriter w;
    w.begin_object();
    w.kv("error", message);
    w.kv("exit_code", static_cast<long>(code));
    w.key("config");
    write_config_echo(w, cfg);
    w.end_object();
    write_record(w, "_diagnostic.json");
  }

  void field_artifacts(const ScalarField& u, const std::string& stem, JsonWriter& w) const {
    const std::string csv = path("_" + stem + ".csv").string();
    const std::string bin = path("_" + stem + ".bin").string();
    const std::string dat = path("_" + stem + ".dat").string();
    write_field_csv(u, csv);
    write_field_binary(u, bin);
    write_field_plot(u, dat);
    w.key(stem + "_path").begin_object();
    w.kv("csv", csv);
    w.kv("binary", bin);
    w.kv("plot", dat);
    w.end_object();
  }

  int eigen() const {
    EstimateOptions eo;
    eo.stencil_width = cfg.stencil_width;
    EstimateDiagnostics diag;
    const EigenResult er = estimate_lambda_bar(cfg.op, cfg.domain, cfg.h, cfg.bracket_tol, eo,
                                               &diag);
    JsonWriter w;
    w.begin_object();
    w.kv("lambda_lo", er.lambda_lo);
    w.kv("lambda_hi", er.lambda_hi);
    w.kv("lambda_hat", er.lambda_hat);
    w.kv("residual", er.residual);
    w.key("grid").begin_object();
    w.kv("h", cfg.h);
    w.kv("stencil_width", cfg.stencil_width);
    w.key("domain");
    write_domain(w, cfg.domain);
    w.end_object();
    w.key("operator");
    write_operator(w, cfg.op);
    field_artifacts(er.field(), "eigenfunction", w);
    w.key("diagnostics").begin_object();
    w.kv("upper_bound", diag.upper_bound);
    w.kv("blowup_threshold", diag.blowup_threshold);
    w.kv("base_norm", diag.base_norm);
    w.kv("probes", static_cast<long>(diag.probes.size()));
    w.kv("inner_sweeps", diag.total_inner_sweeps);
    w.end_object();
    w.key("config");
    write_config_echo(w, cfg);
    w.end_object();
    write_record(w);
    return 0;
  }

  int solve() const {
    const GridPtr grid = build_grid(cfg.domain, cfg.h, cfg.stencil_width);
    const ScalarField f = ScalarField::constant(grid, cfg.f_const);
    const ScalarField bc = ScalarField::zeros(grid);
    const DirichletResult dr =
        solve_dirichlet(cfg.op, grid, f, cfg.lambda, bc, cfg.tol, cfg.max_steps);
    JsonWriter w;
    w.begin_object();
    w.kv("status", dr.status == SolveStatus::Converged ? "converged" : "non-convergence");
    w.kv("residual", dr.residual);
    w.kv("sweeps", dr.sweeps);
    w.kv("sup_norm", dr.u.sup_norm());
    w.kv("lambda", cfg.lambda);
    w.kv("f", cfg.f_const);
    w.key("operator");
    write_operator(w, cfg.op);
    field_artifacts(dr.u, "solution", w);
    w.key("config");
    write_config_echo(w, cfg);
    w.end_object();
    write_record(w);
    return dr.status == SolveStatus::Converged ? 0 : 3;
  }

  int radial() const {
    if (!cfg.domain.is_ball()) {
      diagnostic("radial command requires a ball domain", 2);
      return 2;
    }
    const EigenResult er =
        shoot_eigenvalue(cfg.op, cfg.domain.dim(), cfg.domain.ball().radius, cfg.tol);
    const RadialProfile& prof = er.profile();
    // plot-ready profile columns r, g, g'
    std::string plot;
    char buf[128];
    for (int k = 0; k <= 1024; ++k) {
      const double r = prof.R * k / 1024.0;
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", r, prof.g(r), prof.gp(r));
      plot += buf;
    }
    write_text_file(path("_profile.dat").string(), plot);

    JsonWriter w;
    w.begin_object();
    w.kv("lambda_lo", er.lambda_lo);
    w.kv("lambda_hi", er.lambda_hi);
    w.kv("lambda_hat", er.lambda_hat);
    w.kv("residual", er.residual);
    w.kv("dim", cfg.domain.dim());
    w.kv("radius", cfg.domain.ball().radius);
    w.kv("profile_path", path("_profile.dat").string());
    w.key("operator");
    write_operator(w, cfg.op);
    w.key("config");
    write_config_echo(w, cfg);
    w.end_object();
    write_record(w);
    return 0;
  }

  int verify_operator() const {
    const AxiomReport rep = verify_operator_axioms(cfg.op, cfg.n_samples, opts.seed);
    JsonWriter w;
    w.begin_object();
    w.kv("n_samples", rep.n_samples);
    w.kv("seed", static_cast<long>(rep.seed));
    w.kv("max_homogeneity_residual", rep.max_homogeneity_residual);
    w.kv("max_sandwich_residual", rep.max_sandwich_residual);
    w.kv("max_ellipticity_residual", rep.max_ellipticity_residual);
    w.kv("homogeneity_violations", rep.homogeneity_violations);
    w.kv("sandwich_violations", rep.sandwich_violations);
    w.kv("ellipticity_violations", rep.ellipticity_violations);
    w.kv("all_within_1e-10", rep.all_within(1e-10));
    w.key("operator");
    write_operator(w, cfg.op);
    w.key("config");
    write_config_echo(w, cfg);
    w.end_object();
    write_record(w);
    return 0;
  }

  int barrier() const {
    const GridPtr grid = build_grid(cfg.domain, cfg.h, cfg.stencil_width);
    const BarrierField bb = boundary_barrier(cfg.domain, cfg.op, cfg.gamma, cfg.delta, grid);
    const BarrierField gb = global_barrier(cfg.domain, cfg.op, cfg.beta, cfg.gamma, grid);
    JsonWriter w;
    w.begin_object();
    w.key("boundary").begin_object();
    w.kv("gamma", bb.gamma);
    w.kv("delta", bb.delta);
    w.kv("certified_margin", bb.certified_margin);
    w.kv("claim_bound_margin", bb.claim_bound_margin);
    w.kv("ridge_fraction", bb.ridge_fraction);
    w.kv("n_samples", bb.n_samples);
    w.end_object();
    w.key("global").begin_object();
    w.kv("gamma", gb.gamma);
    w.kv("k", gb.k);
    w.kv("beta", gb.beta);
    w.kv("amplitude", gb.m0);
    w.kv("certified_margin", gb.certified_margin);
    w.kv("ridge_fraction", gb.ridge_fraction);
    w.kv("n_samples", gb.n_samples);
    w.end_object();
    w.key("operator");
    write_operator(w, cfg.op);
    field_artifacts(bb.field, "boundary_barrier", w);
    field_artifacts(gb.field, "global_barrier", w);
    w.key("config");
    write_config_echo(w, cfg);
    w.end_object();
    write_record(w);
    return 0;
  }

  int compare() const {
    if (!cfg.domain.is_ball()) {
      diagnostic("compare command requires a ball domain", 2);
      return 2;
    }
    EstimateOptions eo;
    eo.stencil_width = cfg.stencil_width;
    const EigenResult grid_er = estimate_lambda_bar(cfg.op, cfg.domain, cfg.h, cfg.bracket_tol, eo);
    const EigenResult shoot_er =
        shoot_eigenvalue(cfg.op, cfg.domain.dim(), cfg.domain.ball().radius,
                         0.01 * cfg.bracket_tol);
    const double gap = std::abs(grid_er.lambda_hat - shoot_er.lambda_hat);
    const double combined =
        0.5 * (grid_er.lambda_hi - grid_er.lambda_lo) +
        0.5 * (shoot_er.lambda_hi - shoot_er.lambda_lo) + 0.03 * shoot_er.lambda_hat;
    JsonWriter w;
    w.begin_object();
    w.key("grid_estimate").begin_object();
    w.kv("lambda_lo", grid_er.lambda_lo);
    w.kv("lambda_hi", grid_er.lambda_hi);
    w.kv("lambda_hat", grid_er.lambda_hat);
    w.kv("residual", grid_er.residual);
    w.end_object();
    w.key("radial_oracle").begin_object();
    w.kv("lambda_lo", shoot_er.lambda_lo);
    w.kv("lambda_hi", shoot_er.lambda_hi);
    w.kv("lambda_hat", shoot_er.lambda_hat);
    w.kv("residual", shoot_er.residual);
    w.end_object();
    w.kv("gap", gap);
    w.kv("tolerance", combined);
    w.kv("agree", gap <= combined);
    w.key("operator");
    write_operator(w, cfg.op);
    w.key("config");
    write_config_echo(w, cfg);
    w.end_object();
    write_record(w);
    return 0;
  }
};

}  // namespace

int run(const RunConfig& cfg, const RunOptions& opts) {
  set_max_threads(opts.threads);
  Runner runner{cfg, opts, fs::path(opts.out_dir.empty() ? cfg.out_dir : opts.out_dir)};
  fs::create_directories(runner.dir);

  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  std::string error;
  try {
    switch (cfg.command) {
      case Command::Eigen: code = runner.eigen(); break;
      case Command::Solve: code = runner.solve(); break;
      case Command::Radial: code = runner.radial(); break;
      case Command::VerifyOperator: code = runner.verify_operator(); break;
      case Command::Barrier: code = runner.barrier(); break;
      case Command::Compare: code = runner.compare(); break;
    }
  } catch (const BarrierFailure& e) {
    error = e.what();
    code = 4;
  } catch (const std::invalid_argument& e) {
    error = e.what();
    code = 2;
  } catch (const std::runtime_error& e) {
    error = e.what();
    const std::string what = e.what();
    code = what.find("bracket") != std::string::npos ||
                   what.find("indeterminate") != std::string::npos
               ? 4
               : 3;
  }
  if (code != 0 && !error.empty()) runner.diagnostic(error, code);

  // timings live apart from the deterministic records
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    JsonWriter w;
    w.begin_object();
    w.kv("command", to_string(cfg.command));
    w.kv("runtime_seconds", seconds);
    w.kv("threads", static_cast<long>(max_threads()));
    const std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    w.kv("timestamp", stamp);
    w.kv("exit_code", static_cast<long>(code));
    w.end_object();
    write_text_file((runner.dir / (cfg.prefix + "_meta.json")).string(), w.str() + "\n");
  }
  return code;
}

}  // namespace pucci
