#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lemniscatic/cauchy.hpp"
#include "lemniscatic/oracle.hpp"
#include "lemniscatic/problem.hpp"
#include "lemniscatic/selftest.hpp"

using namespace lemniscatic;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoConvergence = 2;

struct SolveArgs {
  std::string problem;
  std::optional<std::size_t> n;
  std::optional<double> gmres_tol, newton_tol, s0, delta;
  std::string out;
  bool grid = false;
  std::string jacobian = "exact";
  std::string start;
};

void apply_overrides(ProblemSpec& spec, const SolveArgs& a) {
  if (a.n) {
    if (*a.n < 4 || *a.n % 2 != 0) throw Error(Stage::input, "--n must be even and >= 4");
    spec.n = *a.n;
  }
  if (a.gmres_tol) spec.tolerances.gmres_tol = *a.gmres_tol;
  if (a.newton_tol) spec.tolerances.newton_tol = *a.newton_tol;
  if (a.s0) spec.start.s0 = *a.s0;
  if (a.delta) spec.start.delta = *a.delta;
  if (a.start == "circles") spec.start.mode = StartMode::circles;
  if (a.start == "identity") spec.start.mode = StartMode::identity;
  if (!a.out.empty()) spec.outputs = a.out;
}

int cmd_solve(const SolveArgs& a) {
  ProblemSpec spec = load_problem(a.problem);
  apply_overrides(spec, a);
  if (spec.outputs.empty()) throw Error(Stage::input, "no output directory: set 'outputs' or pass --out");
  const PipelineResult r =
      run_pipeline(spec, a.jacobian == "simplified" ? JacobianModel::simplified : JacobianModel::exact);
  write_bundle(r, spec.outputs, a.grid || spec.grid.has_value());
  const MapDiagnostics& dg = r.solution.diagnostics;
  std::printf("ell=%zu n=%zu tau=%.17g gmres_total=%d newton_iterations=%d lemniscate_residual=%.3e\n", r.disc.ell,
              r.disc.n, r.bie.params.tau, r.bie.total_gmres_iterations(), dg.newton_iterations,
              dg.lemniscate_residual);
  for (std::size_t j = 0; j < r.disc.ell; ++j)
    std::printf("  a[%zu]=%.17g%+.17gi  m[%zu]=%.17g\n", j + 1, r.solution.domain.a[j].real(),
                r.solution.domain.a[j].imag(), j + 1, r.bie.params.m[j]);
  if (!r.converged) {
    std::fprintf(stderr, "error: %s (diagnostics written to %s)\n", r.failure.c_str(), spec.outputs.c_str());
    return kExitNoConvergence;
  }
  std::printf("bundle written to %s\n", spec.outputs.c_str());
  return kExitOk;
}

int cmd_eval(const std::string& bundle, const std::string& points, const std::string& policy,
             const std::string& out) {
  const LoadedBundle b = load_bundle(bundle);
  std::vector<Complex> pts;
  if (points == "-") {
    pts = read_points(std::cin);
  } else {
    std::ifstream in(points);
    if (!in) throw Error(Stage::input, "cannot open " + points);
    pts = read_points(in);
  }
  EvaluationRequest req{pts, NearBoundaryPolicy::automatic};
  if (policy == "plain") req.policy = NearBoundaryPolicy::plain;
  if (policy == "normalized") req.policy = NearBoundaryPolicy::normalized;
  const auto values = eval_map(b.solution, b.disc, req);
  if (out.empty() || out == "-") {
    write_eval_csv(std::cout, values);
  } else {
    std::ofstream os(out);
    if (!os) throw Error(Stage::output, "cannot open " + out);
    write_eval_csv(os, values);
  }
  return kExitOk;
}

int cmd_grid(const std::string& bundle, std::size_t nx, std::size_t ny, const std::string& out) {
  const LoadedBundle b = load_bundle(bundle);
  GridOptions go = b.spec.grid.value_or(GridOptions{});
  if (nx) go.nx = nx;
  if (ny) go.ny = ny;
  if (go.nx < 2 || go.ny < 2) throw Error(Stage::input, "grid needs nx, ny >= 2");
  write_grid_csv(out.empty() ? std::filesystem::path(bundle) / "grid.csv" : std::filesystem::path(out),
                 sample_grid(b.solution.domain, b.solution.boundary_w, go));
  return kExitOk;
}

int cmd_capacity(const std::string& problem, std::optional<std::size_t> n) {
  ProblemSpec spec = load_problem(problem);
  if (n) {
    if (*n < 4 || *n % 2 != 0) throw Error(Stage::input, "--n must be even and >= 4");
    spec.n = *n;
  }
  const Discretization disc = discretize(build_curves(spec), spec.n);
  const oracle::CapacityResult c = oracle::capacity_logkernel(disc);
  Json j = {{"capacity", c.capacity}, {"robin_constant", c.robin_constant}, {"mass", c.mass}, {"n", spec.n}};
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal maps of unbounded multiply connected domains onto lemniscatic domains"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run the full pipeline and write a result bundle");
  s->add_option("problem", solve.problem, "Problem JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--n", solve.n, "Nodes per boundary curve (even)");
  s->add_option("--gmres-tol", solve.gmres_tol, "GMRES relative residual tolerance");
  s->add_option("--newton-tol", solve.newton_tol, "Newton step tolerance");
  s->add_option("--s0", solve.s0, "Starting-center scale factor");
  s->add_option("--delta", solve.delta, "Starting-circle radius factor");
  s->add_option("--start", solve.start, "Starting guess: circles (with fallbacks) or identity")
      ->check(CLI::IsMember({"circles", "identity"}));
  s->add_option("--out", solve.out, "Output directory");
  s->add_flag("--grid", solve.grid, "Also write grid.csv");
  s->add_option("--jacobian", solve.jacobian, "exact or simplified")
      ->check(CLI::IsMember({"exact", "simplified"}));

  std::string bundle, points = "-", policy = "auto", out;
  auto* e = app.add_subcommand("eval", "Evaluate Phi at points from a file (re,im per line)");
  e->add_option("bundle", bundle, "Result bundle directory")->required();
  e->add_option("points", points, "Points file, '-' for stdin");
  e->add_option("--policy", policy, "plain, normalized or auto")
      ->check(CLI::IsMember({"plain", "normalized", "auto"}));
  e->add_option("--out", out, "Output CSV (default stdout)");

  std::size_t nx = 0, ny = 0;
  std::string grid_bundle, grid_out;
  auto* g = app.add_subcommand("grid", "Sample |prod (w - a_j)^m_j| on a lattice");
  g->add_option("bundle", grid_bundle, "Result bundle directory")->required();
  g->add_option("--nx", nx, "Lattice columns");
  g->add_option("--ny", ny, "Lattice rows");
  g->add_option("--out", grid_out, "Output CSV (default <bundle>/grid.csv)");

  std::string cap_problem;
  std::optional<std::size_t> cap_n;
  auto* c = app.add_subcommand("capacity", "Logarithmic capacity by the independent oracle");
  c->add_option("problem", cap_problem, "Problem JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--n", cap_n, "Nodes per boundary curve (even)");

  std::size_t st_n = 64;
  auto* t = app.add_subcommand("selftest", "Run the invariant suites at small n");
  t->add_option("--n", st_n, "Nodes per boundary curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*e) return cmd_eval(bundle, points, policy, out);
    if (*g) return cmd_grid(grid_bundle, nx, ny, grid_out);
    if (*c) return cmd_capacity(cap_problem, cap_n);
    if (*t) return run_selftest(st_n, std::cout) == 0 ? kExitOk : kExitError;
  } catch (const Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitError;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitError;
  }
  return kExitError;
}
