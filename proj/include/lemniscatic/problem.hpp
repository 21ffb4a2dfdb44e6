#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lemniscatic/bie.hpp"
#include "lemniscatic/cauchy.hpp"
#include "lemniscatic/common.hpp"
#include "lemniscatic/geometry.hpp"
#include "lemniscatic/newton.hpp"

namespace lemniscatic {

using Json = nlohmann::json;

struct CurveSpec {
  CurveParams params;
  Affine transform;
};

struct Tolerances {
  double gmres_tol = 1e-14;
  int max_gmres = 100;
  double newton_tol = 1e-12;
  int max_newton = 50;
};

struct GridOptions {
  std::size_t nx = 201;
  std::size_t ny = 201;
  std::optional<double> xmin, xmax, ymin, ymax;  ///< default: padded bounding box of the boundary values
};

/// Declarative problem description, read from JSON.
struct ProblemSpec {
  std::vector<CurveSpec> curves;
  std::size_t n = 128;
  std::optional<std::vector<Complex>> alphas;
  Tolerances tolerances;
  StartOptions start;
  std::string outputs;
  std::optional<GridOptions> grid;
};

/// Complex numbers are {"re": x, "im": y} or a bare real.
Complex complex_from_json(const Json& j, const std::string& where);
Json complex_to_json(Complex z);

ProblemSpec parse_problem(const Json& j);
ProblemSpec load_problem(const std::filesystem::path& path);
Json problem_to_json(const ProblemSpec& spec);

std::vector<BoundaryCurve> build_curves(const ProblemSpec& spec);

struct PipelineResult {
  ProblemSpec spec;
  Discretization disc;
  BieSolution bie;
  MapSolution solution;
  bool converged = false;
  std::string failure;  ///< Newton failure message when not converged
  double seconds = 0.0;
};

/// geometry -> ell boundary integral solves -> (m, log tau) -> p -> Newton.
/// Newton non-convergence is reported through `converged`; every other failure throws Error.
PipelineResult run_pipeline(const ProblemSpec& spec, JacobianModel model = JacobianModel::exact);

Json diagnostics_to_json(const PipelineResult& result);
Json params_to_json(const PipelineResult& result);

struct GridSample {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;  ///< |prod_j (w - a_j)^{m_j}|
};

/// |U(w)| on a rectangular lattice of the w-plane; the level set tau is the lemniscate.
std::vector<GridSample> sample_grid(const LemniscaticDomain& domain, std::span<const Complex> boundary_w,
                                    const GridOptions& options);

void write_grid_csv(const std::filesystem::path& path, std::span<const GridSample> samples);

/// Writes params.json, diagnostics.json, boundary.csv, rhs.csv, problem.json
/// (and grid.csv when requested) into `dir`. The bundle is assembled in a
/// sibling temporary directory and renamed into place, so failures leave no partial bundle.
void write_bundle(const PipelineResult& result, const std::filesystem::path& dir, bool with_grid = false);

struct LoadedBundle {
  ProblemSpec spec;
  Discretization disc;
  MapSolution solution;
  CanonicalParameters params;
  BoundaryRHS rhs;
  double recorded_residual = 0.0;
};

LoadedBundle load_bundle(const std::filesystem::path& dir);

/// Points file: one "re,im" pair per line; a header line and blank lines are skipped.
std::vector<Complex> read_points(std::istream& in);

void write_eval_csv(std::ostream& out, std::span<const PointValue> values);

std::string format_double(double x);

}  // namespace lemniscatic
