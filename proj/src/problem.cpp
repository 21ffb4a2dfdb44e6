#include "lemniscatic/problem.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace lemniscatic {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Stage::input, what); }

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad("unknown key '" + it.key() + "' in " + where);
}

double get_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) bad("missing '" + key + "' in " + where);
  if (!j.at(key).is_number()) bad("'" + key + "' in " + where + " must be a number");
  return j.at(key).get<double>();
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

int int_or(const Json& j, const std::string& key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) bad("'" + key + "' in " + where + " must be an integer");
  return j.at(key).get<int>();
}

std::vector<Complex> complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

CurveParams parse_params(const std::string& family, const Json& p, const std::string& where) {
  if (family == "circle") {
    check_keys(p, {"center", "radius"}, where);
    CircleParams c;
    if (p.contains("center")) c.center = complex_from_json(p["center"], where + ".center");
    c.radius = get_number(p, "radius", where);
    return c;
  }
  if (family == "ellipse") {
    check_keys(p, {"center", "a", "b", "rotation"}, where);
    EllipseParams e;
    if (p.contains("center")) e.center = complex_from_json(p["center"], where + ".center");
    e.a = get_number(p, "a", where);
    e.b = get_number(p, "b", where);
    e.rotation = number_or(p, "rotation", 0.0, where);
    return e;
  }
  if (family == "trig_radial") {
    check_keys(p, {"center", "constant", "terms"}, where);
    TrigRadialParams r;
    if (p.contains("center")) r.center = complex_from_json(p["center"], where + ".center");
    r.constant = number_or(p, "constant", 0.0, where);
    if (p.contains("terms")) {
      if (!p["terms"].is_array()) bad(where + ".terms must be an array");
      for (std::size_t i = 0; i < p["terms"].size(); ++i) {
        const Json& t = p["terms"][i];
        const std::string tw = where + ".terms[" + std::to_string(i) + "]";
        check_keys(t, {"coef", "exp_cos", "exp_sin", "cos_freq", "cos_pow", "sin_freq", "sin_pow"}, tw);
        RadialTerm term;
        term.coef = get_number(t, "coef", tw);
        term.exp_cos = number_or(t, "exp_cos", 0.0, tw);
        term.exp_sin = number_or(t, "exp_sin", 0.0, tw);
        term.cos_freq = int_or(t, "cos_freq", 0, tw);
        term.cos_pow = int_or(t, "cos_pow", 0, tw);
        term.sin_freq = int_or(t, "sin_freq", 0, tw);
        term.sin_pow = int_or(t, "sin_pow", 0, tw);
        if (term.cos_pow < 0 || term.sin_pow < 0) bad(tw + ": powers must be nonnegative");
        r.terms.push_back(term);
      }
    }
    return r;
  }
  if (family == "polygon") {
    check_keys(p, {"vertices", "grading"}, where);
    PolygonParams g;
    if (!p.contains("vertices")) bad("missing 'vertices' in " + where);
    g.vertices = complex_list(p["vertices"], where + ".vertices");
    g.grading = int_or(p, "grading", 3, where);
    return g;
  }
  if (family == "fourier") {
    check_keys(p, {"coefficients"}, where);
    FourierParams f;
    if (!p.contains("coefficients") || !p["coefficients"].is_array()) bad(where + ".coefficients must be an array");
    for (std::size_t i = 0; i < p["coefficients"].size(); ++i) {
      const Json& c = p["coefficients"][i];
      const std::string cw = where + ".coefficients[" + std::to_string(i) + "]";
      check_keys(c, {"k", "c"}, cw);
      FourierParams::Coefficient co;
      co.k = int_or(c, "k", 0, cw);
      if (!c.contains("c")) bad("missing 'c' in " + cw);
      co.c = complex_from_json(c["c"], cw + ".c");
      f.coefficients.push_back(co);
    }
    return f;
  }
  bad("unknown curve family '" + family + "' in " + where);
}

Json params_json(const CurveParams& params) {
  return std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        Json j;
        if constexpr (std::is_same_v<T, CircleParams>) {
          j = {{"center", complex_to_json(p.center)}, {"radius", p.radius}};
        } else if constexpr (std::is_same_v<T, EllipseParams>) {
          j = {{"center", complex_to_json(p.center)}, {"a", p.a}, {"b", p.b}, {"rotation", p.rotation}};
        } else if constexpr (std::is_same_v<T, TrigRadialParams>) {
          Json terms = Json::array();
          for (const RadialTerm& t : p.terms)
            terms.push_back({{"coef", t.coef},
                             {"exp_cos", t.exp_cos},
                             {"exp_sin", t.exp_sin},
                             {"cos_freq", t.cos_freq},
                             {"cos_pow", t.cos_pow},
                             {"sin_freq", t.sin_freq},
                             {"sin_pow", t.sin_pow}});
          j = {{"center", complex_to_json(p.center)}, {"constant", p.constant}, {"terms", terms}};
        } else if constexpr (std::is_same_v<T, PolygonParams>) {
          Json v = Json::array();
          for (Complex z : p.vertices) v.push_back(complex_to_json(z));
          j = {{"vertices", v}, {"grading", p.grading}};
        } else {
          Json c = Json::array();
          for (const auto& co : p.coefficients) c.push_back({{"k", co.k}, {"c", complex_to_json(co.c)}});
          j = {{"coefficients", c}};
        }
        return j;
      },
      params);
}

Json complex_array(std::span<const Complex> v) {
  Json j = Json::array();
  for (Complex z : v) j.push_back(complex_to_json(z));
  return j;
}

Json real_array(std::span<const double> v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Stage::output, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(Stage::output, "failed writing " + path.string());
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Stage::input, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(Stage::input, path.string() + ": " + e.what());
  }
}

std::vector<std::vector<double>> read_csv_numbers(const fs::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw Error(Stage::input, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw Error(Stage::input, "malformed number '" + cell + "' in " + path.string());
      row.push_back(v);
    }
    if (row.size() != columns) throw Error(Stage::input, "wrong column count in " + path.string());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) {
    check_keys(j, {"re", "im"}, where);
    return {number_or(j, "re", 0.0, where), number_or(j, "im", 0.0, where)};
  }
  bad(where + " must be a number or {\"re\", \"im\"}");
}

Json complex_to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ProblemSpec parse_problem(const Json& j) {
  check_keys(j, {"curves", "n", "alphas", "tolerances", "start", "outputs", "grid"}, "problem");
  ProblemSpec spec;
  if (!j.contains("curves") || !j["curves"].is_array() || j["curves"].empty())
    bad("problem needs a nonempty 'curves' array");
  for (std::size_t i = 0; i < j["curves"].size(); ++i) {
    const Json& c = j["curves"][i];
    const std::string where = "curves[" + std::to_string(i) + "]";
    check_keys(c, {"family", "params", "transform"}, where);
    if (!c.contains("family") || !c["family"].is_string()) bad(where + " needs a string 'family'");
    if (!c.contains("params")) bad(where + " needs 'params'");
    CurveSpec cs;
    cs.params = parse_params(c["family"].get<std::string>(), c["params"], where + ".params");
    if (c.contains("transform")) {
      check_keys(c["transform"], {"scale", "shift"}, where + ".transform");
      if (c["transform"].contains("scale")) cs.transform.scale = complex_from_json(c["transform"]["scale"], where);
      if (c["transform"].contains("shift")) cs.transform.shift = complex_from_json(c["transform"]["shift"], where);
    }
    spec.curves.push_back(cs);
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 4) bad("'n' must be an integer >= 4");
    spec.n = j["n"].get<std::size_t>();
  }
  if (spec.n % 2 != 0) bad("'n' must be even");
  if (j.contains("alphas")) {
    spec.alphas = complex_list(j["alphas"], "alphas");
    if (spec.alphas->size() != spec.curves.size()) bad("'alphas' must have one entry per curve");
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    check_keys(t, {"gmres_tol", "max_gmres", "newton_tol", "max_newton"}, "tolerances");
    spec.tolerances.gmres_tol = number_or(t, "gmres_tol", spec.tolerances.gmres_tol, "tolerances");
    spec.tolerances.max_gmres = int_or(t, "max_gmres", spec.tolerances.max_gmres, "tolerances");
    spec.tolerances.newton_tol = number_or(t, "newton_tol", spec.tolerances.newton_tol, "tolerances");
    spec.tolerances.max_newton = int_or(t, "max_newton", spec.tolerances.max_newton, "tolerances");
    if (!(spec.tolerances.newton_tol > 0.0)) bad("newton_tol must be positive");
    if (spec.tolerances.max_newton < 1 || spec.tolerances.max_gmres < 1) bad("iteration caps must be positive");
  }
  if (j.contains("start")) {
    const Json& s = j["start"];
    check_keys(s, {"mode", "s0", "delta", "centers"}, "start");
    if (s.contains("mode")) {
      if (!s["mode"].is_string()) bad("'start.mode' must be a string");
      const std::string mode = s["mode"].get<std::string>();
      if (mode == "circles")
        spec.start.mode = StartMode::circles;
      else if (mode == "identity")
        spec.start.mode = StartMode::identity;
      else
        bad("'start.mode' must be \"circles\" or \"identity\"");
    }
    spec.start.s0 = number_or(s, "s0", spec.start.s0, "start");
    spec.start.delta = number_or(s, "delta", spec.start.delta, "start");
    if (s.contains("centers")) {
      spec.start.centers = complex_list(s["centers"], "start.centers");
      if (spec.start.centers.size() != spec.curves.size()) bad("'start.centers' must have one entry per curve");
    }
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_string()) bad("'outputs' must be a string");
    spec.outputs = j["outputs"].get<std::string>();
  }
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    check_keys(g, {"nx", "ny", "xmin", "xmax", "ymin", "ymax"}, "grid");
    GridOptions go;
    go.nx = static_cast<std::size_t>(int_or(g, "nx", static_cast<int>(go.nx), "grid"));
    go.ny = static_cast<std::size_t>(int_or(g, "ny", static_cast<int>(go.ny), "grid"));
    for (const char* key : {"xmin", "xmax", "ymin", "ymax"}) {
      if (!g.contains(key)) continue;
      const double v = get_number(g, key, "grid");
      if (std::string(key) == "xmin") go.xmin = v;
      if (std::string(key) == "xmax") go.xmax = v;
      if (std::string(key) == "ymin") go.ymin = v;
      if (std::string(key) == "ymax") go.ymax = v;
    }
    if (go.nx < 2 || go.ny < 2) bad("grid needs nx, ny >= 2");
    spec.grid = go;
  }
  return spec;
}

ProblemSpec load_problem(const fs::path& path) { return parse_problem(read_json(path)); }

Json problem_to_json(const ProblemSpec& spec) {
  Json j;
  Json curves = Json::array();
  for (const CurveSpec& c : spec.curves) {
    Json cj = {{"family", family_name(std::visit(
                              [](const auto& p) {
                                using T = std::decay_t<decltype(p)>;
                                if constexpr (std::is_same_v<T, CircleParams>) return CurveFamily::circle;
                                else if constexpr (std::is_same_v<T, EllipseParams>) return CurveFamily::ellipse;
                                else if constexpr (std::is_same_v<T, TrigRadialParams>) return CurveFamily::trig_radial;
                                else if constexpr (std::is_same_v<T, PolygonParams>) return CurveFamily::polygon;
                                else return CurveFamily::fourier;
                              },
                              c.params))},
               {"params", params_json(c.params)}};
    if (c.transform.scale != Complex(1.0, 0.0) || c.transform.shift != Complex{})
      cj["transform"] = {{"scale", complex_to_json(c.transform.scale)}, {"shift", complex_to_json(c.transform.shift)}};
    curves.push_back(cj);
  }
  j["curves"] = curves;
  j["n"] = spec.n;
  if (spec.alphas) j["alphas"] = complex_array(*spec.alphas);
  j["tolerances"] = {{"gmres_tol", spec.tolerances.gmres_tol},
                     {"max_gmres", spec.tolerances.max_gmres},
                     {"newton_tol", spec.tolerances.newton_tol},
                     {"max_newton", spec.tolerances.max_newton}};
  j["start"] = {{"mode", spec.start.mode == StartMode::identity ? "identity" : "circles"},
                {"s0", spec.start.s0},
                {"delta", spec.start.delta}};
  if (!spec.start.centers.empty()) j["start"]["centers"] = complex_array(spec.start.centers);
  if (!spec.outputs.empty()) j["outputs"] = spec.outputs;
  if (spec.grid) {
    Json g = {{"nx", spec.grid->nx}, {"ny", spec.grid->ny}};
    if (spec.grid->xmin) g["xmin"] = *spec.grid->xmin;
    if (spec.grid->xmax) g["xmax"] = *spec.grid->xmax;
    if (spec.grid->ymin) g["ymin"] = *spec.grid->ymin;
    if (spec.grid->ymax) g["ymax"] = *spec.grid->ymax;
    j["grid"] = g;
  }
  return j;
}

std::vector<BoundaryCurve> build_curves(const ProblemSpec& spec) {
  std::vector<BoundaryCurve> curves;
  for (const CurveSpec& c : spec.curves) curves.push_back(make_curve(c.params, c.transform));
  return curves;
}

PipelineResult run_pipeline(const ProblemSpec& spec, JacobianModel model) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineResult res;
  res.spec = spec;
  res.disc = discretize(build_curves(spec), spec.n);
  res.bie = solve_bie(res.disc, spec.alphas, BieOptions{spec.tolerances.gmres_tol, spec.tolerances.max_gmres});

  NewtonOptions nopt;
  nopt.tol = spec.tolerances.newton_tol;
  nopt.max_iter = spec.tolerances.max_newton;
  nopt.model = model;
  nopt.start = spec.start;
  try {
    res.solution = newton_solve(res.disc, res.bie.rhs, res.bie.params, nopt);
    res.converged = true;
  } catch (const NewtonError& e) {
    res.solution = e.partial();
    res.converged = false;
    res.failure = e.what();
  }
  MapDiagnostics& dg = res.solution.diagnostics;
  for (const ComponentSolution& c : res.bie.components) {
    dg.gmres_iterations.push_back(c.gmres_iters);
    dg.gmres_relres.push_back(c.gmres_relres);
    dg.gmres_fallback.push_back(c.used_fallback);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

Json diagnostics_to_json(const PipelineResult& r) {
  const MapDiagnostics& dg = r.solution.diagnostics;
  Json j;
  j["converged"] = r.converged;
  if (!r.converged) j["failure"] = r.failure;
  j["newton_iterations"] = dg.newton_iterations;
  j["step_norm_history"] = real_array(dg.step_norm_history);
  j["cond_d_history"] = real_array(dg.cond_d_history);
  j["cond_schur_history"] = real_array(dg.cond_schur_history);
  j["residual_inf"] = dg.residual_inf;
  j["lemniscate_residual"] = dg.lemniscate_residual;
  j["lemniscate_residual_offgrid"] = dg.lemniscate_residual_offgrid;
  j["moment_residual"] = dg.moment_residual;
  j["winding_ok"] = dg.winding_ok;
  j["branch_retry_used"] = dg.branch_retry_used;
  j["start_used"] = dg.start_used;
  j["iterations_all_attempts"] = dg.iterations_all_attempts;
  j["branch_jumps"] = dg.branch_jumps;
  j["corner_domain"] = dg.corner_domain;
  Json gm = Json::array();
  for (std::size_t k = 0; k < r.bie.components.size(); ++k) {
    const ComponentSolution& c = r.bie.components[k];
    gm.push_back({{"iterations", c.gmres_iters},
                  {"relres", c.gmres_relres},
                  {"true_relres", c.gmres_true_relres},
                  {"fallback", c.used_fallback},
                  {"h_spread", c.h_spread}});
  }
  j["gmres"] = gm;
  j["total_gmres_iterations"] = r.bie.total_gmres_iterations();
  Json h = Json::array();
  for (Eigen::Index k = 0; k < r.bie.h.rows(); ++k) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < r.bie.h.cols(); ++c) row.push_back(r.bie.h(k, c));
    h.push_back(row);
  }
  j["h"] = h;
  j["seconds"] = r.seconds;
  return j;
}

Json params_to_json(const PipelineResult& r) {
  const MapDiagnostics& dg = r.solution.diagnostics;
  Json j;
  j["ell"] = r.disc.ell;
  j["n"] = r.disc.n;
  j["a"] = complex_array(r.solution.domain.a);
  j["m"] = real_array(r.bie.params.m);
  j["tau"] = r.bie.params.tau;
  j["log_tau"] = r.bie.params.log_tau;
  j["alphas"] = complex_array(r.bie.alphas);
  j["converged"] = r.converged;
  j["diagnostics"] = {{"newton_iterations", dg.newton_iterations},
                      {"residual_inf", dg.residual_inf},
                      {"lemniscate_residual", dg.lemniscate_residual},
                      {"moment_residual", dg.moment_residual},
                      {"total_gmres_iterations", r.bie.total_gmres_iterations()},
                      {"winding_ok", dg.winding_ok}};
  return j;
}

std::vector<GridSample> sample_grid(const LemniscaticDomain& domain, std::span<const Complex> boundary_w,
                                    const GridOptions& options) {
  if (boundary_w.empty()) throw Error(Stage::output, "no boundary values to size the grid");
  double x0 = boundary_w[0].real(), x1 = x0, y0 = boundary_w[0].imag(), y1 = y0;
  for (Complex w : boundary_w) {
    x0 = std::min(x0, w.real());
    x1 = std::max(x1, w.real());
    y0 = std::min(y0, w.imag());
    y1 = std::max(y1, w.imag());
  }
  const double pad = 0.25 * std::max(x1 - x0, y1 - y0);
  const double xmin = options.xmin.value_or(x0 - pad);
  const double xmax = options.xmax.value_or(x1 + pad);
  const double ymin = options.ymin.value_or(y0 - pad);
  const double ymax = options.ymax.value_or(y1 + pad);
  if (!(xmax > xmin && ymax > ymin)) throw Error(Stage::input, "grid bounds are empty");

  std::vector<GridSample> out(options.nx * options.ny);
  for (std::size_t iy = 0; iy < options.ny; ++iy) {
    for (std::size_t ix = 0; ix < options.nx; ++ix) {
      GridSample& s = out[iy * options.nx + ix];
      s.x = xmin + (xmax - xmin) * static_cast<double>(ix) / static_cast<double>(options.nx - 1);
      s.y = ymin + (ymax - ymin) * static_cast<double>(iy) / static_cast<double>(options.ny - 1);
      double logu = 0.0;
      for (std::size_t j = 0; j < domain.a.size(); ++j)
        logu += domain.m[j] * std::log(std::abs(Complex(s.x, s.y) - domain.a[j]));
      s.value = std::exp(logu);
    }
  }
  return out;
}

void write_grid_csv(const fs::path& path, std::span<const GridSample> samples) {
  std::string text = "x,y,abs_U\n";
  for (const GridSample& s : samples)
    text += format_double(s.x) + "," + format_double(s.y) + "," + format_double(s.value) + "\n";
  write_text(path, text);
}

void write_bundle(const PipelineResult& r, const fs::path& dir, bool with_grid) {
  if (dir.empty()) throw Error(Stage::output, "no output directory given");
  if (fs::exists(dir) && !fs::is_empty(dir) && !fs::exists(dir / "params.json"))
    throw Error(Stage::output, dir.string() + " exists and is not a result bundle; refusing to overwrite");
  const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  const fs::path tmp = parent / (dir.filename().string() + ".partial");
  try {
    fs::create_directories(parent);
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    write_text(tmp / "params.json", params_to_json(r).dump(2) + "\n");
    write_text(tmp / "diagnostics.json", diagnostics_to_json(r).dump(2) + "\n");
    write_text(tmp / "problem.json", problem_to_json(r.spec).dump(2) + "\n");

    std::string boundary = "t,eta_re,eta_im,phi_re,phi_im,component\n";
    for (std::size_t i = 0; i < r.disc.size(); ++i) {
      boundary += format_double(r.disc.nodes[i]) + "," + format_double(r.disc.eta[i].real()) + "," +
                  format_double(r.disc.eta[i].imag()) + "," + format_double(r.solution.boundary_w[i].real()) + "," +
                  format_double(r.solution.boundary_w[i].imag()) + "," + std::to_string(r.disc.component_of[i] + 1) +
                  "\n";
    }
    write_text(tmp / "boundary.csv", boundary);

    std::string rhs = "p_re,p_im\n";
    for (Complex p : r.bie.rhs.p) rhs += format_double(p.real()) + "," + format_double(p.imag()) + "\n";
    write_text(tmp / "rhs.csv", rhs);

    if (with_grid) {
      const GridOptions go = r.spec.grid.value_or(GridOptions{});
      write_grid_csv(tmp / "grid.csv", sample_grid(r.solution.domain, r.solution.boundary_w, go));
    }
    fs::remove_all(dir);
    fs::rename(tmp, dir);
  } catch (const fs::filesystem_error& e) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw Error(Stage::output, e.what());
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
}

LoadedBundle load_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(Stage::input, "no result bundle at " + dir.string());
  LoadedBundle b;
  b.spec = load_problem(dir / "problem.json");
  b.disc = discretize(build_curves(b.spec), b.spec.n);

  const Json pj = read_json(dir / "params.json");
  try {
    b.solution.domain.a = complex_list(pj.at("a"), "a");
    b.params.m = pj.at("m").get<std::vector<double>>();
    b.params.tau = pj.at("tau").get<double>();
    b.params.log_tau = pj.at("log_tau").get<double>();
    b.rhs.alpha = complex_list(pj.at("alphas"), "alphas");
    b.recorded_residual = pj.at("diagnostics").at("residual_inf").get<double>();
  } catch (const Json::exception& e) {
    throw Error(Stage::input, "params.json: " + std::string(e.what()));
  }
  b.solution.domain.m = b.params.m;
  b.solution.domain.tau = b.params.tau;
  if (b.solution.domain.a.size() != b.disc.ell || b.params.m.size() != b.disc.ell || b.rhs.alpha.size() != b.disc.ell)
    throw Error(Stage::input, "params.json does not match problem.json");

  const auto rows = read_csv_numbers(dir / "boundary.csv", 6);
  if (rows.size() != b.disc.size()) throw Error(Stage::input, "boundary.csv does not match problem.json");
  for (const auto& row : rows) b.solution.boundary_w.emplace_back(row[3], row[4]);

  const auto prow = read_csv_numbers(dir / "rhs.csv", 2);
  if (prow.size() != b.disc.size()) throw Error(Stage::input, "rhs.csv does not match problem.json");
  for (const auto& row : prow) {
    b.rhs.p.emplace_back(row[0], row[1]);
    b.rhs.gamma.push_back(row[0] - b.params.log_tau);
    b.rhs.mu.push_back(row[1]);
  }
  b.solution.diagnostics.converged = pj.value("converged", false);
  return b;
}

std::vector<Complex> read_points(std::istream& in) {
  std::vector<Complex> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    const std::string re = line.substr(0, comma);
    const std::string im = comma == std::string::npos ? "0" : line.substr(comma + 1);
    char* e1 = nullptr;
    char* e2 = nullptr;
    const double x = std::strtod(re.c_str(), &e1);
    const double y = std::strtod(im.c_str(), &e2);
    const bool ok1 = e1 != re.c_str() && std::string(e1).find_first_not_of(" \t") == std::string::npos;
    const bool ok2 = e2 != im.c_str() && std::string(e2).find_first_not_of(" \t") == std::string::npos;
    if (!ok1 || !ok2) {
      if (lineno == 1 && pts.empty()) continue;  // header
      throw Error(Stage::input, "malformed point on line " + std::to_string(lineno));
    }
    pts.emplace_back(x, y);
  }
  return pts;
}

void write_eval_csv(std::ostream& out, std::span<const PointValue> values) {
  out << "z_re,z_im,phi_re,phi_im,status\n";
  for (const PointValue& v : values) {
    out << format_double(v.z.real()) << ',' << format_double(v.z.imag()) << ',';
    if (v.status == PointStatus::outside_domain)
      out << "nan,nan,";
    else
      out << format_double(v.value.real()) << ',' << format_double(v.value.imag()) << ',';
    out << status_name(v.status) << '\n';
  }
}

}  // namespace lemniscatic
