#include "acceptance.hpp"

#include <hessiso/constructions.hpp>
#include <hessiso/errors.hpp>
#include <hessiso/io.hpp>
#include <hessiso/isometry.hpp>
#include <hessiso/legendre.hpp>
#include <hessiso/norm_json.hpp>
#include <hessiso/profile.hpp>
#include <hessiso/rng.hpp>
#include <hessiso/tensors.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hessiso;
using Json = nlohmann::ordered_json;

namespace {

struct Config {
  std::string spec, spec2, point, out, band, input, model = "legendre";
  int samples = 100;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  double a = 1.0, b = 1.0;
};

// Thrown for bad flags or files; maps to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidSpec:
    case ErrorCode::ZeroPoint:
    case ErrorCode::OutOfCone:
    case ErrorCode::NonSmoothPoint:
    case ErrorCode::DomainError:
    case ErrorCode::InsufficientSamples:
      return 2;
    default:
      return 1;
  }
}

std::vector<double> parse_csv_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(fmt::format("malformed {} '{}'", what, text));
    }
  }
  return out;
}

NormPtr require_spec(const std::string& path, const char* flag) {
  if (path.empty()) throw InputError(fmt::format("{} is required", flag));
  return load_norm_file(path);
}

Interval parse_band(const std::string& text, Interval fallback) {
  if (text.empty()) return fallback;
  const auto v = parse_csv_numbers(text, "--band");
  if (v.size() != 2 || !(v[0] < v[1])) throw InputError("--band expects lo,hi with lo < hi");
  return {v[0], v[1]};
}

const ProfileNorm& require_profile(const NormSpec& spec) {
  const auto* p = std::get_if<ProfileNorm>(&spec.v);
  if (p == nullptr) throw InputError("this command needs a profile norm spec");
  return *p;
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void emit(const Json& report, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw InputError("cannot write " + out);
    os << text;
  }
}

Vec sample_in_cone(Rng& rng, const NormSpec& spec) {
  for (int tries = 0; tries < 10000; ++tries) {
    const Vec y = rng.normal_vec(spec.dim());
    if (in_cone(spec, y)) return y;
  }
  throw Error(ErrorCode::OutOfCone, "could not sample a point in the validity cone");
}

// ---------------------------------------------------------------------------

int cmd_tensors(const Config& c) {
  const NormPtr F = require_spec(c.spec, "--spec");
  if (c.point.empty()) throw InputError("--point is required");
  const auto p = parse_csv_numbers(c.point, "--point");
  if (static_cast<int>(p.size()) != F->dim()) throw InputError("--point has the wrong dimension");
  const Vec y = Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size()));

  const auto g = fundamental_tensor(*F, y);
  const auto C = cartan_tensor(*F, y);
  const auto R = curvature_tensor(*F, y);
  const Jet3 j = jet3(*F, y);
  const double euler = euler_defect(j, y);
  const double sym = curvature_symmetry_defect(R.R);
  const double radial = cartan_radial_defect(C.C, y);

  Json rep;
  rep["norm"] = F->id;
  rep["point"] = to_json(y);
  rep["F"] = std::sqrt(2.0 * j.value);
  rep["g"] = to_json(g.g);
  rep["cartan_max_abs"] = C.C.max_abs();
  rep["curvature_max_abs"] = R.R.max_abs();
  rep["residuals"] = {{"euler", euler}, {"curvature_symmetry", sym}, {"cartan_radial", radial}};
  if (!c.out.empty()) {
    for (const auto& [suffix, writer] :
         std::vector<std::pair<std::string, std::function<void(std::ostream&)>>>{
             {"_g.csv", [&](std::ostream& os) { write_csv(os, g.g); }},
             {"_C.csv", [&](std::ostream& os) { write_csv(os, C.C); }},
             {"_R.csv", [&](std::ostream& os) { write_csv(os, R.R); }}}) {
      std::ofstream os(c.out + suffix);
      if (!os) throw InputError("cannot write " + c.out + suffix);
      writer(os);
    }
  }
  const bool ok = euler < c.tol && sym < c.tol && radial < c.tol;
  rep["ok"] = ok;
  emit(rep, "");
  return ok ? 0 : 1;
}

int cmd_legendre_check(const Config& c) {
  const NormPtr F = require_spec(c.spec, "--spec");
  const NormPtr G = c.spec2.empty() ? dual_norm(F) : load_norm_file(c.spec2);
  Rng rng(c.seed);
  std::vector<Vec> pts;
  for (int i = 0; i < c.samples; ++i) pts.push_back(sample_in_cone(rng, *F));
  const auto rep = verify_hessian_isometry(legendre_map_fn(F), *F, *G, pts);
  Json out;
  out["norm"] = F->id;
  out["target"] = G->id;
  out["samples"] = c.samples;
  out["seed"] = c.seed;
  out["max_residual"] = rep.max_residual;
  out["tol"] = c.tol;
  out["ok"] = rep.max_residual < c.tol;
  emit(out, c.out);
  return rep.max_residual < c.tol ? 0 : 1;
}

int cmd_profile_scan(const Config& c) {
  const NormPtr F = require_spec(c.spec, "--spec");
  const ProfileNorm& p = require_profile(*F);
  const Interval band = parse_band(c.band, {0.0, std::numbers::pi});
  const auto rows = profile_grid(p.f, band.lo, band.hi, c.samples);
  if (!c.out.empty()) {
    std::ofstream os(c.out);
    if (!os) throw InputError("cannot write " + c.out);
    write_profile_grid_csv(os, rows);
  }
  double max_R = 0.0, max_gen = 0.0;
  for (const auto& r : rows) {
    max_R = std::max(max_R, std::abs(r.R));
    max_gen = std::max(max_gen, std::abs(r.genericity));
  }
  Json rep;
  rep["norm"] = F->id;
  rep["rows"] = rows.size();
  rep["max_abs_R_thetaphiphitheta"] = max_R;
  rep["max_abs_genericity"] = max_gen;
  Json valid = Json::array();
  for (const auto& iv : validity_intervals(p.f)) valid.push_back({iv.lo, iv.hi});
  rep["positive_definite_intervals"] = valid;
  emit(rep, "");
  return 0;
}

std::vector<ThetaSample> read_samples(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot read " + path);
  std::string line;
  std::vector<ThetaSample> out;
  if (!std::getline(is, line) || line.rfind("t,theta,dtheta", 0) != 0)
    throw InputError(path + ": expected header t,theta,dtheta[,h]");
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto v = parse_csv_numbers(line, "sample row");
    if (v.size() < 3 || v.size() > 4) throw InputError(fmt::format("{}:{}: expected 3 or 4 columns", path, lineno));
    ThetaSample s{v[0], v[1], v[2]};
    if (v.size() == 4) s.h = v[3];
    out.push_back(s);
  }
  return out;
}

int cmd_classify(const Config& c) {
  const NormPtr F = require_spec(c.spec, "--spec");
  const ProfileNorm& p = require_profile(*F);
  if (c.input.empty()) throw InputError("--input <samples.csv> is required");
  const auto samples = read_samples(c.input);
  const Interval band = parse_band(c.band, {0.0, std::numbers::pi});
  ClassifyOptions opts;
  opts.k = p.k;
  opts.n = p.n;
  const Classification cl = classify(p.f, samples, band, opts);

  Json rep;
  rep["norm"] = F->id;
  rep["band"] = {band.lo, band.hi};
  rep["verdict"] = to_string(cl.verdict);
  if (cl.verdict == Verdict::Linear || cl.verdict == Verdict::Legendre) rep["parameters"] = {{"a", cl.a}, {"b", cl.b}};
  Json segs = Json::array();
  for (const auto& s : cl.segments)
    segs.push_back({{"t", {s.t_range.lo, s.t_range.hi}},
                    {"branch", to_string(s.branch)},
                    {"a", s.a},
                    {"b", s.b},
                    {"samples", s.count},
                    {"max_residual", s.max_residual}});
  rep["segments"] = segs;
  rep["boundaries"] = cl.boundaries;
  std::map<std::string, int> counts;
  for (const auto& s : cl.samples) {
    static const char* names[] = {"linear", "legendre", "ambiguous", "degenerate", "unexplained"};
    counts[names[static_cast<int>(s.label)]] += 1;
  }
  rep["sample_labels"] = counts;
  rep["max_accepted_residual"] = cl.max_accepted_residual;
  rep["min_rejected_residual"] = std::isfinite(cl.min_rejected_residual) ? Json(cl.min_rejected_residual) : Json();
  emit(rep, c.out);
  return cl.verdict == Verdict::Indeterminate ? 1 : 0;
}

int cmd_synth(const Config& c) {
  const NormPtr F = require_spec(c.spec, "--spec");
  const ProfileNorm& p = require_profile(*F);
  const Interval band = parse_band(c.band, {0.2, 1.2});
  std::vector<ThetaSample> s;
  if (c.model == "linear")
    s = synth_linear_samples(p.f, c.a, c.b, band, c.samples);
  else if (c.model == "legendre")
    s = synth_legendre_samples(p.f, c.a, c.b, band, c.samples);
  else
    throw InputError("--model must be linear or legendre");
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw InputError("cannot write " + c.out);
  }
  std::ostream& os = c.out.empty() ? std::cout : file;
  os << "t,theta,dtheta,h\n";
  for (const auto& x : s) os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", x.t, x.theta, x.dtheta, x.h);
  return 0;
}

int cmd_glue(const Config& c) {
  GlueOptions go;
  go.u1 = Interval{0.3, 1.0};
  go.u2 = Interval{2.0, 2.7};
  if (!c.band.empty()) {
    const auto v = parse_csv_numbers(c.band, "--band");
    if (v.size() != 4) throw InputError("glue --band expects u1lo,u1hi,u2lo,u2hi");
    go.u1 = Interval{v[0], v[1]};
    go.u2 = Interval{v[2], v[3]};
  }
  const GluedConstruction gc = build_glued(go);
  Rng rng(c.seed);
  std::vector<Vec> pts;
  double nonlinear = 0.0, non_legendre = 0.0;
  for (int i = 0; i < c.samples; ++i) {
    const Vec y = acceptance::random_point_off_axis(rng, 3, 0.05);
    pts.push_back(y);
    const Vec img = gc.map(y).image;
    nonlinear = std::max(nonlinear, (img - y).norm() / y.norm());
    non_legendre = std::max(non_legendre, (img - legendre_map(*gc.f1, y)).norm() / y.norm());
  }
  const auto rep = verify_hessian_isometry(gc.map, *gc.f1, *gc.f2, pts);
  const double tol = std::max(c.tol, 1e-7);
  Json out;
  out["epsilon"] = gc.epsilon;
  out["halvings"] = gc.halvings;
  out["identity_cone"] = {gc.identity_cone->lo, gc.identity_cone->hi};
  out["dual_cone"] = {gc.dual_cone->lo, gc.dual_cone->hi};
  out["samples"] = c.samples;
  out["isometry_residual"] = rep.max_residual;
  out["distance_from_identity"] = nonlinear;
  out["distance_from_legendre"] = non_legendre;
  out["boundary_jump"] = glued_boundary_jump(gc);
  out["F2"] = Json::parse(norm_to_json(*gc.f2));
  const bool ok = rep.max_residual < tol && nonlinear > 1e-4 && non_legendre > 1e-4;
  out["ok"] = ok;
  emit(out, c.out);
  return ok ? 0 : 1;
}

int cmd_polar2d(const Config& c) {
  const NormPtr A = require_spec(c.spec, "--spec");
  const double qtol = std::min(c.tol, 1e-10);
  const PolarChart2D ca = polar_chart_2d(A, qtol);
  Json out;
  out["norm"] = A->id;
  out["length"] = ca.length;
  out["refinement_delta"] = ca.refinement_delta;
  int code = 0;
  if (!c.spec2.empty()) {
    const NormPtr B = load_norm_file(c.spec2);
    out["norm2"] = B->id;
    try {
      const TwoDIsometry iso = two_d_isometry(A, B, qtol);
      Rng rng(c.seed);
      std::vector<Vec> pts;
      for (int i = 0; i < c.samples; ++i) pts.push_back(rng.normal_vec(2));
      const double res = verify_hessian_isometry(iso.map, *A, *B, pts).max_residual;
      out["length2"] = iso.length_b;
      out["isometric"] = true;
      out["isometry_residual"] = res;
      if (!(res < 1e-6)) code = 1;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LengthMismatch) throw;
      out["length2"] = polar_chart_2d(B, qtol).length;
      out["isometric"] = false;
      code = 1;
    }
  }
  emit(out, c.out);
  return code;
}

int cmd_acceptance(const Config& c) {
  const auto results = acceptance::run_all(c.seed);
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : results) {
    std::cout << acceptance::format(r) << '\n';
    all = all && r.passed;
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"metric", std::isfinite(r.metric) ? Json(r.metric) : Json()},
                   {"threshold", std::isfinite(r.threshold) ? Json(r.threshold) : Json()},
                   {"detail", r.detail}});
  }
  if (!c.out.empty()) {
    std::ofstream os(c.out);
    if (!os) throw InputError("cannot write " + c.out);
    os << Json{{"seed", c.seed}, {"criteria", arr}}.dump(2) << '\n';
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian isometries of Minkowski norms"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec, "norm spec JSON");
    sub->add_option("--spec2", cfg.spec2, "second norm spec JSON");
    sub->add_option("--point", cfg.point, "comma-separated point");
    sub->add_option("--samples", cfg.samples, "sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "64-bit seed of the mt19937_64 stream");
    sub->add_option("--tol", cfg.tol, "pass/fail tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--band", cfg.band, "lo,hi angle band");
  };

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const Cmd cmds[] = {
      {"tensors", "dump g, C and R at a point", cmd_tensors},
      {"legendre-check", "Hessian-isometry residual of the Legendre map", cmd_legendre_check},
      {"profile-scan", "spherical-chart grid report for a profile norm", cmd_profile_scan},
      {"classify", "classify an orbit-preserving map from (t, theta, theta', h) samples", cmd_classify},
      {"synth", "write synthetic linear/Legendre example samples", cmd_synth},
      {"glue", "build and verify the glued isometry", cmd_glue},
      {"polar2d", "indicatrix arclength and the 2-D isometry", cmd_polar2d},
      {"acceptance", "run every acceptance criterion", cmd_acceptance},
  };
  std::vector<std::pair<CLI::App*, int (*)(const Config&)>> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    common(sub);
    subs.emplace_back(sub, c.run);
    if (std::string(c.name) == "classify") sub->add_option("--input", cfg.input, "samples CSV (t,theta,dtheta[,h])");
    if (std::string(c.name) == "synth") {
      sub->add_option("--model", cfg.model, "linear or legendre");
      sub->add_option("--a", cfg.a, "parameter a");
      sub->add_option("--b", cfg.b, "parameter b");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& [sub, run] : subs)
      if (sub->parsed()) return run(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
