#include "hessiso/norm_json.hpp"

#include "hessiso/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <numbers>
#include <sstream>

namespace hessiso {
namespace {

using nlohmann::json;

Mat to_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(ErrorCode::InvalidSpec, std::string(what) + " must be a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (j[i].size() != static_cast<std::size_t>(cols)) throw Error(ErrorCode::InvalidSpec, std::string(what) + " is ragged");
    for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
  }
  return M;
}

Vec to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidSpec, std::string(what) + " must be an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json from_matrix(const Mat& M) {
  json out = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    out.push_back(row);
  }
  return out;
}

json from_vector(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ProfileFunction parse_profile(const json& j) {
  if (j.contains("nodes")) {
    HermiteTable tab;
    tab.x = j.at("nodes").get<std::vector<double>>();
    tab.f = j.at("f").get<std::vector<double>>();
    tab.d1 = j.at("d1").get<std::vector<double>>();
    tab.d2 = j.at("d2").get<std::vector<double>>();
    return ProfileFunction::tabulated(std::move(tab));
  }
  TrigSeries s;
  if (j.contains("cos")) s.cos = j.at("cos").get<std::vector<double>>();
  if (j.contains("sin")) s.sin = j.at("sin").get<std::vector<double>>();
  const std::string period = j.value("period", "2pi");
  if (period != "pi" && period != "2pi") throw Error(ErrorCode::InvalidSpec, "profile period must be \"pi\" or \"2pi\"");
  if (j.contains("bumps")) {
    if (period != "2pi") throw Error(ErrorCode::InvalidSpec, "bumped profiles are 2π-periodic");
    std::vector<Bump> bumps;
    for (const auto& b : j.at("bumps"))
      bumps.push_back({b.at("center").get<double>(), b.at("half_width").get<double>(), b.at("amplitude").get<double>()});
    return ProfileFunction::bumped(std::move(s), std::move(bumps));
  }
  return ProfileFunction::trig(std::move(s), period == "pi" ? Period::Pi : Period::TwoPi);
}

json profile_json(const ProfileFunction& f) {
  json j;
  if (const auto* tab = f.table()) {
    j["nodes"] = tab->x;
    j["f"] = tab->f;
    j["d1"] = tab->d1;
    j["d2"] = tab->d2;
    return j;
  }
  const auto* s = f.series();
  j["cos"] = s->cos;
  j["sin"] = s->sin;
  j["period"] = f.period() == Period::Pi ? "pi" : "2pi";
  if (const auto* bumps = f.bumps()) {
    j["bumps"] = json::array();
    for (const auto& b : *bumps)
      j["bumps"].push_back({{"center", b.center}, {"half_width", b.half_width}, {"amplitude", b.amplitude}});
  }
  return j;
}

NormPtr parse_node(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error(ErrorCode::InvalidSpec, "norm spec needs a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  const std::string id = j.value("id", kind);

  if (kind == "euclidean") {
    if (j.contains("A")) return make_euclidean(to_matrix(j.at("A"), "A"), id);
    const int n = j.at("n").get<int>();
    return make_euclidean(Mat::Identity(n, n), id);
  }
  if (kind == "randers") {
    Vec beta = to_vector(j.at("beta"), "beta");
    Mat alpha = j.contains("alpha") ? to_matrix(j.at("alpha"), "alpha") : Mat::Identity(beta.size(), beta.size());
    return make_randers(std::move(alpha), std::move(beta), id);
  }
  if (kind == "profile") {
    const json& f = j.contains("f") ? j.at("f") : j.at("profile");
    return make_profile(j.value("k", 1), j.at("n").get<int>(), parse_profile(f), id);
  }
  if (kind == "expression") {
    const int n = j.at("n").get<int>();
    std::vector<Vec> cone;
    if (j.contains("cone"))
      for (const auto& c : j.at("cone")) cone.push_back(to_vector(c, "cone normal"));
    return make_expression(n, Expr::parse(j.at("E").get<std::string>()), std::move(cone), id);
  }
  if (kind == "glued") {
    const auto c = j.at("dual_cone").get<std::vector<double>>();
    if (c.size() != 2) throw Error(ErrorCode::InvalidSpec, "dual_cone must be [lo, hi]");
    return make_glued(parse_node(j.at("base")), Interval{c[0], c[1]}, id);
  }
  if (kind == "dual") return make_dual(parse_node(j.at("base")), id);
  if (kind == "pullback") return make_pullback(parse_node(j.at("base")), to_matrix(j.at("M"), "M"), id);
  throw Error(ErrorCode::InvalidSpec, "unknown norm kind '" + kind + "'");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json to_json_node(const NormSpec& spec) {
  json j = std::visit(
      Overloaded{
          [](const EuclideanNorm& e) { return json{{"kind", "euclidean"}, {"A", from_matrix(e.A)}}; },
          [](const RandersNorm& r) {
            return json{{"kind", "randers"}, {"alpha", from_matrix(r.alpha)}, {"beta", from_vector(r.beta)}};
          },
          [](const ProfileNorm& p) {
            return json{{"kind", "profile"}, {"k", p.k}, {"n", p.n}, {"f", profile_json(p.f)}};
          },
          [](const ExpressionNorm& e) {
            json out{{"kind", "expression"}, {"n", e.n}, {"E", e.E.to_string()}};
            if (!e.cone_normals.empty()) {
              out["cone"] = json::array();
              for (const auto& c : e.cone_normals) out["cone"].push_back(from_vector(c));
            }
            return out;
          },
          [](const DualNorm& d) { return json{{"kind", "dual"}, {"base", to_json_node(*d.base)}}; },
          [](const PullbackNorm& p) {
            return json{{"kind", "pullback"}, {"base", to_json_node(*p.base)}, {"M", from_matrix(p.M)}};
          },
          [](const GluedNorm& g) {
            return json{{"kind", "glued"},
                        {"base", to_json_node(*g.base)},
                        {"dual_cone", {g.dual_cone.lo, g.dual_cone.hi}}};
          },
      },
      spec.v);
  j["id"] = spec.id;
  return j;
}

}  // namespace

NormPtr parse_norm_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    return parse_node(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
}

NormPtr load_norm_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_norm_json(ss.str());
}

std::string norm_to_json(const NormSpec& spec, int indent) { return to_json_node(spec).dump(indent); }

}  // namespace hessiso
