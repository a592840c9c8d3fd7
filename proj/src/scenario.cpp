#include "hypernorden/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "hypernorden/errors.hpp"
#include "hypernorden/halton.hpp"
#include "hypernorden/version.hpp"

namespace hypernorden {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("setting '" + key + "': expected a number, got '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& key) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("setting '" + key + "': expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// key=value tokens with optional double quotes around the value; the first
// bare token is returned under the key "".
std::map<std::string, std::string> parse_mini_spec(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  bool first = true;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::string token;
    bool quoted = false;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '"') {
        quoted = !quoted;
        token.push_back(c);
      } else if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
        break;
      } else {
        token.push_back(c);
      }
    }
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      if (!first) throw ConfigError("malformed factor spec near '" + token + "'");
      out[""] = token;
    } else {
      out[token.substr(0, eq)] = unquote(token.substr(eq + 1));
    }
    first = false;
  }
  return out;
}

Json stat_json(const ResidualStat& s) {
  Json j;
  j["max"] = s.max;
  j["mean"] = s.mean();
  return j;
}

constexpr const char* kKnownChecks[] = {"structure",  "integrability",   "classify",
                                        "lee",        "holomorphy",      "theorem31",
                                        "lee-restriction", "umbilicity", "product-relations"};

bool known_check(const std::string& name) {
  for (const char* c : kKnownChecks)
    if (name == c) return true;
  return false;
}

struct BuiltScenario {
  ManifoldPtr ambient;
  std::optional<ProductBundle> bundle;
  std::optional<Immersion> immersion;
  std::vector<std::string> checks;
  int points = 32;
  double box = 1.0;
  Thresholds thr;
};

ManifoldPtr build_factor(const std::string& spec, const std::string& key) {
  const auto kv = parse_mini_spec(spec);
  const auto it = kv.find("");
  if (it == kv.end()) throw ConfigError("setting '" + key + "': missing catalog name");
  const std::string& name = it->second;
  const auto need = [&](const char* k) -> std::string {
    const auto f = kv.find(k);
    if (f == kv.end())
      throw ConfigError("setting '" + key + "': missing '" + k + "' for " + name);
    return f->second;
  };
  if (name == "flat_k") return flat_k(parse_int(need("n"), key));
  if (name == "conformal_w") {
    const int n = parse_int(need("n"), key);
    try {
      return conformal_w(n, parse_expr(need("u"), 4 * n));
    } catch (const SyntaxError& e) {
      throw ConfigError("setting '" + key + "': bad expression: " + e.what());
    } catch (const UnknownIdentifierError& e) {
      throw ConfigError("setting '" + key + "': bad expression: " + e.what());
    }
  }
  throw ConfigError("setting '" + key + "': unknown factor '" + name + "'");
}

Expr parse_setting_expr(const Scenario& sc, const std::string& key, int dim) {
  try {
    return parse_expr(sc.get(key), dim);
  } catch (const SyntaxError& e) {
    throw ConfigError("setting '" + key + "': " + std::string(e.what()) + " (byte " +
                      std::to_string(e.offset) + ")");
  } catch (const UnknownIdentifierError& e) {
    throw ConfigError("setting '" + key + "': " + std::string(e.what()) + " (byte " +
                      std::to_string(e.offset) + ")");
  }
}

ManifoldPtr build_inline_ambient(const Scenario& sc) {
  if (!sc.has("dim")) throw ConfigError("inline ambient requires 'dim'");
  const int dim = parse_int(sc.get("dim"), "dim");
  if (dim <= 0 || dim % 4 != 0) throw ConfigError("inline ambient: dim must be a multiple of 4");

  std::vector<Expr> g(static_cast<std::size_t>(dim) * dim);
  std::array<std::vector<Expr>, 3> J;
  for (auto& t : J) t.assign(static_cast<std::size_t>(dim) * dim, nullptr);

  for (const auto& [key, value] : sc.settings) {
    std::istringstream is(key);
    std::string head, si, sj;
    if (!std::getline(is, head, '.')) continue;
    if (head != "g" && head != "J1" && head != "J2" && head != "J3") continue;
    if (!std::getline(is, si, '.') || !std::getline(is, sj, '.'))
      throw ConfigError("entry '" + key + "': expected <table>.<i>.<j>");
    const int i = parse_int(si, key) - 1;
    const int j = parse_int(sj, key) - 1;
    if (i < 0 || i >= dim || j < 0 || j >= dim)
      throw ConfigError("entry '" + key + "': index out of range");
    Expr e;
    try {
      e = parse_expr(value, dim);
    } catch (const SyntaxError& err) {
      throw ConfigError("entry '" + key + "': " + std::string(err.what()));
    } catch (const UnknownIdentifierError& err) {
      throw ConfigError("entry '" + key + "': " + std::string(err.what()));
    }
    if (head == "g") {
      const std::size_t ij = static_cast<std::size_t>(i) * dim + j;
      const std::size_t ji = static_cast<std::size_t>(j) * dim + i;
      if (g[ij] && to_string(g[ij]) != to_string(e))
        throw ConfigError("entry '" + key + "': conflicts with mirrored entry");
      g[ij] = e;
      g[ji] = e;
    } else {
      const int a = head[1] - '1';
      J[static_cast<std::size_t>(a)][static_cast<std::size_t>(i) * dim + j] = e;
    }
  }
  return std::make_shared<ExprChart>(dim, std::move(g), std::move(J), "inline");
}

BuiltScenario build_scenario(const Scenario& sc, const RunOptions& opt) {
  BuiltScenario b;

  const std::string ambient = sc.get("ambient");
  if (ambient.empty()) throw ConfigError("scenario is missing 'ambient'");
  if (ambient == "flat_k") {
    if (!sc.has("n")) throw ConfigError("flat_k ambient requires 'n'");
    b.ambient = flat_k(parse_int(sc.get("n"), "n"));
  } else if (ambient == "conformal_w") {
    if (!sc.has("n")) throw ConfigError("conformal_w ambient requires 'n'");
    if (!sc.has("u")) throw ConfigError("conformal_w ambient requires 'u'");
    const int n = parse_int(sc.get("n"), "n");
    b.ambient = conformal_w(n, parse_setting_expr(sc, "u", 4 * n));
  } else if (ambient == "product") {
    if (!sc.has("factor1") || !sc.has("factor2"))
      throw ConfigError("product ambient requires 'factor1' and 'factor2'");
    b.bundle = product(build_factor(sc.get("factor1"), "factor1"),
                       build_factor(sc.get("factor2"), "factor2"));
    b.ambient = b.bundle->manifold;
  } else if (ambient == "inline") {
    b.ambient = build_inline_ambient(sc);
  } else {
    throw ConfigError("unknown ambient '" + ambient + "'");
  }

  if (sc.has("immersion")) {
    const std::string kind = sc.get("immersion");
    const double section = sc.has("section") ? parse_double(sc.get("section"), "section") : 0.0;
    if (kind == "coordinate") {
      if (!sc.has("m")) throw ConfigError("coordinate immersion requires 'm'");
      const int m = parse_int(sc.get("m"), "m");
      try {
        b.immersion = coordinate_immersion(b.ambient, m, section);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    } else if (kind == "factor1" || kind == "factor2") {
      if (!b.bundle) throw ConfigError("factor immersions require a product ambient");
      b.immersion = factor_immersion(*b.bundle, kind == "factor1" ? 1 : 2, section);
    } else if (kind == "inline") {
      if (!sc.has("m")) throw ConfigError("inline immersion requires 'm'");
      const int m = parse_int(sc.get("m"), "m");
      std::vector<Expr> comps(static_cast<std::size_t>(b.ambient->dim()));
      for (const auto& [key, value] : sc.settings) {
        if (key.rfind("phi.", 0) != 0) continue;
        const int k = parse_int(key.substr(4), key) - 1;
        if (k < 0 || k >= b.ambient->dim())
          throw ConfigError("entry '" + key + "': index out of range");
        try {
          comps[static_cast<std::size_t>(k)] = parse_expr(value, 4 * m);
        } catch (const SyntaxError& err) {
          throw ConfigError("entry '" + key + "': " + std::string(err.what()));
        } catch (const UnknownIdentifierError& err) {
          throw ConfigError("entry '" + key + "': " + std::string(err.what()));
        }
      }
      for (Expr& e : comps)
        if (!e) e = expr_literal(0.0);
      try {
        b.immersion = make_immersion(b.ambient, m, std::move(comps), "inline immersion");
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    } else {
      throw ConfigError("unknown immersion '" + kind + "'");
    }
  }

  b.checks = split_list(sc.get("checks"));
  if (b.checks.empty()) throw ConfigError("scenario requests no checks");
  for (const std::string& c : b.checks)
    if (!known_check(c)) throw ConfigError("unknown check '" + c + "'");

  b.points = opt.points.value_or(sc.has("points") ? parse_int(sc.get("points"), "points") : 32);
  b.box = opt.box.value_or(sc.has("box") ? parse_double(sc.get("box"), "box") : 1.0);
  b.thr.hold =
      opt.tol_hold.value_or(sc.has("tol_hold") ? parse_double(sc.get("tol_hold"), "tol_hold")
                                               : Thresholds{}.hold);
  b.thr.fail =
      opt.tol_fail.value_or(sc.has("tol_fail") ? parse_double(sc.get("tol_fail"), "tol_fail")
                                               : Thresholds{}.fail);
  if (b.points < 1) throw ConfigError("'points' must be positive");
  if (b.box <= 0.0) throw ConfigError("'box' must be positive");

  const bool needs_immersion =
      std::any_of(b.checks.begin(), b.checks.end(), [](const std::string& c) {
        return c == "holomorphy" || c == "theorem31" || c == "lee-restriction" ||
               c == "umbilicity";
      });
  if (needs_immersion && !b.immersion)
    throw ConfigError("requested submanifold checks but no immersion is configured");
  const bool needs_product = std::any_of(b.checks.begin(), b.checks.end(),
                                         [](const std::string& c) { return c == "product-relations"; });
  if (needs_product && !b.bundle)
    throw ConfigError("check 'product-relations' requires a product ambient");
  return b;
}

std::string band(double residual, const Thresholds& thr) {
  if (residual < thr.hold) return "hold";
  if (residual > thr.fail) return "fail";
  return "indeterminate";
}

Json run_check(const BuiltScenario& b, const std::string& name,
               const std::vector<Vector>& ambient_pts, const std::vector<Vector>& sub_pts,
               std::string& status) {
  Json detail;
  if (name == "structure") {
    const StructureResiduals r = structure_residuals(*b.ambient, ambient_pts);
    detail["quaternionic"] = stat_json(r.quaternionic);
    detail["compat"] = stat_json(r.compat);
    detail["assoc"] = stat_json(r.assoc);
    detail["assoc_forms_ok"] = r.assoc_forms_ok;
    const double worst = std::max(r.quaternionic.max, r.compat.max);
    status = band(worst, b.thr);
    if (!r.assoc_forms_ok) status = "fail";
  } else if (name == "integrability") {
    const IntegrabilityResiduals r = integrability_residuals(*b.ambient, ambient_pts);
    for (int a = 0; a < 3; ++a)
      detail["nijenhuis_J" + std::to_string(a + 1)] = stat_json(r.per_structure[a]);
    status = band(r.max(), b.thr);
  } else if (name == "classify") {
    const StructureResiduals s = structure_residuals(*b.ambient, ambient_pts);
    const ClassResiduals r = class_residuals(*b.ambient, ambient_pts, b.thr);
    detail["verdict"] = to_string(r.verdict);
    detail["r_K"] = stat_json(r.r_K);
    detail["r_W1"] = stat_json(r.r_W1);
    detail["r_Walpha"] = stat_json(r.r_Walpha);
    detail["r_lee"] = stat_json(r.r_lee);
    detail["structure_ok"] = s.passes(b.thr);
    if (!s.passes(b.thr)) {
      detail["verdict"] = "Indeterminate";
      detail["note"] = "structure axioms fail; class verdict withheld";
      status = "fail";
    } else {
      status = (r.verdict == ClassVerdict::K || r.verdict == ClassVerdict::W) ? "hold"
               : (r.verdict == ClassVerdict::Outside)                         ? "fail"
                                                                              : "indeterminate";
    }
  } else if (name == "lee") {
    const LeeRelations r = lee_relations(*b.ambient, ambient_pts);
    detail["r_lee"] = stat_json(r.r_lee);
    detail["r_covector"] = stat_json(r.r_covector);
    detail["max_theta"] = r.max_theta;
    status = band(std::max(r.r_lee.max, r.r_covector.max), b.thr);
  } else if (name == "holomorphy") {
    ResidualStat r;
    for (const Vector& p : sub_pts) r.add(holomorphy_residual(*b.immersion, p));
    detail["residual"] = stat_json(r);
    status = band(r.max, b.thr);
  } else if (name == "theorem31") {
    const Theorem31Record r = theorem31_residuals(*b.immersion, sub_pts, b.thr);
    static constexpr const char* names[6] = {"umbilic_form", "nabla_J1",      "nabla_Jalpha",
                                             "shape_J1",     "shape_Jalpha", "normal_connection"};
    for (int i = 0; i < 6; ++i) detail[names[i]] = stat_json(r.residual[i]);
    detail["ambient_verdict"] = to_string(r.ambient_verdict);
    detail["ambient_w_ok"] = r.ambient_w_ok;
    detail["holomorphy"] = r.holomorphy;
    status = band(r.max_residual(), b.thr);
    if (!r.ambient_w_ok && status == "hold") status = "indeterminate";
  } else if (name == "lee-restriction") {
    const LeeRestrictionRecord r = lee_restriction_check(*b.immersion, sub_pts, b.thr);
    detail["r_theta1"] = stat_json(r.r_theta1);
    detail["r_theta_alpha"] = stat_json(r.r_theta_alpha);
    detail["max_induced_theta"] = r.max_induced_theta;
    detail["max_ambient_theta"] = r.max_ambient_theta;
    status = band(std::max(r.r_theta1.max, r.r_theta_alpha.max), b.thr);
  } else if (name == "umbilicity") {
    const UmbilicityRecord r = umbilicity_classify(*b.immersion, sub_pts, b.thr);
    detail["verdict"] = to_string(r.verdict);
    detail["geodesic_residual"] = stat_json(r.geodesic);
    detail["umbilical_residual"] = stat_json(r.umbilical);
    detail["mean_curvature_max"] = r.mean_curvature_max;
    detail["mean_curvature_identity"] = stat_json(r.mean_curv_identity);
    for (int a = 0; a < 3; ++a) {
      detail["theta_perp_max_J" + std::to_string(a + 1)] = r.theta_perp_max[a];
      detail["theta_tan_max_J" + std::to_string(a + 1)] = r.theta_tan_max[a];
    }
    detail["theta_verdict"] = to_string(r.theta_verdict);
    detail["consistent"] = r.consistent;
    const bool decided = r.verdict == UmbilicityVerdict::TotallyGeodesic ||
                         r.verdict == UmbilicityVerdict::TotallyUmbilical;
    if (r.verdict == UmbilicityVerdict::Neither || !r.consistent)
      status = "fail";
    else if (decided)
      status = "hold";
    else
      status = "indeterminate";
  } else if (name == "product-relations") {
    const ProductRelationResiduals r = verify_product_relations(*b.bundle, ambient_pts);
    detail["fundamental"] = stat_json(r.fundamental);
    detail["lee"] = stat_json(r.lee);
    detail["mixed_support"] = stat_json(r.mixed_support);
    status = band(std::max(r.fundamental.max, r.lee.max), b.thr);
  } else {
    throw ConfigError("unknown check '" + name + "'");
  }
  return detail;
}

}  // namespace

bool Scenario::has(const std::string& key) const {
  for (const auto& [k, v] : settings)
    if (k == key) return true;
  return false;
}

std::string Scenario::get(const std::string& key, const std::string& fallback) const {
  std::string out = fallback;
  for (const auto& [k, v] : settings)
    if (k == key) out = v;  // later settings override earlier ones
  return out;
}

Scenario parse_scenario_text(const std::string& text, std::string path) {
  Scenario sc;
  sc.path = std::move(path);
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = unquote(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    sc.settings.emplace_back(std::move(key), std::move(value));
  }
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
  const BuiltScenario b = build_scenario(sc, opt);

  RunResult res;
  res.report["engine"] = Json{{"name", kEngineName}, {"version", kEngineVersion}};
  Json echo = Json::object();
  for (const auto& [k, v] : sc.settings) echo[k] = v;
  res.report["scenario"] = Json{{"path", sc.path}, {"settings", echo}};
  res.report["sampling"] =
      Json{{"points", b.points}, {"box", b.box}, {"sequence", "halton"}};
  res.report["thresholds"] = Json{{"hold", b.thr.hold}, {"fail", b.thr.fail}};
  res.report["ambient"] = Json{{"label", b.ambient->label()}, {"dim", b.ambient->dim()}};
  if (b.immersion)
    res.report["immersion"] =
        Json{{"label", b.immersion->label}, {"source_dim", b.immersion->source_dim()}};

  const std::vector<Vector> ambient_pts = halton_points(b.points, b.ambient->dim(), b.box);
  const std::vector<Vector> sub_pts =
      b.immersion ? halton_points(b.points, b.immersion->source_dim(), b.box)
                  : std::vector<Vector>{};

  int n_hold = 0, n_fail = 0, n_indet = 0;
  Json checks = Json::array();
  for (const std::string& name : b.checks) {
    Json entry;
    entry["name"] = name;
    std::string status;
    try {
      Json detail = run_check(b, name, ambient_pts, sub_pts, status);
      entry["status"] = status;
      entry["detail"] = std::move(detail);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      entry["status"] = "error";
      entry["detail"] = Json{{"error", e.what()}};
      status = "error";
    }
    if (status == "hold")
      ++n_hold;
    else if (status == "fail")
      ++n_fail;
    else if (status == "indeterminate")
      ++n_indet;
    else {
      checks.push_back(std::move(entry));
      res.report["checks"] = std::move(checks);
      res.report["summary"] =
          Json{{"hold", n_hold}, {"fail", n_fail}, {"indeterminate", n_indet},
               {"status", "error"}, {"exit_code", 4}};
      res.exit_code = 4;
      return res;
    }
    checks.push_back(std::move(entry));
  }
  res.report["checks"] = std::move(checks);

  std::string overall = "hold";
  res.exit_code = 0;
  if (n_fail > 0) {
    overall = "fail";
    res.exit_code = 1;
  } else if (n_indet > 0) {
    overall = "indeterminate";
    res.exit_code = 2;
  }
  res.report["summary"] = Json{{"hold", n_hold},
                               {"fail", n_fail},
                               {"indeterminate", n_indet},
                               {"status", overall},
                               {"exit_code", res.exit_code}};
  return res;
}

}  // namespace hypernorden
