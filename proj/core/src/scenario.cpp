#include "holgeo/scenario.hpp"

#include <cmath>

namespace holgeo::scenario {

namespace {

Error fail(const std::string& pointer, const std::string& message) {
  return Error{errc::parse_error, pointer + ": " + message};
}

Result<double> get_number(const Json& j, const std::string& pointer) {
  if (!j.is_number()) return fail(pointer, "expected a number");
  return j.get<double>();
}

Result<Cx> get_complex(const Json& j, const std::string& pointer) {
  if (j.is_number()) return Cx{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Cx{j[0].get<double>(), j[1].get<double>()};
  return fail(pointer, "expected a number or [re, im]");
}

Result<std::vector<Cx>> get_complex_array(const Json& j, const std::string& pointer) {
  if (!j.is_array()) return fail(pointer, "expected an array");
  std::vector<Cx> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    auto v = get_complex(j[i], pointer + "/" + std::to_string(i));
    if (!v) return v.error();
    out.push_back(v.value());
  }
  return out;
}

Result<Expr> get_expr(const Json& j, int dimension, const std::string& pointer) {
  if (!j.is_string()) return fail(pointer, "expected an expression string");
  auto e = parse_expression(j.get<std::string>(), dimension);
  if (!e) return fail(pointer, e.error().message);
  return e;
}

Result<GeodesicGerm> parse_germ(const Json& j, int dimension, const std::string& pointer) {
  if (!j.is_object()) return fail(pointer, "expected a germ object");
  GeodesicGerm g;
  if (j.contains("z0")) {
    auto z = get_complex(j["z0"], pointer + "/z0");
    if (!z) return z.error();
    g.z0 = z.value();
  }
  if (!j.contains("position") || !j.contains("velocity"))
    return fail(pointer, "germ needs position and velocity");
  auto pos = get_complex_array(j["position"], pointer + "/position");
  if (!pos) return pos.error();
  auto vel = get_complex_array(j["velocity"], pointer + "/velocity");
  if (!vel) return vel.error();
  if (static_cast<int>(pos.value().size()) != dimension ||
      static_cast<int>(vel.value().size()) != dimension)
    return fail(pointer, "position/velocity must have length " + std::to_string(dimension));
  g.position = std::move(pos).value();
  g.velocity = std::move(vel).value();
  return g;
}

Result<std::vector<GeodesicGerm>> parse_germs(const Json& doc, int dimension,
                                              const std::string& pointer_root) {
  std::vector<GeodesicGerm> out;
  if (doc.contains("germ")) {
    auto g = parse_germ(doc["germ"], dimension, pointer_root + "/germ");
    if (!g) return g.error();
    out.push_back(std::move(g).value());
  } else if (doc.contains("germs")) {
    const Json& arr = doc["germs"];
    if (!arr.is_array()) return fail(pointer_root + "/germs", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      auto g = parse_germ(arr[i], dimension, pointer_root + "/germs/" + std::to_string(i));
      if (!g) return g.error();
      out.push_back(std::move(g).value());
    }
  } else {
    return fail(pointer_root, "scenario needs a germ or germs entry");
  }
  return out;
}

Result<QuadraticPolynomial> parse_quadratic(const Json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 3)
    return fail(pointer, "expected [a, b, c] with degree <= 2");
  QuadraticPolynomial p;
  auto a = get_complex(j[0], pointer + "/0");
  if (!a) return a.error();
  auto b = get_complex(j[1], pointer + "/1");
  if (!b) return b.error();
  auto c = get_complex(j[2], pointer + "/2");
  if (!c) return c.error();
  p.a = a.value();
  p.b = b.value();
  p.c = c.value();
  if (p.a == Cx{} && p.b == Cx{} && p.c == Cx{})
    return fail(pointer, "coefficients must not all vanish");
  return p;
}

}  // namespace

Result<MetricScenario> parse_metric(const Json& j, const std::string& pointer) {
  if (!j.is_object()) return fail(pointer, "expected a metric object");
  if (!j.contains("type") || !j["type"].is_string())
    return fail(pointer + "/type", "expected a metric type string");
  std::string type = j["type"].get<std::string>();

  MetricScenario out;

  if (type == "clifton-pohl") {
    out.kind = MetricScenario::Kind::clifton_pohl;
    out.dimension = 2;
    out.lowered_ = clifton_pohl::metric();
    return out;
  }

  if (type == "general") {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      return fail(pointer + "/dim", "expected an integer dimension");
    int dim = j["dim"].get<int>();
    if (dim < 1 || dim > 16) return fail(pointer + "/dim", "dimension out of range [1,16]");
    if (!j.contains("g") || !j["g"].is_array() || static_cast<int>(j["g"].size()) != dim)
      return fail(pointer + "/g", "expected an NxN matrix of expression strings");
    MetricSpec m(dim);
    for (int r = 0; r < dim; ++r) {
      const Json& row = j["g"][r];
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        return fail(pointer + "/g/" + std::to_string(r), "expected a row of length N");
      for (int c = 0; c < dim; ++c) {
        if (!row[c].is_string())
          return fail(pointer + "/g/" + std::to_string(r) + "/" + std::to_string(c),
                      "expected an expression string");
        if (c < r) {
          if (row[c].get<std::string>() != j["g"][c][r].get<std::string>())
            return fail(pointer + "/g/" + std::to_string(r) + "/" + std::to_string(c),
                        "matrix entries must be symmetric");
          continue;
        }
        auto e = get_expr(row[c], dim,
                          pointer + "/g/" + std::to_string(r) + "/" + std::to_string(c));
        if (!e) return e.error();
        m.set_coefficient(r, c, std::move(e).value());
      }
    }
    out.kind = MetricScenario::Kind::general;
    out.dimension = dim;
    out.general = m;
    out.lowered_ = std::move(m);
    return out;
  }

  if (type == "warped") {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      return fail(pointer + "/dim", "expected an integer dimension");
    int dim = j["dim"].get<int>();
    if (dim < 2 || dim > 16) return fail(pointer + "/dim", "dimension out of range [2,16]");
    if (!j.contains("b1")) return fail(pointer + "/b1", "missing b1");
    auto b1 = get_expr(j["b1"], dim, pointer + "/b1");
    if (!b1) return b1.error();
    auto get_list = [&](const char* key) -> Result<std::vector<Expr>> {
      if (!j.contains(key) || !j[key].is_array() ||
          static_cast<int>(j[key].size()) != dim - 1)
        return fail(pointer + "/" + key, "expected N-1 expression strings");
      std::vector<Expr> out_list;
      for (int i = 0; i < dim - 1; ++i) {
        auto e = get_expr(j[key][i], dim, pointer + "/" + key + "/" + std::to_string(i));
        if (!e) return e.error();
        out_list.push_back(std::move(e).value());
      }
      return out_list;
    };
    auto a = get_list("a");
    if (!a) return a.error();
    auto f = get_list("f");
    if (!f) return f.error();
    try {
      WarpedSpec w(dim, std::move(b1).value(), std::move(a).value(), std::move(f).value());
      out.kind = MetricScenario::Kind::warped;
      out.dimension = dim;
      out.warped = w;
      out.lowered_ = w.to_metric();
    } catch (const std::invalid_argument& e) {
      return fail(pointer, e.what());
    }
    return out;
  }

  if (type == "warped-example") {
    if (!j.contains("h")) return fail(pointer + "/h", "missing h");
    auto h = get_expr(j["h"], 1, pointer + "/h");
    if (!h) return h.error();
    if (!j.contains("f") || !j["f"].is_array() || j["f"].empty())
      return fail(pointer + "/f", "expected at least one fibre expression");
    if (!j.contains("p") || !j["p"].is_array() || j["p"].size() != j["f"].size())
      return fail(pointer + "/p", "expected one [a,b,c] per fibre factor");
    int dim = static_cast<int>(j["f"].size()) + 1;
    if (dim > 16) return fail(pointer + "/f", "too many factors");
    std::vector<Expr> fs;
    std::vector<QuadraticPolynomial> ps;
    for (size_t i = 0; i < j["f"].size(); ++i) {
      // f_k is a function of its own coordinate u^{k}; parse in the full
      // dimension so the string may reference u<k+1> directly, or u1 as a
      // shorthand for "the factor's own variable".
      auto e = get_expr(j["f"][i], dim, pointer + "/f/" + std::to_string(i));
      if (!e) return e.error();
      auto q = parse_quadratic(j["p"][i], pointer + "/p/" + std::to_string(i));
      if (!q) return q.error();
      fs.push_back(std::move(e).value());
      ps.push_back(q.value());
    }
    // Lower to a warped spec: b1 = (h')^2, a_k = 1/P_k(h), f_k = f_k^2.
    Expr hp = differentiate(h.value(), 0);
    Expr b1 = pow(hp, 2);
    std::vector<Expr> a_list, f_list;
    for (size_t i = 0; i < fs.size(); ++i) {
      const auto& q = ps[i];
      Expr ph = Expr::constant(q.a) * pow(h.value(), 2) +
                Expr::constant(q.b) * h.value() + Expr::constant(q.c);
      a_list.push_back(Expr::constant(Cx{1.0, 0.0}) / ph);
      int var = static_cast<int>(i) + 1;
      Expr fk = fs[i];
      if (fk.references_variable(0) && !fk.references_variable(var))
        fk = substitute(fk, 0, Expr::variable(var));
      f_list.push_back(pow(fk, 2));
    }
    try {
      WarpedSpec w(dim, std::move(b1), std::move(a_list), std::move(f_list));
      out.kind = MetricScenario::Kind::warped_example;
      out.dimension = dim;
      out.warped = w;
      out.lowered_ = w.to_metric();
    } catch (const std::invalid_argument& e) {
      return fail(pointer, e.what());
    }
    out.example_h = std::move(h).value();
    out.example_f = std::move(fs);
    out.example_p = std::move(ps);
    return out;
  }

  return fail(pointer + "/type", "unknown metric type '" + type + "'");
}

Result<ComplexPath> parse_path(const Json& j, const std::string& pointer) {
  if (j.is_object() && j.contains("circle")) {
    const Json& c = j["circle"];
    auto center = get_complex(c.contains("center") ? c["center"] : Json(0.0),
                              pointer + "/circle/center");
    if (!center) return center.error();
    double radius = c.contains("radius") ? c["radius"].get<double>() : 1.0;
    double start = c.contains("start_angle") ? c["start_angle"].get<double>() : 0.0;
    int turns = c.contains("turns") ? c["turns"].get<int>() : 1;
    if (radius <= 0.0) return fail(pointer + "/circle/radius", "radius must be positive");
    if (turns == 0) return fail(pointer + "/circle/turns", "turns must be nonzero");
    return ComplexPath::circle(center.value(), radius, start, turns);
  }

  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array() ||
      j["segments"].empty())
    return fail(pointer, "expected {\"segments\": [...]} or {\"circle\": {...}}");

  std::optional<ComplexPath> path;
  const Json& segs = j["segments"];
  for (size_t i = 0; i < segs.size(); ++i) {
    std::string sp = pointer + "/segments/" + std::to_string(i);
    const Json& s = segs[i];
    if (!s.is_object() || !s.contains("type") || !s["type"].is_string())
      return fail(sp, "expected a segment object with a type");
    std::string type = s["type"].get<std::string>();
    try {
      if (type == "line") {
        auto from = get_complex(s.contains("from") ? s["from"] : Json(), sp + "/from");
        if (!from) return from.error();
        auto to = get_complex(s.contains("to") ? s["to"] : Json(), sp + "/to");
        if (!to) return to.error();
        if (!path) path = ComplexPath::line(from.value(), to.value());
        else path->append(ComplexPath::line(from.value(), to.value()));
      } else if (type == "arc") {
        auto center = get_complex(s.contains("center") ? s["center"] : Json(), sp + "/center");
        if (!center) return center.error();
        if (!s.contains("radius") || !s.contains("from_angle") || !s.contains("to_angle"))
          return fail(sp, "arc needs radius, from_angle, to_angle");
        double radius = s["radius"].get<double>();
        double a0 = s["from_angle"].get<double>();
        double a1 = s["to_angle"].get<double>();
        if (!path) path = ComplexPath::arc(center.value(), radius, a0, a1);
        else path->append_arc(center.value(), radius, a0, a1);
      } else {
        return fail(sp + "/type", "unknown segment type '" + type + "'");
      }
    } catch (const std::invalid_argument& e) {
      return fail(sp, e.what());
    }
  }
  return *path;
}

Result<IntegratorConfig> parse_config(const Json& doc, const std::string& pointer) {
  IntegratorConfig config;
  if (!doc.contains("config")) return config;
  const Json& j = doc["config"];
  if (!j.is_object()) return fail(pointer, "expected a config object");
  auto take = [&](const char* key, double& slot) -> Result<void> {
    if (!j.contains(key)) return ok_result();
    auto v = get_number(j[key], pointer + "/" + key);
    if (!v) return v.error();
    slot = v.value();
    return ok_result();
  };
  if (auto r = take("rel_tol", config.rel_tol); !r) return r.error();
  if (auto r = take("abs_tol", config.abs_tol); !r) return r.error();
  if (auto r = take("max_step", config.max_step); !r) return r.error();
  if (auto r = take("min_step", config.min_step); !r) return r.error();
  if (auto r = take("blowup_threshold", config.blowup_threshold); !r) return r.error();
  if (config.rel_tol <= 0.0 || config.rel_tol >= 1.0)
    return fail(pointer + "/rel_tol", "rel_tol must lie in (0, 1)");
  if (config.abs_tol <= 0.0 || config.abs_tol >= 1.0)
    return fail(pointer + "/abs_tol", "abs_tol must lie in (0, 1)");
  if (config.blowup_threshold <= 1.0)
    return fail(pointer + "/blowup_threshold", "blowup_threshold must exceed 1");
  return config;
}

Result<ChristoffelScenario> parse_christoffel(const Json& doc) {
  if (!doc.is_object()) return fail("", "scenario must be a JSON object");
  if (!doc.contains("metric")) return fail("/metric", "missing metric");
  auto m = parse_metric(doc["metric"], "/metric");
  if (!m) return m.error();
  ChristoffelScenario out{std::move(m).value(), {}};
  if (!doc.contains("points") || !doc["points"].is_array() || doc["points"].empty())
    return fail("/points", "expected a nonempty array of points");
  for (size_t i = 0; i < doc["points"].size(); ++i) {
    auto p = get_complex_array(doc["points"][i], "/points/" + std::to_string(i));
    if (!p) return p.error();
    if (static_cast<int>(p.value().size()) != out.metric.dimension)
      return fail("/points/" + std::to_string(i),
                  "point must have dimension " + std::to_string(out.metric.dimension));
    out.points.push_back(std::move(p).value());
  }
  return out;
}

Result<IntegrateScenario> parse_integrate(const Json& doc) {
  if (!doc.is_object()) return fail("", "scenario must be a JSON object");
  if (!doc.contains("metric")) return fail("/metric", "missing metric");
  auto m = parse_metric(doc["metric"], "/metric");
  if (!m) return m.error();
  auto germs = parse_germs(doc, m.value().dimension, "");
  if (!germs) return germs.error();
  if (!doc.contains("path")) return fail("/path", "missing path");
  auto path = parse_path(doc["path"], "/path");
  if (!path) return path.error();
  auto config = parse_config(doc, "/config");
  if (!config) return config.error();
  for (size_t i = 0; i < germs.value().size(); ++i) {
    const auto& g = germs.value()[i];
    double scale = std::max(1.0, std::abs(g.z0));
    if (std::abs(path.value().start() - g.z0) > 1e-9 * scale)
      return fail("/path", "path must start at the germ z0");
  }
  return IntegrateScenario{std::move(m).value(), std::move(germs).value(),
                           std::move(path).value(), config.value()};
}

Result<ProbeScenario> parse_probe(const Json& doc) {
  if (!doc.is_object()) return fail("", "scenario must be a JSON object");
  if (!doc.contains("metric")) return fail("/metric", "missing metric");
  auto m = parse_metric(doc["metric"], "/metric");
  if (!m) return m.error();
  auto germs = parse_germs(doc, m.value().dimension, "");
  if (!germs) return germs.error();
  if (!doc.contains("horizon") || !doc["horizon"].is_array() || doc["horizon"].size() != 2)
    return fail("/horizon", "expected [t0, t1]");
  auto t0 = get_number(doc["horizon"][0], "/horizon/0");
  if (!t0) return t0.error();
  auto t1 = get_number(doc["horizon"][1], "/horizon/1");
  if (!t1) return t1.error();
  if (!(t0.value() < t1.value())) return fail("/horizon", "need t0 < t1");
  auto config = parse_config(doc, "/config");
  if (!config) return config.error();

  ProbeScenario out{std::move(m).value(), std::move(germs).value(),
                    t0.value(), t1.value(), {}, config.value()};
  if (doc.contains("probe")) {
    const Json& pj = doc["probe"];
    if (!pj.is_object()) return fail("/probe", "expected an object");
    if (pj.contains("detour_radii")) {
      if (!pj["detour_radii"].is_array() || pj["detour_radii"].empty())
        return fail("/probe/detour_radii", "expected a nonempty array");
      out.probe.detour_radii.clear();
      for (size_t i = 0; i < pj["detour_radii"].size(); ++i) {
        auto r = get_number(pj["detour_radii"][i],
                            "/probe/detour_radii/" + std::to_string(i));
        if (!r) return r.error();
        if (r.value() <= 0.0)
          return fail("/probe/detour_radii/" + std::to_string(i), "radius must be positive");
        out.probe.detour_radii.push_back(r.value());
      }
    }
    if (pj.contains("real_slice_tol")) {
      auto r = get_number(pj["real_slice_tol"], "/probe/real_slice_tol");
      if (!r) return r.error();
      out.probe.real_slice_tol = r.value();
    }
  }
  for (const auto& g : out.germs) {
    if (std::abs(g.z0.imag()) > 1e-12)
      return fail("/germ", "probe germs need a real z0");
    if (g.z0.real() < out.t0 - 1e-12 || g.z0.real() > out.t1 + 1e-12)
      return fail("/germ", "germ z0 must lie inside the horizon");
  }
  return out;
}

Result<ClassifyWarpedScenario> parse_classify_warped(const Json& doc) {
  if (!doc.is_object()) return fail("", "scenario must be a JSON object");
  if (!doc.contains("metric")) return fail("/metric", "missing metric");
  auto m = parse_metric(doc["metric"], "/metric");
  if (!m) return m.error();
  if (m.value().kind != MetricScenario::Kind::warped_example)
    return fail("/metric/type", "classify-warped expects a warped-example metric");
  ClassifyWarpedScenario out{*m.value().example_h, m.value().example_f,
                             m.value().example_p, {}};
  if (doc.contains("sampling")) {
    const Json& sj = doc["sampling"];
    if (!sj.is_object()) return fail("/sampling", "expected an object");
    if (sj.contains("targets")) out.options.sample_targets = sj["targets"].get<int>();
    if (sj.contains("radius")) out.options.target_radius = sj["radius"].get<double>();
    if (sj.contains("newton_starts"))
      out.options.newton_starts = sj["newton_starts"].get<int>();
    if (out.options.sample_targets < 1 || out.options.target_radius <= 0.0 ||
        out.options.newton_starts < 1)
      return fail("/sampling", "sampling parameters must be positive");
  }
  if (doc.contains("disc_domain_asserted") && doc["disc_domain_asserted"].is_boolean() &&
      doc["disc_domain_asserted"].get<bool>())
    out.options.domain = WarpedDomain::unit_disc_asserted;
  return out;
}

Result<CliftonPohlScenario> parse_clifton_pohl(const Json& doc) {
  if (!doc.is_object()) return fail("", "scenario must be a JSON object");
  CliftonPohlScenario out;
  auto parse_item = [&](const Json& j, const std::string& pointer)
      -> Result<clifton_pohl::CPInitial> {
    if (!j.is_object()) return fail(pointer, "expected an object");
    for (const char* key : {"alpha", "beta", "x", "y"})
      if (!j.contains(key) || !j[key].is_number())
        return fail(pointer + "/" + key, "expected a number");
    clifton_pohl::CPInitial c{j["alpha"].get<double>(), j["beta"].get<double>(),
                              j["x"].get<double>(), j["y"].get<double>()};
    if (c.alpha == 0.0 && c.beta == 0.0)
      return fail(pointer, "(alpha, beta) must not be the origin");
    return c;
  };
  if (doc.contains("initial")) {
    auto c = parse_item(doc["initial"], "/initial");
    if (!c) return c.error();
    out.items.push_back(c.value());
  } else if (doc.contains("batch")) {
    if (!doc["batch"].is_array() || doc["batch"].empty())
      return fail("/batch", "expected a nonempty array");
    for (size_t i = 0; i < doc["batch"].size(); ++i) {
      auto c = parse_item(doc["batch"][i], "/batch/" + std::to_string(i));
      if (!c) return c.error();
      out.items.push_back(c.value());
    }
  } else {
    return fail("", "scenario needs an initial or batch entry");
  }
  if (doc.contains("trajectory_horizon")) {
    auto h = get_number(doc["trajectory_horizon"], "/trajectory_horizon");
    if (!h) return h.error();
    if (h.value() <= 0.0) return fail("/trajectory_horizon", "horizon must be positive");
    out.trajectory_horizon = h.value();
  }
  auto config = parse_config(doc, "/config");
  if (!config) return config.error();
  out.config = config.value();
  return out;
}

Result<MonodromyScenario> parse_monodromy(const Json& doc) {
  if (!doc.is_object()) return fail("", "scenario must be a JSON object");
  if (!doc.contains("germ") || !doc["germ"].is_object())
    return fail("/germ", "expected a germ object");
  const Json& gj = doc["germ"];
  if (!gj.contains("expr")) return fail("/germ/expr", "missing expression");
  auto e = get_expr(gj["expr"], 1, "/germ/expr");
  if (!e) return e.error();
  MonodromyScenario out{std::move(e).value(), Cx{1.0, 0.0}, ComplexPath::circle(Cx{}, 1.0, 0.0, 1),
                        8};
  if (gj.contains("base")) {
    auto b = get_complex(gj["base"], "/germ/base");
    if (!b) return b.error();
    out.base_point = b.value();
  }
  if (doc.contains("loop")) {
    auto loop = parse_path(doc["loop"], "/loop");
    if (!loop) return loop.error();
    if (!loop.value().is_closed()) return fail("/loop", "loop must be closed");
    out.loop = std::move(loop).value();
  } else {
    out.loop = ComplexPath::circle(Cx{0.0, 0.0}, std::abs(out.base_point),
                                   std::arg(out.base_point), 1);
  }
  double scale = std::max(1.0, std::abs(out.base_point));
  if (std::abs(out.loop.start() - out.base_point) > 1e-9 * scale)
    return fail("/loop", "loop must pass through the germ base point");
  if (doc.contains("max_turns")) {
    if (!doc["max_turns"].is_number_integer() || doc["max_turns"].get<int>() < 1)
      return fail("/max_turns", "expected a positive integer");
    out.max_turns = doc["max_turns"].get<int>();
  }
  return out;
}

}  // namespace holgeo::scenario
