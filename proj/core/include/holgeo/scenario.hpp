#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holgeo/clifton_pohl.hpp"
#include "holgeo/coercivity.hpp"
#include "holgeo/continuation.hpp"
#include "holgeo/geodesic.hpp"
#include "holgeo/metric.hpp"

namespace holgeo::scenario {

using Json = nlohmann::json;

/// Metric block of a scenario file. Every kind lowers to a MetricSpec;
/// warped kinds additionally expose the structured data.
struct MetricScenario {
  enum class Kind { general, warped, warped_example, clifton_pohl };
  Kind kind;
  int dimension = 0;
  std::optional<MetricSpec> general;
  std::optional<WarpedSpec> warped;       // also set for warped_example (lowered)
  // warped_example raw pieces, kept for classify-warped
  std::optional<Expr> example_h;
  std::vector<Expr> example_f;
  std::vector<QuadraticPolynomial> example_p;

  const MetricSpec& metric() const { return *lowered_; }
  std::optional<MetricSpec> lowered_;
};

struct ChristoffelScenario {
  MetricScenario metric;
  std::vector<std::vector<Cx>> points;
};

struct IntegrateScenario {
  MetricScenario metric;
  std::vector<GeodesicGerm> germs;
  ComplexPath path;
  IntegratorConfig config;
};

struct ProbeScenario {
  MetricScenario metric;
  std::vector<GeodesicGerm> germs;
  double t0 = 0.0, t1 = 0.0;
  ProbeOptions probe;
  IntegratorConfig config;
};

struct ClassifyWarpedScenario {
  Expr h;
  std::vector<Expr> f;
  std::vector<QuadraticPolynomial> p;
  ClassifyOptions options;
};

struct CliftonPohlScenario {
  std::vector<clifton_pohl::CPInitial> items;
  std::optional<double> trajectory_horizon;
  IntegratorConfig config;
};

struct MonodromyScenario {
  Expr germ_expr;        // one-variable expression in u1
  Cx base_point{0.0, 0.0};
  ComplexPath loop;
  int max_turns = 8;
};

/// Parsers report schema violations as parse_error with a JSON-pointer
/// prefix in the message, e.g. "/metric/b1: position 4: unknown identifier".
Result<ChristoffelScenario> parse_christoffel(const Json& doc);
Result<IntegrateScenario> parse_integrate(const Json& doc);
Result<ProbeScenario> parse_probe(const Json& doc);
Result<ClassifyWarpedScenario> parse_classify_warped(const Json& doc);
Result<CliftonPohlScenario> parse_clifton_pohl(const Json& doc);
Result<MonodromyScenario> parse_monodromy(const Json& doc);

/// Shared building blocks (exposed for tests).
Result<MetricScenario> parse_metric(const Json& j, const std::string& pointer);
Result<ComplexPath> parse_path(const Json& j, const std::string& pointer);
Result<IntegratorConfig> parse_config(const Json& doc, const std::string& pointer);

}  // namespace holgeo::scenario
