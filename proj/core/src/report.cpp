#include "holgeo/report.hpp"

#include <cstdio>

namespace holgeo::report {

namespace {

void dump_value(const Json& j, std::string& out, int indent, int depth) {
  std::string pad(static_cast<size_t>(indent) * depth, ' ');
  std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');

  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += '}';
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump_value(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += ']';
      return;
    }
    case nlohmann::detail::value_t::number_float: {
      char buf[40];
      double v = j.get<double>();
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_value(j, out, indent, 0);
  out += '\n';
  return out;
}

Json complex_json(Cx value) { return Json::array({value.real(), value.imag()}); }

Json config_json(const IntegratorConfig& config) {
  Json j;
  j["rel_tol"] = config.rel_tol;
  j["abs_tol"] = config.abs_tol;
  j["max_step"] = config.max_step;
  j["min_step"] = config.min_step;
  j["blowup_threshold"] = config.blowup_threshold;
  return j;
}

Json termination_json(const Termination& termination) {
  Json j;
  j["reason"] = termination_reason_name(termination.reason);
  j["kind"] = singularity_kind_name(termination.kind);
  j["z"] = complex_json(termination.z);
  if (!termination.detail.empty()) j["detail"] = termination.detail;
  return j;
}

}  // namespace holgeo::report
