#include "mcflow/config.hpp"

#include <cmath>
#include <fstream>

#include "mcflow/errors.hpp"

namespace mcflow {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + "." + key, "must be finite");
  return x;
}

double positive(const json& j, const std::string& key, const std::string& path) {
  const double x = number(j, key, path);
  if (!(x > 0.0)) throw ConfigError(path + "." + key, "must be positive");
  return x;
}

Domain::Kind parse_domain(const json& j) {
  if (!j.is_object()) throw ConfigError("domain", "must be an object");
  const std::string kind = j.value("kind", "");
  if (kind == "ellipse") return Ellipse{positive(j, "a", "domain"), positive(j, "b", "domain")};
  if (kind == "fourier") {
    FourierCurve f;
    f.r0 = positive(j, "r0", "domain");
    if (j.contains("harmonics")) {
      if (!j.at("harmonics").is_array()) throw ConfigError("domain.harmonics", "must be a list");
      for (const auto& h : j.at("harmonics")) {
        if (!h.is_array() || h.size() != 3 || !h[0].is_number_integer() || !h[1].is_number() ||
            !h[2].is_number()) {
          throw ConfigError("domain.harmonics", "entries must be [k, cos_amp, sin_amp]");
        }
        const int k = h[0].get<int>();
        if (k < 1) throw ConfigError("domain.harmonics", "harmonic index must be >= 1");
        f.harmonics.push_back({k, h[1].get<double>(), h[2].get<double>()});
      }
    }
    return f;
  }
  throw ConfigError("domain.kind", "must be \"ellipse\" or \"fourier\"");
}

}  // namespace

RunConfig parse_config(const json& j, const ConfigOverrides& ov) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  RunConfig c;
  c.explore = ov.explore;

  if (!j.contains("domain")) throw ConfigError("domain", "missing");
  c.domain = parse_domain(j.at("domain"));
  try {
    Domain check(c.domain);
  } catch (const Error& e) {
    throw ConfigError("domain", e.what());
  }

  if (!j.contains("problem")) throw ConfigError("problem", "missing");
  const auto& p = j.at("problem");
  if (!p.is_object()) throw ConfigError("problem", "must be an object");
  const std::string kind = p.value("kind", "");
  if (kind == "power_mc") {
    const double alpha = ov.alpha ? *ov.alpha : number(p, "alpha", "problem");
    if (!(alpha > 0.0)) throw ConfigError("problem.alpha", "must be positive");
    if (ov.mu) throw ConfigError("mu", "override given for a power_mc problem");
    c.problem = Problem::power_mc(alpha);
  } else if (kind == "constant_forcing") {
    const double mu = ov.mu ? *ov.mu : number(p, "mu", "problem");
    if (!(mu > 0.0)) throw ConfigError("problem.mu", "must be positive");
    if (ov.alpha) throw ConfigError("alpha", "override given for a constant_forcing problem");
    c.problem = Problem::constant_forcing(mu);
  } else {
    throw ConfigError("problem.kind", "must be \"power_mc\" or \"constant_forcing\"");
  }

  if (ov.h) {
    c.h = *ov.h;
  } else if (j.contains("h")) {
    c.h = number(j, "h", "<root>");
  }
  if (!(c.h > 0.0) || !std::isfinite(c.h)) throw ConfigError("h", "must be positive");

  if (j.contains("betas")) {
    const auto& b = j.at("betas");
    if (!b.is_array()) throw ConfigError("betas", "must be a list of numbers");
    c.betas.clear();
    for (const auto& x : b) {
      if (!x.is_number()) throw ConfigError("betas", "must be a list of numbers");
      c.betas.push_back(x.get<double>());
    }
  }
  if (!c.explore) {
    for (double beta : c.betas) {
      if (beta < 1.0 || beta > 2.0) {
        throw ConfigError("betas", "values outside [1, 2] require --explore");
      }
    }
  }

  if (ov.output_dir) {
    c.output_dir = *ov.output_dir;
  } else if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("output_dir", "must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("emit_fields")) {
    if (!j.at("emit_fields").is_boolean()) throw ConfigError("emit_fields", "must be a boolean");
    c.emit_fields = j.at("emit_fields").get<bool>();
  }

  if (j.contains("radial")) {
    const auto& r = j.at("radial");
    if (!r.is_object()) throw ConfigError("radial", "must be an object");
    RadialConfig rc;
    if (r.contains("R")) rc.R = positive(r, "R", "radial");
    if (r.contains("n")) {
      if (!r.at("n").is_number_integer() || r.at("n").get<int>() < 100) {
        throw ConfigError("radial.n", "must be an integer >= 100");
      }
      rc.n = r.at("n").get<int>();
    }
    c.radial = rc;
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (!s.is_object()) throw ConfigError("solver", "must be an object");
    if (s.contains("residual_tol")) c.solve.residual_tol = positive(s, "residual_tol", "solver");
    auto count = [&](const char* key, int& dst, int lo) {
      if (!s.contains(key)) return;
      if (!s.at(key).is_number_integer() || s.at(key).get<int>() < lo) {
        throw ConfigError(std::string("solver.") + key, "must be an integer >= " + std::to_string(lo));
      }
      dst = s.at(key).get<int>();
    };
    count("max_iters", c.solve.max_iters, 1);
    count("max_halvings", c.solve.max_halvings, 0);
    count("continuation_steps", c.solve.continuation_steps, 1);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream is(path);
  if (!is) throw ConfigError("--config", "cannot open " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j, overrides);
}

}  // namespace mcflow
