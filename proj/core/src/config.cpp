#include "pdsynth/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pdsynth/errors.hpp"

namespace pdsynth {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InputError("config: bad number '" + v + "' for key " + key);
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  if (v == "unlimited") return kUnlimited;
  try {
    std::size_t pos = 0;
    const auto u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    throw InputError("config: bad integer '" + v + "' for key " + key);
  }
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& origin_name) {
  RunConfig cfg;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section != "data" && section != "model" && section != "privacy" &&
          section != "generation" && section != "verify") {
        throw InputError("config " + origin_name + ": unknown section [" +
                         section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config " + origin_name + ":" + std::to_string(lineno) +
                       ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "data.schema") {
      cfg.schema_path = value;
    } else if (qual == "data.dataset") {
      cfg.dataset_path = value;
    } else if (qual == "data.model") {
      cfg.model_path = value;
    } else if (qual == "data.candidate") {
      cfg.candidate_path = value;
    } else if (qual == "data.fractions") {
      std::istringstream parts(value);
      std::string tok;
      double f[3];
      for (int i = 0; i < 3; ++i) {
        if (!std::getline(parts, tok, ',')) {
          throw InputError("config: fractions needs three comma-separated values");
        }
        f[i] = parse_double(trim(tok), key);
      }
      cfg.fractions = {f[0], f[1], f[2]};
    } else if (qual == "data.seed") {
      cfg.seed = parse_u64(value, key);
    } else if (qual == "model.eps_target") {
      cfg.eps_target = parse_double(value, key);
    } else if (qual == "model.delta_target") {
      cfg.delta_target = parse_double(value, key);
    } else if (qual == "model.eps_entropy") {
      cfg.eps_entropy = parse_double(value, key);
    } else if (qual == "model.eps_record_count") {
      cfg.eps_record_count = parse_double(value, key);
    } else if (qual == "model.eps_parameter") {
      cfg.eps_parameter = parse_double(value, key);
    } else if (qual == "model.alpha") {
      cfg.alpha = parse_double(value, key);
    } else if (qual == "model.maxcost") {
      cfg.maxcost = parse_u64(value, key);
    } else if (qual == "model.sampling_p") {
      cfg.sampling_p = parse_double(value, key);
    } else if (qual == "privacy.k") {
      cfg.privacy.k = parse_u64(value, key);
    } else if (qual == "privacy.gamma") {
      cfg.privacy.gamma = parse_double(value, key);
    } else if (qual == "privacy.eps0") {
      cfg.privacy.eps0 = parse_double(value, key);
    } else if (qual == "privacy.t") {
      cfg.t = parse_u64(value, key);
    } else if (qual == "privacy.max_plausible") {
      cfg.privacy.max_plausible = parse_u64(value, key);
    } else if (qual == "privacy.max_check_plausible") {
      cfg.privacy.max_check_plausible = parse_u64(value, key);
    } else if (qual == "generation.omega") {
      const auto dash = value.find('-');
      if (dash == std::string::npos) {
        cfg.omega_lo = cfg.omega_hi = parse_u64(value, key);
      } else {
        cfg.omega_lo = parse_u64(trim(value.substr(0, dash)), key);
        cfg.omega_hi = parse_u64(trim(value.substr(dash + 1)), key);
      }
    } else if (qual == "generation.count") {
      cfg.count = parse_u64(value, key);
    } else if (qual == "generation.workers") {
      cfg.workers = static_cast<unsigned>(parse_u64(value, key));
    } else if (qual == "generation.test") {
      if (value == "deterministic") {
        cfg.test_kind = TestKind::Deterministic;
      } else if (value == "randomized") {
        cfg.test_kind = TestKind::Randomized;
      } else {
        throw InputError("config: test must be deterministic or randomized");
      }
    } else if (qual == "generation.max_seconds") {
      cfg.max_seconds = parse_double(value, key);
    } else if (qual == "verify.bins_max") {
      cfg.verify_bins_max = parse_u64(value, key);
    } else if (qual == "verify.n_max") {
      cfg.verify_n_max = parse_u64(value, key);
    } else if (qual == "verify.k_values") {
      cfg.verify_k_values = value;
    } else if (qual == "verify.gamma_values") {
      cfg.verify_gamma_values = value;
    } else if (qual == "verify.eps0_values") {
      cfg.verify_eps0_values = value;
    } else if (qual == "verify.t_values") {
      cfg.verify_t_values = value;
    } else if (qual == "verify.omega") {
      cfg.verify_omega = parse_u64(value, key);
    } else if (qual == "verify.bound_gamma_scale") {
      cfg.verify_bound_gamma_scale = parse_double(value, key);
    } else if (qual == "verify.bound_delta_scale") {
      cfg.verify_bound_delta_scale = parse_double(value, key);
    } else if (qual == "verify.schema") {
      cfg.verify_schema_path = value;
    } else if (qual == "verify.dataset") {
      cfg.verify_dataset_path = value;
    } else {
      throw InputError("config " + origin_name + ":" + std::to_string(lineno) +
                       ": unknown key '" + key + "' in section [" + section +
                       "]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path);
  return parse_config(in, path);
}

}  // namespace pdsynth
