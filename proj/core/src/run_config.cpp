#include "monodim/run_config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace monodim::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double parse_double_strict(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument(what + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (errno != 0 || end != t.c_str() + t.size()) {
    throw std::invalid_argument(what + ": malformed number '" + t + "'");
  }
  return v;
}

long long parse_int_strict(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument(what + ": empty integer");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (errno != 0 || end != t.c_str() + t.size()) {
    throw std::invalid_argument(what + ": malformed integer '" + t + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string unquote(const std::string& s) {
  const std::string t = trim(s);
  if (t.size() >= 2 && ((t.front() == '"' && t.back() == '"') ||
                        (t.front() == '\'' && t.back() == '\''))) {
    return t.substr(1, t.size() - 2);
  }
  return t;
}

std::vector<DiscreteAtom> parse_atoms(const std::string& text) {
  std::vector<DiscreteAtom> atoms;
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ';') c = ',';
  }
  for (const std::string& part : split(normalized, ',')) {
    const std::string item = trim(part);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("dist: discrete atom '" + item +
                                  "' must be value=prob");
    }
    atoms.push_back(
        DiscreteAtom{parse_double_strict(item.substr(0, eq), "dist atom value"),
                     parse_double_strict(item.substr(eq + 1), "dist atom prob")});
  }
  if (atoms.empty()) throw std::invalid_argument("dist: no discrete atoms");
  return atoms;
}

ActivityDistribution make_dist(const std::string& kind,
                               const std::vector<double>& ps,
                               const std::string& atoms_text) {
  auto need = [&](std::size_t count) {
    if (ps.size() != count) {
      throw std::invalid_argument("dist: '" + kind + "' takes " +
                                  std::to_string(count) + " parameter(s), got " +
                                  std::to_string(ps.size()));
    }
  };
  if (kind == "dirac") {
    need(1);
    return ActivityDistribution::dirac(ps[0]);
  }
  if (kind == "uniform") {
    need(2);
    return ActivityDistribution::uniform(ps[0], ps[1]);
  }
  if (kind == "lognormal" || kind == "log_normal") {
    need(2);
    return ActivityDistribution::log_normal(ps[0], ps[1]);
  }
  if (kind == "gamma") {
    need(2);
    return ActivityDistribution::gamma(ps[0], ps[1]);
  }
  if (kind == "exponential" || kind == "exp") {
    need(1);
    return ActivityDistribution::exponential(ps[0]);
  }
  if (kind == "discrete") {
    return ActivityDistribution::discrete(parse_atoms(atoms_text));
  }
  throw std::invalid_argument("dist: unknown kind '" + kind + "'");
}

ActivityDistribution parse_dist_table(const std::string& inner) {
  std::string kind;
  std::string atoms_text;
  double a = 0, b = 0, mu = 0, sigma = 0, shape = 0, scale = 0, point = 0,
         rate = 0;
  bool has_a = false, has_b = false, has_mu = false, has_sigma = false,
       has_shape = false, has_scale = false, has_point = false,
       has_rate = false;

  for (const std::string& part : split(inner, ',')) {
    const std::string item = trim(part);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("dist: expected key = value, got '" + item +
                                  "'");
    }
    const std::string key = lower(trim(item.substr(0, eq)));
    const std::string value = item.substr(eq + 1);
    if (key == "kind") {
      kind = lower(unquote(value));
    } else if (key == "atoms") {
      atoms_text = unquote(value);
    } else if (key == "a") {
      a = parse_double_strict(value, "dist a"), has_a = true;
    } else if (key == "b") {
      b = parse_double_strict(value, "dist b"), has_b = true;
    } else if (key == "mu") {
      mu = parse_double_strict(value, "dist mu"), has_mu = true;
    } else if (key == "sigma") {
      sigma = parse_double_strict(value, "dist sigma"), has_sigma = true;
    } else if (key == "shape") {
      shape = parse_double_strict(value, "dist shape"), has_shape = true;
    } else if (key == "scale") {
      scale = parse_double_strict(value, "dist scale"), has_scale = true;
    } else if (key == "point") {
      point = parse_double_strict(value, "dist point"), has_point = true;
    } else if (key == "rate") {
      rate = parse_double_strict(value, "dist rate"), has_rate = true;
    } else {
      throw std::invalid_argument("dist: unknown field '" + key + "'");
    }
  }

  if (kind.empty()) throw std::invalid_argument("dist: missing kind");
  std::vector<double> ps;
  if (kind == "dirac") {
    if (!has_point) throw std::invalid_argument("dist: dirac needs point");
    ps = {point};
  } else if (kind == "uniform") {
    if (!has_a || !has_b) throw std::invalid_argument("dist: uniform needs a, b");
    ps = {a, b};
  } else if (kind == "lognormal" || kind == "log_normal") {
    if (!has_mu || !has_sigma) {
      throw std::invalid_argument("dist: lognormal needs mu, sigma");
    }
    ps = {mu, sigma};
  } else if (kind == "gamma") {
    if (!has_shape || !has_scale) {
      throw std::invalid_argument("dist: gamma needs shape, scale");
    }
    ps = {shape, scale};
  } else if (kind == "exponential" || kind == "exp") {
    if (!has_rate) throw std::invalid_argument("dist: exponential needs rate");
    ps = {rate};
  }
  return make_dist(kind, ps, atoms_text);
}

}  // namespace

ActivityDistribution parse_dist_spec(const std::string& spec) {
  const std::string s = trim(spec);
  if (s.empty()) throw std::invalid_argument("dist: empty specification");

  if (s.front() == '{') {
    if (s.back() != '}') {
      throw std::invalid_argument("dist: unterminated table '" + s + "'");
    }
    return parse_dist_table(s.substr(1, s.size() - 2));
  }

  const std::size_t colon = s.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("dist: expected kind:params, got '" + s + "'");
  }
  const std::string kind = lower(trim(s.substr(0, colon)));
  const std::string rest = s.substr(colon + 1);
  if (kind == "discrete") {
    return make_dist(kind, {}, rest);
  }
  std::vector<double> ps;
  for (const std::string& part : split(rest, ',')) {
    ps.push_back(parse_double_strict(part, "dist parameter"));
  }
  return make_dist(kind, ps, "");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::string inner = trim(text);
  if (!inner.empty() && inner.front() == '[' && inner.back() == ']') {
    inner = inner.substr(1, inner.size() - 2);
  }
  std::vector<double> out;
  for (const std::string& part : split(inner, ',')) {
    const std::string item = trim(part);
    if (item.empty()) continue;
    out.push_back(parse_double_strict(item, "list entry"));
  }
  if (out.empty()) throw std::invalid_argument("empty numeric list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw std::invalid_argument("list entry is not an integer");
    }
    out.push_back(i);
  }
  return out;
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");

  std::string line;
  std::string section;
  int line_no = 0;
  auto fail = [&](const std::string& message) {
    throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " +
                                message);
  };

  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments outside quotes.
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quote = !in_quote;
      if (line[i] == '#' && !in_quote) {
        line = line.substr(0, i);
        break;
      }
    }
    const std::string text = trim(line);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') fail("unterminated section header");
      section = lower(trim(text.substr(1, text.size() - 2)));
      continue;
    }

    // Split on the first '=' that is not inside a brace table.
    std::size_t eq = std::string::npos;
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '{') ++depth;
      if (text[i] == '}') --depth;
      if (text[i] == '=' && depth == 0) {
        eq = i;
        break;
      }
    }
    if (eq == std::string::npos) fail("expected key = value");

    std::string key = lower(trim(text.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    const std::string raw = trim(text.substr(eq + 1));
    if (raw.empty()) fail("missing value for '" + key + "'");

    try {
      if (key == "command") {
        config.command = lower(unquote(raw));
      } else if (key == "dist") {
        config.dist_spec = unquote(raw);
      } else if (key == "w") {
        config.w = parse_double_strict(raw, key);
      } else if (key == "w_grid") {
        config.w_grid = parse_double_list(raw);
      } else if (key == "n") {
        config.n = static_cast<int>(parse_int_strict(raw, key));
      } else if (key == "n_values") {
        config.n_values = parse_int_list(raw);
      } else if (key == "replicas") {
        config.replicas = static_cast<int>(parse_int_strict(raw, key));
      } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_int_strict(raw, key));
      } else if (key == "tol") {
        config.tol = parse_double_strict(raw, key);
      } else if (key == "out" || key == "output.path") {
        config.out_path = unquote(raw);
      } else if (key == "format" || key == "output.format") {
        config.format = lower(unquote(raw));
      } else if (key == "threads") {
        config.threads = static_cast<int>(parse_int_strict(raw, key));
      } else if (key == "m") {
        config.big_m = parse_double_strict(raw, key);
      } else if (key == "grid_points") {
        config.grid_points = static_cast<int>(parse_int_strict(raw, key));
      } else if (key == "nodes") {
        config.nodes = static_cast<int>(parse_int_strict(raw, key));
      } else if (key == "instances") {
        config.instances = static_cast<int>(parse_int_strict(raw, key));
      } else if (key == "engine") {
        config.engine = lower(unquote(raw));
      } else if (key == "activities") {
        config.activities_file = unquote(raw);
      } else if (key == "t") {
        config.t = parse_double_strict(raw, key);
      } else if (key == "q") {
        config.q = parse_double_strict(raw, key);
      } else if (key == "c1") {
        config.c1 = parse_double_strict(raw, key);
      } else if (key == "c2") {
        config.c2 = parse_double_strict(raw, key);
      } else if (key == "c3") {
        config.c3 = parse_double_strict(raw, key);
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& err) {
      fail(err.what());
    }
  }
}

std::vector<double> read_activities_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("activities: cannot open '" + path + "'");
  }
  std::vector<double> values;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    double v;
    try {
      v = parse_double_strict(text, "value");
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("activities file row " + std::to_string(row) +
                                  ": malformed value '" + text + "'");
    }
    if (!(v > 0.0)) {
      throw std::invalid_argument("activities file row " + std::to_string(row) +
                                  ": activity must be > 0, got " + text);
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw std::invalid_argument("activities: no values in '" + path + "'");
  }
  return values;
}

}  // namespace monodim::config
