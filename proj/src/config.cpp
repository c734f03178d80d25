#include "hullwalk/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "hullwalk/error.hpp"

namespace hullwalk {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& text, const std::string& key, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + text + "'", line);
  return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key, int line) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a non-negative integer, got '" + text + "'", line);
  return v;
}

bool parse_bool(const std::string& text, const std::string& key, int line) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'", line);
}

struct Entry {
  std::string value;
  int line = 0;
};

}  // namespace

RunSettings parse_config(std::istream& in) {
  std::map<std::string, Entry> scalars;
  std::vector<Entry> atom_lines;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("", "expected 'key = value', got '" + text + "'", line);
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ConfigError("", "missing key", line);
    if (key == "atom") {
      atom_lines.push_back({value, line});
      continue;
    }
    if (scalars.count(key)) throw ConfigError(key, "duplicate key (first on line " + std::to_string(scalars[key].line) + ")", line);
    scalars[key] = {value, line};
  }

  std::map<std::string, int> key_lines;
  for (const auto& [key, e] : scalars) key_lines[key] = e.line;

  auto take = [&](const std::string& key) -> std::optional<Entry> {
    const auto it = scalars.find(key);
    if (it == scalars.end()) return std::nullopt;
    Entry e = it->second;
    scalars.erase(it);
    return e;
  };
  auto need = [&](const std::string& key) -> Entry {
    auto e = take(key);
    if (!e) throw ConfigError(key, "required key is missing");
    return *e;
  };

  RunSettings out;
  McConfig& mc = out.mc;

  const Entry kind = need("model.kind");
  try {
    if (kind.value == "circle_drift") {
      const Entry mu = need("model.mu");
      mc.model = IncrementModel::circle_drift(parse_real(mu.value, "model.mu", mu.line));
    } else if (kind.value == "two_point_degenerate") {
      mc.model = IncrementModel::two_point_degenerate();
    } else if (kind.value == "finite_support") {
      if (atom_lines.empty()) throw ConfigError("atom", "finite_support needs at least one 'atom = x,y,p' line", kind.line);
      std::vector<Atom> atoms;
      int last_line = 0;
      for (const Entry& a : atom_lines) {
        const auto parts = split_list(a.value);
        if (parts.size() != 3) throw ConfigError("atom", "expected 'x,y,p', got '" + a.value + "'", a.line);
        atoms.push_back({Vec2{parse_real(parts[0], "atom", a.line), parse_real(parts[1], "atom", a.line)},
                         parse_real(parts[2], "atom", a.line)});
        last_line = a.line;
      }
      try {
        mc.model = IncrementModel::finite_support(std::move(atoms));
      } catch (const ConfigError& e) {
        throw e.at_line(last_line);
      }
      atom_lines.clear();
    } else if (kind.value == "gaussian_drift") {
      const Entry mean = need("model.mean");
      const auto parts = split_list(mean.value);
      if (parts.size() != 2) throw ConfigError("model.mean", "expected 'x,y', got '" + mean.value + "'", mean.line);
      const Vec2 m{parse_real(parts[0], "model.mean", mean.line), parse_real(parts[1], "model.mean", mean.line)};
      const Entry along = need("model.sdev_along");
      const Entry perp = need("model.sdev_perp");
      mc.model = IncrementModel::gaussian_drift(m, parse_real(along.value, "model.sdev_along", along.line),
                                                parse_real(perp.value, "model.sdev_perp", perp.line));
    } else {
      throw ConfigError("model.kind",
                        "unknown model '" + kind.value +
                            "' (expected circle_drift, two_point_degenerate, finite_support or gaussian_drift)",
                        kind.line);
    }
  } catch (const ConfigError& e) {
    const auto it = key_lines.find(e.field());
    throw e.at_line(it != key_lines.end() ? it->second : kind.line);
  }
  if (!atom_lines.empty()) throw ConfigError("atom", "atom lines are only valid for finite_support", atom_lines.front().line);

  if (auto e = take("n_values")) {
    mc.n_values.clear();
    for (const std::string& item : split_list(e->value))
      mc.n_values.push_back(static_cast<std::size_t>(parse_unsigned(item, "n_values", e->line)));
  }
  if (auto e = take("reps")) mc.reps = parse_unsigned(e->value, "reps", e->line);
  if (auto e = take("seed")) mc.master_seed = parse_unsigned(e->value, "seed", e->line);
  if (auto e = take("delta")) mc.delta = parse_real(e->value, "delta", e->line);
  if (auto e = take("gamma")) mc.gamma = parse_real(e->value, "gamma", e->line);
  if (auto e = take("grid_size")) mc.grid_size = parse_unsigned(e->value, "grid_size", e->line);
  if (auto e = take("panel_size")) mc.panel_size = parse_unsigned(e->value, "panel_size", e->line);
  if (auto e = take("threads")) mc.threads = static_cast<unsigned>(parse_unsigned(e->value, "threads", e->line));
  if (auto e = take("acceptance")) out.acceptance = parse_bool(e->value, "acceptance", e->line);

  // Anything left is either misplaced for this model or unknown.
  for (const auto& [key, e] : scalars) throw ConfigError(key, "unknown or unused key", e.line);

  try {
    mc.validate();
  } catch (const ConfigError& e) {
    const auto it = key_lines.find(e.field());
    throw it != key_lines.end() ? e.at_line(it->second) : e;
  }
  return out;
}

RunSettings parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunSettings load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace hullwalk
