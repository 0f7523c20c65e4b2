#include "nfs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nfs/csv.hpp"
#include "nfs/error.hpp"

namespace nfs {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ConfigInvalid, key + ": " + why);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto result = std::from_chars(value.data(), end, out);
  if (result.ec != std::errc() || result.ptr != end || !std::isfinite(out))
    invalid(key, "expected a number, got '" + value + "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto* end = value.data() + value.size();
  const auto result = std::from_chars(value.data(), end, out);
  if (result.ec != std::errc() || result.ptr != end) invalid(key, "expected an integer, got '" + value + "'");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value, char sep = ',') {
  std::vector<double> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) invalid(key, "empty list");
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + csv_number(values[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.dimension", [](RunConfig& c, const auto& k, const auto& v) { c.dimension = static_cast<int>(parse_int(k, v)); }},
      {"grid.n", [](RunConfig& c, const auto& k, const auto& v) { c.n = static_cast<int>(parse_int(k, v)); }},
      {"grid.half_width", [](RunConfig& c, const auto& k, const auto& v) { c.half_width = parse_double(k, v); }},
      {"problem.epsilon",
       [](RunConfig& c, const auto& k, const auto& v) {
         if (v == "auto") c.epsilon.reset();
         else c.epsilon = parse_double(k, v);
       }},
      {"problem.rho", [](RunConfig& c, const auto& k, const auto& v) { c.rho = parse_double(k, v); }},
      {"problem.big_m",
       [](RunConfig& c, const auto& k, const auto& v) {
         if (v == "auto") c.big_m.reset();
         else c.big_m = parse_double(k, v);
       }},
      {"problem.mean_policy",
       [](RunConfig& c, const auto& k, const auto& v) {
         if (v == "reject") c.mean_policy = MeanPolicy::Reject;
         else if (v == "project") c.mean_policy = MeanPolicy::Project;
         else invalid(k, "expected reject or project");
       }},
      {"kernel.type", [](RunConfig& c, const auto&, const auto& v) { c.kernel.type = v; }},
      {"kernel.sigma", [](RunConfig& c, const auto& k, const auto& v) { c.kernel.sigma = parse_double(k, v); }},
      {"kernel.amplitude", [](RunConfig& c, const auto& k, const auto& v) { c.kernel.amplitude = parse_double(k, v); }},
      {"kernel.path", [](RunConfig& c, const auto&, const auto& v) { c.kernel.path = v; }},
      {"source.type", [](RunConfig& c, const auto&, const auto& v) { c.source.type = v; }},
      {"source.centers",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.source.centers.clear();
         if (v == "default") return;
         std::stringstream in(v);
         std::string point;
         while (std::getline(in, point, ';')) c.source.centers.push_back(parse_list(k, trim(point)));
       }},
      {"source.widths", [](RunConfig& c, const auto& k, const auto& v) { c.source.widths = parse_list(k, v); }},
      {"source.amplitude", [](RunConfig& c, const auto& k, const auto& v) { c.source.amplitude = parse_double(k, v); }},
      {"source.path", [](RunConfig& c, const auto&, const auto& v) { c.source.path = v; }},
      {"nonlinearity.coeffs", [](RunConfig& c, const auto& k, const auto& v) { c.coeffs = parse_list(k, v); }},
      {"solver.tol_fp", [](RunConfig& c, const auto& k, const auto& v) { c.tol_fp = parse_double(k, v); }},
      {"solver.max_iter", [](RunConfig& c, const auto& k, const auto& v) { c.max_iter = static_cast<int>(parse_int(k, v)); }},
      {"solver.slack", [](RunConfig& c, const auto& k, const auto& v) { c.slack = parse_double(k, v); }},
      {"run.seed",
       [](RunConfig& c, const auto& k, const auto& v) {
         const long long s = parse_int(k, v);
         if (s < 0) invalid(k, "seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"run.output_dir", [](RunConfig& c, const auto&, const auto& v) { c.output_dir = v; }},
      {"contraction.trials",
       [](RunConfig& c, const auto& k, const auto& v) { c.contraction_trials = static_cast<int>(parse_int(k, v)); }},
      {"continuity.coeffs", [](RunConfig& c, const auto& k, const auto& v) { c.continuity_coeffs = parse_list(k, v); }},
      {"sequences.count", [](RunConfig& c, const auto& k, const auto& v) { c.sequence_count = static_cast<int>(parse_int(k, v)); }},
      {"sequences.amplitude",
       [](RunConfig& c, const auto& k, const auto& v) { c.sequence_amplitude = parse_double(k, v); }},
  };
  return table;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.dimension < 1 || c.dimension > 7) invalid("grid.dimension", "must lie in [1, 7]");
  if (c.n < 4 || (c.n & (c.n - 1)) != 0) invalid("grid.n", "must be a power of two >= 4");
  if (!(c.half_width > 0.0)) invalid("grid.half_width", "must be positive");
  if (c.epsilon && !(*c.epsilon >= 0.0)) invalid("problem.epsilon", "must be >= 0 or auto");
  if (!(c.rho > 0.0) || c.rho > 1.0) invalid("problem.rho", "must lie in (0, 1]");
  if (c.big_m && !(*c.big_m > 0.0)) invalid("problem.big_m", "must be positive");
  if (c.kernel.type == "gaussian") {
    if (!(c.kernel.sigma > 0.0)) invalid("kernel.sigma", "must be positive");
  } else if (c.kernel.type == "file") {
    if (c.kernel.path.empty()) invalid("kernel.path", "required for kernel.type = file");
  } else {
    invalid("kernel.type", "expected gaussian or file");
  }
  if (c.source.type == "gaussian-diff" || c.source.type == "gaussian") {
    const std::size_t needed = c.source.type == "gaussian" ? 1 : 2;
    if (c.source.widths.size() < needed) invalid("source.widths", "needs " + std::to_string(needed) + " widths");
    for (double w : c.source.widths)
      if (!(w > 0.0)) invalid("source.widths", "must be positive");
    if (!c.source.centers.empty()) {
      if (c.source.centers.size() < needed) invalid("source.centers", "needs " + std::to_string(needed) + " points");
      for (const auto& p : c.source.centers)
        if (static_cast<int>(p.size()) != c.dimension) invalid("source.centers", "each point needs d coordinates");
    }
    if (c.source.type == "gaussian" && c.mean_policy != MeanPolicy::Project)
      invalid("source.type", "a plain gaussian source requires problem.mean_policy = project");
  } else if (c.source.type == "file") {
    if (c.source.path.empty()) invalid("source.path", "required for source.type = file");
  } else {
    invalid("source.type", "expected gaussian-diff, gaussian or file");
  }
  if (!(c.tol_fp > 0.0)) invalid("solver.tol_fp", "must be positive");
  if (c.max_iter < 1) invalid("solver.max_iter", "must be >= 1");
  if (!(c.slack >= 0.0)) invalid("solver.slack", "must be >= 0");
  if (c.contraction_trials < 1) invalid("contraction.trials", "must be >= 1");
  if (c.sequence_count < 1) invalid("sequences.count", "must be >= 1");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigSyntax, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(ErrorKind::ConfigSyntax, "line " + std::to_string(line_no) + ": empty key or value");
    const auto it = setters().find(key);
    if (it == setters().end())
      throw Error(ErrorKind::ConfigUnknownKey, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw Error(ErrorKind::ConfigSyntax, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    it->second(cfg, key, value);
  }
  for (const char* required : {"grid.dimension", "grid.n", "grid.half_width"})
    if (!seen.contains(required)) throw Error(ErrorKind::ConfigInvalid, std::string(required) + " is required");
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string echo_config(const RunConfig& c, std::optional<double> resolved_epsilon) {
  std::ostringstream out;
  out << "grid.dimension = " << c.dimension << '\n';
  out << "grid.n = " << c.n << '\n';
  out << "grid.half_width = " << csv_number(c.half_width) << '\n';
  if (c.epsilon) out << "problem.epsilon = " << csv_number(*c.epsilon) << '\n';
  else if (resolved_epsilon) out << "problem.epsilon = auto (" << csv_number(*resolved_epsilon) << ")\n";
  else out << "problem.epsilon = auto\n";
  out << "problem.rho = " << csv_number(c.rho) << '\n';
  out << "problem.big_m = " << (c.big_m ? csv_number(*c.big_m) : std::string("auto")) << '\n';
  out << "problem.mean_policy = " << (c.mean_policy == MeanPolicy::Reject ? "reject" : "project") << '\n';
  out << "kernel.type = " << c.kernel.type << '\n';
  if (c.kernel.type == "file") {
    out << "kernel.path = " << c.kernel.path << '\n';
  } else {
    out << "kernel.sigma = " << csv_number(c.kernel.sigma) << '\n';
    out << "kernel.amplitude = " << csv_number(c.kernel.amplitude) << '\n';
  }
  out << "source.type = " << c.source.type << '\n';
  if (c.source.type == "file") {
    out << "source.path = " << c.source.path << '\n';
  } else {
    out << "source.centers = ";
    if (c.source.centers.empty()) out << "default";
    for (std::size_t i = 0; i < c.source.centers.size(); ++i) out << (i ? ";" : "") << join(c.source.centers[i]);
    out << '\n';
    out << "source.widths = " << join(c.source.widths) << '\n';
    out << "source.amplitude = " << csv_number(c.source.amplitude) << '\n';
  }
  out << "nonlinearity.coeffs = " << join(c.coeffs) << '\n';
  out << "solver.tol_fp = " << csv_number(c.tol_fp) << '\n';
  out << "solver.max_iter = " << c.max_iter << '\n';
  out << "solver.slack = " << csv_number(c.slack) << '\n';
  out << "run.seed = " << c.seed << '\n';
  out << "run.output_dir = " << c.output_dir << '\n';
  out << "contraction.trials = " << c.contraction_trials << '\n';
  out << "continuity.coeffs = " << join(c.continuity_coeffs) << '\n';
  out << "sequences.count = " << c.sequence_count << '\n';
  out << "sequences.amplitude = " << csv_number(c.sequence_amplitude) << '\n';
  return out.str();
}

}  // namespace nfs
