#include "ltd/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "ltd/error.hpp"

namespace ltd {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string &msg) {
  throw Error(ErrorCode::Config, "config line " + std::to_string(line) + ": " + msg);
}

template <class T>
T parse_number(std::string_view v, int line, std::string_view key) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    fail(line, "bad value '" + std::string(v) + "' for " + std::string(key));
  return out;
}

bool parse_bool(std::string_view v, int line, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(line, "bad boolean '" + std::string(v) + "' for " + std::string(key));
}

} // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  LtdParams &s = cfg.solver;
  bool lambda6_given = false;

  using Setter = std::function<void(std::string_view, int)>;
  auto real = [](double &dst, std::string_view key) {
    return Setter([&dst, key](std::string_view v, int line) { dst = parse_number<double>(v, line, key); });
  };
  const std::map<std::string, Setter, std::less<>> setters = {
    {"lambda1", real(s.lambda1, "lambda1")},
    {"lambda2", real(s.lambda2, "lambda2")},
    {"lambda3", real(s.lambda3, "lambda3")},
    {"lambda4", real(s.lambda4, "lambda4")},
    {"lambda5", real(s.lambda5, "lambda5")},
    {"lambda6", [&](std::string_view v, int line) {
       s.lambda6 = parse_number<double>(v, line, "lambda6");
       lambda6_given = true;
     }},
    {"rho", [&](std::string_view v, int line) { s.rho.fill(parse_number<double>(v, line, "rho")); }},
    {"b", [&](std::string_view v, int line) { s.b = parse_number<Index>(v, line, "b"); }},
    {"p", real(s.p, "p")},
    {"nu", real(s.nu, "nu")},
    {"max_iter", [&](std::string_view v, int line) { s.max_iter = parse_number<int>(v, line, "max_iter"); }},
    {"rel_tol", real(s.rel_tol, "rel_tol")},
    {"seed", [&](std::string_view v, int line) { s.seed = parse_number<std::uint64_t>(v, line, "seed"); }},
    {"rank_reduction", [&](std::string_view v, int line) { s.rank_reduction = parse_bool(v, line, "rank_reduction"); }},
    {"normalize_input", [&](std::string_view v, int line) { s.normalize_input = parse_bool(v, line, "normalize_input"); }},
    {"caplp_literal_weight",
     [&](std::string_view v, int line) { s.literal_caplp_weight = parse_bool(v, line, "caplp_literal_weight"); }},
    {"fusion_mode", [&](std::string_view v, int line) {
       if (v == "single") s.fusion_mode = FusionMode::Single;
       else if (v == "nested") s.fusion_mode = FusionMode::Nested;
       else fail(line, "fusion_mode must be single or nested");
     }},
    {"dataset_profile", [&](std::string_view v, int line) {
       if (v == "abu") cfg.profile = DatasetProfile::Abu;
       else if (v == "mvtec") cfg.profile = DatasetProfile::Mvtec;
       else if (v == "custom") cfg.profile = DatasetProfile::Custom;
       else fail(line, "dataset_profile must be abu, mvtec or custom");
     }},
    {"gf_radius", [&](std::string_view v, int line) { cfg.filter.radius = parse_number<Index>(v, line, "gf_radius"); }},
    {"gf_eps", real(cfg.filter.eps, "gf_eps")},
  };

  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) fail(line_no, "unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) fail(line_no, "duplicate key '" + std::string(key) + "'");
    if (value.empty()) fail(line_no, "missing value for '" + std::string(key) + "'");
    it->second(value, line_no);
  }

  if (cfg.profile != DatasetProfile::Custom) {
    if (lambda6_given) throw Error(ErrorCode::Config, "lambda6 is derived from lambda3 under the abu and mvtec profiles");
    s.lambda6 = s.lambda3 / (cfg.profile == DatasetProfile::Abu ? 10.0 : 100.0);
  }
  try {
    s.validate();
    cfg.filter.validate();
  } catch (const Error &e) {
    throw Error(ErrorCode::Config, e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace ltd
