#include "epicon/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

namespace epicon {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ReductionPolicy parse_reduction(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& name = parts.empty() ? text : parts[0];
  auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      throw ConfigError("policy '" + text + "': expected " + std::to_string(n) + " parameter(s)");
    }
  };
  if (name == "none") {
    arity(0);
    return reduction::None{};
  }
  if (name == "fixed") {
    arity(1);
    return reduction::Fixed{to_double("fixed", parts[1])};
  }
  if (name == "adaptive") {
    arity(1);
    return reduction::AdaptiveGlobal{to_double("adaptive", parts[1])};
  }
  if (name == "time_limited") {
    arity(3);
    return reduction::TimeLimited{to_double("time_limited", parts[1]),
                                  to_int<std::int64_t>("time_limited", parts[2]),
                                  to_int<std::int64_t>("time_limited", parts[3])};
  }
  if (name == "dynamic_local") {
    arity(1);
    return reduction::DynamicLocal{to_double("dynamic_local", parts[1])};
  }
  throw ConfigError("unknown reduction policy '" + text + "'");
}

PolicyKind parse_policy_kind(const std::string& text) {
  for (auto k : {PolicyKind::StaticGlobal, PolicyKind::DynamicGlobal, PolicyKind::StaticLocal,
                 PolicyKind::DynamicLocal}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown policy '" + text + "'");
}

PruningRule parse_pruning(const std::string& text) {
  if (text == "half_n") return pruning::HalfN{};
  if (text == "half_degree") return pruning::HalfDegree{};
  if (text == "absolute") return pruning::AbsoluteCount{};
  if (text.rfind("absolute:", 0) == 0) {
    return pruning::AbsoluteCount{to_int<int>("pruning", text.substr(9))};
  }
  throw ConfigError("unknown pruning rule '" + text + "'");
}

PartitionMode parse_partition(const std::string& text) {
  if (text == "index") return PartitionMode::IndexSplit;
  if (text == "spatial") return PartitionMode::Spatial;
  throw ConfigError("unknown partition mode '" + text + "'");
}

InfectionMode parse_infection(const std::string& text) {
  if (text == "homogeneous") return {infection::Homogeneous{}};
  if (text.rfind("gathered:", 0) == 0) {
    const auto s = to_int<std::size_t>("infection", text.substr(9));
    if (s < 1) throw ConfigError("infection: subgroups are numbered from 1");
    return {infection::Gathered{static_cast<decltype(infection::Gathered::target)>(s - 1)}};
  }
  throw ConfigError("unknown infection mode '" + text + "'");
}

void set_config_value(TrialConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "n") cfg.n = to_int<std::size_t>(key, v);
  else if (key == "side") cfg.side = to_double(key, v);
  else if (key == "radius") cfg.radius = to_double(key, v);
  else if (key == "m") cfg.m = to_int<std::size_t>(key, v);
  else if (key == "partition") cfg.partition = parse_partition(v);
  else if (key == "beta") cfg.beta = to_double(key, v);
  else if (key == "gamma") cfg.gamma = to_double(key, v);
  else if (key == "dt") cfg.dt = to_double(key, v);
  else if (key == "r0") cfg.beta = to_double(key, v) * cfg.gamma;
  else if (key == "s0") cfg.s0 = to_double(key, v);
  else if (key == "i0") cfg.i0 = to_double(key, v);
  else if (key == "infection") cfg.infection = parse_infection(v);
  else if (key == "policy") cfg.policy.kind = parse_policy_kind(v);
  else if (key == "b0") {
    if (v == "auto") cfg.policy.b0.reset();
    else cfg.policy.b0 = to_double(key, v);
  }
  else if (key == "w_bar") cfg.policy.w_bar = to_double(key, v);
  else if (key == "pruning") cfg.policy.rule = parse_pruning(v);
  else if (key == "adversary") cfg.adversary_value = to_double(key, v);
  else if (key == "safety_lo") cfg.safety.lo = to_double(key, v);
  else if (key == "safety_hi") cfg.safety.hi = to_double(key, v);
  else if (key == "horizon") cfg.horizon = to_int<std::int64_t>(key, v);
  else if (key == "max_horizon_factor") cfg.max_horizon_factor = to_int<std::int64_t>(key, v);
  else if (key == "eps") cfg.eps = to_double(key, v);
  else if (key == "stride") cfg.stride = to_int<std::int64_t>(key, v);
  else if (key == "seed") cfg.seed = to_int<std::uint64_t>(key, v);
  else throw ConfigError("unknown key '" + key + "'");
}

TrialConfig parse_trial_config(std::istream& in, TrialConfig cfg) {
  std::string line;
  std::set<std::string> seen;
  std::optional<std::string> r0;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      if (key == "r0") {
        to_double(key, value);
        r0 = value;
      } else {
        set_config_value(cfg, key, value);
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (r0) {
    if (seen.count("beta")) throw ConfigError("beta and r0 are mutually exclusive");
    set_config_value(cfg, "r0", *r0);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

TrialConfig load_trial_config(const std::string& path, TrialConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_trial_config(in, std::move(base));
}

void write_trial_config(std::ostream& out, const TrialConfig& cfg) {
  out << "n = " << cfg.n << '\n'
      << "side = " << fmt(cfg.side) << '\n'
      << "radius = " << fmt(cfg.radius) << '\n'
      << "m = " << cfg.m << '\n'
      << "partition = " << (cfg.partition == PartitionMode::Spatial ? "spatial" : "index") << '\n'
      << "beta = " << fmt(cfg.beta) << '\n'
      << "gamma = " << fmt(cfg.gamma) << '\n'
      << "dt = " << fmt(cfg.dt) << '\n'
      << "s0 = " << fmt(cfg.s0) << '\n'
      << "i0 = " << fmt(cfg.i0) << '\n';
  if (const auto* g = std::get_if<infection::Gathered>(&cfg.infection.kind)) {
    out << "infection = gathered:" << g->target + 1 << '\n';
  } else {
    out << "infection = homogeneous\n";
  }
  out << "policy = " << to_string(cfg.policy.kind) << '\n'
      << "b0 = " << (cfg.policy.b0 ? fmt(*cfg.policy.b0) : std::string("auto")) << '\n'
      << "w_bar = " << fmt(cfg.policy.w_bar) << '\n'
      << "pruning = " << to_string(cfg.policy.rule) << '\n'
      << "adversary = " << fmt(cfg.adversary_value) << '\n'
      << "safety_lo = " << fmt(cfg.safety.lo) << '\n'
      << "safety_hi = " << fmt(cfg.safety.hi) << '\n'
      << "horizon = " << cfg.horizon << '\n'
      << "max_horizon_factor = " << cfg.max_horizon_factor << '\n'
      << "eps = " << fmt(cfg.eps) << '\n'
      << "stride = " << cfg.stride << '\n'
      << "seed = " << cfg.seed << '\n';
}

}  // namespace epicon
