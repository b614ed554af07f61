#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "epicon/epidemic.hpp"
#include "epicon/harness.hpp"

namespace epicon {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads flat `key = value` text into `base`. Blank lines and `#`
/// comments are ignored; unknown keys, bad values and duplicates throw
/// ConfigError with the line number. `r0` is applied after every other
/// key (beta = r0 * gamma).
TrialConfig parse_trial_config(std::istream& in, TrialConfig base = {});
TrialConfig load_trial_config(const std::string& path, TrialConfig base = {});

/// Sets a single key, as one config line would.
void set_config_value(TrialConfig& cfg, const std::string& key, const std::string& value);

/// none | fixed:<b0> | adaptive:<c> | time_limited:<b0>:<k_start>:<k_end> |
/// dynamic_local:<w_bar>
ReductionPolicy parse_reduction(const std::string& text);

PolicyKind parse_policy_kind(const std::string& text);
/// half_n | half_degree | absolute | absolute:<F>
PruningRule parse_pruning(const std::string& text);
PartitionMode parse_partition(const std::string& text);
/// homogeneous | gathered:<subgroup>  (subgroups numbered from 1)
InfectionMode parse_infection(const std::string& text);

/// Every key with its current value, in file order; parses back to `cfg`.
void write_trial_config(std::ostream& out, const TrialConfig& cfg);

}  // namespace epicon
