#pragma once

#include "crossnorm/gamma.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace crossnorm {

struct PropertyReport {
  std::string id;
  int trials = 0;
  int failures = 0;
  /// Smallest slack (tolerance minus observed violation) over all trials;
  /// negative exactly when some trial failed.
  double worst_margin = 0.0;
  std::uint64_t seed = 0;
  /// Sub-seeds of failing trials; rerun a single trial with run_trial.
  std::vector<std::uint64_t> failed_seeds;

  bool passed() const { return failures == 0; }
};

/// E0, E1, E2, E3-pushforward, E4, Prop8, Thm6-separable, Prop4-tightness,
/// Cor5-consistency, Prop17-gap.
const std::vector<std::string>& property_ids();

/// Margin of one trial of `id` driven by `sub_seed`; negative means failure.
double run_trial(const std::string& id, std::uint64_t sub_seed, const OptimizerConfig& cfg);

/// Trial t of property k uses sub-seed derive_seed(derive_seed(seed, k), t)
/// where k is the index of the id in property_ids(). An empty `ids` runs all.
std::vector<PropertyReport> run_suite(const std::vector<std::string>& ids, int trials, std::uint64_t seed,
                                      const OptimizerConfig& cfg = {});

nlohmann::json report_to_json(const PropertyReport& r);

}  // namespace crossnorm
