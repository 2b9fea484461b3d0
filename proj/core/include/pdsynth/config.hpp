#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pdsynth/dataset.hpp"
#include "pdsynth/privacy.hpp"

namespace pdsynth {

// Flat key=value run configuration with [data], [model], [privacy],
// [generation] and [verify] sections. Unknown keys are rejected; "inf" and
// "unlimited" parse where they make sense.
struct RunConfig {
  // [data]
  std::string schema_path;
  std::string dataset_path;
  std::string model_path;      // artifact to read (generate/metrics)
  std::string candidate_path;  // second dataset for metrics runs
  PartitionFractions fractions;
  std::uint64_t seed = 0;

  // [model]
  std::optional<double> eps_target;  // drive the per-query solver
  double delta_target = 0x1.0p-30;
  std::optional<double> eps_entropy;       // explicit per-query overrides
  std::optional<double> eps_record_count;  // (skip the solver when all set)
  std::optional<double> eps_parameter;
  double alpha = 1.0;
  std::uint64_t maxcost = 10000;
  std::optional<double> sampling_p;  // subsampling amplification, when used

  // [privacy]
  PrivacyParams privacy;
  std::uint64_t t = 1;  // eps/delta trade-off point reported for releases

  // [generation]
  std::size_t omega_lo = 1;
  std::size_t omega_hi = 1;
  std::uint64_t count = 1000;
  unsigned workers = 1;
  TestKind test_kind = TestKind::Randomized;
  double max_seconds = 0.0;  // 0 = no wall-clock stop

  // [verify]
  std::size_t verify_bins_max = 4;
  std::uint64_t verify_n_max = 12;
  std::string verify_k_values = "3,5";
  std::string verify_gamma_values = "2,4";
  std::string verify_eps0_values = "0.5,1";
  std::string verify_t_values = "1,2";
  std::size_t verify_omega = 2;
  double verify_bound_gamma_scale = 1.0;  // negative-control knobs: distort
  double verify_bound_delta_scale = 1.0;  // the checked bound, not the runs
  std::string verify_schema_path;   // optional toy override
  std::string verify_dataset_path;  // optional toy override
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in, const std::string& origin_name);

}  // namespace pdsynth
