#pragma once

#include <string>

#include "wavenav/disturbance.hpp"
#include "wavenav/mapping.hpp"
#include "wavenav/simulator.hpp"
#include "wavenav/ukf.hpp"

namespace wavenav {

enum class EstimatorVariant {
  kBaseline,   // bias estimation off, added noise off
  kBiasOnly,   // BE: bias estimation on, added noise off
  kNoiseOnly,  // AN: bias estimation off, added noise on
  kProposed,   // both on
};

/// Complete run configuration for the simulate/estimate/map/evaluate chain.
struct RunConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  Scenario scenario;
  DisturbanceTable disturbance_table;

  FilterOptions filter;
  ProcessNoise process_noise;
  MeasurementNoise measurement_noise;
  StateVec init_std = StateVec::Zero();

  KernelConfig kernel;
  MapperOptions mapper;
  Eigen::Vector3d map_origin = Eigen::Vector3d::Zero();

  double velocity_window_s = 0.5;
  double truth_cloud_spacing = 0.05;
  double truth_cloud_margin = 2.0;

  Eigen::Vector3d dvl_offset = Eigen::Vector3d::Zero();
  bool dvl_offset_cruise_only = true;

  /// Initial belief: the known mounted pose with block-diagonal covariance
  /// from init_std; biases start at the configured walk means.
  StateBelief initial_belief() const;

  DisturbanceSchedule schedule() const {
    return DisturbanceSchedule{scenario.waves, disturbance_table};
  }
};

/// Paper-parameterized defaults: the wave characterization table, mapping
/// parameters, and the 36.6 m straight-line scenario.
RunConfig default_config();

/// Loads a JSON config, overriding defaults key by key. Unknown or
/// ill-typed keys raise ConfigError naming the offending key.
RunConfig load_config(const std::string& path);

/// Serializes a config as JSON (the checked-in default is produced by this).
std::string config_to_json(const RunConfig& config);

void apply_estimator_variant(RunConfig* config, EstimatorVariant variant);

/// Accepts estimator names (baseline | be_ukf | an_ukf | proposed) and mapper
/// names (csm | bki | adaptive_bki); returns false for anything else.
bool apply_variant_by_name(RunConfig* config, const std::string& name);

}  // namespace wavenav
