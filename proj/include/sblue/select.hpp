#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sblue/sensors.hpp"

namespace sblue {

/// User query: estimate the field at `location` with predictive MSE strictly
/// below `epsilon` (a variance, in squared field units).
struct Query {
  Location location;
  double epsilon = 1.0;
};

/// Boolean activation decision per sensor, split by network.
struct ActivationSet {
  std::vector<bool> high;
  std::vector<bool> low;

  int count_high() const;
  int count_low() const;
};

/// Cross-Entropy parameters. Defaults make the reference selection instance
/// reach the exhaustive optimum within ten iterations.
struct CEConfig {
  int samples_per_iter = 500;      // K
  double elite_fraction = 0.05;    // top fraction kept for the update
  double smoothing = 0.8;          // alpha
  double decision_threshold = 0.5; // Psi, final Bernoulli cut
  int max_iters = 50;
  int stall_iters = 10;            // stop after this many non-improving iters
  double w_high = 150.0;
  double w_low = 30.0;
};

/// Result of a selection run. `activation` empty means the QoS target is
/// unattainable (a Null report); cost and achieved_mse are meaningful only
/// for non-Null reports.
struct SelectionReport {
  std::optional<ActivationSet> activation;
  double cost = 0.0;
  double achieved_mse = 0.0;
  int iterations = 0;

  bool is_null() const { return !activation.has_value(); }
};

/// Performance metric U of one activation set: -(w_h |S1| + w_l |S2|) when
/// the induced predictive MSE at the query satisfies mse < epsilon, and
/// -infinity otherwise (maximization convention; infeasible sets can never
/// enter the elite). A singular sub-moment matrix counts as infeasible.
double cost_u(const ActivationSet& activation, const Query& query,
              const SensorDeployment& deployment, const CEConfig& config);

/// Cross-Entropy selection over independent Bernoulli activation
/// distributions, initialized at 0.5, with smoothed elite updates and a final
/// threshold decision that is re-verified by an exact MSE evaluation.
/// Deterministic given the generator state.
SelectionReport ce_select(const Query& query, const SensorDeployment& deployment,
                          const CEConfig& config, std::mt19937_64& rng);

/// Exact optimum by enumerating all 2^N activation sets (N <= 22, otherwise
/// InstanceTooLarge). Ties break toward fewer high sensors, then the smaller
/// (high, low) bitmask pair.
SelectionReport exhaustive_select(const Query& query,
                                  const SensorDeployment& deployment,
                                  const CEConfig& config);

/// Handles sensors that died after selection: keeps the previous activation
/// minus `dead` if it still meets the QoS target, otherwise re-solves on the
/// deployment with the dead sensors removed. Indices in `dead` are global
/// (high block, then low block).
SelectionReport reselect_excluding(const Query& query,
                                   const SensorDeployment& deployment,
                                   const SelectionReport& previous,
                                   const std::set<int>& dead,
                                   const CEConfig& config, std::mt19937_64& rng);

/// Single-line record: `status,cost,mse,iters,bitmask_high,bitmask_low`.
/// Bitmasks are hex with bit k = sensor k; fields stay empty on Null reports.
std::string to_record_line(const SelectionReport& report);

}  // namespace sblue
