#include "sblue/select.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sblue/errors.hpp"
#include "sblue/moments.hpp"

namespace sblue {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_ce_config(const CEConfig& c) {
  if (c.samples_per_iter < 1 || c.max_iters < 1 || c.stall_iters < 1 ||
      !(c.elite_fraction > 0.0 && c.elite_fraction < 1.0) ||
      !(c.smoothing > 0.0 && c.smoothing <= 1.0) ||
      !(c.decision_threshold > 0.0 && c.decision_threshold < 1.0) ||
      !(c.w_high > 0.0) || !(c.w_low > 0.0)) {
    throw std::invalid_argument("invalid CE configuration");
  }
}

// Full-deployment moments computed once per (deployment, query); every
// activation subset is evaluated by sub-indexing, so only the subset
// factorization is paid per sample.
class SelectionContext {
 public:
  SelectionContext(const SensorDeployment& deployment, const Query& query)
      : moments_(assemble_observation_moments(deployment)) {
    fill_cross_vector(deployment, query.location, cross_, prior_var_);
  }

  double prior_var() const { return prior_var_; }
  int n_high() const { return moments_.n_high; }
  int n_total() const { return static_cast<int>(cross_.size()); }

  // Predictive MSE with only `active` sensor indices on; +inf signals a
  // singular subset (treated as infeasible by callers).
  double mse_of(const std::vector<int>& active) const {
    if (active.empty()) return prior_var_;
    const Eigen::Index k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd sub(k, k);
    Eigen::VectorXd qsub(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      qsub(i) = cross_(active[i]);
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double v = moments_.corr(active[i], active[j]);
        sub(i, j) = v;
        sub(j, i) = v;
      }
    }
    const double scale = sub.diagonal().mean() > 0.0 ? sub.diagonal().mean() : 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success) {
      for (double jitter = 1e-10 * scale; jitter <= 1e-4 * scale; jitter *= 10.0) {
        Eigen::MatrixXd bumped = sub;
        bumped.diagonal().array() += jitter;
        llt.compute(bumped);
        if (llt.info() == Eigen::Success) break;
      }
      if (llt.info() != Eigen::Success) return kInf;
    }
    return std::max(0.0, prior_var_ - qsub.dot(llt.solve(qsub)));
  }

 private:
  ObservationMoments moments_;
  Eigen::VectorXd cross_;
  double prior_var_ = 0.0;
};

std::vector<int> active_indices(const ActivationSet& activation) {
  std::vector<int> idx;
  const int nh = static_cast<int>(activation.high.size());
  for (int i = 0; i < nh; ++i) {
    if (activation.high[i]) idx.push_back(i);
  }
  for (int i = 0; i < static_cast<int>(activation.low.size()); ++i) {
    if (activation.low[i]) idx.push_back(nh + i);
  }
  return idx;
}

double activation_cost(const ActivationSet& activation, const CEConfig& config) {
  return config.w_high * activation.count_high() +
         config.w_low * activation.count_low();
}

std::string hex_mask(const std::vector<bool>& bits) {
  if (bits.empty()) return "0";
  const size_t digits = (bits.size() + 3) / 4;
  std::string out(digits, '0');
  for (size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    const size_t d = i / 4;
    int v = out[digits - 1 - d] <= '9' ? out[digits - 1 - d] - '0'
                                       : out[digits - 1 - d] - 'a' + 10;
    v |= 1 << (i % 4);
    out[digits - 1 - d] = v < 10 ? char('0' + v) : char('a' + v - 10);
  }
  // strip leading zeros, keep one digit
  const size_t first = out.find_first_not_of('0');
  return first == std::string::npos ? "0" : out.substr(first);
}

}  // namespace

int ActivationSet::count_high() const {
  return static_cast<int>(std::count(high.begin(), high.end(), true));
}

int ActivationSet::count_low() const {
  return static_cast<int>(std::count(low.begin(), low.end(), true));
}

double cost_u(const ActivationSet& activation, const Query& query,
              const SensorDeployment& deployment, const CEConfig& config) {
  validate_ce_config(config);
  if (static_cast<int>(activation.high.size()) != deployment.n_high() ||
      static_cast<int>(activation.low.size()) != deployment.n_low()) {
    throw ShapeMismatch("cost_u: activation size does not match deployment");
  }
  const SelectionContext ctx(deployment, query);
  const double mse = ctx.mse_of(active_indices(activation));
  if (!(mse < query.epsilon)) return -kInf;
  return -activation_cost(activation, config);
}

SelectionReport ce_select(const Query& query, const SensorDeployment& deployment,
                          const CEConfig& config, std::mt19937_64& rng) {
  validate_ce_config(config);
  validate_deployment(deployment);
  if (!(query.epsilon > 0.0)) {
    throw std::invalid_argument("query epsilon must be positive");
  }
  const SelectionContext ctx(deployment, query);
  const int nh = deployment.n_high();
  const int n = ctx.n_total();

  const ActivationSet empty_set{std::vector<bool>(nh, false),
                                std::vector<bool>(n - nh, false)};
  if (ctx.prior_var() < query.epsilon) {
    // Zero cost is unbeatable, so the prior alone settles the query.
    return {empty_set, 0.0, ctx.prior_var(), 0};
  }

  std::vector<double> p(n, 0.5);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  int samples_per_iter = config.samples_per_iter;
  const int max_samples = 16 * config.samples_per_iter;

  std::vector<std::vector<bool>> samples;
  std::vector<double> utilities;
  std::vector<int> active;

  double best_cost = kInf;
  int stall = 0;
  int iterations = 0;

  for (int t = 0; t < config.max_iters; ++t) {
    iterations = t + 1;
    const int k_samples = samples_per_iter;
    samples.assign(k_samples, std::vector<bool>(n, false));
    utilities.assign(k_samples, -kInf);

    bool any_feasible = false;
    double iter_best_cost = kInf;
    for (int i = 0; i < k_samples; ++i) {
      auto& s = samples[i];
      active.clear();
      for (int j = 0; j < n; ++j) {
        if (uniform(rng) < p[j]) {
          s[j] = true;
          active.push_back(j);
        }
      }
      const double mse = ctx.mse_of(active);
      if (mse < query.epsilon) {
        double cost = 0.0;
        for (int j : active) cost += j < nh ? config.w_high : config.w_low;
        utilities[i] = -cost;
        any_feasible = true;
        iter_best_cost = std::min(iter_best_cost, cost);
      }
    }

    if (!any_feasible) {
      // Nothing to learn from this batch; widen the search instead.
      samples_per_iter = std::min(2 * samples_per_iter, max_samples);
      ++stall;
      if (stall >= config.stall_iters && std::isfinite(best_cost)) break;
      continue;
    }

    // (1 - elite_fraction) quantile of the utilities.
    std::vector<double> sorted = utilities;
    std::sort(sorted.begin(), sorted.end());
    const int q_idx = std::min<int>(
        k_samples - 1,
        static_cast<int>(std::ceil((1.0 - config.elite_fraction) * k_samples)) - 1);
    const double beta = sorted[std::max(q_idx, 0)];

    double elite_count = 0.0;
    std::vector<double> elite_mean(n, 0.0);
    for (int i = 0; i < k_samples; ++i) {
      // Infeasible samples never join the elite, even when beta = -inf.
      if (utilities[i] >= beta && std::isfinite(utilities[i])) {
        elite_count += 1.0;
        for (int j = 0; j < n; ++j) {
          if (samples[i][j]) elite_mean[j] += 1.0;
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      p[j] = config.smoothing * (elite_mean[j] / elite_count) +
             (1.0 - config.smoothing) * p[j];
    }

    if (iter_best_cost < best_cost - 1e-12) {
      best_cost = iter_best_cost;
      stall = 0;
    } else {
      ++stall;
    }
    if (stall >= config.stall_iters) break;
  }

  ActivationSet decision{std::vector<bool>(nh, false),
                         std::vector<bool>(n - nh, false)};
  std::vector<int> decided;
  for (int j = 0; j < n; ++j) {
    if (p[j] >= config.decision_threshold) {
      if (j < nh) {
        decision.high[j] = true;
      } else {
        decision.low[j - nh] = true;
      }
      decided.push_back(j);
    }
  }

  const double final_mse = ctx.mse_of(decided);
  if (final_mse < query.epsilon) {
    return {decision, activation_cost(decision, config), final_mse, iterations};
  }
  SelectionReport null_report;
  null_report.iterations = iterations;
  return null_report;
}

SelectionReport exhaustive_select(const Query& query,
                                  const SensorDeployment& deployment,
                                  const CEConfig& config) {
  validate_ce_config(config);
  validate_deployment(deployment);
  const int nh = deployment.n_high();
  const int nl = deployment.n_low();
  const int n = nh + nl;
  if (n > 22) {
    throw InstanceTooLarge("exhaustive_select supports at most 22 sensors, got " +
                           std::to_string(n));
  }
  const SelectionContext ctx(deployment, query);

  struct Key {
    double cost;
    int n_high;
    std::uint32_t high_mask;
    std::uint32_t low_mask;
    bool operator<(const Key& o) const {
      if (cost != o.cost) return cost < o.cost;
      if (n_high != o.n_high) return n_high < o.n_high;
      if (high_mask != o.high_mask) return high_mask < o.high_mask;
      return low_mask < o.low_mask;
    }
  };

  bool found = false;
  Key best_key{};
  double best_mse = 0.0;
  std::vector<int> active;

  const std::uint32_t limit = std::uint32_t(1) << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    const std::uint32_t high_mask = mask & ((std::uint32_t(1) << nh) - 1);
    const std::uint32_t low_mask = mask >> nh;
    const int c_high = std::popcount(high_mask);
    const int c_low = std::popcount(low_mask);
    const Key key{config.w_high * c_high + config.w_low * c_low, c_high,
                  high_mask, low_mask};
    if (found && !(key < best_key)) continue;

    active.clear();
    for (int j = 0; j < nh; ++j) {
      if (high_mask & (std::uint32_t(1) << j)) active.push_back(j);
    }
    for (int j = 0; j < nl; ++j) {
      if (low_mask & (std::uint32_t(1) << j)) active.push_back(nh + j);
    }
    const double mse = ctx.mse_of(active);
    if (mse < query.epsilon) {
      found = true;
      best_key = key;
      best_mse = mse;
    }
  }

  if (!found) return SelectionReport{};
  ActivationSet activation{std::vector<bool>(nh, false), std::vector<bool>(nl, false)};
  for (int j = 0; j < nh; ++j) activation.high[j] = best_key.high_mask & (std::uint32_t(1) << j);
  for (int j = 0; j < nl; ++j) activation.low[j] = best_key.low_mask & (std::uint32_t(1) << j);
  return {activation, best_key.cost, best_mse, 0};
}

SelectionReport reselect_excluding(const Query& query,
                                   const SensorDeployment& deployment,
                                   const SelectionReport& previous,
                                   const std::set<int>& dead,
                                   const CEConfig& config, std::mt19937_64& rng) {
  validate_deployment(deployment);
  const int nh = deployment.n_high();
  const int n = deployment.n_total();
  for (int idx : dead) {
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument("reselect_excluding: dead index out of range");
    }
  }

  if (previous.activation.has_value()) {
    ActivationSet pruned = *previous.activation;
    for (int idx : dead) {
      if (idx < nh) {
        pruned.high[idx] = false;
      } else {
        pruned.low[idx - nh] = false;
      }
    }
    const SelectionContext ctx(deployment, query);
    const double mse = ctx.mse_of(active_indices(pruned));
    if (mse < query.epsilon) {
      return {pruned, activation_cost(pruned, config), mse, 0};
    }
  }

  // Re-solve with dead sensors removed, then expand back to original indices.
  SensorDeployment reduced = deployment;
  reduced.high_locs.clear();
  reduced.low_locs.clear();
  std::vector<int> kept_high, kept_low;
  for (int i = 0; i < nh; ++i) {
    if (!dead.contains(i)) {
      reduced.high_locs.push_back(deployment.high_locs[i]);
      kept_high.push_back(i);
    }
  }
  for (int i = nh; i < n; ++i) {
    if (!dead.contains(i)) {
      reduced.low_locs.push_back(deployment.low_locs[i - nh]);
      kept_low.push_back(i - nh);
    }
  }
  if (reduced.n_total() == 0) return SelectionReport{};

  SelectionReport sub = ce_select(query, reduced, config, rng);
  if (sub.is_null()) return sub;

  ActivationSet expanded{std::vector<bool>(deployment.n_high(), false),
                         std::vector<bool>(deployment.n_low(), false)};
  for (size_t i = 0; i < kept_high.size(); ++i) {
    expanded.high[kept_high[i]] = sub.activation->high[i];
  }
  for (size_t i = 0; i < kept_low.size(); ++i) {
    expanded.low[kept_low[i]] = sub.activation->low[i];
  }
  return {expanded, sub.cost, sub.achieved_mse, sub.iterations};
}

std::string to_record_line(const SelectionReport& report) {
  std::ostringstream os;
  if (report.is_null()) {
    os << "null,,," << report.iterations << ",,";
    return os.str();
  }
  os.precision(17);
  os << "ok," << report.cost << "," << report.achieved_mse << ","
     << report.iterations << "," << hex_mask(report.activation->high) << ","
     << hex_mask(report.activation->low);
  return os.str();
}

}  // namespace sblue
