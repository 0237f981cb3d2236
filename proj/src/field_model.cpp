#include "sblue/field_model.hpp"

#include <cmath>
#include <stdexcept>

#include "sblue/detail/quadrature.hpp"
#include "sblue/errors.hpp"
#include "sblue/gaussmath.hpp"

namespace sblue {

void validate_kernel(const KernelSpec& spec) {
  const bool ok = std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SquaredExponential>) {
          return k.sigma2 > 0.0 && k.length > 0.0;
        } else {
          return k.sigma2_x > 0.0 && k.len_x > 0.0 && k.sigma2_y > 0.0 &&
                 k.len_y > 0.0;
        }
      },
      spec);
  if (!ok) {
    throw std::invalid_argument(
        "kernel variances and length-scales must be positive");
  }
}

double kernel_eval(const KernelSpec& spec, const Location& x1, const Location& x2) {
  const double dx = x1.x - x2.x;
  const double dy = x1.y - x2.y;
  return std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SquaredExponential>) {
          return k.sigma2 * std::exp(-(dx * dx + dy * dy) / (2.0 * k.length));
        } else {
          return k.sigma2_x * std::exp(-std::abs(dx) / k.len_x) * k.sigma2_y *
                 std::exp(-std::abs(dy) / k.len_y);
        }
      },
      spec);
}

Eigen::MatrixXd covariance_matrix(const KernelSpec& spec,
                                  std::span<const Location> locs) {
  if (locs.empty()) {
    throw std::invalid_argument("covariance_matrix: empty location set");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(locs.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kernel_eval(spec, locs[i], locs[j]);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd matrix) {
  const Eigen::Index n = matrix.rows();
  const double mean_diag = matrix.diagonal().mean();
  const double scale = mean_diag > 0.0 ? mean_diag : 1.0;

  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() == Eigen::Success) return llt.matrixL();

  for (double jitter = 1e-10 * scale; jitter <= 1e-4 * scale; jitter *= 10.0) {
    Eigen::MatrixXd bumped = matrix;
    bumped.diagonal().array() += jitter;
    llt.compute(bumped);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw FactorizationFailure("Cholesky failed for " + std::to_string(n) +
                             "x" + std::to_string(n) +
                             " matrix after jitter escalation");
}

std::vector<double> sample_gp(const GPFieldModel& model,
                              std::span<const Location> locs,
                              std::mt19937_64& rng) {
  validate_kernel(model.kernel);
  const Eigen::MatrixXd lower =
      cholesky_with_jitter(covariance_matrix(model.kernel, locs));
  const Eigen::Index n = lower.rows();

  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = gauss(rng);

  const Eigen::VectorXd values = lower * z;
  std::vector<double> out(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<size_t>(i)] = model.mean + values(i);
  return out;
}

std::vector<double> sample_lgp(const LGPEnergyModel& model,
                               std::span<const Location> locs,
                               std::mt19937_64& rng) {
  const GPFieldModel log_process{model.log_mean, model.log_kernel};
  std::vector<double> values = sample_gp(log_process, locs, rng);
  for (double& v : values) v = std::exp(v);
  return values;
}

double link_apply(LinkFunction link, double energy) {
  switch (link) {
    case LinkFunction::Reciprocal:
      return 1.0 / energy;
    case LinkFunction::ReciprocalSquare:
      return 1.0 / (energy * energy);
    case LinkFunction::ExpNegative:
      return std::exp(-energy);
  }
  throw std::logic_error("unknown link function");
}

double noise_variance_expectation(const LGPEnergyModel& model, LinkFunction link,
                                  const Location& x) {
  const double mu = model.log_mean;
  const double var = kernel_eval(model.log_kernel, x, x);
  switch (link) {
    case LinkFunction::Reciprocal:
      // E[1/g], g lognormal(mu, var)
      return std::exp(-mu + 0.5 * var);
    case LinkFunction::ReciprocalSquare:
      return std::exp(-2.0 * mu + 2.0 * var);
    case LinkFunction::ExpNegative: {
      // E[exp(-g)] has no elementary form; integrate over the log-variable.
      const double sd = std::sqrt(var);
      if (sd == 0.0) return std::exp(-std::exp(mu));
      bool ok = true;
      const auto integrand = [&](double z) {
        return std::exp(-std::exp(mu + sd * z)) * gaussmath::std_normal_pdf(z);
      };
      const double v = detail::adaptive_simpson(integrand, -10.0, 10.0, 1e-12, ok);
      if (!ok) throw NonConvergence("noise_variance_expectation quadrature");
      return v;
    }
  }
  throw std::logic_error("unknown link function");
}

}  // namespace sblue
