#pragma once

#include <Eigen/Dense>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace sblue {

struct Location {
  double x = 0.0;
  double y = 0.0;
};

/// Squared-exponential covariance sigma2 * exp(-||x1-x2||^2 / (2*length)).
/// `length` multiplies the 2 in the denominator directly, so the hyperpair
/// {sigma2, length} = {10, 1} gives exp(-r^2/2) correlation decay.
struct SquaredExponential {
  double sigma2 = 1.0;
  double length = 1.0;
};

/// Axis-separable exponential covariance
///   sigma2_x * exp(-|dx|/len_x) * sigma2_y * exp(-|dy|/len_y).
struct SeparableExponential {
  double sigma2_x = 1.0;
  double len_x = 1.0;
  double sigma2_y = 1.0;
  double len_y = 1.0;
};

using KernelSpec = std::variant<SquaredExponential, SeparableExponential>;

/// Throws std::invalid_argument unless all variances and length-scales are
/// strictly positive.
void validate_kernel(const KernelSpec& spec);

/// Gaussian-process prior for the monitored field: constant mean + kernel.
struct GPFieldModel {
  double mean = 0.0;
  KernelSpec kernel = SquaredExponential{};
};

/// Log-Gaussian prior for the strictly positive energy field; parameters are
/// those of the underlying Gaussian log-process.
struct LGPEnergyModel {
  double log_mean = 0.0;
  KernelSpec log_kernel = SquaredExponential{};
};

/// Decreasing map from harvested energy to noise variance.
enum class LinkFunction { Reciprocal, ReciprocalSquare, ExpNegative };

/// psi(energy) for the given link.
double link_apply(LinkFunction link, double energy);

double kernel_eval(const KernelSpec& spec, const Location& x1, const Location& x2);

/// Symmetric PSD matrix of pairwise kernel evaluations.
Eigen::MatrixXd covariance_matrix(const KernelSpec& spec,
                                  std::span<const Location> locs);

/// Lower Cholesky factor of `matrix` with escalating diagonal jitter
/// (1e-10 .. 1e-4 of the mean diagonal). Throws FactorizationFailure once the
/// schedule is exhausted.
Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd matrix);

/// Exact joint draw of the field at `locs`. Deterministic given the generator
/// state.
std::vector<double> sample_gp(const GPFieldModel& model,
                              std::span<const Location> locs,
                              std::mt19937_64& rng);

/// Exact joint draw of the energy field; strictly positive values.
std::vector<double> sample_lgp(const LGPEnergyModel& model,
                               std::span<const Location> locs,
                               std::mt19937_64& rng);

/// E[psi(g(x))] under the lognormal marginal of g(x). Closed form for the
/// reciprocal links, 1-D quadrature for ExpNegative.
double noise_variance_expectation(const LGPEnergyModel& model, LinkFunction link,
                                  const Location& x);

}  // namespace sblue
