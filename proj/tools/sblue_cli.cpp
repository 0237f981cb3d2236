// Command-line front end: simulate synthetic deployments, reconstruct fields
// from observation files, answer selection queries, fit storm kernels, and
// run the numerical oracle suites.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sblue/config.hpp"
#include "sblue/errors.hpp"
#include "sblue/ingest.hpp"
#include "sblue/io.hpp"
#include "sblue/moments.hpp"
#include "sblue/oracle.hpp"
#include "sblue/predict.hpp"
#include "sblue/select.hpp"
#include "sblue/sensors.hpp"

namespace fs = std::filesystem;
using namespace sblue;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitOracle = 3;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_flag;
};

struct LoadedConfig {
  RunConfig config;
  std::uint64_t hash = 0;
};

LoadedConfig load_config(const CommonArgs& args) {
  auto pairs = config_pairs(args.config_path, args.overrides);
  if (args.seed_flag) pairs["seed"] = std::to_string(*args.seed_flag);
  LoadedConfig lc{config_from_pairs(pairs), config_hash(pairs)};
  if (!lc.config.seed_set) {
    throw ConfigError("seed is required (set seed= in the config or pass --seed)");
  }
  return lc;
}

std::vector<double> grid_axis(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return v;
}

int cmd_simulate(const CommonArgs& args) {
  const auto [config, hash] = load_config(args);
  const SensorDeployment deployment = build_deployment(config);
  const std::string provenance = provenance_line(hash, config.seed);
  fs::create_directories(args.out_dir);

  const auto xs = grid_axis(config.grid.x_min, config.grid.x_max, config.grid.nx);
  const auto ys = grid_axis(config.grid.y_min, config.grid.y_max, config.grid.ny);
  std::vector<Location> grid_locs;
  grid_locs.reserve(xs.size() * ys.size());
  for (double y : ys) {
    for (double x : xs) grid_locs.push_back({x, y});
  }

  // One joint draw over grid + sensors keeps the written truth consistent
  // with the observations.
  std::vector<Location> field_locs = grid_locs;
  field_locs.insert(field_locs.end(), deployment.high_locs.begin(),
                    deployment.high_locs.end());
  field_locs.insert(field_locs.end(), deployment.low_locs.begin(),
                    deployment.low_locs.end());
  std::vector<Location> energy_locs = grid_locs;
  energy_locs.insert(energy_locs.end(), deployment.low_locs.begin(),
                     deployment.low_locs.end());

  std::mt19937_64 rng(config.seed);
  const std::vector<double> f_all = sample_gp(config.field, field_locs, rng);
  const std::vector<double> g_all = sample_lgp(config.energy, energy_locs, rng);

  const size_t n_grid = grid_locs.size();
  const std::span<const double> f_high(f_all.data() + n_grid,
                                       deployment.high_locs.size());
  const std::span<const double> f_low(
      f_all.data() + n_grid + deployment.high_locs.size(),
      deployment.low_locs.size());
  const std::span<const double> g_low(g_all.data() + n_grid,
                                      deployment.low_locs.size());

  const std::vector<double> y_high = observe_high(f_high, deployment, rng);
  const std::vector<double> y_low = observe_low(f_low, g_low, deployment, rng);

  Eigen::MatrixXd truth(config.grid.ny, config.grid.nx);
  Eigen::MatrixXd energy_grid(config.grid.ny, config.grid.nx);
  for (int j = 0; j < config.grid.ny; ++j) {
    for (int i = 0; i < config.grid.nx; ++i) {
      truth(j, i) = f_all[j * config.grid.nx + i];
      energy_grid(j, i) = g_all[j * config.grid.nx + i];
    }
  }

  const fs::path out(args.out_dir);
  write_field_csv(out / "truth_grid.csv", xs, ys, truth, provenance);
  write_field_csv(out / "energy_grid.csv", xs, ys, energy_grid, provenance);

  std::vector<SensorRecord> records;
  for (size_t i = 0; i < deployment.high_locs.size(); ++i) {
    records.push_back({'H', deployment.high_locs[i], y_high[i]});
  }
  for (size_t i = 0; i < deployment.low_locs.size(); ++i) {
    records.push_back({'L', deployment.low_locs[i], y_low[i]});
  }
  write_observations_csv(out / "observations.csv", records, provenance);

  std::cout << "simulated " << records.size() << " observations over a "
            << config.grid.nx << "x" << config.grid.ny << " grid\n";
  return kExitOk;
}

int cmd_reconstruct(const CommonArgs& args, const std::string& obs_path,
                    const std::string& truth_path, bool pgm) {
  const auto [config, hash] = load_config(args);
  const std::string provenance = provenance_line(hash, config.seed);
  fs::create_directories(args.out_dir);

  const auto records = read_observations_csv(obs_path);
  SensorDeployment deployment;
  deployment.field = config.field;
  deployment.energy = config.energy;
  deployment.link = config.link;
  deployment.threshold = config.threshold;
  deployment.high_noise_sd = config.sigma_w;
  ObservationVector obs;
  for (const auto& r : records) {
    if (r.kind == 'H') {
      deployment.high_locs.push_back(r.loc);
      obs.y_high.push_back(r.value);
    } else {
      deployment.low_locs.push_back(r.loc);
      obs.y_low.push_back(r.value);
    }
  }
  if (config.deployment_counts) {
    const auto [nh, nl] = *config.deployment_counts;
    if (nh != deployment.n_high() || nl != deployment.n_low()) {
      throw ShapeMismatch(obs_path + ": observation counts (" +
                          std::to_string(deployment.n_high()) + " high, " +
                          std::to_string(deployment.n_low()) +
                          " low) do not match the configured deployment (" +
                          std::to_string(nh) + " high, " + std::to_string(nl) +
                          " low)");
    }
  }

  const ObservationVector centered = center_observations(obs, config.field.mean);
  const ReconstructionGrid grid = reconstruct_grid(deployment, centered, config.grid);

  const fs::path out(args.out_dir);
  write_reconstruction_csv(out / "reconstruction.csv", grid, provenance);
  if (pgm) {
    write_pgm(out / "estimate.pgm", grid.estimates, out / "estimate_scale.txt",
              provenance);
    write_pgm(out / "mse.pgm", grid.mse, out / "mse_scale.txt", provenance);
  }

  if (!truth_path.empty()) {
    const Eigen::MatrixXd truth =
        read_field_csv(truth_path, grid.xs.size(), grid.ys.size());
    write_field_csv(out / "rse.csv", grid.xs, grid.ys, rse_map(grid, truth),
                    provenance);
    std::ostringstream os;
    os.precision(17);
    os << "rmse=" << rmse(grid, truth);
    std::cout << os.str() << '\n';
  } else {
    std::cout << "reconstructed " << grid.xs.size() << "x" << grid.ys.size()
              << " grid\n";
  }
  return kExitOk;
}

int cmd_select(const CommonArgs& args, double x, double y, double epsilon,
               bool exhaustive) {
  const auto [config, hash] = load_config(args);
  const SensorDeployment deployment = build_deployment(config);
  const Query query{{x, y}, epsilon};

  SelectionReport report;
  if (exhaustive) {
    report = exhaustive_select(query, deployment, config.ce);
  } else {
    std::mt19937_64 rng(config.seed ^ 0x5e1ec7u);
    report = ce_select(query, deployment, config.ce, rng);
  }

  const std::string line = to_record_line(report);
  std::cout << line << '\n';
  fs::create_directories(args.out_dir);
  std::ofstream file(fs::path(args.out_dir) / "selection.txt");
  file << provenance_line(hash, config.seed) << '\n' << line << '\n';
  return kExitOk;
}

int cmd_fit(const std::string& grid_file, const std::string& footprint_file,
            int budget) {
  const StormDataset data = parse_storm(grid_file, footprint_file);
  const auto locs = data.locations();
  const auto values = data.values();

  FitResult init;
  init.kernel = {1.0, 1.0, 1.0, 1.0};
  init.nugget = 0.01;
  const FitResult fit = fit_separable_mle(locs, values, init, budget);

  std::ostringstream os;
  os.precision(10);
  os << "sigma2_x=" << fit.kernel.sigma2_x << " len_x=" << fit.kernel.len_x
     << " sigma2_y=" << fit.kernel.sigma2_y << " len_y=" << fit.kernel.len_y
     << " nugget=" << fit.nugget << " loglik=" << fit.log_likelihood
     << " converged=" << (fit.converged ? "yes" : "no");
  std::cout << os.str() << '\n';
  return kExitOk;
}

int cmd_oracle(long mc_samples, std::uint64_t seed, bool flip_noise_sign) {
  oracle::OracleOptions options;
  options.mc_samples = mc_samples;
  options.seed = seed;
  options.flip_noise_sign = flip_noise_sign;

  auto checks = oracle::run_gaussmath_oracles();
  const auto moment_checks = oracle::run_moment_oracles(options);
  checks.insert(checks.end(), moment_checks.begin(), moment_checks.end());

  std::cout << "check,analytic,reference,deviation,tolerance,status\n";
  std::ostringstream os;
  os.precision(12);
  for (const auto& c : checks) {
    os.str("");
    os << c.name << ',' << c.analytic << ',' << c.reference << ',' << c.deviation
       << ',' << c.tolerance << ',' << (c.pass ? "pass" : "FAIL");
    std::cout << os.str() << '\n';
  }
  const size_t failures = std::count_if(checks.begin(), checks.end(),
                                        [](const auto& c) { return !c.pass; });
  std::cout << "# " << checks.size() - failures << "/" << checks.size()
            << " checks passed\n";
  return failures == 0 ? kExitOk : kExitOracle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial field reconstruction and sensor selection for "
               "heterogeneous sensor networks"};
  app.require_subcommand(1);

  CommonArgs common;
  const auto add_common = [&common](CLI::App* sub, bool config_required = true) {
    auto* opt = sub->add_option("--config", common.config_path, "key=value config file");
    if (config_required) opt->required();
    sub->add_option("--set", common.overrides, "override config entries (key=value)");
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--seed", common.seed_flag, "seed override");
  };

  auto* simulate = app.add_subcommand("simulate", "sample a field and write observations");
  add_common(simulate);

  auto* reconstruct = app.add_subcommand("reconstruct", "S-BLUE grid reconstruction");
  add_common(reconstruct);
  std::string obs_path, truth_path;
  bool pgm = false;
  reconstruct->add_option("--observations", obs_path, "kind,x,y,value CSV")->required();
  reconstruct->add_option("--truth", truth_path, "truth grid CSV for error maps");
  reconstruct->add_flag("--pgm", pgm, "also write PGM heatmaps");

  auto* select = app.add_subcommand("select", "query-based sensor selection");
  add_common(select);
  double qx = 0.0, qy = 0.0, epsilon = 1.0;
  bool exhaustive = false;
  select->add_option("--x", qx, "query x coordinate")->required();
  select->add_option("--y", qy, "query y coordinate")->required();
  select->add_option("--epsilon", epsilon, "maximum allowed predictive MSE")->required();
  select->add_flag("--exhaustive", exhaustive, "enumerate instead of running CE");

  auto* fit = app.add_subcommand("fit", "fit separable kernel to storm data");
  std::string grid_file, footprint_file;
  int budget = 2000;
  fit->add_option("--grid-file", grid_file, "grid_id,lon,lat CSV")->required();
  fit->add_option("--footprint-file", footprint_file, "grid_id,gust_ms CSV")->required();
  fit->add_option("--budget", budget, "likelihood evaluation budget");

  auto* oracle_cmd = app.add_subcommand("oracle", "run the numerical oracle suites");
  long mc_samples = 1'000'000;
  std::uint64_t oracle_seed = 20260808;
  bool flip_noise_sign = false;
  oracle_cmd->add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
  oracle_cmd->add_option("--seed", oracle_seed, "Monte Carlo seed");
  oracle_cmd->add_flag("--flip-noise-sign", flip_noise_sign,
                       "evaluate the low-sensor noise term with flipped log-mean sign")
      ->group("");  // hidden; used by the mutation test

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(common);
    if (reconstruct->parsed()) return cmd_reconstruct(common, obs_path, truth_path, pgm);
    if (select->parsed()) return cmd_select(common, qx, qy, epsilon, exhaustive);
    if (fit->parsed()) return cmd_fit(grid_file, footprint_file, budget);
    if (oracle_cmd->parsed()) return cmd_oracle(mc_samples, oracle_seed, flip_noise_sign);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MalformedRow& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnresolvedGridId& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShapeMismatch& e) {
    std::cerr << "shape error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateData& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
