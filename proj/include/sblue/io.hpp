#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sblue/predict.hpp"
#include "sblue/sensors.hpp"

namespace sblue {

/// Provenance line written at the top of every output file:
/// `# sblue config=<16-hex> seed=<n>`.
std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed);

/// One sensor reading (or sensor position when `value` is unused).
struct SensorRecord {
  char kind = 'H';  // 'H' or 'L'
  Location loc;
  double value = 0.0;
};

/// `kind,x,y` deployment geometry.
std::vector<SensorRecord> read_deployment_csv(const std::filesystem::path& path);
void write_deployment_csv(const std::filesystem::path& path,
                          const std::vector<SensorRecord>& records,
                          const std::string& provenance);

/// `kind,x,y,value` observation files.
std::vector<SensorRecord> read_observations_csv(const std::filesystem::path& path);
void write_observations_csv(const std::filesystem::path& path,
                            const std::vector<SensorRecord>& records,
                            const std::string& provenance);

/// `x,y,value` field values over a grid, row-major in y then x.
void write_field_csv(const std::filesystem::path& path,
                     const std::vector<double>& xs, const std::vector<double>& ys,
                     const Eigen::MatrixXd& values, const std::string& provenance);
Eigen::MatrixXd read_field_csv(const std::filesystem::path& path, size_t expect_nx,
                               size_t expect_ny);

/// `x,y,estimate,mse` reconstruction output.
void write_reconstruction_csv(const std::filesystem::path& path,
                              const ReconstructionGrid& grid,
                              const std::string& provenance);

/// 8-bit binary PGM, min-max scaled; the scaling bounds go to `sidecar`.
void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& values,
               const std::filesystem::path& sidecar, const std::string& provenance);

}  // namespace sblue
