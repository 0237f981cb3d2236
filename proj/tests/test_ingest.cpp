#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "sblue/errors.hpp"
#include "sblue/field_model.hpp"
#include "sblue/ingest.hpp"

using namespace sblue;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sblue_ingest_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("well-formed storm files join") {
  TempDir tmp;
  write_file(tmp.path / "grid.csv", "grid_id,lon,lat\n1,0.0,0.0\n2,0.22,0.0\n3,0.44,0.0\n");
  write_file(tmp.path / "fp.csv", "grid_id,gust_ms\n1,21.5\n3,18.25\n2,30\n");
  const StormDataset data = parse_storm(tmp.path / "grid.csv", tmp.path / "fp.csv");
  CHECK(data.grid.size() == 3);
  CHECK(data.footprints.size() == 3);
  const auto locs = data.locations();
  CHECK(locs[1].x == doctest::Approx(0.44));  // footprint order preserved
  CHECK(data.values() == std::vector<double>{21.5, 18.25, 30.0});
}

TEST_CASE("CRLF input is accepted") {
  TempDir tmp;
  write_file(tmp.path / "grid.csv", "grid_id,lon,lat\r\n1,0.5,1.5\r\n");
  write_file(tmp.path / "fp.csv", "grid_id,gust_ms\r\n1,12\r\n");
  const StormDataset data = parse_storm(tmp.path / "grid.csv", tmp.path / "fp.csv");
  CHECK(data.grid[0].lat == 1.5);
}

TEST_CASE("empty footprint file is an empty dataset") {
  TempDir tmp;
  write_file(tmp.path / "grid.csv", "grid_id,lon,lat\n1,0,0\n");
  write_file(tmp.path / "fp.csv", "grid_id,gust_ms\n");
  const StormDataset data = parse_storm(tmp.path / "grid.csv", tmp.path / "fp.csv");
  CHECK(data.footprints.empty());
}

TEST_CASE("unresolved grid ids are reported with the id") {
  TempDir tmp;
  write_file(tmp.path / "grid.csv", "grid_id,lon,lat\n1,0,0\n");
  write_file(tmp.path / "fp.csv", "grid_id,gust_ms\n1,5\n42,6\n");
  try {
    parse_storm(tmp.path / "grid.csv", tmp.path / "fp.csv");
    FAIL("expected UnresolvedGridId");
  } catch (const UnresolvedGridId& e) {
    CHECK(std::string(e.what()).find("42") != std::string::npos);
  }
}

TEST_CASE("malformed rows carry their line number") {
  TempDir tmp;
  write_file(tmp.path / "grid.csv", "grid_id,lon,lat\n1,0,0\n2,zero,0\n");
  write_file(tmp.path / "fp.csv", "grid_id,gust_ms\n1,5\n");
  try {
    parse_storm(tmp.path / "grid.csv", tmp.path / "fp.csv");
    FAIL("expected MalformedRow");
  } catch (const MalformedRow& e) {
    CHECK(e.line() == 3);
  }

  write_file(tmp.path / "grid2.csv", "grid_id,lon,lat\n1,0\n");
  CHECK_THROWS_AS(parse_storm(tmp.path / "grid2.csv", tmp.path / "fp.csv"), MalformedRow);

  write_file(tmp.path / "neg.csv", "grid_id,gust_ms\n1,-3\n");
  CHECK_THROWS_AS(parse_storm(tmp.path / "grid.csv", tmp.path / "neg.csv"), MalformedRow);

  write_file(tmp.path / "empty.csv", "");
  CHECK_THROWS_AS(parse_storm(tmp.path / "empty.csv", tmp.path / "fp.csv"), MalformedRow);
}

TEST_CASE("parse -> serialize -> parse is the identity") {
  TempDir tmp;
  write_file(tmp.path / "grid.csv",
             "grid_id,lon,lat\n10,-1.25,3.5\n11,0.125,3.5\n12,1.5,3.5\n");
  write_file(tmp.path / "fp.csv", "grid_id,gust_ms\n12,17.75\n10,9.5\n");
  const StormDataset first = parse_storm(tmp.path / "grid.csv", tmp.path / "fp.csv");
  write_storm(first, tmp.path / "grid_rt.csv", tmp.path / "fp_rt.csv");
  const StormDataset second = parse_storm(tmp.path / "grid_rt.csv", tmp.path / "fp_rt.csv");
  REQUIRE(second.grid.size() == first.grid.size());
  REQUIRE(second.footprints.size() == first.footprints.size());
  for (size_t i = 0; i < first.grid.size(); ++i) {
    CHECK(second.grid[i].grid_id == first.grid[i].grid_id);
    CHECK(second.grid[i].lon == first.grid[i].lon);
    CHECK(second.grid[i].lat == first.grid[i].lat);
  }
  for (size_t i = 0; i < first.footprints.size(); ++i) {
    CHECK(second.footprints[i].grid_id == first.footprints[i].grid_id);
    CHECK(second.footprints[i].gust == first.footprints[i].gust);
  }
}

TEST_CASE("MLE requires usable data") {
  std::vector<Location> locs;
  std::vector<double> values;
  for (int i = 0; i < 10; ++i) {
    locs.push_back({double(i), 0.0});
    values.push_back(3.0);
  }
  FitResult init;
  CHECK_THROWS_AS(fit_separable_mle(locs, values, init), DegenerateData);
  CHECK_THROWS_AS(fit_separable_mle(locs, std::vector<double>{1, 2, 3}, init),
                  ShapeMismatch);
  CHECK_THROWS_AS(fit_separable_mle(std::vector<Location>(locs.begin(), locs.begin() + 4),
                                    std::vector<double>{1, 2, 3, 4}, init),
                  std::invalid_argument);
}

TEST_CASE("MLE never ends below its starting likelihood") {
  // plant a field on a small grid
  std::vector<Location> locs;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) locs.push_back({i / 9.0, j / 9.0});
  }
  const GPFieldModel planted{0.0, SeparableExponential{0.5, 0.4, 2.0, 0.15}};
  std::mt19937_64 rng(424242);
  std::vector<double> values = sample_gp(planted, locs, rng);

  FitResult init;
  init.kernel = {1.0, 1.0, 1.0, 1.0};
  init.nugget = 0.01;

  // center exactly as the fitter does before comparing likelihoods
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  std::vector<double> centered = values;
  for (double& v : centered) v -= mean;
  const double init_ll = separable_log_likelihood(locs, centered, init.kernel, init.nugget);

  const FitResult fit = fit_separable_mle(locs, values, init, 600);
  CHECK(fit.log_likelihood >= init_ll);
  CHECK(fit.kernel.sigma2_x > 0.0);
  CHECK(fit.nugget >= 1e-6);
}

TEST_CASE("subsampling keeps the fit deterministic") {
  std::vector<Location> locs;
  std::vector<double> values;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GPFieldModel planted{0.0, SeparableExponential{1.0, 0.3, 1.0, 0.3}};
  for (int i = 0; i < 450; ++i) locs.push_back({u(rng), u(rng)});
  values = sample_gp(planted, locs, rng);

  FitResult init;
  const FitResult a = fit_separable_mle(locs, values, init, 200);
  const FitResult b = fit_separable_mle(locs, values, init, 200);
  CHECK(a.log_likelihood == b.log_likelihood);
  CHECK(a.kernel.len_x == b.kernel.len_x);
}
