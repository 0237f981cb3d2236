#include "sblue/ingest.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "sblue/errors.hpp"

namespace sblue {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

// Reads a CSV with a mandatory header, tolerating CRLF and a trailing
// newline. Calls row_fn(fields, line_number) per data row.
template <class RowFn>
void for_each_row(const std::filesystem::path& path, size_t expected_fields,
                  const RowFn& row_fn) {
  std::ifstream in(path);
  if (!in) {
    throw MalformedRow(path.string(), 0, "cannot open file");
  }
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_row(line);
    if (fields.size() != expected_fields) {
      throw MalformedRow(path.string(), line_no,
                         "expected " + std::to_string(expected_fields) +
                             " fields, got " + std::to_string(fields.size()));
    }
    row_fn(fields, line_no);
  }
  if (!header_seen) {
    throw MalformedRow(path.string(), 0, "missing header row");
  }
}

double parse_double(const std::string& s, const std::filesystem::path& path,
                    long line_no) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw MalformedRow(path.string(), line_no, "not a number: '" + s + "'");
  }
  if (pos != s.size()) {
    throw MalformedRow(path.string(), line_no, "trailing garbage in '" + s + "'");
  }
  return v;
}

long parse_long(const std::string& s, const std::filesystem::path& path,
                long line_no) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw MalformedRow(path.string(), line_no, "not an integer: '" + s + "'");
  }
  if (pos != s.size()) {
    throw MalformedRow(path.string(), line_no, "trailing garbage in '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<Location> StormDataset::locations() const {
  std::unordered_map<long, const GridPoint*> by_id;
  for (const auto& g : grid) by_id[g.grid_id] = &g;
  std::vector<Location> locs;
  locs.reserve(footprints.size());
  for (const auto& f : footprints) {
    const GridPoint* g = by_id.at(f.grid_id);
    locs.push_back({g->lon, g->lat});
  }
  return locs;
}

std::vector<double> StormDataset::values() const {
  std::vector<double> v;
  v.reserve(footprints.size());
  for (const auto& f : footprints) v.push_back(f.gust);
  return v;
}

StormDataset parse_storm(const std::filesystem::path& grid_file,
                         const std::filesystem::path& footprint_file) {
  StormDataset data;
  std::unordered_map<long, size_t> seen;
  for_each_row(grid_file, 3, [&](const std::vector<std::string>& f, long ln) {
    GridPoint p;
    p.grid_id = parse_long(f[0], grid_file, ln);
    p.lon = parse_double(f[1], grid_file, ln);
    p.lat = parse_double(f[2], grid_file, ln);
    if (seen.contains(p.grid_id)) {
      throw MalformedRow(grid_file.string(), ln,
                         "duplicate grid_id " + std::to_string(p.grid_id));
    }
    seen[p.grid_id] = data.grid.size();
    data.grid.push_back(p);
  });

  std::vector<long> unresolved;
  for_each_row(footprint_file, 2, [&](const std::vector<std::string>& f, long ln) {
    FootprintRow row;
    row.grid_id = parse_long(f[0], footprint_file, ln);
    row.gust = parse_double(f[1], footprint_file, ln);
    if (row.gust < 0.0) {
      throw MalformedRow(footprint_file.string(), ln, "negative gust speed");
    }
    if (!seen.contains(row.grid_id)) unresolved.push_back(row.grid_id);
    data.footprints.push_back(row);
  });

  if (!unresolved.empty()) {
    std::ostringstream os;
    os << "footprint references unknown grid ids:";
    for (long id : unresolved) os << ' ' << id;
    throw UnresolvedGridId(os.str());
  }
  return data;
}

void write_storm(const StormDataset& data, const std::filesystem::path& grid_file,
                 const std::filesystem::path& footprint_file) {
  std::ofstream g(grid_file);
  g.precision(17);
  g << "grid_id,lon,lat\n";
  for (const auto& p : data.grid) {
    g << p.grid_id << ',' << p.lon << ',' << p.lat << '\n';
  }
  std::ofstream f(footprint_file);
  f.precision(17);
  f << "grid_id,gust_ms\n";
  for (const auto& r : data.footprints) {
    f << r.grid_id << ',' << r.gust << '\n';
  }
}

double separable_log_likelihood(std::span<const Location> locs,
                                std::span<const double> centered_values,
                                const SeparableExponential& kernel, double nugget) {
  const Eigen::Index n = static_cast<Eigen::Index>(locs.size());
  Eigen::MatrixXd cov = covariance_matrix(KernelSpec{kernel}, locs);
  cov.diagonal().array() += nugget;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    return -std::numeric_limits<double>::infinity();
  }
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = centered_values[static_cast<size_t>(i)];
  const Eigen::VectorXd alpha = llt.solve(y);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(llt.matrixL()(i, i));
  log_det *= 2.0;
  return -0.5 * y.dot(alpha) - 0.5 * log_det -
         0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

FitResult fit_separable_mle(std::span<const Location> locs,
                            std::span<const double> values, const FitResult& init,
                            int budget) {
  if (locs.size() != values.size()) {
    throw ShapeMismatch("fit_separable_mle: locations and values differ in length");
  }
  if (locs.size() < 8) {
    throw std::invalid_argument("fit_separable_mle: need at least 8 data points");
  }
  const double vmin = *std::min_element(values.begin(), values.end());
  const double vmax = *std::max_element(values.begin(), values.end());
  if (!(vmax > vmin)) {
    throw DegenerateData("fit_separable_mle: field values are constant");
  }

  // Subsample to cap the cubic solve cost; seeded so the fit is repeatable.
  std::vector<Location> xs(locs.begin(), locs.end());
  std::vector<double> ys(values.begin(), values.end());
  constexpr size_t kMaxPoints = 400;
  if (xs.size() > kMaxPoints) {
    std::mt19937_64 rng(0x5eedu ^ xs.size());
    std::vector<size_t> order(xs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Location> sx;
    std::vector<double> sy;
    for (size_t i = 0; i < kMaxPoints; ++i) {
      sx.push_back(xs[order[i]]);
      sy.push_back(ys[order[i]]);
    }
    xs.swap(sx);
    ys.swap(sy);
  }

  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  for (double& v : ys) v -= mean;

  constexpr double kMinNugget = 1e-6;
  // log-parameter vector: {sigma2_x, len_x, sigma2_y, len_y, nugget}
  std::array<double, 5> theta = {
      std::log(init.kernel.sigma2_x), std::log(init.kernel.len_x),
      std::log(init.kernel.sigma2_y), std::log(init.kernel.len_y),
      std::log(std::max(init.nugget, kMinNugget))};

  int evals = 0;
  const auto objective = [&](const std::array<double, 5>& t) {
    ++evals;
    const SeparableExponential k{std::exp(t[0]), std::exp(t[1]), std::exp(t[2]),
                                 std::exp(t[3])};
    const double nugget = std::max(std::exp(t[4]), kMinNugget);
    return separable_log_likelihood(xs, ys, k, nugget);
  };

  double best = objective(theta);
  double step = 0.5;
  bool converged = false;
  while (evals < budget) {
    bool improved = false;
    for (size_t c = 0; c < theta.size() && evals < budget; ++c) {
      for (const double delta : {step, -step}) {
        if (evals >= budget) break;
        auto trial = theta;
        trial[c] += delta;
        const double ll = objective(trial);
        if (ll > best) {
          best = ll;
          theta = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < 1e-3) {
        converged = true;
        break;
      }
    }
  }

  FitResult result;
  result.kernel = {std::exp(theta[0]), std::exp(theta[1]), std::exp(theta[2]),
                   std::exp(theta[3])};
  result.nugget = std::max(std::exp(theta[4]), kMinNugget);
  result.log_likelihood = best;
  result.converged = converged;
  return result;
}

}  // namespace sblue
