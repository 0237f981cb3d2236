#include "sblue/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "sblue/errors.hpp"

namespace sblue {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedRow(path.string(), 0, "cannot open file");
  return in;
}

// Iterates data rows, skipping blank lines, the provenance comment and the
// header. Handles CRLF.
template <class Fn>
void for_each_data_row(std::ifstream& in, const std::filesystem::path& path,
                       const Fn& fn) {
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    fn(line, line_no);
  }
  if (!header_seen) throw MalformedRow(path.string(), 0, "missing header row");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string f;
  std::istringstream is(line);
  while (std::getline(is, f, ',')) out.push_back(f);
  return out;
}

double to_double(const std::string& s, const std::filesystem::path& path, long ln) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw MalformedRow(path.string(), ln, "not a number: '" + s + "'");
  }
}

char to_kind(const std::string& s, const std::filesystem::path& path, long ln) {
  if (s == "H" || s == "L") return s[0];
  throw MalformedRow(path.string(), ln, "sensor kind must be H or L, got '" + s + "'");
}

}  // namespace

std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed) {
  std::ostringstream os;
  os << "# sblue config=" << std::hex << std::setw(16) << std::setfill('0')
     << config_hash << std::dec << " seed=" << seed;
  return os.str();
}

std::vector<SensorRecord> read_deployment_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<SensorRecord> records;
  for_each_data_row(in, path, [&](const std::string& line, long ln) {
    const auto f = split(line);
    if (f.size() != 3) throw MalformedRow(path.string(), ln, "expected kind,x,y");
    records.push_back({to_kind(f[0], path, ln),
                       {to_double(f[1], path, ln), to_double(f[2], path, ln)},
                       0.0});
  });
  return records;
}

void write_deployment_csv(const std::filesystem::path& path,
                          const std::vector<SensorRecord>& records,
                          const std::string& provenance) {
  std::ofstream out(path);
  out << provenance << "\nkind,x,y\n";
  for (const auto& r : records) {
    out << r.kind << ',' << fmt(r.loc.x) << ',' << fmt(r.loc.y) << '\n';
  }
}

std::vector<SensorRecord> read_observations_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<SensorRecord> records;
  for_each_data_row(in, path, [&](const std::string& line, long ln) {
    const auto f = split(line);
    if (f.size() != 4) throw MalformedRow(path.string(), ln, "expected kind,x,y,value");
    records.push_back({to_kind(f[0], path, ln),
                       {to_double(f[1], path, ln), to_double(f[2], path, ln)},
                       to_double(f[3], path, ln)});
  });
  return records;
}

void write_observations_csv(const std::filesystem::path& path,
                            const std::vector<SensorRecord>& records,
                            const std::string& provenance) {
  std::ofstream out(path);
  out << provenance << "\nkind,x,y,value\n";
  for (const auto& r : records) {
    out << r.kind << ',' << fmt(r.loc.x) << ',' << fmt(r.loc.y) << ','
        << fmt(r.value) << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path,
                     const std::vector<double>& xs, const std::vector<double>& ys,
                     const Eigen::MatrixXd& values, const std::string& provenance) {
  if (values.rows() != static_cast<Eigen::Index>(ys.size()) ||
      values.cols() != static_cast<Eigen::Index>(xs.size())) {
    throw ShapeMismatch("write_field_csv: values shape does not match axes");
  }
  std::ofstream out(path);
  out << provenance << "\nx,y,value\n";
  for (size_t j = 0; j < ys.size(); ++j) {
    for (size_t i = 0; i < xs.size(); ++i) {
      out << fmt(xs[i]) << ',' << fmt(ys[j]) << ','
          << fmt(values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)))
          << '\n';
    }
  }
}

Eigen::MatrixXd read_field_csv(const std::filesystem::path& path, size_t expect_nx,
                               size_t expect_ny) {
  auto in = open_or_throw(path);
  std::vector<double> flat;
  for_each_data_row(in, path, [&](const std::string& line, long ln) {
    const auto f = split(line);
    if (f.size() != 3) throw MalformedRow(path.string(), ln, "expected x,y,value");
    flat.push_back(to_double(f[2], path, ln));
  });
  if (flat.size() != expect_nx * expect_ny) {
    throw ShapeMismatch(path.string() + ": expected " +
                        std::to_string(expect_nx * expect_ny) + " cells, got " +
                        std::to_string(flat.size()));
  }
  Eigen::MatrixXd m(expect_ny, expect_nx);
  size_t k = 0;
  for (size_t j = 0; j < expect_ny; ++j) {
    for (size_t i = 0; i < expect_nx; ++i) {
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = flat[k++];
    }
  }
  return m;
}

void write_reconstruction_csv(const std::filesystem::path& path,
                              const ReconstructionGrid& grid,
                              const std::string& provenance) {
  std::ofstream out(path);
  out << provenance << "\nx,y,estimate,mse\n";
  for (size_t j = 0; j < grid.ys.size(); ++j) {
    for (size_t i = 0; i < grid.xs.size(); ++i) {
      const auto jj = static_cast<Eigen::Index>(j);
      const auto ii = static_cast<Eigen::Index>(i);
      out << fmt(grid.xs[i]) << ',' << fmt(grid.ys[j]) << ','
          << fmt(grid.estimates(jj, ii)) << ',' << fmt(grid.mse(jj, ii)) << '\n';
    }
  }
}

void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& values,
               const std::filesystem::path& sidecar, const std::string& provenance) {
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;

  std::ofstream out(path, std::ios::binary);
  out << "P5\n" << provenance << '\n'
      << values.cols() << ' ' << values.rows() << "\n255\n";
  for (Eigen::Index j = 0; j < values.rows(); ++j) {
    for (Eigen::Index i = 0; i < values.cols(); ++i) {
      const double scaled = (values(j, i) - lo) / span * 255.0;
      out.put(static_cast<char>(static_cast<unsigned char>(
          std::clamp(scaled, 0.0, 255.0))));
    }
  }

  std::ofstream side(sidecar);
  side << provenance << "\nmin=" << fmt(lo) << "\nmax=" << fmt(hi) << '\n';
}

}  // namespace sblue
