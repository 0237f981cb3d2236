// Python bindings for the core operations: field sampling, observation
// models, moment assembly, S-BLUE prediction, grid reconstruction, sensor
// selection, and the scalar Gaussian machinery. Randomized operations take an
// explicit seed so results are reproducible from Python.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <random>

#include "sblue/field_model.hpp"
#include "sblue/gaussmath.hpp"
#include "sblue/ingest.hpp"
#include "sblue/moments.hpp"
#include "sblue/predict.hpp"
#include "sblue/select.hpp"
#include "sblue/sensors.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sblue;

namespace {

KernelSpec kernel_from_dict(const py::dict& d) {
  const std::string kind = d["kind"].cast<std::string>();
  if (kind == "squared_exponential") {
    return SquaredExponential{d["sigma2"].cast<double>(), d["length"].cast<double>()};
  }
  if (kind == "separable_exponential") {
    return SeparableExponential{d["sigma2_x"].cast<double>(), d["len_x"].cast<double>(),
                                d["sigma2_y"].cast<double>(), d["len_y"].cast<double>()};
  }
  throw std::invalid_argument("unknown kernel kind: " + kind);
}

std::vector<Location> locations_from(const std::vector<std::pair<double, double>>& pts) {
  std::vector<Location> locs;
  locs.reserve(pts.size());
  for (const auto& [x, y] : pts) locs.push_back({x, y});
  return locs;
}

}  // namespace

PYBIND11_MODULE(_sblue, m) {
  m.doc() = "Spatial field reconstruction and sensor selection for "
            "heterogeneous sensor networks";

  py::class_<Location>(m, "Location")
      .def(py::init<double, double>(), "x"_a, "y"_a)
      .def_readwrite("x", &Location::x)
      .def_readwrite("y", &Location::y)
      .def("__repr__", [](const Location& l) {
        return "Location(" + std::to_string(l.x) + ", " + std::to_string(l.y) + ")";
      });

  py::enum_<LinkFunction>(m, "LinkFunction")
      .value("Reciprocal", LinkFunction::Reciprocal)
      .value("ReciprocalSquare", LinkFunction::ReciprocalSquare)
      .value("ExpNegative", LinkFunction::ExpNegative);

  py::class_<GPFieldModel>(m, "GPFieldModel")
      .def(py::init([](double mean, const py::dict& kernel) {
             GPFieldModel model{mean, kernel_from_dict(kernel)};
             validate_kernel(model.kernel);
             return model;
           }),
           "mean"_a, "kernel"_a)
      .def_readwrite("mean", &GPFieldModel::mean);

  py::class_<LGPEnergyModel>(m, "LGPEnergyModel")
      .def(py::init([](double log_mean, const py::dict& kernel) {
             LGPEnergyModel model{log_mean, kernel_from_dict(kernel)};
             validate_kernel(model.log_kernel);
             return model;
           }),
           "log_mean"_a, "kernel"_a)
      .def_readwrite("log_mean", &LGPEnergyModel::log_mean);

  py::class_<SensorDeployment>(m, "SensorDeployment")
      .def(py::init([](const std::vector<std::pair<double, double>>& high,
                       const std::vector<std::pair<double, double>>& low,
                       double threshold, double sigma_w, const GPFieldModel& field,
                       const LGPEnergyModel& energy, LinkFunction link) {
             SensorDeployment d{locations_from(high), locations_from(low),
                                threshold,            sigma_w,
                                field,                energy,
                                link};
             validate_deployment(d);
             return d;
           }),
           "high_locs"_a, "low_locs"_a, "threshold"_a, "sigma_w"_a, "field"_a,
           "energy"_a, "link"_a = LinkFunction::Reciprocal)
      .def_property_readonly("n_high", &SensorDeployment::n_high)
      .def_property_readonly("n_low", &SensorDeployment::n_low)
      .def_readwrite("threshold", &SensorDeployment::threshold);

  py::class_<ObservationVector>(m, "ObservationVector")
      .def(py::init([](std::vector<double> y_high, std::vector<double> y_low) {
             return ObservationVector{std::move(y_high), std::move(y_low), false};
           }),
           "y_high"_a, "y_low"_a)
      .def_readonly("y_high", &ObservationVector::y_high)
      .def_readonly("y_low", &ObservationVector::y_low)
      .def_readonly("centered", &ObservationVector::centered);

  py::class_<MomentSet>(m, "MomentSet")
      .def_readonly("cross", &MomentSet::cross)
      .def_readonly("corr", &MomentSet::corr)
      .def_readonly("mean", &MomentSet::mean)
      .def_readonly("prior_var", &MomentSet::prior_var)
      .def_readonly("n_high", &MomentSet::n_high);

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("estimate", &Prediction::estimate)
      .def_readonly("mse", &Prediction::mse);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<double, double, int, double, double, int>(), "x_min"_a,
           "x_max"_a, "nx"_a, "y_min"_a, "y_max"_a, "ny"_a);

  py::class_<ReconstructionGrid>(m, "ReconstructionGrid")
      .def_readonly("xs", &ReconstructionGrid::xs)
      .def_readonly("ys", &ReconstructionGrid::ys)
      .def_readonly("estimates", &ReconstructionGrid::estimates)
      .def_readonly("mse", &ReconstructionGrid::mse);

  py::class_<Query>(m, "Query")
      .def(py::init([](double x, double y, double epsilon) {
             return Query{{x, y}, epsilon};
           }),
           "x"_a, "y"_a, "epsilon"_a);

  py::class_<CEConfig>(m, "CEConfig")
      .def(py::init<>())
      .def_readwrite("samples_per_iter", &CEConfig::samples_per_iter)
      .def_readwrite("elite_fraction", &CEConfig::elite_fraction)
      .def_readwrite("smoothing", &CEConfig::smoothing)
      .def_readwrite("decision_threshold", &CEConfig::decision_threshold)
      .def_readwrite("max_iters", &CEConfig::max_iters)
      .def_readwrite("stall_iters", &CEConfig::stall_iters)
      .def_readwrite("w_high", &CEConfig::w_high)
      .def_readwrite("w_low", &CEConfig::w_low);

  py::class_<ActivationSet>(m, "ActivationSet")
      .def(py::init([](std::vector<bool> high, std::vector<bool> low) {
             return ActivationSet{std::move(high), std::move(low)};
           }),
           "high"_a, "low"_a)
      .def_readonly("high", &ActivationSet::high)
      .def_readonly("low", &ActivationSet::low);

  py::class_<SelectionReport>(m, "SelectionReport")
      .def_property_readonly("is_null", &SelectionReport::is_null)
      .def_property_readonly("activation",
                             [](const SelectionReport& r) -> py::object {
                               if (!r.activation) return py::none();
                               return py::cast(*r.activation);
                             })
      .def_readonly("cost", &SelectionReport::cost)
      .def_readonly("achieved_mse", &SelectionReport::achieved_mse)
      .def_readonly("iterations", &SelectionReport::iterations)
      .def("record_line", [](const SelectionReport& r) { return to_record_line(r); });

  // gaussmath
  m.def("std_normal_pdf", &gaussmath::std_normal_pdf, "z"_a);
  m.def("std_normal_cdf", &gaussmath::std_normal_cdf, "z"_a);
  m.def("hermite_he", &gaussmath::hermite_he, "n"_a, "z"_a);
  m.def("bivariate_pdf",
        [](double a, double b, double rho) {
          return gaussmath::bivariate_pdf({a, b, rho});
        },
        "a"_a, "b"_a, "rho"_a);
  m.def("joint_ccdf",
        [](double a, double b, double rho) {
          return gaussmath::joint_ccdf({a, b, rho});
        },
        "a"_a, "b"_a, "rho"_a);
  m.def("truncated_cross_moment",
        [](double a, double b, double rho) {
          return gaussmath::truncated_cross_moment({a, b, rho});
        },
        "a"_a, "b"_a, "rho"_a);

  // field model
  m.def("kernel_eval",
        [](const py::dict& kernel, std::pair<double, double> x1,
           std::pair<double, double> x2) {
          return kernel_eval(kernel_from_dict(kernel), {x1.first, x1.second},
                             {x2.first, x2.second});
        },
        "kernel"_a, "x1"_a, "x2"_a);
  m.def("covariance_matrix",
        [](const py::dict& kernel, const std::vector<std::pair<double, double>>& pts) {
          const auto locs = locations_from(pts);
          return covariance_matrix(kernel_from_dict(kernel), locs);
        },
        "kernel"_a, "locations"_a);
  m.def("sample_gp",
        [](const GPFieldModel& model, const std::vector<std::pair<double, double>>& pts,
           std::uint64_t seed) {
          std::mt19937_64 rng(seed);
          return sample_gp(model, locations_from(pts), rng);
        },
        "model"_a, "locations"_a, "seed"_a);
  m.def("sample_lgp",
        [](const LGPEnergyModel& model, const std::vector<std::pair<double, double>>& pts,
           std::uint64_t seed) {
          std::mt19937_64 rng(seed);
          return sample_lgp(model, locations_from(pts), rng);
        },
        "model"_a, "locations"_a, "seed"_a);
  m.def("noise_variance_expectation",
        [](const LGPEnergyModel& model, LinkFunction link, std::pair<double, double> x) {
          return noise_variance_expectation(model, link, {x.first, x.second});
        },
        "model"_a, "link"_a, "x"_a);

  // sensors
  m.def("observe_high",
        [](const std::vector<double>& f, const SensorDeployment& d, std::uint64_t seed) {
          std::mt19937_64 rng(seed);
          return observe_high(f, d, rng);
        },
        "f_at_high"_a, "deployment"_a, "seed"_a);
  m.def("observe_low",
        [](const std::vector<double>& f, const std::vector<double>& g,
           const SensorDeployment& d, std::uint64_t seed) {
          std::mt19937_64 rng(seed);
          return observe_low(f, g, d, rng);
        },
        "f_at_low"_a, "g_at_low"_a, "deployment"_a, "seed"_a);
  m.def("center_observations", &center_observations, "observations"_a, "mu_f"_a);

  // moments + prediction
  m.def("assemble_moments",
        [](const SensorDeployment& d, std::pair<double, double> x_star) {
          return assemble_moments(d, {x_star.first, x_star.second});
        },
        "deployment"_a, "x_star"_a);
  m.def("predict", &predict, "moments"_a, "observations"_a, "mu_f"_a);
  m.def("predictive_mse", &predictive_mse, "moments"_a);
  m.def("reconstruct_grid", &reconstruct_grid, "deployment"_a, "observations"_a,
        "grid"_a);
  m.def("rmse", &rmse, "grid"_a, "truth"_a);

  // selection
  m.def("cost_u", &cost_u, "activation"_a, "query"_a, "deployment"_a, "config"_a);
  m.def("ce_select",
        [](const Query& q, const SensorDeployment& d, const CEConfig& c,
           std::uint64_t seed) {
          std::mt19937_64 rng(seed);
          return ce_select(q, d, c, rng);
        },
        "query"_a, "deployment"_a, "config"_a, "seed"_a);
  m.def("exhaustive_select", &exhaustive_select, "query"_a, "deployment"_a,
        "config"_a);

  // ingest
  py::class_<FitResult>(m, "FitResult")
      .def(py::init<>())
      .def_property(
          "kernel",
          [](const FitResult& r) {
            py::dict d;
            d["kind"] = "separable_exponential";
            d["sigma2_x"] = r.kernel.sigma2_x;
            d["len_x"] = r.kernel.len_x;
            d["sigma2_y"] = r.kernel.sigma2_y;
            d["len_y"] = r.kernel.len_y;
            return d;
          },
          [](FitResult& r, const py::dict& d) {
            r.kernel = std::get<SeparableExponential>(kernel_from_dict(d));
          })
      .def_readwrite("nugget", &FitResult::nugget)
      .def_readwrite("log_likelihood", &FitResult::log_likelihood)
      .def_readwrite("converged", &FitResult::converged);

  m.def("fit_separable_mle",
        [](const std::vector<std::pair<double, double>>& pts,
           const std::vector<double>& values, const FitResult& init, int budget) {
          const auto locs = locations_from(pts);
          return fit_separable_mle(locs, values, init, budget);
        },
        "locations"_a, "values"_a, "init"_a, "budget"_a = 2000);
  m.def("parse_storm",
        [](const std::filesystem::path& grid_file,
           const std::filesystem::path& footprint_file) {
          const StormDataset data = parse_storm(grid_file, footprint_file);
          py::dict out;
          std::vector<std::pair<double, double>> pts;
          for (const auto& loc : data.locations()) pts.emplace_back(loc.x, loc.y);
          out["locations"] = pts;
          out["values"] = data.values();
          return out;
        },
        "grid_file"_a, "footprint_file"_a);
}
