/* Copyright 2026 The dynloc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dynloc/benchmark.hpp"
#include "dynloc/cli.hpp"
#include "dynloc/contrastive_losses.hpp"
#include "dynloc/dataset.hpp"
#include "dynloc/embedding_geometry.hpp"
#include "dynloc/kernel_weights.hpp"
#include "dynloc/nn_schedule.hpp"
#include "dynloc/readout.hpp"

namespace py = pybind11;
using namespace dynloc;

namespace {

using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

KernelSpec gaussian(double sigma) {
  KernelSpec k{KernelKind::gaussian, sigma};
  k.validate();
  return k;
}

IndexMatrix neighbors_array(const NeighborSets& sets) {
  IndexMatrix out(sets.anchors(), sets.count());
  for (Index i = 0; i < sets.anchors(); ++i) {
    const auto row = sets.of(i);
    for (Index c = 0; c < sets.count(); ++c) out(i, c) = row[static_cast<std::size_t>(c)];
  }
  return out;
}

py::tuple loss(const Matrix& raw, const std::vector<double>& labels, const std::string& variant,
               Index nn_count, double sigma, double temperature, const std::string& distance_norm,
               const std::string& nn_space, const std::string& reduction,
               const std::optional<Matrix>& input_points) {
  LossConfig c;
  c.variant = parse_loss_variant(variant);
  c.kernel = gaussian(sigma);
  c.temperature = temperature;
  c.distance_norm = parse_distance_norm(distance_norm);
  c.nn_space = parse_neighbor_space(nn_space);
  if (reduction == "sum") {
    c.reduction = Reduction::sum;
  } else if (reduction == "mean") {
    c.reduction = Reduction::mean;
  } else {
    throw ConfigError("unknown reduction: " + reduction);
  }
  const LossOutput out =
      loss_with_gradient(c, raw, labels, nn_count, input_points ? &*input_points : nullptr);
  return py::make_tuple(out.value, out.grad_raw);
}

py::dict synthetic(Index n, Index feature_dim, Index informative_dims, double noise_std,
                   std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.feature_dim = feature_dim;
  spec.informative_dims = informative_dims;
  spec.noise_std = noise_std;
  const Dataset d = generate_synthetic(spec, seed);
  py::dict out;
  out["features"] = d.features;
  out["labels"] = d.labels;
  out["ids"] = d.ids;
  return out;
}

std::string benchmark_json(const Matrix& features, const std::vector<double>& labels,
                           const std::vector<std::string>& variants,
                           const std::vector<std::uint64_t>& seeds, int epochs, int batch_size,
                           double learning_rate, int nn_final, const std::vector<int>& hidden,
                           int embedding_dim, int threads) {
  Dataset data;
  data.features = features;
  data.labels = labels;
  for (std::size_t i = 0; i < labels.size(); ++i) data.ids.push_back("r" + std::to_string(i));
  data.validate();
  BenchmarkConfig c;
  c.train.epochs = epochs;
  c.train.batch_size = batch_size;
  c.train.nn_final = nn_final;
  c.optim.learning_rate = learning_rate;
  c.encoder.input_dim = static_cast<int>(features.cols());
  c.encoder.hidden = hidden;
  c.encoder.output_dim = embedding_dim;
  c.seeds = seeds;
  c.threads = threads;
  std::vector<LossVariant> parsed;
  for (const auto& v : variants) parsed.push_back(parse_loss_variant(v));
  py::gil_scoped_release release;
  return to_json(benchmark(data, parsed, c)).dump();
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_dynloc, m) {
  m.doc() = "Contrastive regression losses with dynamic localized repulsion";

  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  static py::exception<ParseError> parse(m, "ParseError", PyExc_ValueError);
  static py::exception<ContractError> contract(m, "ContractError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericalError& e) {
      numerical(e.what());
    } catch (const ParseError& e) {
      parse(e.what());
    } catch (const ContractError& e) {
      contract(e.what());
    }
  });

  m.def("kernel_value", [](double delta, double sigma) { return kernel_value(delta, gaussian(sigma)); },
        py::arg("delta"), py::arg("sigma") = 2.0);
  m.def("positiveness_matrix",
        [](const std::vector<double>& labels, double sigma) {
          return positiveness_matrix(labels, gaussian(sigma));
        },
        py::arg("labels"), py::arg("sigma") = 2.0);

  m.def("l2_normalize", &l2_normalize, py::arg("raw"));
  m.def("similarity_matrix", &similarity_matrix, py::arg("unit"), py::arg("temperature") = 0.1);
  m.def("distance_matrix",
        [](const Matrix& points, const std::string& norm) {
          return distance_matrix(points, parse_distance_norm(norm));
        },
        py::arg("points"), py::arg("norm") = "manhattan");
  m.def("select_neighbors",
        [](const Matrix& distances, Index count) {
          return neighbors_array(select_neighbors(distances, count));
        },
        py::arg("distances"), py::arg("count"));

  m.def("neighbors_at_epoch",
        [](int batch_size, int nn_final, int step_size, int max_epochs, int epoch) {
          return neighbors_at_epoch(ScheduleConfig{batch_size, nn_final, step_size, max_epochs},
                                    epoch);
        },
        py::arg("batch_size"), py::arg("nn_final"), py::arg("step_size"), py::arg("max_epochs"),
        py::arg("epoch"));

  m.def("loss_with_gradient", &loss, py::arg("raw"), py::arg("labels"),
        py::arg("variant") = "dynlocrep", py::arg("nn_count") = 14, py::arg("sigma") = 2.0,
        py::arg("temperature") = 0.1, py::arg("distance_norm") = "manhattan",
        py::arg("nn_space") = "embedding", py::arg("reduction") = "sum",
        py::arg("input_points") = py::none(),
        "Returns (value, gradient with respect to the raw embeddings).");

  m.def("generate_synthetic", &synthetic, py::arg("n") = 500, py::arg("feature_dim") = 16,
        py::arg("informative_dims") = 8, py::arg("noise_std") = 0.1, py::arg("seed") = 0);

  m.def("ridge_fit",
        [](const Matrix& x, const std::vector<double>& labels, double lambda) {
          const RidgeModel model = ridge_fit(x, labels, RidgeConfig{lambda});
          return py::make_tuple(model.coefficients, model.intercept);
        },
        py::arg("x"), py::arg("labels"), py::arg("lam") = 1.0,
        "Returns (coefficients, intercept).");
  m.def("mae",
        [](const std::vector<double>& p, const std::vector<double>& t) { return mae(p, t); },
        py::arg("predictions"), py::arg("truth"));

  m.def("_benchmark_json", &benchmark_json, py::arg("features"), py::arg("labels"),
        py::arg("variants"), py::arg("seeds"), py::arg("epochs"), py::arg("batch_size"),
        py::arg("learning_rate"), py::arg("nn_final"), py::arg("hidden"),
        py::arg("embedding_dim"), py::arg("threads"));
  m.def("run_cli", &cli, py::arg("args"),
        "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
