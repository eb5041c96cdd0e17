#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "habit/model.hpp"
#include "habit/prob.hpp"
#include "habit/snapshot.hpp"
#include "habit/task_graph.hpp"
#include "habit/trace.hpp"

namespace py = pybind11;

PYBIND11_MODULE(habitmodel, m) {
  m.doc() = "Online, incremental model of habitual action sequences";

  m.def("evidence_db", &habit::evidence_db, py::arg("p"),
        "Log-odds of a probability in decibans: 10*log10(p/(1-p)).");
  m.def("display_db", &habit::display_db, py::arg("evidence"),
        "Evidence rounded to integer dB and clamped to [-100, 100].");
  m.def("bayes_posterior", &habit::bayes_posterior, py::arg("prior"), py::arg("tpr"),
        py::arg("fpr"), "Posterior P(A|B) from P(A), P(B|A) and P(B|not A).");

  m.def("parse_trace", &habit::parse_trace, py::arg("text"),
        "Parse trace text (one space-separated sequence per line, '//' comments).");

  py::register_exception<habit::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<habit::SnapshotError>(m, "SnapshotError", PyExc_ValueError);

  py::class_<habit::PathPrediction>(m, "PathPrediction",
                                    "One scored continuation: its tokens, per-step conditional "
                                    "probabilities, joint probability and evidence in dB.")
      .def_readonly("tokens", &habit::PathPrediction::tokens)
      .def_readonly("step_probs", &habit::PathPrediction::step_probs)
      .def_readonly("joint", &habit::PathPrediction::joint)
      .def_readonly("evidence", &habit::PathPrediction::evidence)
      .def_readonly("complete", &habit::PathPrediction::complete)
      .def("__repr__", [](const habit::PathPrediction& p) {
        return "<PathPrediction " + habit::format_path_row(p) + ">";
      });

  py::class_<habit::Model>(m, "Model",
                           "Decayed-count sequence model. Learning is one pass, one sequence "
                           "at a time; raw sequences are never retained.")
      .def(py::init([](double window, std::optional<std::uint32_t> order, double reserve) {
             return habit::Model(habit::ModelParams{window, order, reserve});
           }),
           py::arg("window") = 200.0, py::arg("order") = std::nullopt,
           py::arg("reserve") = 0.5,
           "window: analysis window in events (math.inf = never forget); "
           "order: Markov order (None = unbounded); reserve: novelty mass.")
      .def("ingest", &habit::Model::ingest, py::arg("sequence"),
           "Learn one complete sequence of token names.")
      .def("score", &habit::Model::score, py::arg("prompt"), py::arg("continuation"),
           "Chain-rule score of a continuation after a prompt.")
      .def("predict", &habit::Model::predict, py::arg("prompt") = std::vector<std::string>{},
           py::arg("max_results") = std::size_t{16}, py::arg("p_min") = 0.001,
           "Ranked complete continuations of the prompt.")
      .def("export_dot",
           [](const habit::Model& model, const std::vector<std::string>& prompt,
              std::size_t max_paths, double p_min, std::size_t highlights) {
             return habit::to_dot(habit::extract_task_graph(model, prompt, max_paths, p_min),
                                  highlights);
           },
           py::arg("prompt") = std::vector<std::string>{},
           py::arg("max_paths") = std::size_t{16}, py::arg("p_min") = 0.001,
           py::arg("highlights") = std::size_t{3},
           "GraphViz DOT rendering of the merged prediction graph.")
      .def("to_snapshot", [](const habit::Model& model) { return habit::to_snapshot_text(model); },
           "Canonical JSON snapshot of the complete model state.")
      .def_static("from_snapshot",
                  [](const std::string& text) { return habit::from_snapshot_text(text); },
                  py::arg("text"), "Restore a model from snapshot text.")
      .def_property_readonly("model_size", &habit::Model::model_size,
                             "Stored (context, outcome) entries across all ranks.")
      .def_property_readonly("max_rank", &habit::Model::max_rank,
                             "Deepest learned rank (longest ingested sequence).")
      .def_property_readonly("sequence_count", &habit::Model::sequence_count,
                             "Event clock: number of sequences ingested.")
      .def_property_readonly("window",
                             [](const habit::Model& model) { return model.params().window; })
      .def_property_readonly("order",
                             [](const habit::Model& model) { return model.params().order; })
      .def_property_readonly("reserve",
                             [](const habit::Model& model) { return model.params().reserve; })
      .def("__repr__", [](const habit::Model& model) {
        return "<Model size=" + std::to_string(model.model_size()) +
               " max_rank=" + std::to_string(model.max_rank()) +
               " clock=" + std::to_string(model.sequence_count()) + ">";
      });
}
