#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cascade_dtw/cascade_dtw.hpp"

namespace py = pybind11;
namespace cd = cascade_dtw;

namespace {

cd::WeightVector to_weight(const std::array<double, 3>& w) { return {w[0], w[1], w[2]}; }

std::vector<cd::WeightVector> to_sequence(const std::vector<std::array<double, 3>>& seq) {
  std::vector<cd::WeightVector> out;
  out.reserve(seq.size());
  for (const auto& w : seq) out.push_back(to_weight(w));
  return out;
}

cd::MassFunction mass_from_dict(const cd::Frame& frame, const std::map<std::vector<std::string>, double>& masses) {
  std::map<cd::Subset, double> bits;
  for (const auto& [labels, m] : masses) {
    cd::Subset set = 0;
    for (const auto& l : labels) set |= frame.singleton(l);
    bits[set] += m;
  }
  return cd::MassFunction(frame, std::move(bits));
}

py::dict mass_to_dict(const cd::MassFunction& m) {
  py::dict out;
  for (const auto& [set, mass] : m.focal()) out[py::tuple(py::cast(m.frame().members(set)))] = mass;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DTW distance between propagation networks and k-NN classifiers over it";

  py::register_exception<cd::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<cd::StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<cd::ConflictError>(m, "ConflictError", PyExc_ArithmeticError);
  py::register_exception<cd::ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<cd::WeightVector>(m, "WeightVector")
      .def(py::init<>())
      .def(py::init([](double f, double mention, double r) { return cd::WeightVector{f, mention, r}; }),
           py::arg("follow"), py::arg("mention"), py::arg("retweet"))
      .def_readwrite("follow", &cd::WeightVector::follow)
      .def_readwrite("mention", &cd::WeightVector::mention)
      .def_readwrite("retweet", &cd::WeightVector::retweet)
      .def("valid", &cd::WeightVector::valid)
      .def("as_tuple", [](const cd::WeightVector& w) { return py::make_tuple(w.follow, w.mention, w.retweet); })
      .def(py::self == py::self)
      .def("__repr__", [](const cd::WeightVector& w) {
        std::ostringstream os;
        os << "WeightVector(" << w.follow << ", " << w.mention << ", " << w.retweet << ")";
        return os.str();
      });

  py::class_<cd::Arc>(m, "Arc")
      .def(py::init([](std::string src, std::string dst, std::array<double, 3> w, int rank) {
             return cd::Arc{std::move(src), std::move(dst), to_weight(w), rank};
           }),
           py::arg("src"), py::arg("dst"), py::arg("w"), py::arg("rank"))
      .def_readonly("src", &cd::Arc::src)
      .def_readonly("dst", &cd::Arc::dst)
      .def_readonly("weight", &cd::Arc::weight)
      .def_readonly("rank", &cd::Arc::rank);

  py::class_<cd::PropagationNetwork>(m, "PropagationNetwork")
      .def(py::init<std::string, std::vector<cd::Arc>, std::optional<std::string>, std::vector<std::string>>(),
           py::arg("source"), py::arg("arcs") = std::vector<cd::Arc>{}, py::arg("label") = py::none(),
           py::arg("extra_nodes") = std::vector<std::string>{})
      .def_property_readonly("source", &cd::PropagationNetwork::source)
      .def_property_readonly("label", &cd::PropagationNetwork::label)
      .def_property_readonly("nodes", &cd::PropagationNetwork::nodes)
      .def_property_readonly("arcs", &cd::PropagationNetwork::arcs)
      .def("to_json", &cd::network_to_json)
      .def_static("from_json", &cd::network_from_json);

  py::class_<cd::Dipath>(m, "Dipath")
      .def_readonly("elements", &cd::Dipath::elements)
      .def_readonly("node_trace", &cd::Dipath::node_trace);

  m.def("validate", [](const cd::PropagationNetwork& net) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& v : cd::validate(net)) out.emplace_back(cd::to_string(v.kind), v.detail);
    return out;
  }, "List of (violation kind, detail); empty when the network is valid.");
  m.def("extract_dipaths", &cd::extract_dipaths, py::arg("net"), py::arg("max_dipaths") = cd::kDefaultMaxDipaths);
  m.def("discretize", py::overload_cast<const cd::WeightVector&>(&cd::discretize));
  m.def("discretize_network", py::overload_cast<const cd::PropagationNetwork&>(&cd::discretize));

  py::enum_<cd::ElementDistance>(m, "ElementDistance")
      .value("euclidean", cd::ElementDistance::euclidean)
      .value("manhattan", cd::ElementDistance::manhattan);

  py::class_<cd::DtwConfig>(m, "DtwConfig")
      .def(py::init<>())
      .def_readwrite("element_distance", &cd::DtwConfig::element_distance)
      .def_readwrite("empty_vs_nonempty_distance", &cd::DtwConfig::empty_vs_nonempty_distance)
      .def_readwrite("symmetrize", &cd::DtwConfig::symmetrize)
      .def_readwrite("max_dipaths", &cd::DtwConfig::max_dipaths);

  m.def("delta", &cd::delta, py::arg("a"), py::arg("b"), py::arg("kind") = cd::ElementDistance::euclidean);
  m.def("dtw", [](const std::vector<std::array<double, 3>>& a, const std::vector<std::array<double, 3>>& b,
                  const cd::DtwConfig& cfg) { return cd::dtw(to_sequence(a), to_sequence(b), cfg); },
        py::arg("a"), py::arg("b"), py::arg("cfg") = cd::DtwConfig{});
  m.def("dtw_naive", [](const std::vector<std::array<double, 3>>& a, const std::vector<std::array<double, 3>>& b,
                        const cd::DtwConfig& cfg) { return cd::dtw_naive(to_sequence(a), to_sequence(b), cfg); },
        py::arg("a"), py::arg("b"), py::arg("cfg") = cd::DtwConfig{});
  m.def("prnet_dtw", &cd::prnet_dtw, py::arg("first"), py::arg("second"), py::arg("cfg") = cd::DtwConfig{});

  py::class_<cd::Frame>(m, "Frame")
      .def(py::init<std::vector<std::string>>())
      .def_property_readonly("labels", &cd::Frame::labels);

  py::class_<cd::MassFunction>(m, "MassFunction")
      .def(py::init(&mass_from_dict), py::arg("frame"), py::arg("masses"),
           "masses maps tuples of labels to mass; the empty tuple is the empty set")
      .def_static("vacuous", &cd::MassFunction::vacuous)
      .def_property_readonly("frame", &cd::MassFunction::frame)
      .def("masses", &mass_to_dict)
      .def("conflict", &cd::MassFunction::conflict);

  py::enum_<cd::CombinationRule>(m, "CombinationRule")
      .value("dempster", cd::CombinationRule::dempster)
      .value("conjunctive", cd::CombinationRule::conjunctive)
      .value("disjunctive", cd::CombinationRule::disjunctive);

  m.def("simple_bba", &cd::simple_bba, py::arg("frame"), py::arg("label"), py::arg("alpha"));
  m.def("combine_conjunctive", &cd::combine_conjunctive);
  m.def("combine_dempster", &cd::combine_dempster);
  m.def("combine_disjunctive", &cd::combine_disjunctive);
  m.def("pignistic", [](const cd::MassFunction& mf) {
    const auto p = cd::pignistic(mf);
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < p.size(); ++i) out[mf.frame().labels()[i]] = p[i];
    return out;
  });

  py::class_<cd::LabeledCorpus>(m, "LabeledCorpus")
      .def(py::init([](std::vector<cd::PropagationNetwork> nets) {
        return cd::LabeledCorpus::from_networks(std::move(nets));
      }), "Networks must carry labels.")
      .def("__len__", &cd::LabeledCorpus::size)
      .def("labels", &cd::LabeledCorpus::labels)
      .def("entry_labels", &cd::LabeledCorpus::entry_labels)
      .def("networks", [](const cd::LabeledCorpus& c) {
        std::vector<cd::PropagationNetwork> out;
        for (const auto& e : c) out.push_back(e.network.with_label(e.label));
        return out;
      });

  py::class_<cd::NeighborRecord>(m, "NeighborRecord")
      .def_readonly("train_index", &cd::NeighborRecord::train_index)
      .def_readonly("label", &cd::NeighborRecord::label)
      .def_readonly("distance", &cd::NeighborRecord::distance);

  py::class_<cd::ClassificationResult>(m, "ClassificationResult")
      .def_readonly("predicted", &cd::ClassificationResult::predicted)
      .def_readonly("scores", &cd::ClassificationResult::scores)
      .def_readonly("neighbors", &cd::ClassificationResult::neighbors)
      .def_readonly("tie_broken", &cd::ClassificationResult::tie_broken);

  py::class_<cd::GammaAuto>(m, "GammaAuto").def(py::init<>());

  py::class_<cd::EvidentialParams>(m, "EvidentialParams")
      .def(py::init<>())
      .def_readwrite("alpha0", &cd::EvidentialParams::alpha0)
      .def_readwrite("beta", &cd::EvidentialParams::beta)
      .def_readwrite("gamma", &cd::EvidentialParams::gamma);

  m.def("nearest_neighbors", &cd::nearest_neighbors, py::arg("query"), py::arg("corpus"), py::arg("k"),
        py::arg("cfg") = cd::DtwConfig{});
  m.def("classify_probabilistic", &cd::classify_probabilistic, py::arg("query"), py::arg("corpus"), py::arg("k"),
        py::arg("cfg") = cd::DtwConfig{});
  m.def("classify_evidential", &cd::classify_evidential, py::arg("query"), py::arg("corpus"), py::arg("k"),
        py::arg("cfg") = cd::DtwConfig{}, py::arg("params") = cd::EvidentialParams{},
        py::arg("rule") = cd::CombinationRule::dempster);
  m.def("estimate_gamma", [](const cd::LabeledCorpus& c, const cd::DtwConfig& cfg, int beta) {
    return cd::estimate_gamma(c, cfg, beta).gamma;
  }, py::arg("corpus"), py::arg("cfg") = cd::DtwConfig{}, py::arg("beta") = 1);

  py::class_<cd::ClassProfile>(m, "ClassProfile")
      .def(py::init([](std::string label, std::pair<int, int> depth, std::pair<int, int> branching,
                       std::array<double, 3> means, double noise) {
             return cd::ClassProfile{std::move(label), depth, branching, means, noise};
           }),
           py::arg("label"), py::arg("depth_range"), py::arg("branching_range"), py::arg("weight_means"),
           py::arg("weight_noise"))
      .def_readonly("label", &cd::ClassProfile::label);

  m.def("generate", [](const std::vector<cd::ClassProfile>& profiles, std::size_t n, std::uint64_t seed,
                       double merge) {
    cd::GeneratorOptions options;
    options.merge_probability = merge;
    return cd::generate(profiles, n, seed, options);
  }, py::arg("profiles"), py::arg("n_per_class"), py::arg("seed"), py::arg("merge_probability") = 0.0);

  m.def("read_networks", py::overload_cast<const std::filesystem::path&>(&cd::read_networks));
  m.def("write_networks",
        py::overload_cast<const std::filesystem::path&, const std::vector<cd::PropagationNetwork>&>(
            &cd::write_networks));

  py::enum_<cd::ClassifierKind>(m, "ClassifierKind")
      .value("probabilistic", cd::ClassifierKind::probabilistic)
      .value("evidential", cd::ClassifierKind::evidential);

  py::class_<cd::ClassifierSpec>(m, "ClassifierSpec")
      .def(py::init<>())
      .def_readwrite("kind", &cd::ClassifierSpec::kind)
      .def_readwrite("dtw", &cd::ClassifierSpec::dtw)
      .def_readwrite("evidential", &cd::ClassifierSpec::evidential)
      .def_readwrite("rule", &cd::ClassifierSpec::rule)
      .def_readwrite("discretize", &cd::ClassifierSpec::discretize);

  py::class_<cd::EvalOptions>(m, "EvalOptions")
      .def(py::init<>())
      .def_readwrite("train_fraction", &cd::EvalOptions::train_fraction)
      .def_readwrite("repeats", &cd::EvalOptions::repeats)
      .def_readwrite("seed", &cd::EvalOptions::seed)
      .def_readwrite("stratified", &cd::EvalOptions::stratified)
      .def_readwrite("strict", &cd::EvalOptions::strict)
      .def_readwrite("threads", &cd::EvalOptions::threads);

  py::class_<cd::EvalReport>(m, "EvalReport")
      .def_readonly("classifier", &cd::EvalReport::classifier)
      .def_readonly("k", &cd::EvalReport::k)
      .def_readonly("accuracy", &cd::EvalReport::accuracy)
      .def_readonly("ci_halfwidth", &cd::EvalReport::ci_halfwidth)
      .def_readonly("decisions", &cd::EvalReport::decisions)
      .def_readonly("labels", &cd::EvalReport::labels)
      .def_readonly("confusion", &cd::EvalReport::confusion)
      .def_readonly("split_accuracies", &cd::EvalReport::split_accuracies)
      .def_readonly("runtime_seconds", &cd::EvalReport::runtime_seconds)
      .def("to_json", &cd::report_to_json);

  m.def("split", &cd::split, py::arg("corpus"), py::arg("train_fraction"), py::arg("seed"),
        py::arg("stratified") = false);
  m.def("evaluate", &cd::evaluate, py::arg("corpus"), py::arg("spec"), py::arg("k"),
        py::arg("options") = cd::EvalOptions{});
  m.def("sweep_k", [](const cd::LabeledCorpus& c, const cd::ClassifierSpec& spec, std::vector<std::size_t> ks,
                      const cd::EvalOptions& options) { return cd::sweep_k(c, spec, ks, options); },
        py::arg("corpus"), py::arg("spec"), py::arg("k_values"), py::arg("options") = cd::EvalOptions{});
  m.def("wald_halfwidth", &cd::wald_halfwidth);
}
