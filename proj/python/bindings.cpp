#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dualbbgky/random.hpp"
#include "dualbbgky/scenario.hpp"

namespace py = pybind11;
using namespace dualbbgky;

namespace {

LabelSet labels_from(const std::vector<Label>& v) { return LabelSet(v); }

OperatorSequence seq_from_components(const SystemSpec& spec, const std::vector<Matrix>& comps) {
    const int order = spec.truncation_order();
    if (static_cast<int>(comps.size()) != order + 1)
        throw ValidationError("sequence: expected " + std::to_string(order + 1) + " components");
    OperatorSequence out(spec.site_dim(), order);
    if (comps[0].rows() != 1 || comps[0].cols() != 1)
        throw ValidationError("sequence: component 0 must be a 1x1 scalar");
    out.set_scalar(comps[0](0, 0));
    for (int s = 1; s <= order; ++s)
        out.set_component(s, ManyBodyOperator(LabelSet::range(s), spec.site_dim(),
                                              comps[static_cast<std::size_t>(s)]));
    return out;
}

std::vector<Matrix> seq_to_components(const OperatorSequence& seq) {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(seq.order()) + 1);
    for (int s = 0; s <= seq.order(); ++s) out.push_back(seq.component(s).matrix());
    return out;
}

std::vector<std::vector<std::vector<Label>>> partitions_py(const std::vector<Label>& labels) {
    const auto elems = singles_of(labels_from(labels));
    std::vector<std::vector<std::vector<Label>>> out;
    for_each_partition(std::span<const Element>(elems), [&](const Partition& p) {
        std::vector<std::vector<Label>> blocks;
        for (const auto& block : p.blocks) {
            std::vector<Label> b;
            for (const Element& e : block)
                for (Label l : e.labels()) b.push_back(l);
            blocks.push_back(std::move(b));
        }
        out.push_back(std::move(blocks));
    });
    return out;
}

using SeqTimeFn = OperatorSequence (*)(const SystemSpec&, double, const OperatorSequence&);

// sequence-in, sequence-out wrappers with concrete signatures
auto lift_time(SeqTimeFn fn) {
    return [fn](const SystemSpec& spec, const std::vector<Matrix>& comps, double t) {
        return seq_to_components(fn(spec, t, seq_from_components(spec, comps)));
    };
}

using SeqFn = OperatorSequence (*)(const SystemSpec&, const OperatorSequence&);

auto lift_plain(SeqFn fn) {
    return [fn](const SystemSpec& spec, const std::vector<Matrix>& comps) {
        return seq_to_components(fn(spec, seq_from_components(spec, comps)));
    };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "dense truncated dual-hierarchy engine";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<AbsentPotentialError>(m, "AbsentPotentialError", PyExc_LookupError);
    py::register_exception<NormalizationError>(m, "NormalizationError", PyExc_ArithmeticError);

    // combinatorics
    m.def("stirling2", &stirling2, py::arg("n"), py::arg("k"));
    m.def("bell_number", &bell_number, py::arg("n"));
    m.def("signed_partition_sum", &signed_partition_sum, py::arg("n"));
    m.def("signed_factorial_sum", &signed_factorial_sum, py::arg("n"));
    m.def("set_partitions", &partitions_py, py::arg("labels"),
          "all partitions of the given labels, as lists of blocks");
    m.def(
        "distinct_tuples",
        [](const std::vector<Label>& labels, int n) { return distinct_tuples(labels_from(labels), n); },
        py::arg("labels"), py::arg("n"));

    // system
    py::class_<SystemSpec>(m, "SystemSpec")
        .def(py::init([](int d, int order, const Matrix& h1,
                         const std::vector<std::pair<int, Matrix>>& potentials, double hbar,
                         bool symmetrize_potentials) {
                 SystemSpec::Config config;
                 config.site_dim = d;
                 config.truncation_order = order;
                 config.one_body = h1;
                 config.potentials = potentials;
                 config.hbar = hbar;
                 config.symmetrize_potentials = symmetrize_potentials;
                 return SystemSpec(std::move(config));
             }),
             py::arg("d"), py::arg("N"), py::arg("h1"),
             py::arg("potentials") = std::vector<std::pair<int, Matrix>>{}, py::arg("hbar") = 1.0,
             py::arg("symmetrize_potentials") = false)
        .def_static(
            "preset",
            [](const std::string& name, int order) { return SystemSpec(preset_config(name, order)); },
            py::arg("name"), py::arg("N") = -1)
        .def_property_readonly("d", &SystemSpec::site_dim)
        .def_property_readonly("N", &SystemSpec::truncation_order)
        .def_property_readonly("hbar", &SystemSpec::hbar)
        .def("hamiltonian",
             [](const SystemSpec& spec, int n) { return spec.hamiltonian(n).matrix(); }, py::arg("n"))
        .def("hamiltonian_on",
             [](const SystemSpec& spec, const std::vector<Label>& labels) {
                 return spec.hamiltonian(labels_from(labels)).matrix();
             },
             py::arg("labels"))
        .def("free_variant", &SystemSpec::free_variant);

    // seeded instances
    m.def(
        "random_observable_sequence",
        [](const SystemSpec& spec, std::uint64_t seed) {
            Rng rng(seed);
            return seq_to_components(random_observable_sequence(rng, spec));
        },
        py::arg("spec"), py::arg("seed"));
    m.def(
        "random_state_sequence",
        [](const SystemSpec& spec, std::uint64_t seed) {
            Rng rng(seed);
            return seq_to_components(random_state_sequence(rng, spec));
        },
        py::arg("spec"), py::arg("seed"));

    // sequence-level operations
    m.def("evolve_heisenberg", lift_time(&evolve_heisenberg), py::arg("spec"), py::arg("sequence"),
          py::arg("t"));
    m.def("evolve_vonneumann", lift_time(&evolve_vonneumann), py::arg("spec"), py::arg("sequence"),
          py::arg("t"));
    m.def(
        "a_plus",
        [](const SystemSpec& spec, const std::vector<Matrix>& comps) {
            return seq_to_components(a_plus(seq_from_components(spec, comps)));
        },
        py::arg("spec"), py::arg("sequence"));
    m.def(
        "exp_a_plus",
        [](const SystemSpec& spec, const std::vector<Matrix>& comps, int sign) {
            return seq_to_components(exp_a_plus(seq_from_components(spec, comps), sign));
        },
        py::arg("spec"), py::arg("sequence"), py::arg("sign"));
    m.def(
        "marginal_observables",
        [](const SystemSpec& spec, const std::vector<Matrix>& comps) {
            return seq_to_components(marginal_observables(seq_from_components(spec, comps)));
        },
        py::arg("spec"), py::arg("sequence"));
    m.def("solve_dual_cumulant", lift_time(&solve_dual_cumulant), py::arg("spec"), py::arg("sequence"),
          py::arg("t"));
    m.def("solve_dual_similarity", lift_time(&solve_dual_similarity), py::arg("spec"),
          py::arg("sequence"), py::arg("t"));
    m.def("solve_dual_pair_cumulant", lift_time(&solve_dual_pair_cumulant), py::arg("spec"),
          py::arg("sequence"), py::arg("t"));
    m.def("dual_generator", lift_plain(&dual_generator), py::arg("spec"), py::arg("sequence"));
    m.def("dual_generator_similarity", lift_plain(&dual_generator_similarity), py::arg("spec"),
          py::arg("sequence"));
    m.def("bbgky_group_states", lift_time(&bbgky_group_states), py::arg("spec"), py::arg("sequence"),
          py::arg("t"));
    m.def("bbgky_generator", lift_plain(&bbgky_generator), py::arg("spec"), py::arg("sequence"));
    m.def(
        "marginalize_states",
        [](const SystemSpec& spec, const std::vector<Matrix>& comps) {
            return seq_to_components(marginalize_states(seq_from_components(spec, comps)));
        },
        py::arg("spec"), py::arg("sequence"));

    m.def(
        "dual_cumulant_apply",
        [](const SystemSpec& spec, double t, const std::vector<Label>& cluster,
           const std::vector<Label>& singles, const Matrix& operand) {
            const LabelSet c = labels_from(cluster);
            const ManyBodyOperator op(c, spec.site_dim(), operand);
            return dual_cumulant(spec, t, ClusterArgument(c, labels_from(singles))).apply(op).matrix();
        },
        py::arg("spec"), py::arg("t"), py::arg("cluster"), py::arg("singles"), py::arg("operand"),
        "apply the mixed dual cumulant to an operand living on the cluster labels");

    m.def(
        "mean_value",
        [](const SystemSpec& spec, const std::vector<Matrix>& g, const std::vector<Matrix>& f) {
            return mean_value(seq_from_components(spec, g), seq_from_components(spec, f));
        },
        py::arg("spec"), py::arg("observables"), py::arg("states"));
    m.def(
        "grand_canonical_mean",
        [](const SystemSpec& spec, const std::vector<Matrix>& a, const std::vector<Matrix>& d) {
            return grand_canonical_mean(seq_from_components(spec, a), seq_from_components(spec, d));
        },
        py::arg("spec"), py::arg("observables"), py::arg("states"));
    m.def(
        "gamma_norm",
        [](const SystemSpec& spec, const std::vector<Matrix>& g, double gamma) {
            return gamma_norm(seq_from_components(spec, g), gamma);
        },
        py::arg("spec"), py::arg("sequence"), py::arg("gamma"));

    // harness
    m.def("list_checks", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& def : check_registry()) out.emplace_back(def.id, def.anchor);
        return out;
    });
    m.def("preset_names", &preset_names);
    m.def(
        "run_scenario_json",
        [](const std::string& config) {
            const Scenario scenario = scenario_from_json(nlohmann::json::parse(config));
            return emit_report(run_scenario(scenario), ReportFormat::Json);
        },
        py::arg("config_json"), "run a scenario given as a JSON string; returns the JSON report");
    m.def(
        "validate_scenario_json",
        [](const std::string& config) {
            scenario_from_json(nlohmann::json::parse(config));
        },
        py::arg("config_json"));
}
