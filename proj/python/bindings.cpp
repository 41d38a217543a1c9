#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qam/classical.hpp"
#include "qam/error.hpp"
#include "qam/meanfield.hpp"
#include "qam/memory.hpp"
#include "qam/patterns.hpp"
#include "qam/retrieval.hpp"
#include "qam/thermo.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

qam::PatternSet to_set(const std::vector<std::string>& patterns) {
    std::vector<qam::Pattern> v;
    v.reserve(patterns.size());
    for (const auto& s : patterns) v.push_back(qam::Pattern::parse(s));
    return qam::PatternSet(std::move(v));
}

std::optional<qam::Mask> to_mask(const std::optional<std::vector<std::size_t>>& known, std::size_t n) {
    if (!known) return std::nullopt;
    return qam::Mask(*known, n);
}

qam::ThermoMethod to_method(const std::optional<std::string>& method, std::size_t n) {
    return method ? qam::parse_thermo_method(*method) : qam::default_thermo_method(n);
}

py::dict amplitudes(const qam::SparseState& state) {
    py::dict d;
    for (const auto& [pat, amp] : qam::memory_amplitudes(state)) d[py::str(pat.str())] = amp;
    return d;
}

py::dict distribution(const qam::Distribution& dist) {
    py::dict probs;
    for (const auto& [pat, p] : dist.probs) probs[py::str(pat.str())] = p;
    return py::dict("p_rec"_a = dist.p_rec, "Z"_a = dist.Z, "probs"_a = probs);
}

py::dict thermo_point(const qam::ThermoPoint& pt) {
    return py::dict("b"_a = pt.b, "d_over_n"_a = pt.d_over_n, "n"_a = pt.n, "Z_ratio"_a = pt.Z_ratio,
                    "log_Z_ratio"_a = pt.log_Z_ratio, "F"_a = pt.F, "U"_a = pt.U, "S"_a = pt.S,
                    "D_eff"_a = pt.D_eff);
}

py::dict fixed_point(const qam::FixedPointResult& r) {
    return py::dict("m"_a = r.x.m, "r"_a = r.x.r, "converged"_a = r.converged, "singular"_a = r.singular,
                    "iterations"_a = r.iterations);
}

qam::MfParams mf_params(double alpha, double Jt, double g_over_J, double M_ext) {
    return {alpha, Jt, g_over_J, M_ext};
}

}  // namespace

PYBIND11_MODULE(_qam, m) {
    m.doc() = "Quantum associative memory: storage, retrieval, thermodynamics and mean-field phases";

    py::register_exception<qam::NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def("hamming", [](const std::string& a, const std::string& b) {
        return qam::hamming(qam::Pattern::parse(a), qam::Pattern::parse(b));
    });

    m.def(
        "build_memory",
        [](const std::vector<std::string>& patterns) {
            const auto build = qam::build_memory_operator(to_set(patterns));
            return py::dict("gate_count"_a = build.gate_count, "amplitudes"_a = amplitudes(build.final_state));
        },
        "patterns"_a, "Run the memory operator from |0> and return the stored amplitudes.");

    m.def("memory_gate_count", &qam::memory_gate_count, "p"_a, "n"_a);

    m.def(
        "store_sequential",
        [](const std::vector<std::string>& patterns) {
            const auto s = qam::store_sequential(to_set(patterns));
            return py::dict("gate_count"_a = s.gate_count, "amplitudes"_a = amplitudes(s.state));
        },
        "patterns"_a);

    m.def(
        "dual_state", [](const std::vector<std::string>& patterns) { return amplitudes(qam::build_dual_state(to_set(patterns))); },
        "patterns"_a);

    m.def(
        "analytic_distribution",
        [](const std::vector<std::string>& patterns, const std::string& input, std::size_t b,
           const std::optional<std::vector<std::size_t>>& mask) {
            const auto in = qam::Pattern::parse(input);
            return distribution(qam::analytic_distribution(to_set(patterns), in, b, to_mask(mask, in.size())));
        },
        "patterns"_a, "input"_a, "b"_a, "mask"_a = py::none());

    m.def(
        "simulated_distribution",
        [](const std::vector<std::string>& patterns, const std::string& input, std::size_t b, bool use_input_register,
           const std::optional<std::vector<std::size_t>>& mask) {
            const auto in = qam::Pattern::parse(input);
            const auto sim = qam::simulated_distribution(to_set(patterns), in, b, use_input_register,
                                                         to_mask(mask, in.size()));
            auto d = distribution(sim.dist);
            d["spurious_probability"] = sim.spurious_probability;
            return d;
        },
        "patterns"_a, "input"_a, "b"_a, "use_input_register"_a = true, "mask"_a = py::none());

    m.def(
        "retrieve",
        [](const std::vector<std::string>& patterns, const std::string& input, std::size_t b, std::size_t T,
           const std::string& mode, std::uint64_t seed, const std::optional<std::vector<std::size_t>>& mask) {
            const auto in = qam::Pattern::parse(input);
            qam::RetrievalConfig cfg;
            cfg.b = b;
            cfg.T = T;
            cfg.mode = qam::parse_mode(mode);
            cfg.mask = to_mask(mask, in.size());
            const auto r = qam::retrieve(to_set(patterns), in, cfg, seed);
            return py::dict("recognized"_a = r.recognized, "attempts"_a = r.attempts,
                            "output"_a = r.output ? py::object(py::str(r.output->str())) : py::object(py::none()),
                            "p_rec"_a = r.analytic_p_rec, "gates_executed"_a = r.gates_executed);
        },
        "patterns"_a, "input"_a, "b"_a = 1, "T"_a = 1, "mode"_a = "repeat", "seed"_a = 0, "mask"_a = py::none());

    m.def(
        "amplitude_amplify",
        [](const std::vector<std::string>& patterns, const std::string& input, std::size_t b, long iterations) {
            const auto r = qam::amplitude_amplify(to_set(patterns), qam::Pattern::parse(input), b, iterations);
            return py::dict("success_probability"_a = r.success_probability, "theta"_a = r.theta,
                            "optimal_iterations"_a = r.optimal_iterations);
        },
        "patterns"_a, "input"_a, "b"_a, "iterations"_a);

    m.def(
        "complexity_estimate",
        [](std::uint64_t p, std::uint64_t n, std::uint64_t b, std::uint64_t T, const std::string& mode) {
            return qam::complexity_estimate(p, n, b, T, qam::parse_mode(mode));
        },
        "p"_a, "n"_a, "b"_a, "T"_a, "mode"_a = "repeat");

    m.def(
        "recognition_lower_bound",
        [](std::size_t p, std::size_t n, std::size_t b) {
            const auto r = qam::recognition_lower_bound(p, n, b);
            return py::dict("bound"_a = r.bound, "large_n_estimate"_a = r.large_n_estimate);
        },
        "p"_a, "n"_a, "b"_a);

    m.def("energy_level", &qam::energy_level, "d"_a, "n"_a);

    m.def(
        "partition_avg",
        [](double b, std::size_t d, std::size_t n, const std::optional<std::string>& method) {
            return qam::partition_avg(b, d, n, to_method(method, n));
        },
        "b"_a, "d"_a, "n"_a, "method"_a = py::none());

    m.def(
        "potentials",
        [](double b, std::size_t d, std::size_t n, const std::optional<std::string>& method) {
            return thermo_point(qam::potentials(b, d, n, to_method(method, n)));
        },
        "b"_a, "d"_a, "n"_a, "method"_a = py::none());

    m.def(
        "effective_distance",
        [](double b, std::size_t d, std::size_t n, const std::optional<std::string>& method) {
            return qam::effective_distance(b, d, n, to_method(method, n));
        },
        "b"_a, "d"_a, "n"_a, "method"_a = py::none());

    m.def(
        "tune",
        [](double epsilon, double nu, std::size_t n, const std::optional<std::string>& method) {
            const auto t = qam::tune(epsilon, nu, n, to_method(method, n));
            return py::dict("b"_a = t.b, "T_repeat"_a = t.T_repeat, "T_amplified"_a = t.T_amplified,
                            "achieved_D"_a = t.achieved_D);
        },
        "epsilon"_a, "nu"_a, "n"_a, "method"_a = py::none());

    m.def(
        "scan_transition",
        [](double d_over_n, std::size_t n, const std::vector<double>& b_grid, const std::optional<std::string>& method,
           unsigned threads) {
            const auto scan = qam::scan_transition(d_over_n, n, b_grid, to_method(method, n), threads);
            py::list rows;
            for (const auto& row : scan.rows) {
                if (!row.error.empty()) {
                    rows.append(py::dict("b"_a = row.point.b, "error"_a = row.error));
                    continue;
                }
                auto d = thermo_point(row.point);
                d["S_rescaled"] = row.S_rescaled;
                rows.append(d);
            }
            return py::dict("rows"_a = rows, "b_crossover"_a = scan.b_crossover);
        },
        "d_over_n"_a, "n"_a, "b_grid"_a, "method"_a = py::none(), "threads"_a = 1);

    m.def(
        "solve_single", [](double Jt, double g_over_J, double M_ext) { return qam::solve_single(Jt, g_over_J, M_ext); },
        "Jt"_a, "g_over_J"_a = 0.0, "M_ext"_a = 0.0);

    m.def(
        "iterate_finite",
        [](double alpha, double Jt, double m0, double r0, double g_over_J, double M_ext) {
            return fixed_point(qam::iterate_finite(mf_params(alpha, Jt, g_over_J, M_ext), {m0, r0}));
        },
        "alpha"_a, "Jt"_a, "m0"_a = 1.0, "r0"_a = 0.1, "g_over_J"_a = 0.0, "M_ext"_a = 0.0);

    m.def(
        "classify_phase",
        [](double alpha, double Jt) {
            const auto cell = qam::classify_phase(mf_params(alpha, Jt, 0.0, 0.0));
            py::list probes;
            for (const auto& p : cell.probes) {
                auto d = fixed_point(p.result);
                d["init"] = py::make_tuple(p.init.m, p.init.r);
                probes.append(d);
            }
            return py::dict("phase"_a = qam::to_string(cell.phase), "probes"_a = probes);
        },
        "alpha"_a, "Jt"_a);

    m.def(
        "scan_phase_diagram",
        [](const std::vector<double>& alpha_grid, const std::vector<double>& Jt_grid, unsigned threads) {
            const auto diag = qam::scan_phase_diagram(alpha_grid, Jt_grid, threads);
            std::vector<std::vector<std::string>> phases(alpha_grid.size());
            for (std::size_t i = 0; i < alpha_grid.size(); ++i)
                for (std::size_t j = 0; j < Jt_grid.size(); ++j)
                    phases[i].push_back(qam::to_string(diag.at(i, j).phase));
            return py::dict("phases"_a = phases, "max_retrieval_alpha"_a = diag.max_retrieval_alpha,
                            "boundary"_a = diag.boundary);
        },
        "alpha_grid"_a, "Jt_grid"_a, "threads"_a = 1);

    m.def(
        "hebb",
        [](const std::vector<std::string>& patterns) {
            const auto net = qam::hebb(to_set(patterns));
            std::vector<std::vector<double>> w(net.size());
            for (std::size_t i = 0; i < net.size(); ++i)
                for (std::size_t j = 0; j < net.size(); ++j) w[i].push_back(net.weight(i, j));
            return w;
        },
        "patterns"_a);

    m.def(
        "energy",
        [](const std::vector<std::string>& patterns, const std::vector<int>& spins) {
            return qam::energy(qam::hebb(to_set(patterns)), spins);
        },
        "patterns"_a, "spins"_a);

    m.def(
        "capacity_experiment",
        [](std::size_t n, const std::vector<double>& alpha_grid, std::size_t trials, double corruption,
           std::uint64_t seed, unsigned threads) {
            py::list out;
            for (const auto& r : qam::capacity_experiment(n, alpha_grid, trials, corruption, seed, threads))
                out.append(py::dict("alpha"_a = r.alpha, "p"_a = r.p, "trials"_a = r.trials,
                                    "mean_overlap"_a = r.mean_overlap, "std_overlap"_a = r.std_overlap));
            return out;
        },
        "n"_a, "alpha_grid"_a, "trials"_a = 20, "corruption"_a = 0.05, "seed"_a = 0, "threads"_a = 1);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
