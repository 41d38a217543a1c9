#include "qam/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qam/classical.hpp"
#include "qam/error.hpp"
#include "qam/io.hpp"
#include "qam/meanfield.hpp"
#include "qam/memory.hpp"
#include "qam/parallel.hpp"
#include "qam/patterns.hpp"
#include "qam/retrieval.hpp"
#include "qam/thermo.hpp"

namespace qam {

namespace {

using ojson = nlohmann::ordered_json;

struct RunConfig {
    std::string patterns;
    std::string input;
    std::optional<std::size_t> corrupt;
    std::size_t target = 0;
    std::string mask;
    std::size_t b = 1;
    std::size_t T = 1;
    std::string mode = "repeat";
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    bool dry_run = false;
    unsigned threads = default_thread_count();

    double d_over_n = 0.01;
    std::size_t n = 8'000'000;
    std::string b_grid = "0.01:100000:36";
    std::string method;
    double epsilon = 0.01;
    double nu = 0.992;

    std::string alpha_grid;
    std::string jt_grid = "0.2:12:60";

    std::size_t neurons = 500;
    std::size_t trials = 20;
    double corruption = 0.05;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("cannot parse number '" + item + "' in grid '" + text + "'");
        }
    }
    if (v.empty()) throw ValidationError("grid '" + text + "' is empty");
    return v;
}

/// "lo:hi:count" (spacing chosen by the caller) or a comma separated list.
std::vector<double> parse_grid(const std::string& text, bool logarithmic) {
    if (text.find(':') == std::string::npos) return parse_list(text);
    std::string spec = text;
    std::replace(spec.begin(), spec.end(), ':', ',');
    const auto parts = parse_list(spec);
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
        throw ValidationError("grid range must look like lo:hi:count, got '" + text + "'");
    const auto count = static_cast<std::size_t>(parts[2]);
    if (logarithmic) return log_grid(parts[0], parts[1], count);
    if (count == 1) return {parts[0]};
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::round((parts[0] + (parts[1] - parts[0]) * static_cast<double>(i) / static_cast<double>(count - 1)) *
                          1e12) /
               1e12;
    return g;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw ValidationError("cannot open output file " + path);
        }
        os_ = path.empty() ? &fallback : &file_;
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::string require_format(const std::string& format, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
    const std::string f = format.empty() ? fallback : format;
    for (const char* a : allowed)
        if (f == a) return f;
    throw ValidationError("format '" + f + "' is not supported by this command");
}

PatternSet load_patterns(const RunConfig& cfg) {
    if (cfg.patterns.empty()) throw ValidationError("--patterns is required");
    return read_pattern_file(cfg.patterns);
}

Pattern resolve_input(const RunConfig& cfg, const PatternSet& set) {
    if (!cfg.input.empty() && cfg.corrupt) throw ValidationError("use either --input or --corrupt, not both");
    if (!cfg.input.empty()) return Pattern::parse(cfg.input);
    if (cfg.corrupt) {
        if (cfg.target >= set.size()) throw ValidationError("--target is not a stored pattern index");
        Rng rng(derive_seed(cfg.seed, 0));
        return corrupt(set[cfg.target], *cfg.corrupt, rng);
    }
    throw ValidationError("--input or --corrupt is required");
}

std::optional<Mask> resolve_mask(const RunConfig& cfg, std::size_t n) {
    if (cfg.mask.empty()) return std::nullopt;
    return Mask::parse(cfg.mask, n);
}

std::string distribution_csv(const Distribution& d) {
    std::string out = "pattern,prob\n";
    for (const auto& [pat, prob] : d.probs) out += pat.str() + ',' + format_double(prob) + '\n';
    return out;
}

int cmd_store(const RunConfig& cfg, std::ostream& out) {
    const auto set = load_patterns(cfg);
    const auto fmt = require_format(cfg.format, "text", {"text", "json"});
    Output o(cfg.out, out);
    if (cfg.dry_run) {
        const auto count = memory_gate_count(set.size(), set.width());
        if (fmt == "json")
            o.stream() << ojson{{"n", set.width()}, {"p", set.size()}, {"gate_count", count}}.dump(2) << '\n';
        else
            o.stream() << "gates: " << count << '\n';
        return 0;
    }
    const auto build = build_memory_operator(set);
    const bool amps = set.width() <= 8;
    if (fmt == "json") {
        o.stream() << memory_build_json(build, amps);
        return 0;
    }
    o.stream() << "gates: " << build.gate_count << '\n';
    if (amps)
        for (const auto& [pat, amp] : memory_amplitudes(build.final_state))
            o.stream() << pat.str() << ' ' << format_double(amp.real()) << ' ' << format_double(amp.imag()) << '\n';
    return 0;
}

int cmd_distribution(const RunConfig& cfg, std::ostream& out) {
    const auto set = load_patterns(cfg);
    const auto input = resolve_input(cfg, set);
    const auto fmt = require_format(cfg.format, "json", {"json", "csv"});
    const auto dist = analytic_distribution(set, input, cfg.b, resolve_mask(cfg, set.width()));
    Output o(cfg.out, out);
    o.stream() << (fmt == "json" ? distribution_json(dist, cfg.b) : distribution_csv(dist));
    return 0;
}

int cmd_retrieve(const RunConfig& cfg, std::ostream& out) {
    const auto set = load_patterns(cfg);
    const auto input = resolve_input(cfg, set);
    const auto fmt = require_format(cfg.format, "json", {"json", "csv"});
    RetrievalConfig rc;
    rc.b = cfg.b;
    rc.T = cfg.T;
    rc.mode = parse_mode(cfg.mode);
    rc.mask = resolve_mask(cfg, set.width());
    const auto rep = retrieve(set, input, rc, cfg.seed);
    Output o(cfg.out, out);
    if (fmt == "json") {
        o.stream() << retrieval_report_json(rep);
    } else {
        o.stream() << "recognized,attempts,output,p_rec\n"
                   << (rep.recognized ? "true" : "false") << ',' << rep.attempts << ','
                   << (rep.output ? rep.output->str() : "") << ',' << format_double(rep.analytic_p_rec) << '\n';
    }
    return 0;
}

ThermoMethod resolve_method(const RunConfig& cfg) {
    return cfg.method.empty() ? default_thermo_method(cfg.n) : parse_thermo_method(cfg.method);
}

int cmd_thermo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto fmt = require_format(cfg.format, "csv", {"csv", "json"});
    const auto scan = scan_transition(cfg.d_over_n, cfg.n, parse_grid(cfg.b_grid, true), resolve_method(cfg), cfg.threads);
    Output o(cfg.out, out);
    if (fmt == "csv") {
        o.stream() << scan_csv(scan);
    } else {
        auto rows = ojson::array();
        for (const auto& r : scan.rows) {
            ojson row{{"b", r.point.b},     {"d_over_n", r.point.d_over_n}, {"n", r.point.n},
                      {"Z_ratio", r.point.Z_ratio}, {"F", r.point.F},       {"U", r.point.U},
                      {"S", r.point.S},     {"S_rescaled", r.S_rescaled},   {"D_eff", r.point.D_eff}};
            if (!r.error.empty()) row["error"] = r.error;
            rows.push_back(std::move(row));
        }
        o.stream() << rows.dump(2) << '\n';
    }
    if (scan.b_crossover)
        err << "crossover b: " << format_double(*scan.b_crossover) << '\n';
    else
        err << "crossover b: not on grid\n";
    return 0;
}

int cmd_tune(const RunConfig& cfg, std::ostream& out) {
    const auto fmt = require_format(cfg.format, "text", {"text", "json"});
    const auto res = tune(cfg.epsilon, cfg.nu, cfg.n, resolve_method(cfg));
    Output o(cfg.out, out);
    if (fmt == "json") {
        o.stream() << ojson{{"b", res.b},
                            {"T_repeat", res.T_repeat},
                            {"T_amplified", res.T_amplified},
                            {"achieved_D", res.achieved_D}}
                          .dump(2)
                   << '\n';
    } else {
        o.stream() << "b: " << res.b << "\nT_repeat: " << res.T_repeat << "\nT_amplified: " << res.T_amplified
                   << "\nD_eff: " << format_double(res.achieved_D) << '\n';
    }
    return 0;
}

int cmd_phase(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto fmt = require_format(cfg.format, "csv", {"csv", "json"});
    const auto alphas = parse_grid(cfg.alpha_grid.empty() ? "0.02:1.2:60" : cfg.alpha_grid, false);
    const auto jts = parse_grid(cfg.jt_grid, false);
    const auto dia = scan_phase_diagram(alphas, jts, cfg.threads);
    Output o(cfg.out, out);
    if (fmt == "csv") {
        o.stream() << phase_csv(dia);
    } else {
        auto cells = ojson::array();
        for (const auto& c : dia.cells) {
            ojson cell{{"alpha", c.params.alpha}, {"Jt", c.params.Jt}, {"phase", to_string(c.phase)}};
            auto probes = ojson::array();
            for (const auto& p : c.probes)
                probes.push_back({{"m0", p.init.m},
                                  {"r0", p.init.r},
                                  {"m", p.result.x.m},
                                  {"r", p.result.x.r},
                                  {"converged", p.result.converged}});
            cell["probes"] = std::move(probes);
            cells.push_back(std::move(cell));
        }
        o.stream() << cells.dump(2) << '\n';
    }
    std::size_t nearest = 0;
    for (std::size_t j = 1; j < jts.size(); ++j)
        if (std::abs(jts[j] - 1.0) < std::abs(jts[nearest] - 1.0)) nearest = j;
    const auto& b1 = dia.boundary[nearest];
    err << "max retrieval alpha at Jt=" << format_double(jts[nearest]) << ": "
        << (b1 ? format_double(*b1) : std::string("none")) << '\n';
    err << "max retrieval alpha on grid: "
        << (dia.max_retrieval_alpha ? format_double(*dia.max_retrieval_alpha) : std::string("none")) << '\n';
    return 0;
}

int cmd_classical(const RunConfig& cfg, std::ostream& out) {
    const auto fmt = require_format(cfg.format, "csv", {"csv", "json"});
    const auto alphas = parse_grid(cfg.alpha_grid.empty() ? "0.05,0.1,0.15,0.2,0.25" : cfg.alpha_grid, false);
    const auto rows = capacity_experiment(cfg.neurons, alphas, cfg.trials, cfg.corruption, cfg.seed, cfg.threads);
    Output o(cfg.out, out);
    if (fmt == "csv") {
        o.stream() << capacity_csv(rows);
    } else {
        auto arr = ojson::array();
        for (const auto& r : rows)
            arr.push_back({{"alpha", r.alpha},
                           {"p", r.p},
                           {"trials", r.trials},
                           {"mean_overlap", r.mean_overlap},
                           {"std_overlap", r.std_overlap}});
        o.stream() << arr.dump(2) << '\n';
    }
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out, "Write output to this file instead of stdout");
    sub->add_option("--format", cfg.format, "Output format (csv, json; text where noted)");
    sub->add_option("--seed", cfg.seed, "64-bit seed");
    sub->add_option("--threads", cfg.threads, "Worker threads for scans")->check(CLI::PositiveNumber);
}

void add_retrieval_inputs(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--patterns", cfg.patterns, "Pattern file")->required();
    sub->add_option("--input", cfg.input, "Input pattern, e.g. 0110");
    sub->add_option("--corrupt", cfg.corrupt, "Use a stored pattern with K random bit flips as input");
    sub->add_option("--target", cfg.target, "Stored pattern index used by --corrupt (default 0)");
    sub->add_option("--mask", cfg.mask, "Comma separated known input qubits");
    sub->add_option("--b", cfg.b, "Control qubits (default 1)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Probabilistic quantum associative memory toolkit", "qam"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* store = app.add_subcommand("store", "Build the memory operator and report gates and amplitudes");
    store->add_option("--patterns", cfg.patterns, "Pattern file")->required();
    store->add_flag("--dry-run", cfg.dry_run, "Only print the gate count");
    add_common(store, cfg);

    auto* retrieve_cmd = app.add_subcommand("retrieve", "Run one seeded retrieval");
    add_retrieval_inputs(retrieve_cmd, cfg);
    retrieve_cmd->add_option("--T", cfg.T, "Repetition threshold, or Grover iterations in amplify mode");
    retrieve_cmd->add_option("--mode", cfg.mode, "repeat or amplify");
    add_common(retrieve_cmd, cfg);

    auto* dist = app.add_subcommand("distribution", "Closed-form recognition probability and output distribution");
    add_retrieval_inputs(dist, cfg);
    add_common(dist, cfg);

    auto* thermo = app.add_subcommand("thermo", "Effective thermodynamics scan over b");
    thermo->add_option("--d-over-n", cfg.d_over_n, "Minimal relative Hamming distance");
    thermo->add_option("--n", cfg.n, "Pattern length");
    thermo->add_option("--b-grid", cfg.b_grid, "lo:hi:count (log spaced) or a list");
    thermo->add_option("--method", cfg.method, "discrete or continuum");
    add_common(thermo, cfg);

    auto* tune_cmd = app.add_subcommand("tune", "Pick b and thresholds for a target accuracy");
    tune_cmd->add_option("--epsilon", cfg.epsilon, "Tolerated fraction of corrupted bits");
    tune_cmd->add_option("--nu", cfg.nu, "Required efficiency");
    tune_cmd->add_option("--n", cfg.n, "Pattern length");
    tune_cmd->add_option("--method", cfg.method, "discrete or continuum");
    add_common(tune_cmd, cfg);

    auto* phase = app.add_subcommand("phase", "Mean-field phase diagram scan");
    phase->add_option("--alpha-grid", cfg.alpha_grid, "lo:hi:count (linear) or a list");
    phase->add_option("--jt-grid", cfg.jt_grid, "lo:hi:count (linear) or a list");
    add_common(phase, cfg);

    auto* classical = app.add_subcommand("classical", "Classical Hopfield capacity experiment");
    classical->add_option("--neurons", cfg.neurons, "Network size");
    classical->add_option("--alpha-grid", cfg.alpha_grid, "Loading factors");
    classical->add_option("--trials", cfg.trials, "Trials per loading factor");
    classical->add_option("--corruption", cfg.corruption, "Fraction of flipped input bits");
    add_common(classical, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*store) return cmd_store(cfg, out);
        if (*retrieve_cmd) return cmd_retrieve(cfg, out);
        if (*dist) return cmd_distribution(cfg, out);
        if (*thermo) return cmd_thermo(cfg, out, err);
        if (*tune_cmd) return cmd_tune(cfg, out);
        if (*phase) return cmd_phase(cfg, out, err);
        if (*classical) return cmd_classical(cfg, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

}  // namespace qam
