// Command-line front end: dataset generation, data-driven and reference
// solves, convergence sweeps, and trace comparison. All file formats are
// plot-ready CSV/JSON; every run is a pure function of (config, seed).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddfrac/config.hpp"
#include "ddfrac/io.hpp"
#include "ddfrac/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ddfrac;

enum ExitCode {
    exit_ok = 0,
    exit_unexpected = 1,
    exit_validation = 2,
    exit_dataset_exhausted = 3,
    exit_schedule_mismatch = 4,
    exit_io = 5,
    exit_specimen_failed = 6,  // trace still written; the run ended in failure
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> solver;
};

ExperimentConfig load_with_overrides(const std::string& config_path, const Overrides& ov) {
    ExperimentConfig cfg = load_config(config_path);
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.out) cfg.out_dir = *ov.out;
    if (ov.solver) {
        const auto parsed = parse_solver(*ov.solver);
        if (!parsed) throw ConfigError("unknown solver '" + *ov.solver + "'");
        cfg.run.solver = *parsed;
    }
    return cfg;
}

ResistanceDataSet dataset_from_config(const ExperimentConfig& cfg) {
    ResistanceDataSet data = sample_dataset(cfg.resistance, cfg.dataset_N, cfg.dataset_lo,
                                            cfg.dataset_hi, cfg.seed,
                                            cfg.params.bbar, cfg.sampling);
    if (cfg.noise_amplitude > 0.0) {
        data = apply_noise(data, cfg.noise_amplitude, derive_seed(cfg.seed, 1, 0));
    }
    return data;
}

int cmd_generate(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const ResistanceDataSet data = dataset_from_config(cfg);
    write_dataset_csv(data, cfg.out_dir / "dataset.csv");
    write_dataset_meta(data, cfg.out_dir / "dataset.json");
    std::cout << "wrote " << (cfg.out_dir / "dataset.csv").string() << " (" << data.size()
              << " points)\n";
    return exit_ok;
}

int solve_common(const ExperimentConfig& cfg, bool reference_mode,
                 const std::string& dataset_path) {
    const bool is_reference =
        cfg.run.solver == SolverKind::RefGlobal || cfg.run.solver == SolverKind::RefLocal;
    if (reference_mode && !is_reference) {
        throw ConfigError("reference command needs solver ref-global or ref-local");
    }
    if (!reference_mode && is_reference) {
        throw ConfigError("solve command needs solver global, cpp or consistency");
    }

    const SpecimenModel specimen = cfg.specimen_model();
    const SolverState initial{cfg.params.abar0, {}};

    SolutionTrace trace;
    if (reference_mode) {
        trace = run_trace(cfg.run, cfg.program, initial, cfg.resistance, specimen, cfg.machine);
    } else {
        ResistanceDataSet data = dataset_path.empty() ? dataset_from_config(cfg)
                                                      : read_dataset_csv(dataset_path);
        trace = run_trace(cfg.run, cfg.program, initial, data, specimen, cfg.machine);
    }

    fs::create_directories(cfg.out_dir);
    const fs::path out = cfg.out_dir / "trace.csv";
    write_trace_csv(trace, out);
    std::cout << "wrote " << out.string() << " (" << trace.steps.size() << " steps)";
    if (!trace.steps.empty()) {
        std::cout << ", final a = " << format_double(trace.steps.back().a);
    }
    if (trace.failed()) {
        std::cout << ", specimen failed at step " << trace.steps.back().k;
    }
    std::cout << "\n";
    return trace.failed() ? exit_specimen_failed : exit_ok;
}

int cmd_converge(const ExperimentConfig& cfg) {
    if (cfg.run.solver == SolverKind::RefGlobal || cfg.run.solver == SolverKind::RefLocal) {
        throw ConfigError("converge command needs a data-driven solver");
    }
    const SpecimenModel specimen = cfg.specimen_model();
    ConvergenceReport report;
    if (cfg.converge.mode == "points") {
        report = convergence_vs_points(cfg.run, cfg.converge.counts, cfg.converge.replications,
                                       cfg.program, cfg.resistance, specimen, cfg.machine,
                                       cfg.seed, cfg.converge.threads);
    } else {
        report = convergence_vs_noise(cfg.run, cfg.converge.amplitudes, cfg.converge.N,
                                      cfg.converge.replications, cfg.program, cfg.resistance,
                                      specimen, cfg.machine, cfg.seed, cfg.converge.threads);
    }
    fs::create_directories(cfg.out_dir);
    write_report_json(report, cfg.out_dir / "report.json");
    write_report_histograms(report, cfg.out_dir);
    std::cout << "wrote " << (cfg.out_dir / "report.json").string() << "\n";
    for (const auto& e : report.entries) {
        std::cout << "  " << report.study << " = " << format_double(e.parameter)
                  << ": mu = " << format_double(e.mu) << ", sigma = " << format_double(e.sigma)
                  << "\n";
    }
    return exit_ok;
}

int cmd_compare(const std::string& trace_a, const std::string& trace_b,
                const std::optional<std::string>& out_dir) {
    const SolutionTrace a = read_trace_csv(trace_a);
    const SolutionTrace b = read_trace_csv(trace_b);
    const double eps = error_metric(a, b);

    std::string body = "k,DeltaT,a,a_ref,residual\n";
    const std::size_t n = std::min(a.steps.size(), b.steps.size());
    for (std::size_t k = 0; k < n; ++k) {
        body += std::to_string(a.steps[k].k);
        body += ',';
        body += format_double(a.steps[k].DeltaT);
        body += ',';
        body += format_double(a.steps[k].a);
        body += ',';
        body += format_double(b.steps[k].a);
        body += ',';
        body += format_double(a.steps[k].a - b.steps[k].a);
        body += '\n';
    }
    if (out_dir) {
        fs::create_directories(*out_dir);
        const fs::path out = fs::path(*out_dir) / "residuals.csv";
        const fs::path tmp = out.string() + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot open " + tmp.string());
            f << body;
        }
        fs::rename(tmp, out);
        std::cout << "wrote " << out.string() << "\n";
    }
    std::cout << "epsilon = " << format_double(eps) << " over " << n << " shared steps\n";
    if (a.steps.size() != b.steps.size()) {
        std::cout << "note: traces truncated to common prefix (" << a.steps.size() << " vs "
                  << b.steps.size() << " steps)\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"data-driven brittle fracture solvers"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;
    std::string dataset_path;
    std::string trace_a, trace_b;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) {
            sub->add_option("--config", config_path, "experiment configuration (JSON)")
                ->required()
                ->check(CLI::ExistingFile);
        }
        sub->add_option("--seed", ov.seed, "override the config seed");
        sub->add_option("--out", ov.out, "override the output directory");
        sub->add_option("--solver", ov.solver, "override the solver kind");
    };

    CLI::App* generate = app.add_subcommand("generate", "sample a resistance data set");
    add_common(generate, true);
    CLI::App* solve = app.add_subcommand("solve", "run a data-driven solver");
    add_common(solve, true);
    solve->add_option("--dataset", dataset_path, "use an existing dataset CSV")
        ->check(CLI::ExistingFile);
    CLI::App* reference = app.add_subcommand("reference", "run a classical reference solver");
    add_common(reference, true);
    CLI::App* converge = app.add_subcommand("converge", "run a convergence study");
    add_common(converge, true);
    CLI::App* compare = app.add_subcommand("compare", "error metric between two traces");
    compare->add_option("traceA", trace_a)->required()->check(CLI::ExistingFile);
    compare->add_option("traceB", trace_b)->required()->check(CLI::ExistingFile);
    compare->add_option("--out", ov.out, "directory for the residual CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(load_with_overrides(config_path, ov));
        if (solve->parsed()) {
            return solve_common(load_with_overrides(config_path, ov), false, dataset_path);
        }
        if (reference->parsed()) {
            return solve_common(load_with_overrides(config_path, ov), true, dataset_path);
        }
        if (converge->parsed()) return cmd_converge(load_with_overrides(config_path, ov));
        if (compare->parsed()) return cmd_compare(trace_a, trace_b, ov.out);
    } catch (const DatasetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_dataset_exhausted;
    } catch (const ScheduleMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_schedule_mismatch;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return exit_unexpected;
    }
    return exit_unexpected;
}
