#include "ddfrac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ddfrac/rng.hpp"

namespace ddfrac {

LoadProgram::LoadProgram(double increment, std::vector<double> targets)
    : increment_(increment), targets_(std::move(targets)) {
    if (!(increment_ > 0.0)) throw InvalidParameter("LoadProgram: increment must be positive");

    double level = 0.0;
    for (double target : targets_) {
        if (target < 0.0) throw InvalidParameter("LoadProgram: displacement must stay non-negative");
        const double span = target - level;
        const double steps_real = std::abs(span) / increment_;
        const long steps = std::lround(steps_real);
        if (steps == 0 || std::abs(steps_real - steps) > 1e-6) {
            throw InvalidParameter("LoadProgram: segment span must be a whole number of increments");
        }
        const double sign = span > 0.0 ? 1.0 : -1.0;
        for (long j = 1; j <= steps; ++j) {
            schedule_.push_back(j == steps ? target : level + sign * increment_ * j);
        }
        level = target;
    }
}

LoadProgram LoadProgram::monotone(int steps, double increment) {
    if (steps < 1) throw InvalidParameter("LoadProgram: step count must be positive");
    return LoadProgram(increment, {steps * increment});
}

LoadProgram LoadProgram::from_schedule(std::vector<double> values) {
    for (double v : values) {
        if (v < 0.0) throw InvalidParameter("LoadProgram: displacement must stay non-negative");
    }
    LoadProgram p(1.0, {});
    p.schedule_ = std::move(values);
    return p;
}

std::string solver_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::Global: return "global";
        case SolverKind::Cpp: return "cpp";
        case SolverKind::Consistency: return "consistency";
        case SolverKind::RefGlobal: return "ref-global";
        case SolverKind::RefLocal: return "ref-local";
    }
    return "?";
}

std::optional<SolverKind> parse_solver(const std::string& name) {
    if (name == "global") return SolverKind::Global;
    if (name == "cpp") return SolverKind::Cpp;
    if (name == "consistency") return SolverKind::Consistency;
    if (name == "ref-global") return SolverKind::RefGlobal;
    if (name == "ref-local") return SolverKind::RefLocal;
    return std::nullopt;
}

namespace {

TraceStep make_step(int k, double DeltaT, const StepResult& r, bool failed) {
    TraceStep st;
    st.k = k;
    st.DeltaT = DeltaT;
    st.a = r.a_next;
    st.Delta = r.Delta;
    st.P = r.P;
    st.G_DD = r.G_DD;
    st.dissipative = r.dissipative;
    st.failed = failed;
    return st;
}

/// G_R0 seed for the closest-point solver. The bracket-average rule needs a
/// neighbor on each side of a0; when the random abscissae leave a0 outside
/// the hull, fall back to the nearest neighbor so sparse-data studies can run.
double initial_G_R0(const ResistanceDataSet& dataset, double a0, GR0Rule rule) {
    try {
        return init_G_R0(dataset, a0, rule);
    } catch (const BracketingError&) {
        if (dataset.size() == 0) throw;
        const auto& pts = dataset.points();
        int best = 0;
        for (int i = 1; i < dataset.size(); ++i) {
            if (std::abs(pts[i].a_hat - a0) < std::abs(pts[best].a_hat - a0)) best = i;
        }
        return pts[best].G_R_hat;
    }
}

}  // namespace

SolutionTrace run_trace(const RunSetup& setup, const LoadProgram& program, SolverState initial,
                        const ResistanceDataSet& dataset, const SpecimenModel& s,
                        const MachineCoupling& c) {
    if (setup.solver == SolverKind::RefGlobal || setup.solver == SolverKind::RefLocal) {
        throw InvalidParameter("run_trace: reference solvers take a resistance model, not a data set");
    }

    SolutionTrace trace;
    trace.solver_id = solver_name(setup.solver);
    trace.dataset_id = dataset.meta().model + "/N=" + std::to_string(dataset.meta().N);
    trace.seed = dataset.meta().seed;

    SolverState state = initial;
    if (setup.solver == SolverKind::Cpp && !state.G_R.has_value()) {
        state.G_R = initial_G_R0(dataset, state.a, setup.gr0);
    }
    CppConfig cfg;
    cfg.tol = setup.cpp_tol.value_or(default_cpp_tol(dataset));
    cfg.projection_accuracy = setup.projection_accuracy;

    const auto& schedule = program.schedule();
    for (int k = 0; k < static_cast<int>(schedule.size()); ++k) {
        const double DeltaT = schedule[k];
        StepResult r;
        switch (setup.solver) {
            case SolverKind::Global: r = global_step(state, DeltaT, dataset, s, c); break;
            case SolverKind::Cpp: r = cpp_step(state, DeltaT, dataset, s, c, cfg); break;
            case SolverKind::Consistency: r = consistency_step(state, DeltaT, dataset, s, c); break;
            default: break;
        }
        const bool failed = r.failed || r.a_next >= 1.0;
        trace.steps.push_back(make_step(k + 1, DeltaT, r, failed));
        if (failed) break;
        state.a = r.a_next;
        if (r.G_R_next.has_value()) state.G_R = r.G_R_next;
    }
    return trace;
}

SolutionTrace run_trace(const RunSetup& setup, const LoadProgram& program, SolverState initial,
                        const ResistanceModel& model, const SpecimenModel& s,
                        const MachineCoupling& c) {
    if (setup.solver != SolverKind::RefGlobal && setup.solver != SolverKind::RefLocal) {
        throw InvalidParameter("run_trace: data-driven solvers need a data set");
    }

    SolutionTrace trace;
    trace.solver_id = solver_name(setup.solver);
    trace.dataset_id = model.name();

    double a_k = initial.a;
    const auto& schedule = program.schedule();
    for (int k = 0; k < static_cast<int>(schedule.size()); ++k) {
        const double DeltaT = schedule[k];
        StepResult r;
        if (setup.solver == SolverKind::RefGlobal) {
            r.a_next = reference_global_step(a_k, DeltaT, model, s, c, setup.reference);
        } else {
            const LocalStepOutcome out = reference_local_step(a_k, DeltaT, model, s, c, setup.reference);
            r.a_next = out.a_next;
            r.failed = out.failed;
        }
        const EquilibriumState e = equilibrium_split(s, c, DeltaT, r.a_next);
        r.Delta = e.Delta;
        r.P = e.P;
        r.dissipative = r.a_next > a_k;
        const bool failed = r.failed || r.a_next >= 1.0;
        trace.steps.push_back(make_step(k + 1, DeltaT, r, failed));
        if (failed) break;
        a_k = r.a_next;
    }
    return trace;
}

double error_metric(const SolutionTrace& trace, const SolutionTrace& reference) {
    const std::size_t n = std::min(trace.steps.size(), reference.steps.size());
    double sum = 0.0;
    double comp = 0.0;  // Kahan compensation
    for (std::size_t k = 0; k < n; ++k) {
        if (trace.steps[k].DeltaT != reference.steps[k].DeltaT) {
            throw ScheduleMismatch("error_metric: traces follow different displacement schedules");
        }
        const double d = trace.steps[k].a - reference.steps[k].a;
        const double term = d * d - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return std::sqrt(sum);
}

namespace {

RunSetup matching_reference(const RunSetup& setup) {
    RunSetup ref = setup;
    ref.solver = setup.solver == SolverKind::Global ? SolverKind::RefGlobal : SolverKind::RefLocal;
    return ref;
}

ConvergenceEntry aggregate_entry(double parameter, int N, double amplitude,
                                 const std::vector<SolutionTrace>& traces,
                                 const std::vector<double>& errors) {
    ConvergenceEntry e;
    e.parameter = parameter;
    e.N = N;
    e.noise_amplitude = amplitude;
    e.replications = static_cast<int>(traces.size());
    e.errors = errors;

    double sum = 0.0, comp = 0.0;
    for (double v : errors) {
        const double term = v - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    e.mu = errors.empty() ? 0.0 : sum / errors.size();
    double ss = 0.0;
    for (double v : errors) ss += (v - e.mu) * (v - e.mu);
    e.sigma = errors.size() > 1 ? std::sqrt(ss / (errors.size() - 1)) : 0.0;

    e.histogram.assign(20, 0);
    e.overflow = 0;
    const double bin = 0.1 * e.mu;
    for (double v : errors) {
        if (bin <= 0.0) {
            ++e.histogram[0];
        } else if (v >= 2.0 * e.mu) {
            ++e.overflow;
        } else {
            ++e.histogram[std::min(19, static_cast<int>(v / bin))];
        }
    }

    std::size_t longest = 0;
    for (const auto& t : traces) longest = std::max(longest, t.steps.size());
    e.envelope_min.assign(longest, std::numeric_limits<double>::infinity());
    e.envelope_max.assign(longest, -std::numeric_limits<double>::infinity());
    for (const auto& t : traces) {
        for (std::size_t k = 0; k < t.steps.size(); ++k) {
            e.envelope_min[k] = std::min(e.envelope_min[k], t.steps[k].a);
            e.envelope_max[k] = std::max(e.envelope_max[k], t.steps[k].a);
        }
    }
    for (const auto& t : traces) {
        e.failure_steps.push_back(t.failed() ? static_cast<int>(t.steps.size()) : 0);
    }
    return e;
}

/// Runs `replications` seeded jobs on a small worker pool; results land in
/// replication order, so the aggregate is independent of the worker count.
template <typename Job>
void run_replicated(int replications, int threads, Job&& job) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, replications));
    if (workers == 1) {
        for (int r = 0; r < replications; ++r) job(r);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= replications) return;
                try {
                    job(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

ConvergenceReport run_study(const RunSetup& setup, const std::string& study,
                            const std::vector<std::pair<int, double>>& configs,
                            int replications, const LoadProgram& program,
                            const ResistanceModel& model, const SpecimenModel& s,
                            const MachineCoupling& c, std::uint64_t seed, int threads) {
    if (configs.empty()) throw InvalidParameter("convergence study: no configurations");
    if (replications < 1) throw InvalidParameter("convergence study: replications must be positive");

    const double a0 = s.params().abar0;
    const SolutionTrace ref =
        run_trace(matching_reference(setup), program, SolverState{a0, {}}, model, s, c);

    ConvergenceReport report;
    report.study = study;
    report.solver = setup.solver;
    report.seed = seed;
    report.schedule = program.schedule();
    report.reference_a.reserve(ref.steps.size());
    for (const auto& st : ref.steps) report.reference_a.push_back(st.a);

    for (std::size_t idx = 0; idx < configs.size(); ++idx) {
        const int N = configs[idx].first;
        const double amplitude = configs[idx].second;
        std::vector<SolutionTrace> traces(replications);
        std::vector<double> errors(replications, 0.0);
        run_replicated(replications, threads, [&](int r) {
            const std::uint64_t ds_seed = derive_seed(seed, 2 * idx, r);
            ResistanceDataSet data =
                sample_dataset(model, N, 0.0, crack_upper_bound, ds_seed, s.params().bbar);
            if (amplitude > 0.0) {
                data = apply_noise(data, amplitude, derive_seed(seed, 2 * idx + 1, r));
            }
            traces[r] = run_trace(setup, program, SolverState{a0, {}}, data, s, c);
            errors[r] = error_metric(traces[r], ref);
        });
        report.entries.push_back(
            aggregate_entry(study == "points" ? N : amplitude, N, amplitude, traces, errors));
    }
    return report;
}

}  // namespace

ConvergenceReport convergence_vs_points(const RunSetup& setup, const std::vector<int>& counts,
                                        int replications, const LoadProgram& program,
                                        const ResistanceModel& model, const SpecimenModel& s,
                                        const MachineCoupling& c, std::uint64_t seed, int threads) {
    std::vector<std::pair<int, double>> configs;
    configs.reserve(counts.size());
    for (int n : counts) configs.emplace_back(n, 0.0);
    return run_study(setup, "points", configs, replications, program, model, s, c, seed, threads);
}

ConvergenceReport convergence_vs_noise(const RunSetup& setup, const std::vector<double>& amplitudes,
                                       int N, int replications, const LoadProgram& program,
                                       const ResistanceModel& model, const SpecimenModel& s,
                                       const MachineCoupling& c, std::uint64_t seed, int threads) {
    std::vector<std::pair<int, double>> configs;
    configs.reserve(amplitudes.size());
    for (double amp : amplitudes) configs.emplace_back(N, amp);
    return run_study(setup, "noise", configs, replications, program, model, s, c, seed, threads);
}

}  // namespace ddfrac
