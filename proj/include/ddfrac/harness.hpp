#ifndef DDFRAC_HARNESS_HPP
#define DDFRAC_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddfrac/reference.hpp"
#include "ddfrac/solvers.hpp"

namespace ddfrac {

/// Piecewise-linear machine-displacement history. Each segment runs from the
/// current level to `target` in steps of constant magnitude `increment`;
/// targets must be non-negative and reachable by a whole number of steps.
class LoadProgram {
public:
    /// Empty targets produce an empty (zero-step) program.
    LoadProgram(double increment, std::vector<double> targets);

    /// k steps of monotone ramp starting at `increment`.
    static LoadProgram monotone(int steps, double increment);

    /// Wraps an explicit displacement sequence (no segment structure).
    static LoadProgram from_schedule(std::vector<double> values);

    double increment() const { return increment_; }
    const std::vector<double>& targets() const { return targets_; }

    /// Materialized displacement sequence DeltaT_1 .. DeltaT_n.
    const std::vector<double>& schedule() const { return schedule_; }
    int size() const { return static_cast<int>(schedule_.size()); }

private:
    double increment_ = 0.0;
    std::vector<double> targets_;
    std::vector<double> schedule_;
};

enum class SolverKind { Global, Cpp, Consistency, RefGlobal, RefLocal };

std::string solver_name(SolverKind kind);
std::optional<SolverKind> parse_solver(const std::string& name);

/// Everything needed to run one incremental trace apart from the material
/// knowledge (data set or analytic model).
struct RunSetup {
    SolverKind solver = SolverKind::Cpp;
    GR0Rule gr0 = GR0Rule::BracketAverage;
    std::optional<double> cpp_tol;  ///< default: default_cpp_tol(dataset)
    double projection_accuracy = 1e-8;
    ReferenceConfig reference;
};

/// Incremental quasi-static driver for the data-driven solvers. Threads the
/// history state through the program, stopping early when a step reports
/// failure or the crack reaches the specimen end (a >= 1), which is recorded
/// as a failed final step instead of raising.
SolutionTrace run_trace(const RunSetup& setup, const LoadProgram& program, SolverState initial,
                        const ResistanceDataSet& dataset, const SpecimenModel& s,
                        const MachineCoupling& c);

/// Same driver for the analytic reference solvers.
SolutionTrace run_trace(const RunSetup& setup, const LoadProgram& program, SolverState initial,
                        const ResistanceModel& model, const SpecimenModel& s,
                        const MachineCoupling& c);

/// ε = sqrt(sum_k (a_k - a_k_ref)²) over the common prefix of the two traces.
/// Throws ScheduleMismatch when the shared steps disagree on DeltaT.
double error_metric(const SolutionTrace& trace, const SolutionTrace& reference);

/// Statistics of one study configuration (one point count or one noise
/// amplitude).
struct ConvergenceEntry {
    double parameter = 0.0;  ///< N or noise amplitude
    int N = 0;
    double noise_amplitude = 0.0;
    int replications = 0;
    double mu = 0.0;
    double sigma = 0.0;
    std::vector<double> errors;        ///< per replication, in replication order
    std::vector<int> histogram;        ///< 20 bins of width 0.1 mu on [0, 2 mu)
    int overflow = 0;                  ///< errors >= 2 mu
    std::vector<double> envelope_min;  ///< per-step min of a over replications
    std::vector<double> envelope_max;
    std::vector<int> failure_steps;    ///< 1-based failure step per replication, 0 = none
};

struct ConvergenceReport {
    std::string study;  ///< "points" or "noise"
    SolverKind solver = SolverKind::Cpp;
    std::uint64_t seed = 0;
    std::vector<double> schedule;
    std::vector<double> reference_a;  ///< matching reference trace
    std::vector<ConvergenceEntry> entries;
};

/// Error statistics vs. data-set size: for each N, `replications` independent
/// noiseless data sets are generated, solved, and scored against the matching
/// reference (global solver vs. global reference, local solvers vs. the
/// complementarity reference). Deterministic given the seed, for any worker
/// count.
ConvergenceReport convergence_vs_points(const RunSetup& setup, const std::vector<int>& counts,
                                        int replications, const LoadProgram& program,
                                        const ResistanceModel& model, const SpecimenModel& s,
                                        const MachineCoupling& c, std::uint64_t seed,
                                        int threads = 0);

/// Error statistics vs. noise amplitude at fixed data-set size N; both the
/// abscissae and the noise are re-randomized per replication.
ConvergenceReport convergence_vs_noise(const RunSetup& setup, const std::vector<double>& amplitudes,
                                       int N, int replications, const LoadProgram& program,
                                       const ResistanceModel& model, const SpecimenModel& s,
                                       const MachineCoupling& c, std::uint64_t seed,
                                       int threads = 0);

}  // namespace ddfrac

#endif
