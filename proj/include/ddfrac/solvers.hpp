#ifndef DDFRAC_SOLVERS_HPP
#define DDFRAC_SOLVERS_HPP

#include <optional>

#include "ddfrac/resistance.hpp"
#include "ddfrac/specimen.hpp"

namespace ddfrac {

/// History carried between load steps. G_R is used by the closest-point
/// solver only; the other solvers track the crack length alone.
struct SolverState {
    double a = 0.0;
    std::optional<double> G_R;
};

struct StepResult {
    double a_next = 0.0;
    std::optional<double> G_R_next;
    double Delta = 0.0;
    double P = 0.0;
    std::optional<double> G_DD;
    bool dissipative = false;
    bool failed = false;
};

/// Closest-point solver settings. `tol` bounds the accepted distance between
/// the energy-release-rate curve and the selected point; larger residuals are
/// flagged as unstable propagation.
struct CppConfig {
    double tol = 0.0;
    double projection_accuracy = 1e-8;
};

/// Suggested tol: 7.5 x mean nearest-neighbor spacing of the data abscissae.
double default_cpp_tol(const ResistanceDataSet& dataset);

struct Projection {
    double distance = 0.0;
    double a_star = 0.0;
};

/// Constrained distance from the point (a_hat, G_hat) to the curve
/// a -> (a, G̃(DeltaT, a)) over a in [a_min, crack_upper_bound].
///
/// The squared distance is scanned on a 1024-node grid and the best bracket is
/// refined by golden section; a pure local descent can miss the global
/// projection because the distance is non-convex in a.
Projection project_distance(double a_hat, double G_hat, double DeltaT, double a_min,
                            const SpecimenModel& s, const MachineCoupling& c,
                            double accuracy = 1e-8);

/// Discrete global minimization of Ẽ(DeltaT, â_i) + F̂_Ri over {â_i >= a_k}.
/// Never reports failure; throws DatasetExhausted when no admissible point
/// remains. Exact ties resolve to the smallest â_i.
StepResult global_step(const SolverState& state, double DeltaT, const ResistanceDataSet& dataset,
                       const SpecimenModel& s, const MachineCoupling& c);

/// Local minimization by closest-point projection. Elastic step when
/// G_R_k > G̃(DeltaT, a_k); otherwise selects the admissible point of minimum
/// curve distance, updating both history variables. A residual distance above
/// cfg.tol marks unstable propagation (failure).
StepResult cpp_step(const SolverState& state, double DeltaT, const ResistanceDataSet& dataset,
                    const SpecimenModel& s, const MachineCoupling& c, const CppConfig& cfg);

/// Local minimization by the consistency condition: over admissible points
/// {â_i >= a_k, Ĝ_Ri >= G̃(DeltaT, â_i)} minimizes
/// |(G̃(DeltaT, â_i) - Ĝ_Ri)(a_k - â_i)|. An empty admissible set signals
/// unstable propagation (failure), not an error.
StepResult consistency_step(const SolverState& state, double DeltaT,
                            const ResistanceDataSet& dataset, const SpecimenModel& s,
                            const MachineCoupling& c);

enum class GR0Rule { BracketAverage, Zero };

/// Initial resistance threshold for the closest-point solver: the Ĝ of an
/// exact hit at a0 when present, otherwise the mean of the two bracketing
/// points' Ĝ. Throws BracketingError when a0 lies outside the abscissa hull.
/// The Zero rule returns 0 regardless of the data.
double init_G_R0(const ResistanceDataSet& dataset, double a0, GR0Rule rule = GR0Rule::BracketAverage);

}  // namespace ddfrac

#endif
