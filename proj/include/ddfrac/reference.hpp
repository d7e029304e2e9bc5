#ifndef DDFRAC_REFERENCE_HPP
#define DDFRAC_REFERENCE_HPP

#include "ddfrac/resistance.hpp"
#include "ddfrac/specimen.hpp"

namespace ddfrac {

struct ReferenceConfig {
    int grid_size = 1000;          ///< equispaced nodes on [0, 1] for the global search
    double root_tol = 1e-10;       ///< bisection tolerance on a
    double scan_resolution = 1e-3; ///< bracketing scan step for the local solver
};

/// Grid-based global minimization of the reduced potential
/// Φ̃(DeltaT, a) = Ẽ(DeltaT, a) + F_R(a) over {a_k} ∪ {grid nodes > a_k}.
/// The current state is always a candidate, so the trace stays put until a
/// deeper minimum appears. Ties resolve to the smallest a.
double reference_global_step(double a_k, double DeltaT, const ResistanceModel& model,
                             const SpecimenModel& s, const MachineCoupling& c,
                             const ReferenceConfig& cfg);

struct LocalStepOutcome {
    double a_next = 0.0;
    bool failed = false;  ///< no admissible equilibrium before a = 1
};

/// Evolution by the complementarity system: arrest while
/// G̃(DeltaT, a_k) <= G_R(a_k); otherwise advance to the nearest descending
/// crossing of G̃ - G_R beyond a_k (the nearest accessible local minimizer of
/// the reduced potential, which resolves crack jumps quasi-statically). When
/// no such state exists up to a = 1 the specimen fails.
LocalStepOutcome reference_local_step(double a_k, double DeltaT, const ResistanceModel& model,
                                      const SpecimenModel& s, const MachineCoupling& c,
                                      const ReferenceConfig& cfg);

}  // namespace ddfrac

#endif
