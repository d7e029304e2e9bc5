#include "ddfrac/reference.hpp"

#include <cmath>
#include <limits>

namespace ddfrac {

namespace {

double reduced_potential(const SpecimenModel& s, const MachineCoupling& c,
                         const ResistanceModel& model, double DeltaT, double a) {
    return reduced_energy(s, c, DeltaT, a) + model.F_R(a, s.params().bbar);
}

}  // namespace

double reference_global_step(double a_k, double DeltaT, const ResistanceModel& model,
                             const SpecimenModel& s, const MachineCoupling& c,
                             const ReferenceConfig& cfg) {
    if (cfg.grid_size < 2) throw InvalidParameter("reference_global_step: grid_size must be >= 2");

    // Candidates: the current state plus all grid nodes beyond it. Keeping a_k
    // in the set means the trace does not creep to the nearest node while the
    // current state is still the global minimum.
    double best_a = a_k;
    double best_v = reduced_potential(s, c, model, DeltaT, a_k);
    const int n = cfg.grid_size;
    for (int i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / (n - 1);
        if (a <= a_k) continue;
        const double v = reduced_potential(s, c, model, DeltaT, a);
        if (v < best_v) {
            best_v = v;
            best_a = a;
        }
    }
    return best_a;
}

LocalStepOutcome reference_local_step(double a_k, double DeltaT, const ResistanceModel& model,
                                      const SpecimenModel& s, const MachineCoupling& c,
                                      const ReferenceConfig& cfg) {
    auto excess = [&](double a) {
        return energy_release_rate(s, c, DeltaT, a) - model.G_R(a);
    };

    if (excess(a_k) <= 0.0) {
        return {a_k, false};  // crack arrest
    }

    // The driving force exceeds the resistance at a_k: march right until it
    // drops back below (a descending crossing is the nearest stable
    // equilibrium; a finite march before it is a quasi-static crack jump).
    const double hi = 1.0;
    const double step = cfg.scan_resolution;
    double prev = a_k;
    double a = a_k;
    while (a < hi) {
        a = std::min(a + step, hi);
        if (excess(a) <= 0.0) {
            // Bisect the bracketing interval; also resolves resistance
            // discontinuities (bimaterial interfaces) to the jump location.
            double lo_b = prev;
            double hi_b = a;
            while (hi_b - lo_b > cfg.root_tol) {
                const double mid = 0.5 * (lo_b + hi_b);
                if (excess(mid) <= 0.0) {
                    hi_b = mid;
                } else {
                    lo_b = mid;
                }
            }
            return {hi_b, false};
        }
        prev = a;
    }
    return {hi, true};  // no admissible state before the specimen end
}

}  // namespace ddfrac
