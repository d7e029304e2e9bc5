#ifndef DDFRAC_SPECIMEN_HPP
#define DDFRAC_SPECIMEN_HPP

#include "ddfrac/core.hpp"

namespace ddfrac {

/// Linear loading device in series with the specimen: DeltaT = Delta + CMbar * P.
struct MachineCoupling {
    double CMbar = 0.0;
};

/// Tapered-arm geometry, all lengths in units of the specimen length.
/// The arm height is hbar1 on [0, Lbar1], varies linearly with slope m across
/// the transition of length LbarT, and is hbar2 on the remainder.
struct TaperGeometry {
    double hbar1 = 0.0;
    double hbar2 = 0.0;
    double Lbar1 = 0.0;
    double LbarT = 0.0;
    double Lbar2 = 0.0;
    double m = 0.0;  ///< taper slope, nonzero

    double pbar() const { return hbar1 - m * Lbar1; }
    double Lbar12() const { return Lbar1 + LbarT; }
};

enum class SpecimenKind { StandardDcb, TaperedDcb };

/// Double-cantilever-beam compliance model. Immutable after construction;
/// all evaluations are pure.
class SpecimenModel {
public:
    static SpecimenModel standard_dcb(const DimensionlessParams& params);
    /// Throws InvalidParameter if the taper blocks do not tile [0,1], the
    /// heights are inconsistent with the slope, or m == 0.
    static SpecimenModel tapered_dcb(const DimensionlessParams& params, const TaperGeometry& taper);

    SpecimenKind kind() const { return kind_; }
    const DimensionlessParams& params() const { return params_; }
    const TaperGeometry& taper() const { return taper_; }

    /// Arm height at crack length a.
    double height(double a) const;

    /// C̄(a), strictly increasing on (0, crack_upper_bound]. Throws DomainError
    /// outside [0, crack_upper_bound].
    double compliance(double a) const;

    /// dC̄/da, analytic per branch.
    double compliance_derivative(double a) const;

    /// d²C̄/da², analytic per branch (branch-interior value at kinks).
    double compliance_second_derivative(double a) const;

private:
    SpecimenModel(SpecimenKind kind, const DimensionlessParams& params, const TaperGeometry& taper);

    SpecimenKind kind_;
    DimensionlessParams params_;
    TaperGeometry taper_{};
};

/// Energy release rate per unit thickness at imposed machine displacement,
/// G̃ = C̄'(a) ΔT² / (2 b̄ (C̄(a)+C̄_M)²). Throws DomainError for a <= 0.
double energy_release_rate(const SpecimenModel& s, const MachineCoupling& c, double DeltaT, double a);

/// Elastic energy of the specimen-machine system at fixed machine displacement,
/// Ẽ = ΔT² / (2 (C̄(a)+C̄_M)).
double reduced_energy(const SpecimenModel& s, const MachineCoupling& c, double DeltaT, double a);

struct EquilibriumState {
    double Delta = 0.0;
    double P = 0.0;
};

/// Splits the machine displacement into specimen opening and load:
/// Delta = C̄/(C̄+C̄_M) ΔT, P = ΔT/(C̄+C̄_M).
EquilibriumState equilibrium_split(const SpecimenModel& s, const MachineCoupling& c, double DeltaT, double a);

}  // namespace ddfrac

#endif
