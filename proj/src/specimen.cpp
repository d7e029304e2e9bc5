#include "ddfrac/specimen.hpp"

#include <cmath>

namespace ddfrac {

namespace {

void validate_params(const DimensionlessParams& p) {
    if (p.Lbar != 1.0) throw InvalidParameter("specimen: Lbar must be 1");
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(p.hbar)) throw InvalidParameter("specimen: hbar must lie in (0, 1)");
    if (!in_unit(p.bbar)) throw InvalidParameter("specimen: bbar must lie in (0, 1)");
    if (!in_unit(p.abar0)) throw InvalidParameter("specimen: abar0 must lie in (0, 1)");
    if (!(p.Ybar > 0.0)) throw InvalidParameter("specimen: Ybar must be positive");
    if (p.CMbar < 0.0) throw InvalidParameter("specimen: CMbar must be non-negative");
}

void check_crack_domain(double a) {
    if (!(a >= 0.0) || a > crack_upper_bound) {
        throw DomainError("crack length outside [0, " + std::to_string(crack_upper_bound) + "]");
    }
}

}  // namespace

SpecimenModel::SpecimenModel(SpecimenKind kind, const DimensionlessParams& params,
                             const TaperGeometry& taper)
    : kind_(kind), params_(params), taper_(taper) {}

SpecimenModel SpecimenModel::standard_dcb(const DimensionlessParams& params) {
    validate_params(params);
    return SpecimenModel(SpecimenKind::StandardDcb, params, TaperGeometry{});
}

SpecimenModel SpecimenModel::tapered_dcb(const DimensionlessParams& params,
                                         const TaperGeometry& taper) {
    validate_params(params);
    if (taper.m == 0.0) {
        throw InvalidParameter("tapered specimen: m must be nonzero (use standard-dcb)");
    }
    if (std::abs(taper.Lbar1 + taper.LbarT + taper.Lbar2 - 1.0) > 1e-12) {
        throw InvalidParameter("tapered specimen: Lbar1 + LbarT + Lbar2 must equal 1");
    }
    if (std::abs(taper.hbar2 - (taper.hbar1 + taper.m * taper.LbarT)) > 1e-12) {
        throw InvalidParameter("tapered specimen: hbar2 must equal hbar1 + m*LbarT");
    }
    if (!(taper.hbar1 > 0.0) || !(taper.hbar2 > 0.0) || !(taper.Lbar1 > 0.0) ||
        !(taper.LbarT > 0.0) || !(taper.Lbar2 > 0.0)) {
        throw InvalidParameter("tapered specimen: geometry lengths and heights must be positive");
    }
    return SpecimenModel(SpecimenKind::TaperedDcb, params, taper);
}

double SpecimenModel::height(double a) const {
    if (kind_ == SpecimenKind::StandardDcb) return params_.hbar;
    if (a <= taper_.Lbar1) return taper_.hbar1;
    if (a <= taper_.Lbar12()) return taper_.pbar() + taper_.m * a;
    return taper_.hbar2;
}

double SpecimenModel::compliance(double a) const {
    check_crack_domain(a);
    const double Yb = params_.Ybar * params_.bbar;
    if (kind_ == SpecimenKind::StandardDcb) {
        const double h3 = params_.hbar * params_.hbar * params_.hbar;
        return 8.0 * a * a * a / (Yb * h3);
    }

    const double m = taper_.m;
    const double p = taper_.pbar();
    const double L1 = taper_.Lbar1;
    const double L12 = taper_.Lbar12();
    const double h1_3 = std::pow(taper_.hbar1, 3);
    if (a <= L1) return 8.0 * a * a * a / (Yb * h1_3);

    // Each arm is a cantilever of length a; integrating x^2/h(x)^3 over the
    // taper gives the log/rational terms below.
    const double hL1 = m * L1 + p;
    auto middle_terms = [&](double x) {
        const double hx = m * x + p;
        return 2.0 * std::log(hx / hL1) + (p * p - 2.0 * m * m * x * x) / (hx * hx);
    };
    const double base = -(p * p - 2.0 * m * m * L1 * L1) / (hL1 * hL1) +
                        2.0 * m * m * m * L1 * L1 * L1 / (3.0 * h1_3);
    if (a <= L12) {
        return 12.0 / (Yb * m * m * m) * (middle_terms(a) + base);
    }
    const double h2_3 = std::pow(taper_.hbar2, 3);
    const double tail = 2.0 * m * m * m * (a * a * a - L12 * L12 * L12) / (3.0 * h2_3);
    return 12.0 / (Yb * m * m * m) * (middle_terms(L12) + base + tail);
}

double SpecimenModel::compliance_derivative(double a) const {
    check_crack_domain(a);
    const double h = height(a);
    return 24.0 * a * a / (params_.Ybar * params_.bbar * h * h * h);
}

double SpecimenModel::compliance_second_derivative(double a) const {
    check_crack_domain(a);
    const double h = height(a);
    const double hp = (kind_ == SpecimenKind::TaperedDcb && a > taper_.Lbar1 && a <= taper_.Lbar12())
                          ? taper_.m
                          : 0.0;
    return 24.0 * (2.0 * a * h - 3.0 * a * a * hp) / (params_.Ybar * params_.bbar * h * h * h * h);
}

double energy_release_rate(const SpecimenModel& s, const MachineCoupling& c, double DeltaT,
                           double a) {
    if (!(a > 0.0)) throw DomainError("energy_release_rate: crack length must be positive");
    const double denom = s.compliance(a) + c.CMbar;
    const double ratio = DeltaT / denom;
    return 0.5 * ratio * ratio * s.compliance_derivative(a) / s.params().bbar;
}

double reduced_energy(const SpecimenModel& s, const MachineCoupling& c, double DeltaT, double a) {
    const double denom = s.compliance(a) + c.CMbar;
    if (denom <= 0.0) {
        if (DeltaT == 0.0) return 0.0;
        throw DomainError("reduced_energy: zero total compliance under nonzero displacement");
    }
    return 0.5 * DeltaT * DeltaT / denom;
}

EquilibriumState equilibrium_split(const SpecimenModel& s, const MachineCoupling& c, double DeltaT,
                                   double a) {
    const double C = s.compliance(a);
    const double denom = C + c.CMbar;
    EquilibriumState e;
    if (denom <= 0.0) {
        if (DeltaT != 0.0) {
            throw DomainError("equilibrium_split: zero total compliance under nonzero displacement");
        }
        return e;
    }
    e.P = DeltaT / denom;
    e.Delta = C / denom * DeltaT;
    return e;
}

}  // namespace ddfrac
