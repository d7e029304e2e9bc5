#include "ddfrac/core.hpp"

namespace ddfrac {

DimensionlessParams nondimensionalize(const PhysicalParams& p) {
    auto require_positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw InvalidParameter(std::string("nondimensionalize: ") + name +
                                   " must be strictly positive");
        }
    };
    require_positive(p.Y, "Y");
    require_positive(p.L, "L");
    require_positive(p.h, "h");
    require_positive(p.b, "b");
    require_positive(p.a0, "a0");
    require_positive(p.deltaT, "deltaT");
    require_positive(p.gamma, "gamma");
    if (p.C_M < 0.0) throw InvalidParameter("nondimensionalize: C_M must be non-negative");
    if (!(p.a0 < p.L)) throw InvalidParameter("nondimensionalize: a0 must be smaller than L");

    DimensionlessParams d;
    d.Lbar = 1.0;
    d.hbar = p.h / p.L;
    d.abar0 = p.a0 / p.L;
    d.bbar = p.b / p.L;
    d.CMbar = p.C_M * p.gamma;
    d.Ybar = p.Y * p.L / p.gamma;
    d.deltaTbar = p.deltaT / p.L;
    return d;
}

}  // namespace ddfrac
