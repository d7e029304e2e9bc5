#ifndef DDFRAC_CORE_HPP
#define DDFRAC_CORE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddfrac {

/// Admissible crack-length interval is [0, crack_upper_bound] in units of the
/// specimen length; the specimen itself ends at a = 1 (failure).
inline constexpr double crack_upper_bound = 1.1;

// ---------------------------------------------------------------------------
// Errors. Each maps to a distinct CLI exit code.
// ---------------------------------------------------------------------------

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// No admissible data point remains (a_k beyond the largest sampled crack length).
class DatasetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// a0 lies outside the abscissa hull of the data set.
class BracketingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two traces do not share the same machine-displacement schedule.
class ScheduleMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dimensional scheme
// ---------------------------------------------------------------------------

/// Physical inputs in a consistent (length, force) unit system.
struct PhysicalParams {
    double Y;       ///< elastic modulus, force/area
    double L;       ///< reference (specimen) length
    double h;       ///< arm half-height
    double b;       ///< thickness
    double a0;      ///< initial crack length
    double deltaT;  ///< machine-displacement increment per load step
    double C_M;     ///< machine compliance, length/force
    double gamma;   ///< reference critical energy release rate, force/length
};

/// Dimensionless parameter set; lengths scaled by L, rates by gamma.
struct DimensionlessParams {
    double Lbar = 1.0;
    double hbar = 0.0;
    double abar0 = 0.0;
    double bbar = 0.0;
    double CMbar = 0.0;
    double Ybar = 0.0;
    double deltaTbar = 0.0;
};

/// Scales physical inputs with (L, gamma). Throws InvalidParameter on
/// non-positive inputs or a0 >= L.
DimensionlessParams nondimensionalize(const PhysicalParams& p);

// ---------------------------------------------------------------------------
// Trace records
// ---------------------------------------------------------------------------

/// One load step of an incremental run. All quantities dimensionless.
struct TraceStep {
    int k = 0;             ///< 1-based step index within the load program
    double DeltaT = 0.0;   ///< machine displacement
    double a = 0.0;        ///< crack length after the step
    double Delta = 0.0;    ///< specimen opening
    double P = 0.0;        ///< load
    std::optional<double> G_DD;  ///< data-driven energy release rate (closest-point solver)
    bool dissipative = false;
    bool failed = false;
};

struct SolutionTrace {
    std::vector<TraceStep> steps;
    std::string solver_id;
    std::string dataset_id;
    std::uint64_t seed = 0;

    /// true if the trace ended in specimen failure (last step flagged).
    bool failed() const { return !steps.empty() && steps.back().failed; }
};

}  // namespace ddfrac

#endif
