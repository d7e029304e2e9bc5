#ifndef DDFRAC_RESISTANCE_HPP
#define DDFRAC_RESISTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ddfrac/core.hpp"

namespace ddfrac {

enum class ResistanceKind { Griffith, RCurve, Piecewise };

/// One constant-resistance level of a piecewise model; the level applies on
/// the right-closed interval (lower, upper].
struct PiecewiseLevel {
    double upper = 0.0;
    double G_R = 0.0;
};

/// Analytic crack-resistance models used to generate synthetic data sets and
/// to drive the reference solvers.
class ResistanceModel {
public:
    static ResistanceModel griffith();
    static ResistanceModel r_curve();
    /// Levels must have strictly increasing `upper` ending at 1 and positive
    /// G_R. The last level extends through crack_upper_bound.
    static ResistanceModel piecewise(std::vector<PiecewiseLevel> levels);
    static ResistanceModel bimaterial_stable();    // 1 on (0, 0.5], 5 on (0.5, 1]
    static ResistanceModel bimaterial_unstable();  // 5 on (0, 0.5], 1 on (0.5, 1]

    ResistanceKind kind() const { return kind_; }
    const std::vector<PiecewiseLevel>& levels() const { return levels_; }
    std::string name() const;

    /// Resistance rate G_R(a). Throws DomainError outside [0, crack_upper_bound].
    double G_R(double a) const;

    /// Resistance energy F_R(a) = bbar * integral of G_R; non-decreasing.
    double F_R(double a, double bbar) const;

private:
    explicit ResistanceModel(ResistanceKind kind, std::vector<PiecewiseLevel> levels = {});

    ResistanceKind kind_;
    std::vector<PiecewiseLevel> levels_;
};

struct ResistancePoint {
    double a_hat = 0.0;
    double F_R_hat = 0.0;
    double G_R_hat = 0.0;
};

struct DatasetMeta {
    std::string model;
    int N = 0;
    double noise_amplitude = 0.0;
    std::uint64_t seed = 0;
    std::string sampling = "random";
};

/// Discrete material knowledge: (â_i, F̂_Ri, Ĝ_Ri) triplets sampled at common
/// abscissae. Points are stored in generation order and never reordered; a
/// separate index sorted by â is kept for the solvers.
class ResistanceDataSet {
public:
    ResistanceDataSet() = default;
    ResistanceDataSet(std::vector<ResistancePoint> points, DatasetMeta meta);

    const std::vector<ResistancePoint>& points() const { return points_; }
    const DatasetMeta& meta() const { return meta_; }
    int size() const { return static_cast<int>(points_.size()); }

    /// Point indices in ascending a_hat order (ties keep generation order).
    const std::vector<int>& sorted_order() const { return order_; }

    /// Mean spacing between consecutive distinct abscissae.
    double mean_neighbor_spacing() const;

private:
    std::vector<ResistancePoint> points_;
    DatasetMeta meta_;
    std::vector<int> order_;
};

enum class SamplingMode { Random, Stratified, Grid };

/// Draws N abscissae on [interval_lo, interval_hi] (default sampling: i.i.d.
/// uniform) and evaluates both resistance columns at each. Reproducible from
/// the seed. Throws InvalidParameter for N < 2 or an inverted interval.
ResistanceDataSet sample_dataset(const ResistanceModel& model, int N, double interval_lo,
                                 double interval_hi, std::uint64_t seed, double bbar,
                                 SamplingMode mode = SamplingMode::Random);

/// Applies one multiplicative deviation u_i ~ U[-amplitude, amplitude] per
/// point to both columns (same u_i), leaving abscissae untouched.
ResistanceDataSet apply_noise(const ResistanceDataSet& d, double amplitude, std::uint64_t seed);

}  // namespace ddfrac

#endif
