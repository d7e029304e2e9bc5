#include "ddfrac/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ddfrac/rng.hpp"

namespace ddfrac {

namespace {

void check_domain(double a) {
    if (!(a >= 0.0) || a > crack_upper_bound) {
        throw DomainError("resistance: crack length outside [0, " +
                          std::to_string(crack_upper_bound) + "]");
    }
}

}  // namespace

ResistanceModel::ResistanceModel(ResistanceKind kind, std::vector<PiecewiseLevel> levels)
    : kind_(kind), levels_(std::move(levels)) {}

ResistanceModel ResistanceModel::griffith() { return ResistanceModel(ResistanceKind::Griffith); }

ResistanceModel ResistanceModel::r_curve() { return ResistanceModel(ResistanceKind::RCurve); }

ResistanceModel ResistanceModel::piecewise(std::vector<PiecewiseLevel> levels) {
    if (levels.empty()) throw InvalidParameter("piecewise resistance: no levels");
    double prev = 0.0;
    for (const auto& lvl : levels) {
        if (!(lvl.upper > prev)) {
            throw InvalidParameter("piecewise resistance: interval uppers must strictly increase");
        }
        if (!(lvl.G_R > 0.0)) {
            throw InvalidParameter("piecewise resistance: levels must be positive");
        }
        prev = lvl.upper;
    }
    if (std::abs(prev - 1.0) > 1e-12) {
        throw InvalidParameter("piecewise resistance: intervals must partition (0, 1]");
    }
    return ResistanceModel(ResistanceKind::Piecewise, std::move(levels));
}

ResistanceModel ResistanceModel::bimaterial_stable() {
    return piecewise({{0.5, 1.0}, {1.0, 5.0}});
}

ResistanceModel ResistanceModel::bimaterial_unstable() {
    return piecewise({{0.5, 5.0}, {1.0, 1.0}});
}

std::string ResistanceModel::name() const {
    switch (kind_) {
        case ResistanceKind::Griffith: return "griffith";
        case ResistanceKind::RCurve: return "r-curve";
        case ResistanceKind::Piecewise: return "piecewise";
    }
    return "?";
}

double ResistanceModel::G_R(double a) const {
    check_domain(a);
    switch (kind_) {
        case ResistanceKind::Griffith:
            return 1.0;
        case ResistanceKind::RCurve:
            // 1 + (a-0.1)^2 / ((a-0.1)^2 + 0.2(a-0.1)) simplifies to the form
            // below, which is finite at a = 0.1.
            return 2.0 * a / (a + 0.1);
        case ResistanceKind::Piecewise: {
            // Right-closed intervals (lower, upper]; the first level also covers
            // a = 0 and the last extends through the sampling bound.
            for (const auto& lvl : levels_) {
                if (a <= lvl.upper) return lvl.G_R;
            }
            return levels_.back().G_R;
        }
    }
    return 0.0;
}

double ResistanceModel::F_R(double a, double bbar) const {
    check_domain(a);
    switch (kind_) {
        case ResistanceKind::Griffith:
            return bbar * a;
        case ResistanceKind::RCurve:
            return bbar * 0.2 * (10.0 * a - std::log((a + 0.1) / 0.1));
        case ResistanceKind::Piecewise: {
            double acc = 0.0;
            double lower = 0.0;
            for (const auto& lvl : levels_) {
                const double hi = std::min(a, lvl.upper);
                if (hi > lower) acc += lvl.G_R * (hi - lower);
                lower = lvl.upper;
                if (a <= lvl.upper) break;
            }
            if (a > lower) acc += levels_.back().G_R * (a - lower);
            return bbar * acc;
        }
    }
    return 0.0;
}

ResistanceDataSet::ResistanceDataSet(std::vector<ResistancePoint> points, DatasetMeta meta)
    : points_(std::move(points)), meta_(std::move(meta)) {
    for (const auto& pt : points_) {
        check_domain(pt.a_hat);
        if (pt.F_R_hat < 0.0) throw InvalidParameter("dataset: F_R must be non-negative");
    }
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int i, int j) { return points_[i].a_hat < points_[j].a_hat; });
}

double ResistanceDataSet::mean_neighbor_spacing() const {
    if (points_.size() < 2) return 0.0;
    double sum = 0.0;
    int gaps = 0;
    for (std::size_t i = 1; i < order_.size(); ++i) {
        sum += points_[order_[i]].a_hat - points_[order_[i - 1]].a_hat;
        ++gaps;
    }
    return gaps > 0 ? sum / gaps : 0.0;
}

ResistanceDataSet sample_dataset(const ResistanceModel& model, int N, double interval_lo,
                                 double interval_hi, std::uint64_t seed, double bbar,
                                 SamplingMode mode) {
    if (N < 2) throw InvalidParameter("sample_dataset: N must be at least 2");
    if (interval_hi < interval_lo) throw InvalidParameter("sample_dataset: empty interval");
    check_domain(interval_lo);
    check_domain(interval_hi);

    Rng rng(seed);
    std::vector<ResistancePoint> pts;
    pts.reserve(N);
    const double width = interval_hi - interval_lo;
    for (int i = 0; i < N; ++i) {
        double a = interval_lo;
        switch (mode) {
            case SamplingMode::Random:
                a = rng.uniform(interval_lo, interval_hi);
                break;
            case SamplingMode::Stratified:
                a = interval_lo + width * (i + rng.uniform01()) / N;
                break;
            case SamplingMode::Grid:
                a = N > 1 ? interval_lo + width * i / (N - 1) : interval_lo;
                break;
        }
        pts.push_back({a, model.F_R(a, bbar), model.G_R(a)});
    }

    DatasetMeta meta;
    meta.model = model.name();
    meta.N = N;
    meta.noise_amplitude = 0.0;
    meta.seed = seed;
    meta.sampling = mode == SamplingMode::Random     ? "random"
                    : mode == SamplingMode::Stratified ? "stratified"
                                                       : "grid";
    return ResistanceDataSet(std::move(pts), std::move(meta));
}

ResistanceDataSet apply_noise(const ResistanceDataSet& d, double amplitude, std::uint64_t seed) {
    if (amplitude < 0.0) throw InvalidParameter("apply_noise: amplitude must be non-negative");
    if (amplitude == 0.0) return d;

    Rng rng(seed);
    std::vector<ResistancePoint> pts = d.points();
    for (auto& pt : pts) {
        // One relative deviation per abscissa, shared by both columns.
        const double u = rng.uniform(-amplitude, amplitude);
        pt.F_R_hat *= 1.0 + u;
        pt.G_R_hat *= 1.0 + u;
    }
    DatasetMeta meta = d.meta();  // keeps the generation seed as provenance
    meta.noise_amplitude = amplitude;
    return ResistanceDataSet(std::move(pts), std::move(meta));
}

}  // namespace ddfrac
