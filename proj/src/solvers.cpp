#include "ddfrac/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ddfrac {

namespace {

constexpr int projection_scan_nodes = 1024;

StepResult finish(const SpecimenModel& s, const MachineCoupling& c, double DeltaT,
                  StepResult r) {
    const EquilibriumState e = equilibrium_split(s, c, DeltaT, r.a_next);
    r.Delta = e.Delta;
    r.P = e.P;
    return r;
}

/// Admissible slice of the sorted index: points with a_hat >= a_k.
std::pair<const std::vector<int>*, std::size_t> admissible_begin(const ResistanceDataSet& d,
                                                                 double a_k) {
    const auto& order = d.sorted_order();
    const auto& pts = d.points();
    auto it = std::lower_bound(order.begin(), order.end(), a_k,
                               [&](int i, double v) { return pts[i].a_hat < v; });
    return {&order, static_cast<std::size_t>(it - order.begin())};
}

/// Upper bound on |dG̃/da| over [a_lo, crack_upper_bound], from the analytic
/// derivative sampled densely plus a safety margin. Used only to prune
/// candidates in the closest-point search.
double slope_bound(const SpecimenModel& s, const MachineCoupling& c, double DeltaT, double a_lo) {
    const int n = 512;
    const double lo = std::max(a_lo, 1e-9);
    const double hi = crack_upper_bound;
    double max_abs = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double a = lo + (hi - lo) * i / n;
        const double C = s.compliance(a);
        const double Cp = s.compliance_derivative(a);
        const double Cpp = s.compliance_second_derivative(a);
        const double denom = C + c.CMbar;
        if (denom <= 0.0) continue;
        const double g = 0.5 * DeltaT * DeltaT / s.params().bbar;
        const double d = g * (Cpp / (denom * denom) - 2.0 * Cp * Cp / (denom * denom * denom));
        max_abs = std::max(max_abs, std::abs(d));
    }
    return 1.5 * max_abs + 1.0;
}

}  // namespace

double default_cpp_tol(const ResistanceDataSet& dataset) {
    const double spacing = dataset.mean_neighbor_spacing();
    if (spacing <= 0.0) return crack_upper_bound;  // degenerate data: never trip
    return 7.5 * spacing;
}

Projection project_distance(double a_hat, double G_hat, double DeltaT, double a_min,
                            const SpecimenModel& s, const MachineCoupling& c, double accuracy) {
    if (!(a_min > 0.0)) throw DomainError("project_distance: a_min must be positive");

    const double hi = crack_upper_bound;
    auto d2 = [&](double a) {
        a = std::min(std::max(a, a_min), hi);  // guard 1-ulp arithmetic overshoot
        const double da = a_hat - a;
        const double dg = G_hat - energy_release_rate(s, c, DeltaT, a);
        return da * da + dg * dg;
    };

    if (a_min >= hi) {
        return {std::sqrt(d2(hi)), hi};
    }

    // Coarse scan, then golden-section refinement of the best bracket.
    const double step = (hi - a_min) / (projection_scan_nodes - 1);
    double best_val = std::numeric_limits<double>::infinity();
    int best_node = 0;
    for (int i = 0; i < projection_scan_nodes; ++i) {
        const double a = (i == projection_scan_nodes - 1) ? hi : a_min + step * i;
        const double v = d2(a);
        if (v < best_val) {
            best_val = v;
            best_node = i;
        }
    }
    double lo_b = a_min + step * std::max(0, best_node - 1);
    double hi_b = std::min(hi, a_min + step * (best_node + 1));

    const double inv_phi = 0.6180339887498949;
    double x1 = hi_b - inv_phi * (hi_b - lo_b);
    double x2 = lo_b + inv_phi * (hi_b - lo_b);
    double f1 = d2(x1);
    double f2 = d2(x2);
    for (int it = 0; it < 200 && (hi_b - lo_b) > accuracy * std::max(1.0, std::abs(lo_b)); ++it) {
        if (f1 < f2) {
            hi_b = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi_b - inv_phi * (hi_b - lo_b);
            f1 = d2(x1);
        } else {
            lo_b = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo_b + inv_phi * (hi_b - lo_b);
            f2 = d2(x2);
        }
    }
    double a_star = 0.5 * (lo_b + hi_b);
    double v_star = d2(a_star);
    if (f1 < v_star) {
        v_star = f1;
        a_star = x1;
    }
    if (f2 < v_star) {
        v_star = f2;
        a_star = x2;
    }
    if (best_val < v_star) {
        v_star = best_val;
        a_star = (best_node == projection_scan_nodes - 1) ? hi : a_min + step * best_node;
    }
    return {std::sqrt(v_star), std::max(a_star, a_min)};
}

StepResult global_step(const SolverState& state, double DeltaT, const ResistanceDataSet& dataset,
                       const SpecimenModel& s, const MachineCoupling& c) {
    auto [order, begin] = admissible_begin(dataset, state.a);
    if (begin == order->size()) {
        throw DatasetExhausted("global_step: no data point with a_hat >= a_k");
    }

    const auto& pts = dataset.points();
    double best = std::numeric_limits<double>::infinity();
    int best_i = -1;
    for (std::size_t j = begin; j < order->size(); ++j) {
        const auto& pt = pts[(*order)[j]];
        const double v = reduced_energy(s, c, DeltaT, pt.a_hat) + pt.F_R_hat;
        // Ascending a_hat scan: strict improvement keeps the smallest a on ties.
        if (v < best) {
            best = v;
            best_i = (*order)[j];
        }
    }

    StepResult r;
    r.a_next = pts[best_i].a_hat;
    r.dissipative = r.a_next > state.a;
    return finish(s, c, DeltaT, r);
}

StepResult cpp_step(const SolverState& state, double DeltaT, const ResistanceDataSet& dataset,
                    const SpecimenModel& s, const MachineCoupling& c, const CppConfig& cfg) {
    if (!state.G_R.has_value()) {
        throw InvalidParameter("cpp_step: state.G_R not initialized (see init_G_R0)");
    }

    const double G_here = energy_release_rate(s, c, DeltaT, state.a);
    if (*state.G_R > G_here) {
        StepResult r;
        r.a_next = state.a;
        r.G_R_next = state.G_R;
        r.G_DD = G_here;
        r.dissipative = false;
        return finish(s, c, DeltaT, r);
    }

    auto [order, begin] = admissible_begin(dataset, state.a);
    if (begin == order->size()) {
        throw DatasetExhausted("cpp_step: no data point with a_hat >= a_k");
    }
    const auto& pts = dataset.points();

    // The vertical gap to the curve is an upper bound on each point's distance
    // and, scaled by the slope bound, a lower bound; candidates are visited in
    // ascending gap order and the tail is pruned once it cannot win.
    struct Cand {
        double gap;
        double a_hat;
        int idx;
    };
    std::vector<Cand> cands;
    cands.reserve(order->size() - begin);
    for (std::size_t j = begin; j < order->size(); ++j) {
        const int i = (*order)[j];
        const double gap = std::abs(pts[i].G_R_hat - energy_release_rate(s, c, DeltaT, pts[i].a_hat));
        cands.push_back({gap, pts[i].a_hat, i});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.gap != y.gap) return x.gap < y.gap;
        if (x.a_hat != y.a_hat) return x.a_hat < y.a_hat;
        return x.idx < y.idx;
    });

    const double L = slope_bound(s, c, DeltaT, state.a);
    const double lb_scale = 1.0 / std::sqrt(1.0 + L * L);

    double best_d = std::numeric_limits<double>::infinity();
    double best_a = 0.0;
    int best_i = -1;
    for (const Cand& cand : cands) {
        if (cand.gap * lb_scale > best_d) break;
        const Projection pr = project_distance(cand.a_hat, pts[cand.idx].G_R_hat, DeltaT, state.a,
                                               s, c, cfg.projection_accuracy);
        if (pr.distance < best_d || (pr.distance == best_d && cand.a_hat < best_a)) {
            best_d = pr.distance;
            best_a = cand.a_hat;
            best_i = cand.idx;
        }
    }

    StepResult r;
    r.a_next = pts[best_i].a_hat;
    r.G_R_next = pts[best_i].G_R_hat;
    r.G_DD = pts[best_i].G_R_hat;
    r.dissipative = true;
    r.failed = best_d > cfg.tol;  // unstable propagation: data too far from the curve
    return finish(s, c, DeltaT, r);
}

StepResult consistency_step(const SolverState& state, double DeltaT,
                            const ResistanceDataSet& dataset, const SpecimenModel& s,
                            const MachineCoupling& c) {
    auto [order, begin] = admissible_begin(dataset, state.a);
    const auto& pts = dataset.points();

    double best = std::numeric_limits<double>::infinity();
    int best_i = -1;
    for (std::size_t j = begin; j < order->size(); ++j) {
        const int i = (*order)[j];
        const double G_at = energy_release_rate(s, c, DeltaT, pts[i].a_hat);
        if (pts[i].G_R_hat < G_at) continue;  // admissibility: G_R_hat >= G̃
        const double v = std::abs((G_at - pts[i].G_R_hat) * (state.a - pts[i].a_hat));
        if (v < best) {
            best = v;
            best_i = i;
        }
    }

    StepResult r;
    if (best_i < 0) {
        // Unstable propagation: every remaining point violates admissibility.
        r.a_next = state.a;
        r.failed = true;
        r.dissipative = false;
        return finish(s, c, DeltaT, r);
    }
    r.a_next = pts[best_i].a_hat;
    r.G_R_next = pts[best_i].G_R_hat;
    r.dissipative = r.a_next > state.a;
    return finish(s, c, DeltaT, r);
}

double init_G_R0(const ResistanceDataSet& dataset, double a0, GR0Rule rule) {
    if (rule == GR0Rule::Zero) return 0.0;
    if (dataset.size() == 0) throw BracketingError("init_G_R0: empty data set");

    const auto& pts = dataset.points();
    const auto& order = dataset.sorted_order();

    // Exact hit wins; otherwise average the bracketing neighbors.
    int below = -1, above = -1;
    for (std::size_t j = 0; j < order.size(); ++j) {
        const int i = order[j];
        if (std::abs(pts[i].a_hat - a0) <= 1e-12) return pts[i].G_R_hat;
        if (pts[i].a_hat < a0) below = i;
        if (pts[i].a_hat > a0 && above < 0) above = i;
    }
    if (below < 0 || above < 0) {
        throw BracketingError("init_G_R0: a0 outside the data set's abscissa hull");
    }
    return 0.5 * (pts[below].G_R_hat + pts[above].G_R_hat);
}

}  // namespace ddfrac
