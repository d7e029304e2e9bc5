#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ddfrac/rng.hpp"
#include "ddfrac/solvers.hpp"

using namespace ddfrac;

namespace {

DimensionlessParams baseline_dimensionless() {
    DimensionlessParams d;
    d.hbar = 0.1;
    d.abar0 = 0.1;
    d.bbar = 1.0 / 30.0;
    d.Ybar = 3.5e7;
    d.CMbar = 1.2e-4;
    d.deltaTbar = 5e-5;
    return d;
}

SpecimenModel baseline_specimen() { return SpecimenModel::standard_dcb(baseline_dimensionless()); }
MachineCoupling baseline_machine() { return MachineCoupling{1.2e-4}; }

ResistanceDataSet make_dataset(std::vector<ResistancePoint> pts) {
    return ResistanceDataSet(std::move(pts), DatasetMeta{});
}

/// Exhaustive scan of E~ + F^ over the admissible subset, in raw storage
/// order, ties to the smallest a_hat. Independent of the solver path.
int global_oracle(const SolverState& state, double DeltaT, const ResistanceDataSet& d,
                  const SpecimenModel& s, const MachineCoupling& c) {
    int best = -1;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d.size(); ++i) {
        const auto& pt = d.points()[i];
        if (pt.a_hat < state.a) continue;
        const double v = reduced_energy(s, c, DeltaT, pt.a_hat) + pt.F_R_hat;
        if (v < best_v || (v == best_v && best >= 0 && pt.a_hat < d.points()[best].a_hat)) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

/// Exhaustive scan of the consistency objective over the admissible subset.
int consistency_oracle(const SolverState& state, double DeltaT, const ResistanceDataSet& d,
                       const SpecimenModel& s, const MachineCoupling& c) {
    int best = -1;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d.size(); ++i) {
        const auto& pt = d.points()[i];
        if (pt.a_hat < state.a) continue;
        const double G = energy_release_rate(s, c, DeltaT, pt.a_hat);
        if (pt.G_R_hat < G) continue;
        const double v = std::abs((G - pt.G_R_hat) * (state.a - pt.a_hat));
        if (v < best_v || (v == best_v && best >= 0 && pt.a_hat < d.points()[best].a_hat)) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

ResistanceDataSet random_dataset(Rng& rng, int n, double g_lo, double g_hi) {
    std::vector<ResistancePoint> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = rng.uniform(0.0, crack_upper_bound);
        const double g = rng.uniform(g_lo, g_hi);
        pts.push_back({a, a / 30.0, g});
    }
    return make_dataset(std::move(pts));
}

}  // namespace

TEST_CASE("global_step basics") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    const ResistanceDataSet d = sample_dataset(ResistanceModel::griffith(), 200, 0.0,
                                               crack_upper_bound, 31, 1.0 / 30.0);

    SUBCASE("zero displacement picks the smallest admissible point") {
        const StepResult r = global_step({0.1, {}}, 0.0, d, s, c);
        double smallest = crack_upper_bound;
        for (const auto& pt : d.points()) {
            if (pt.a_hat >= 0.1) smallest = std::min(smallest, pt.a_hat);
        }
        CHECK(r.a_next == smallest);
        CHECK_FALSE(r.failed);
    }
    SUBCASE("singleton dataset returns its point") {
        const ResistanceDataSet one = make_dataset({{0.1, 0.1 / 30.0, 1.0}});
        const StepResult r = global_step({0.1, {}}, 1e-3, one, s, c);
        CHECK(r.a_next == 0.1);
        CHECK_FALSE(r.dissipative);
    }
    SUBCASE("exhausted admissible set") {
        CHECK_THROWS_AS(global_step({1.09, {}}, 1e-3, make_dataset({{0.5, 0.5, 1.0}}), s, c),
                        DatasetExhausted);
    }
    SUBCASE("never reports failure") {
        for (double DT : {1e-3, 5e-3, 2e-2}) {
            CHECK_FALSE(global_step({0.1, {}}, DT, d, s, c).failed);
        }
    }
}

TEST_CASE("global_step matches the exhaustive oracle on randomized instances") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    Rng rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 60.0));
        const ResistanceDataSet d = random_dataset(rng, n, 0.5, 1.5);
        const SolverState state{rng.uniform(0.0, 1.0), {}};
        const double DT = rng.uniform(0.0, 1e-2);
        const int want = global_oracle(state, DT, d, s, c);
        if (want < 0) {
            CHECK_THROWS_AS(global_step(state, DT, d, s, c), DatasetExhausted);
        } else {
            const StepResult r = global_step(state, DT, d, s, c);
            CHECK(r.a_next == d.points()[want].a_hat);
        }
    }
}

TEST_CASE("global step on a dense grid reproduces the reference jump displacement") {
    // 1000-point noiseless grid data, default ramp: the crack-jump step lands
    // within one increment of 1.75e-3.
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    const ResistanceDataSet d = sample_dataset(ResistanceModel::griffith(), 1000, 0.0,
                                               crack_upper_bound, 0, 1.0 / 30.0,
                                               SamplingMode::Grid);
    SolverState state{0.1, {}};
    double jump_at = 0.0;
    for (int k = 1; k <= 60; ++k) {
        const double DT = 5e-5 * k;
        const StepResult r = global_step(state, DT, d, s, c);
        if (r.a_next - state.a > 0.05) {
            jump_at = DT;
            break;
        }
        state.a = r.a_next;
    }
    CHECK(std::abs(jump_at - 1.75e-3) <= 5e-5 + 1e-12);
}

TEST_CASE("project_distance") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();

    SUBCASE("point on the curve projects to itself") {
        const double a_hat = 0.4;
        const double DT = 2e-3;
        const double g = energy_release_rate(s, c, DT, a_hat);
        const Projection p = project_distance(a_hat, g, DT, 0.1, s, c);
        CHECK(p.distance <= 1e-7);
        CHECK(p.a_star == doctest::Approx(a_hat).epsilon(1e-6));
    }
    SUBCASE("flat curve at zero displacement") {
        const Projection p = project_distance(0.5, 1.0, 0.0, 0.1, s, c);
        CHECK(p.distance == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(p.a_star == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("matches a dense-grid oracle") {
        const double DT = 2e-3;
        const double a_min = 0.1;
        const Projection p = project_distance(0.3, 1.0, DT, a_min, s, c);
        double oracle = std::numeric_limits<double>::infinity();
        const int n = 1000000;
        for (int i = 0; i <= n; ++i) {
            const double a = a_min + (crack_upper_bound - a_min) * i / n;
            const double da = 0.3 - a;
            const double dg = 1.0 - energy_release_rate(s, c, DT, a);
            oracle = std::min(oracle, std::sqrt(da * da + dg * dg));
        }
        CHECK(p.distance <= oracle + 1e-6);
        CHECK(p.distance >= oracle - 1e-4);  // grid value is itself 1e-4-ish above the true min
        CHECK(p.a_star >= a_min);
    }
    SUBCASE("constraint a* >= a_min is active when the free minimum is excluded") {
        const double DT = 2e-3;
        // point far left of the admissible window
        const Projection p = project_distance(0.12, 1.0, DT, 0.6, s, c);
        CHECK(p.a_star >= 0.6);
    }
    SUBCASE("a_min must be positive") {
        CHECK_THROWS_AS(project_distance(0.3, 1.0, 1e-3, 0.0, s, c), DomainError);
    }
}

TEST_CASE("projection never beats the dense oracle on randomized instances") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const double DT = rng.uniform(0.0, 5e-3);
        const double a_min = rng.uniform(0.05, 0.9);
        const double a_hat = rng.uniform(a_min, crack_upper_bound);
        const double g_hat = rng.uniform(0.0, 3.0);
        const Projection p = project_distance(a_hat, g_hat, DT, a_min, s, c);
        double oracle = std::numeric_limits<double>::infinity();
        const int n = 200000;
        for (int i = 0; i <= n; ++i) {
            const double a = std::min(a_min + (crack_upper_bound - a_min) * i / n, crack_upper_bound);
            const double da = a_hat - a;
            const double dg = g_hat - energy_release_rate(s, c, DT, a);
            oracle = std::min(oracle, std::sqrt(da * da + dg * dg));
        }
        CHECK(p.distance <= oracle + 1e-6);
        CHECK(p.a_star >= a_min);
    }
}

TEST_CASE("cpp_step") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    const CppConfig cfg{0.05, 1e-8};

    SUBCASE("elastic branch leaves the state untouched") {
        const double DT = 1e-3;  // G(DT, 0.1) well below 2
        const ResistanceDataSet d = make_dataset({{0.2, 0.2, 1.0}, {0.6, 0.6, 1.0}});
        const StepResult r = cpp_step({0.1, 2.0}, DT, d, s, c, cfg);
        CHECK(r.a_next == 0.1);
        CHECK(r.G_R_next == doctest::Approx(2.0));
        CHECK_FALSE(r.dissipative);
        CHECK(r.G_DD == doctest::Approx(energy_release_rate(s, c, DT, 0.1)));
    }
    SUBCASE("elastic step is independent of the dataset contents") {
        const double DT = 1e-3;
        const ResistanceDataSet d1 = make_dataset({{0.2, 0.2, 1.0}});
        const ResistanceDataSet d2 = make_dataset({{0.9, 0.9, 7.0}, {0.3, 0.1, 0.2}});
        const StepResult r1 = cpp_step({0.1, 2.0}, DT, d1, s, c, cfg);
        const StepResult r2 = cpp_step({0.1, 2.0}, DT, d2, s, c, cfg);
        CHECK(r1.a_next == r2.a_next);
        CHECK(r1.G_DD == r2.G_DD);
        CHECK(r1.Delta == r2.Delta);
        CHECK(r1.P == r2.P);
    }
    SUBCASE("a point exactly on the curve wins") {
        const double DT = 2.5e-3;
        const double a_on = 0.45;
        const double g_on = energy_release_rate(s, c, DT, a_on);
        const ResistanceDataSet d =
            make_dataset({{0.2, 0.2, 3.0}, {a_on, a_on / 30.0, g_on}, {1.0, 1.0, 4.0}});
        const StepResult r = cpp_step({0.1, 0.0}, DT, d, s, c, cfg);
        CHECK(r.a_next == a_on);
        CHECK(r.G_R_next == doctest::Approx(g_on));
        CHECK(r.G_DD == doctest::Approx(g_on));
        CHECK(r.dissipative);
        CHECK_FALSE(r.failed);
    }
    SUBCASE("distance above tol flags unstable propagation") {
        const double DT = 2.5e-3;
        const ResistanceDataSet d = make_dataset({{1.05, 1.0, 9.0}});
        const StepResult r = cpp_step({0.1, 0.0}, DT, d, s, c, CppConfig{1e-3, 1e-8});
        CHECK(r.failed);
    }
    SUBCASE("dense noiseless data: first dissipative step near the reference jump") {
        const ResistanceDataSet d = sample_dataset(ResistanceModel::griffith(), 1000, 0.0,
                                                   crack_upper_bound, 0, 1.0 / 30.0,
                                                   SamplingMode::Grid);
        const CppConfig auto_cfg{default_cpp_tol(d), 1e-8};
        SolverState state{0.1, init_G_R0(d, 0.1)};
        double first_dissipative = 0.0;
        for (int k = 1; k <= 60 && first_dissipative == 0.0; ++k) {
            const double DT = 5e-5 * k;
            const StepResult r = cpp_step(state, DT, d, s, c, auto_cfg);
            if (r.dissipative) first_dissipative = DT;
            state.a = r.a_next;
            state.G_R = r.G_R_next;
        }
        CHECK(std::abs(first_dissipative - 2.23e-3) <= 2 * 5e-5 + 1e-12);
    }
    SUBCASE("uninitialized history is rejected") {
        const ResistanceDataSet d = make_dataset({{0.2, 0.2, 1.0}});
        CHECK_THROWS_AS(cpp_step({0.1, {}}, 1e-3, d, s, c, cfg), InvalidParameter);
    }
    SUBCASE("exhausted admissible set") {
        const ResistanceDataSet d = make_dataset({{0.2, 0.2, 1.0}});
        CHECK_THROWS_AS(cpp_step({0.5, 0.0}, 1e-3, d, s, c, cfg), DatasetExhausted);
    }
}

TEST_CASE("consistency_step") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();

    SUBCASE("all points inadmissible -> failure") {
        const double DT = 1e-2;  // G well above 1 everywhere near a0
        const ResistanceDataSet d = make_dataset({{0.15, 0.15, 1.0}, {0.2, 0.2, 1.0}});
        const StepResult r = consistency_step({0.1, {}}, DT, d, s, c);
        CHECK(r.failed);
        CHECK(r.a_next == 0.1);
    }
    SUBCASE("a point at a_k zeroes the objective (crack arrest)") {
        const double DT = 1e-3;
        const ResistanceDataSet d =
            make_dataset({{0.1, 0.1 / 30.0, 1.0}, {0.4, 0.4 / 30.0, 1.0}, {0.7, 0.7 / 30.0, 1.0}});
        const StepResult r = consistency_step({0.1, {}}, DT, d, s, c);
        CHECK(r.a_next == 0.1);
        CHECK_FALSE(r.failed);
    }
    SUBCASE("zero displacement minimizes G_R_hat * (a_hat - a_k)") {
        Rng rng(55);
        for (int trial = 0; trial < 50; ++trial) {
            const ResistanceDataSet d = random_dataset(rng, 20, 0.5, 1.5);
            const SolverState state{0.1, {}};
            // brute-force scan of the zero-displacement objective
            int want = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < d.size(); ++i) {
                const auto& pt = d.points()[i];
                if (pt.a_hat < 0.1) continue;
                const double v = pt.G_R_hat * (pt.a_hat - 0.1);
                if (v < best || (v == best && want >= 0 && pt.a_hat < d.points()[want].a_hat)) {
                    best = v;
                    want = i;
                }
            }
            if (want < 0) continue;
            const StepResult r = consistency_step(state, 0.0, d, s, c);
            CHECK(r.a_next == d.points()[want].a_hat);
        }
    }
    SUBCASE("never selects a point below the curve") {
        Rng rng(56);
        for (int trial = 0; trial < 200; ++trial) {
            const ResistanceDataSet d = random_dataset(rng, 30, 0.2, 2.5);
            const double DT = rng.uniform(0.0, 5e-3);
            const StepResult r = consistency_step({0.1, {}}, DT, d, s, c);
            if (r.failed) continue;
            CHECK(r.G_R_next.value() >= energy_release_rate(s, c, DT, r.a_next));
        }
    }
}

TEST_CASE("consistency_step matches the exhaustive oracle on randomized instances") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    Rng rng(202);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 60.0));
        const ResistanceDataSet d = random_dataset(rng, n, 0.2, 2.5);
        const SolverState state{rng.uniform(0.05, 1.0), {}};
        const double DT = rng.uniform(0.0, 8e-3);
        const int want = consistency_oracle(state, DT, d, s, c);
        const StepResult r = consistency_step(state, DT, d, s, c);
        if (want < 0) {
            CHECK(r.failed);
        } else {
            REQUIRE_FALSE(r.failed);
            CHECK(r.a_next == d.points()[want].a_hat);
        }
    }
}

TEST_CASE("irreversibility and membership across all solvers") {
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    Rng rng(303);
    for (int trial = 0; trial < 300; ++trial) {
        const ResistanceDataSet d = random_dataset(rng, 40, 0.5, 2.0);
        const double a_k = rng.uniform(0.05, 0.9);
        const double DT = rng.uniform(0.0, 6e-3);
        auto check_result = [&](const StepResult& r) {
            CHECK(r.a_next >= a_k);
            bool member = r.a_next == a_k;
            for (const auto& pt : d.points()) member |= pt.a_hat == r.a_next;
            CHECK(member);
        };
        try {
            check_result(global_step({a_k, {}}, DT, d, s, c));
        } catch (const DatasetExhausted&) {
        }
        try {
            check_result(cpp_step({a_k, 1.0}, DT, d, s, c, CppConfig{10.0, 1e-8}));
        } catch (const DatasetExhausted&) {
        }
        check_result(consistency_step({a_k, {}}, DT, d, s, c));
    }
}

TEST_CASE("cpp_step candidate pruning never changes the selection") {
    // brute force: project every admissible point, same tie rule
    const SpecimenModel s = baseline_specimen();
    const MachineCoupling c = baseline_machine();
    Rng rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const ResistanceDataSet d = random_dataset(rng, 60, 0.6, 1.6);
        const double a_k = rng.uniform(0.05, 0.8);
        const double DT = rng.uniform(5e-4, 6e-3);
        const SolverState state{a_k, 0.0};  // force the dissipative branch

        double best_d = std::numeric_limits<double>::infinity();
        double best_a = 0.0;
        int best_i = -1;
        for (int i = 0; i < d.size(); ++i) {
            const auto& pt = d.points()[i];
            if (pt.a_hat < a_k) continue;
            const Projection p = project_distance(pt.a_hat, pt.G_R_hat, DT, a_k, s, c);
            if (p.distance < best_d || (p.distance == best_d && pt.a_hat < best_a)) {
                best_d = p.distance;
                best_a = pt.a_hat;
                best_i = i;
            }
        }
        if (best_i < 0) continue;
        const StepResult r = cpp_step(state, DT, d, s, c, CppConfig{100.0, 1e-8});
        CHECK(r.a_next == d.points()[best_i].a_hat);
    }
}

TEST_CASE("init_G_R0") {
    SUBCASE("exact hit") {
        const ResistanceDataSet d =
            make_dataset({{0.05, 0.0, 0.7}, {0.1, 0.0, 1.3}, {0.4, 0.0, 2.0}});
        CHECK(init_G_R0(d, 0.1) == 1.3);
    }
    SUBCASE("bracket average") {
        const ResistanceDataSet d = make_dataset({{0.02, 0.0, 0.9}, {0.3, 0.0, 1.1}});
        CHECK(init_G_R0(d, 0.1) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("zero rule ignores the data") {
        const ResistanceDataSet d = make_dataset({{0.02, 0.0, 0.9}, {0.3, 0.0, 1.1}});
        CHECK(init_G_R0(d, 0.1, GR0Rule::Zero) == 0.0);
    }
    SUBCASE("outside the hull") {
        const ResistanceDataSet d = make_dataset({{0.2, 0.0, 0.9}, {0.3, 0.0, 1.1}});
        CHECK_THROWS_AS(init_G_R0(d, 0.1), BracketingError);
        CHECK_THROWS_AS(init_G_R0(d, 0.5), BracketingError);
    }
}

TEST_CASE("default_cpp_tol is 7.5x the mean neighbor spacing") {
    const ResistanceDataSet d =
        make_dataset({{0.0, 0.0, 1.0}, {0.1, 0.0, 1.0}, {0.3, 0.0, 1.0}, {0.6, 0.0, 1.0}});
    CHECK(default_cpp_tol(d) == doctest::Approx(7.5 * 0.2).epsilon(1e-12));
}
