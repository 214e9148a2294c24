#include <doctest.h>

#include <cmath>

#include "nlab/errors.hpp"
#include "nlab/experiments.hpp"
#include "nlab/suite.hpp"

using namespace nlab;

namespace {

Profile two_gaussians() {
    return sum(gaussian(1, {1.0, 0.0}, std::sqrt(0.125)), gaussian(1, {-1.0, 0.0}, std::sqrt(0.5), 0.7));
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("counterexample parameters") {
    const CounterexampleSpec s{0.01, 0.01, 2.0, 1, 8, 3.0, false};
    CHECK(s.h() == doctest::Approx(0.00125));
    CHECK(s.grid().cells_per_axis() == 4800);
    CHECK(s.eps_delta() == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK((s.delta - s.eps_delta()) - (-s.eps_delta()) == s.delta);
    CHECK_THROWS_AS((CounterexampleSpec{0.6, 0.01}.validate()), GuardViolation);
    CHECK_THROWS_AS((CounterexampleSpec{0.01, 0.2}.validate()), GuardViolation);
    CHECK_THROWS_AS((CounterexampleSpec{0.03, 0.01, 2.0, 1, 7}.validate()), GuardViolation);
}

TEST_CASE("sampled profile agrees with its exact pieces") {
    for (bool shifted : {false, true}) {
        const CounterexampleSpec s{0.05, 0.02, 2.0, 1, 8, 3.0, shifted};
        const auto u = build_mm1(s);
        const auto pieces = mm1_pieces(s);
        for (std::size_t i = 0; i < u.size(); ++i)
            CHECK(u[i] == doctest::Approx(static_cast<double>(pieces(u.spec().center(i)[0]))).scale(1.0).epsilon(1e-15));
    }
}

TEST_CASE("closed-form polarization of the profile") {
    const CounterexampleSpec s{0.05, 0.02, 2.0, 1, 8, 3.0, false};
    const auto uh = polarize(build_mm1(s), counterexample_half_space());
    const auto ref = build_mm2_reference(s);
    std::size_t defined = 0;
    for (std::size_t i = 0; i < uh.size(); ++i)
        if (ref.defined[i]) {
            ++defined;
            CHECK(uh[i] == ref.values[i]);
        }
    CHECK(defined > uh.size() / 2);
    const auto exact = mm1_pieces(s).polarized(0, Side::Upper);
    for (std::size_t i = 0; i < uh.size(); ++i)
        CHECK(uh[i] == doctest::Approx(static_cast<double>(exact(uh.spec().center(i)[0]))).scale(1.0).epsilon(1e-15));
}

TEST_CASE("asymptotic terms in closed form at p = 2") {
    for (double d : {0.01, 0.05, 0.2}) {
        const auto t = asymptotic_terms({d, 0.01, 2.0, 1, 8, 3.0, false});
        CHECK(t.far_loss == doctest::Approx(d * d / 6).epsilon(1e-12));
        CHECK(t.gain == doctest::Approx(d * d / 2 * (1 / d - 1 / (1 + d) - 0.5)).epsilon(1e-12));
        CHECK(t.ramp_loss > 0.0);
    }
}

TEST_CASE("counterexample scan") {
    const double deltas[] = {2e-3, 1e-2};
    const auto r = counterexample_scan(2.0, 0.01, deltas);
    CHECK(r.rows.size() == 2);
    for (double v : r.column("oracle_diff")) CHECK(v > 0.0);
    CHECK(r.summary["all_differences_positive"].get<bool>());
    const auto def = r.column("defect"), half = r.column("half_grid_diff");
    for (std::size_t i = 0; i < def.size(); ++i) CHECK(def[i] == doctest::Approx(half[i]).epsilon(1e-9));
    CHECK(StudyReport::from_json(r.to_json()) == r);
    const auto again = counterexample_scan(2.0, 0.01, deltas);
    CHECK(again.to_csv() == r.to_csv());
}

TEST_CASE("positivity region scan") {
    const double deltas[] = {1e-3, 1e-2, 5e-2}, eps[] = {0.01, 0.05};
    const auto r = positivity_region_scan(2.0, deltas, eps, true);
    CHECK(r.rows.size() == 7);  // 1e-2 and 5e-2 already appear as epsilons
    CHECK(r.to_csv() == positivity_region_scan(2.0, deltas, eps, true).to_csv());
    const auto plain = positivity_region_scan(2.0, deltas, eps);
    CHECK(plain.rows.size() == 6);
    const auto pos = plain.column("positive");
    CHECK(pos[0] == 1.0);
}

TEST_CASE("vanishing defect for an asymmetric companion profile") {
    const double deltas[] = {0.2, 0.1, 0.05};
    const auto r = vanishing_defect_study(two_gaussians(), 4.0, {0, 0, Side::Lower}, 2.0, deltas);
    CHECK_FALSE(r.summary["identically_zero"].get<bool>());
    for (double v : r.column("identity_residual")) CHECK(v < 1e-9);
    const auto a = r.column("abs_defect");
    CHECK(a[2] < a[0]);
    CHECK_THROWS_AS(vanishing_defect_study(gaussian(2, {0, 0}, 1.0), 2.0, {0, 0, Side::Lower}, 2.0, deltas),
                    GuardViolation);
}

TEST_CASE("Ng limit for a Gaussian") {
    const double deltas[] = {0.1, 0.05, 0.025};
    const auto r = ng_limit_study(gaussian(1, {0, 0}, 1.0), 6.0, 2.0, deltas);
    CHECK(number_from_json(r.summary["extrapolated_ratio_exact"]) == doctest::Approx(1.0).epsilon(0.05));
    for (double v : r.column("ratio_discrete")) CHECK(v < 1.0 + 1e-12);
}

TEST_CASE("BBM sequence for a Gaussian") {
    const double s[] = {0.9, 0.99, 0.999}, h[] = {0.02, 0.01, 0.005};
    const auto r = bbm_study(gaussian(1, {0, 0}, 1.0), 6.0, 2.0, s, h);
    CHECK(number_from_json(r.summary["extrapolated_ratio_k_over_p"]) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(number_from_json(r.summary["extrapolated_ratio_k"]) == doctest::Approx(0.5).epsilon(0.01));
    const double s1[] = {0.9};
    CHECK_THROWS_AS(bbm_study(gaussian(1, {0, 0}, 1.0), 6.0, 2.0, s1, h), ConfigError);
}

TEST_CASE("iterated polarization study in 2D") {
    const GridSpec g(2, 3.0, 24);
    const auto u0 = sample(g, smooth_bump(2, {0.9, 0.6}, 1.2));
    const auto r = polarization_convergence_study(u0, HalfSpaceSchedule(g, 1), 80);
    CHECK(r.summary["non_increasing"].get<bool>());
    CHECK(r.summary["multiset_preserved"].get<bool>());
    CHECK(number_from_json(r.summary["final_over_initial"]) < 0.6);
}

TEST_CASE("decay study") {
    const GridSpec g(2, 4.0, 48);
    const auto u = sample(g, gaussian(2, {0.5, 0}, 1.0));
    const auto r = decay_study(u, {1.5, 1.0, 2.0, {0.8, 0.4}});
    CHECK(r.rows.size() == 2);
    CHECK(r.summary["pointwise_violations"].get<std::size_t>() == 0);
    for (double v : r.column("i_ustar")) CHECK(std::isfinite(v));
    CHECK_THROWS_AS(decay_study(u, {2.5, 1.0, 2.0, {0.8}}), GuardViolation);
}

TEST_CASE("Riesz studies") {
    const double sv[] = {0.3, 0.5, 0.7};
    const auto r = riesz_oracle_study(gaussian(1, {0, 0}, 1.0), 8.0, 128, sv);
    for (double v : r.column("inner_l2_gap")) CHECK(v < 0.01);
    const auto k = keycond_study(6, 1, 64, 0.5, 2.0, 9);
    CHECK(k.rows.size() == 6);
    CHECK(number_from_json(k.summary["max_global_identity_residual"]) <= 1e-10);
    CHECK(k.to_csv() == keycond_study(6, 1, 64, 0.5, 2.0, 9).to_csv());
}

TEST_CASE("inequality suite") {
    const auto r = inequality_suite(6, 1);
    CHECK(r.rows.size() == r.summary["checks"].size());
    for (double c : r.column("cases")) CHECK(c > 0.0);
    CHECK(r.to_csv() == inequality_suite(6, 1).to_csv());
}

}
