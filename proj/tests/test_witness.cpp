#include <doctest.h>

#include "ofwpep/witness.hpp"

using namespace ofwpep;

namespace {

SdpSolution fake_solution(const Mat& G) {
    SdpSolution s;
    s.X = G;
    s.status = SolveStatus::optimal;
    return s;
}

ParamSchedule b3_t2_schedule() {
    auto s = ParamSchedule::zeros(2);
    s.eta(1, 1) = 1.0;
    s.gamma(2, 1) = 0.5;
    s.hull_safe = true;
    return s;
}

}  // namespace

TEST_CASE("extract: identity and rank-one Gram matrices") {
    auto wc = extract(fake_solution(Mat::Identity(4, 4)), GramBasis::ofw(2));
    CHECK(wc.d == 4);
    CHECK((wc.gram() - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    Rng rng(9);
    Vec q = rng.normal_vec(4);
    auto wc1 = extract(fake_solution(Mat(q * q.transpose())), GramBasis::ofw(2));
    CHECK(wc1.d == 1);
    CHECK((wc1.gram() - q * q.transpose()).cwiseAbs().maxCoeff() < 1e-10);

    Mat indef = Mat::Identity(4, 4);
    indef(0, 0) = -0.5;
    CHECK_THROWS_AS(extract(fake_solution(indef), GramBasis::ofw(2)), std::invalid_argument);
}

TEST_CASE("witness closure at the T = 2 optimized parameters") {
    ProblemSetting ps(1, 1, 2);
    auto sched = b3_t2_schedule();
    auto g = build_primal(sched, ps);
    auto res = solve_gram(g, {.tol = 1e-9});
    REQUIRE(res.status == SolveStatus::optimal);
    auto wc = extract(res.raw, g.basis);
    CHECK(wc.g[0].norm() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(wc.g[1].norm() == doctest::Approx(1.0).epsilon(1e-4));
    auto rep = audit(wc, sched, ps, res.value);
    CHECK(rep.all_ok());
    CHECK(std::abs(rep.replay_regret - 1.7321) <= 5e-3);
    // left inverse up to orthogonal transformation
    CHECK((wc.gram() - res.raw.X).norm() <= 1e-6 * (1.0 + res.raw.X.norm()));
}

TEST_CASE("audit flags a corrupted atom") {
    ProblemSetting ps(1, 1, 3);
    auto sched = preset_ofw_new(3, 1, 1);
    auto g = build_primal(sched, ps);
    auto res = solve_gram(g, {.tol = 1e-9});
    REQUIRE(res.status == SolveStatus::optimal);
    auto wc = extract(res.raw, g.basis);
    auto good = audit(wc, sched, ps, res.value);
    CHECK(good.all_ok());

    auto bad = wc;
    bad.v[0] = bad.v[0].array() + 0.1 * ps.D;
    auto rep = audit(bad, sched, ps, res.value);
    CHECK_FALSE(rep.lmo_consistent);
    CHECK_FALSE(rep.all_ok());
}

TEST_CASE("degenerate zero Gram matrix audits cleanly") {
    ProblemSetting ps(1, 1, 3);
    auto sched = ParamSchedule::zeros(3);
    sched.hull_safe = true;
    auto wc = extract(fake_solution(Mat::Zero(6, 6)), GramBasis::ofw(3));
    auto rep = audit(wc, sched, ps, 0.0);
    CHECK(rep.all_ok());
    CHECK(rep.replay_regret == 0.0);
}

TEST_CASE("worst_case_T1: analytic instance") {
    auto wc = worst_case_T1(ProblemSetting(1, 1, 1));
    CHECK(wc.regret == 1.0);
    auto wc2 = worst_case_T1(ProblemSetting(2, 3, 1));
    CHECK(wc2.regret == 6.0);
    auto rep = audit(wc2, ParamSchedule::zeros(1), ProblemSetting(2, 3, 1), 6.0);
    CHECK(rep.all_ok());
}

TEST_CASE("primal-dual sandwich around the replayed regret") {
    Rng rng(31);
    for (int T : {3, 4}) {
        ProblemSetting ps(1, 1, T);
        for (auto sched : {preset_ofw_new(T, 1, 1), preset_hazan(T, 1, 1, HazanVariant::alg27)}) {
            auto g = build_primal(sched, ps);
            auto pr = solve_gram(g, {.tol = 1e-9});
            REQUIRE(pr.status == SolveStatus::optimal);
            auto wc = extract(pr.raw, g.basis);
            auto rep = audit(wc, sched, ps, pr.value);
            CHECK(rep.all_ok());
            auto du = solve_gram(build_dual(sched, ps), {.tol = 1e-9});
            auto cert = certify_gram_dual(build_dual(sched, ps), du.multipliers);
            CHECK(cert.feasible);
            CHECK(rep.replay_regret <= cert.value + 1e-4);
        }
    }
}

TEST_CASE("extract: rank tolerance controls the retained dimension") {
    Rng rng(44);
    Vec q1 = rng.normal_vec(4).normalized();
    Vec q2 = rng.normal_vec(4).normalized();
    Mat G = q1 * q1.transpose() + 1e-5 * q2 * q2.transpose();
    auto tight = extract(fake_solution(G), GramBasis::ofw(2), 1e-7);
    CHECK(tight.d == 2);  // the 1e-5 eigenvalue survives
    auto coarse = extract(fake_solution(G), GramBasis::ofw(2), 1e-3);
    CHECK(coarse.d == 1);
    CHECK(tight.spectrum.size() == 2);
    CHECK(tight.spectrum[0] >= tight.spectrum[1]);
}

TEST_CASE("worst-case JSON round trip") {
    ProblemSetting ps(1, 1, 2);
    auto g = build_primal(b3_t2_schedule(), ps);
    auto res = solve_gram(g, {.tol = 1e-9});
    auto wc = extract(res.raw, g.basis);
    wc.regret = res.value;
    auto j = worst_case_to_json(wc);
    auto back = worst_case_from_json(j);
    CHECK(back.T == wc.T);
    CHECK(back.d == wc.d);
    for (int t = 0; t < 2; ++t) CHECK((back.g[t] - wc.g[t]).norm() == 0.0);
    CHECK((back.x_star - wc.x_star).norm() == 0.0);
}
