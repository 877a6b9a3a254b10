#include <doctest.h>

#include "ofwpep/lmi.hpp"
#include "ofwpep/solver.hpp"

using namespace ofwpep;

namespace {

// Test-only oracle: augmented-Lagrangian projected gradient on the PSD cone,
// run to high accuracy. Independent of the interior-point path.
double penalized_pg_max(const Mat& C, const std::vector<Mat>& As, const Vec& b,
                        double rho, int inner_iters, int outer_iters = 60) {
    const int n = static_cast<int>(C.rows());
    const int m = static_cast<int>(As.size());
    Mat X = Mat::Identity(n, n);
    Vec y = Vec::Zero(m);
    auto residual = [&](const Mat& Xc) {
        Vec r(m);
        for (int i = 0; i < m; ++i) r[i] = (As[i].cwiseProduct(Xc)).sum() - b[i];
        return r;
    };
    double lip = 1.0 + C.norm();
    for (const auto& A : As) lip += rho * A.squaredNorm();
    double step = 1.0 / lip;
    auto project = [&](Mat M) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
        Vec ev = es.eigenvalues().cwiseMax(0.0);
        return Mat(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
    };
    for (int outer = 0; outer < outer_iters; ++outer) {
        Mat Yk = X;
        double tprev = 1.0;
        for (int k = 0; k < inner_iters; ++k) {
            Vec r = residual(Yk);
            Mat G = C;
            for (int i = 0; i < m; ++i) G -= (y[i] + rho * r[i]) * As[i];
            Mat Xn = project(Yk + step * G);
            double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tprev * tprev));
            Yk = Xn + ((tprev - 1.0) / t) * (Xn - X);
            X = Xn;
            tprev = t;
        }
        y += rho * residual(X);
    }
    return (C.cwiseProduct(X)).sum();
}

}  // namespace

TEST_CASE("svec/smat round trip and inner products") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + rng.uniform_int(0, 6);
        Mat A = Mat::NullaryExpr(n, n, [&](int, int) { return rng.normal(); });
        A = 0.5 * (A + A.transpose()).eval();
        Mat B = Mat::NullaryExpr(n, n, [&](int, int) { return rng.normal(); });
        B = 0.5 * (B + B.transpose()).eval();
        // exact up to one floating-point rounding of the sqrt(2) scaling
        double scale = A.cwiseAbs().maxCoeff();
        CHECK((smat(svec(A)) - A).cwiseAbs().maxCoeff() <= 2.3e-16 * scale);
        CHECK((smat(svec(A)).diagonal() - A.diagonal()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(svec(A).dot(svec(B)) == doctest::Approx((A * B).trace()).epsilon(1e-12));
        CHECK(svec(A).squaredNorm() == doctest::Approx(A.squaredNorm()).epsilon(1e-12));
    }
    Mat I3 = Mat::Identity(3, 3);
    Vec v = svec(I3);
    CHECK(v[0] == 1.0);
    CHECK(v[3] == 1.0);
    CHECK(v[5] == 1.0);
    CHECK(v.sum() == 3.0);
    Mat bad(2, 2);
    bad << 1, 2, 3, 4;
    CHECK_THROWS_AS(svec(bad), std::invalid_argument);
}

TEST_CASE("sym_kron matches its defining identity") {
    Rng rng(11);
    int n = 4;
    auto rnd_sym = [&]() {
        Mat A = Mat::NullaryExpr(n, n, [&](int, int) { return rng.normal(); });
        return Mat(0.5 * (A + A.transpose()));
    };
    Mat P = rnd_sym(), Q = rnd_sym(), M = rnd_sym();
    Mat K = sym_kron(P, Q);
    Vec lhs = K * svec(M);
    Mat rhs = 0.5 * (P * M * Q + Q * M * P);
    CHECK((lhs - svec(0.5 * (rhs + rhs.transpose()))).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("solve: max eigenvalue problem") {
    // maximize tr(diag(1,2) X) s.t. tr(X) = 1, X PSD  ->  2 at X = diag(0,1)
    ConeProblem pb;
    pb.init(2, 0, 0, 1);
    Mat C(2, 2);
    C << 1, 0, 0, 2;
    pb.c_psd = -svec(C);  // minimize form
    pb.A_psd.row(0) = svec(Mat::Identity(2, 2)).transpose();
    pb.rhs[0] = 1.0;
    auto sol = solve(pb, {.tol = 1e-9});
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(-sol.objective == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(sol.X(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.X(0, 0) == doctest::Approx(0.0).scale(1).epsilon(1e-6));

    auto rep = certify(sol, pb, 1e-6);
    CHECK(rep.all_ok);
}

TEST_CASE("solve: 2x2 determinant LMI with a free variable") {
    // minimize t s.t. [[t,1],[1,t]] PSD  ->  t = 1
    LmiProblem p;
    p.dim = 2;
    p.M0 = Mat::Zero(2, 2);
    p.M0(0, 1) = p.M0(1, 0) = 1.0;
    LmiVar t;
    t.name = "t";
    t.cost = 1.0;
    t.nonneg = false;
    t.M = Mat::Identity(2, 2);
    p.vars.push_back(t);
    auto sol = solve_lmi(p, {.tol = 1e-9});
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("solve: random SDP cross-checked by an independent oracle") {
    Rng rng(12345);
    const int n = 5;
    auto rnd_sym = [&]() {
        Mat A = Mat::NullaryExpr(n, n, [&](int, int) { return rng.normal(); });
        return Mat(0.5 * (A + A.transpose()));
    };
    // feasible by construction; tr X = 1 keeps it bounded
    std::vector<Mat> As;
    As.push_back(Mat::Identity(n, n));
    for (int i = 1; i < 6; ++i) As.push_back(rnd_sym());
    Mat X0 = Mat::Identity(n, n) / n;
    Vec b(6);
    for (int i = 0; i < 6; ++i) b[i] = (As[i].cwiseProduct(X0)).sum();
    Mat C = rnd_sym();

    ConeProblem pb;
    pb.init(n, 0, 0, 6);
    pb.c_psd = -svec(C);
    for (int i = 0; i < 6; ++i) pb.A_psd.row(i) = svec(As[i]).transpose();
    pb.rhs = b;
    auto sol = solve(pb, {.tol = 1e-9});
    REQUIRE(sol.status == SolveStatus::optimal);

    double oracle = penalized_pg_max(C, As, b, 10.0, 3000);
    CHECK(-sol.objective == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("solve: larger mixed problem against the oracle") {
    Rng rng(777);
    const int n = 8;
    auto rnd_sym = [&]() {
        Mat A = Mat::NullaryExpr(n, n, [&](int, int) { return rng.normal(); });
        return Mat(0.5 * (A + A.transpose()));
    };
    std::vector<Mat> As;
    As.push_back(Mat::Identity(n, n));
    for (int i = 1; i < 12; ++i) As.push_back(rnd_sym());
    Mat X0 = Mat::Identity(n, n) / n;
    Vec b(12);
    for (int i = 0; i < 12; ++i) b[i] = (As[i].cwiseProduct(X0)).sum();
    Mat C = rnd_sym();
    ConeProblem pb;
    pb.init(n, 0, 0, 12);
    pb.c_psd = -svec(C);
    for (int i = 0; i < 12; ++i) pb.A_psd.row(i) = svec(As[i]).transpose();
    pb.rhs = b;
    auto sol = solve(pb, {.tol = 1e-9});
    REQUIRE(sol.status == SolveStatus::optimal);
    double oracle = penalized_pg_max(C, As, b, 10.0, 4000, 80);
    CHECK(-sol.objective == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(certify(sol, pb, 1e-6).all_ok);
}

TEST_CASE("lmi lowering: facial reduction of a norm-unconstrained coordinate") {
    // S(x) = [[x, 1 - x, 0], [1 - x, x, c], [0, c, 0]] with c = x - 1:
    // the (3,3) diagonal is identically zero, so feasibility forces the whole
    // third row to vanish, i.e. x = 1, even though the reduced 2x2 block
    // would allow any x >= 1/2... minimizing x must return 1, not 1/2.
    LmiProblem p;
    p.dim = 3;
    p.M0 = Mat::Zero(3, 3);
    p.M0(0, 1) = p.M0(1, 0) = 1.0;
    p.M0(1, 2) = p.M0(2, 1) = -1.0;
    LmiVar x;
    x.name = "x";
    x.cost = 1.0;
    x.nonneg = true;
    x.M = Mat::Zero(3, 3);
    x.M(0, 0) = x.M(1, 1) = 1.0;
    x.M(0, 1) = x.M(1, 0) = -1.0;
    x.M(1, 2) = x.M(2, 1) = 1.0;
    p.vars.push_back(x);

    std::vector<int> kept;
    auto cone = lmi_to_cone(p, &kept);
    CHECK(kept.size() == 2);       // third coordinate reduced away
    CHECK(cone.psd_dim == 2);
    auto sol = solve_lmi(p, {.tol = 1e-9});
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-7));
    Eigen::SelfAdjointEigenSolver<Mat> es(sol.S, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("solve: inequality rows, slacks and multiplier signs") {
    // maximize x11 + x22 s.t. x11 <= 1, x22 <= 2
    ConeProblem pb;
    pb.init(2, 0, 0, 2);
    pb.c_psd = -svec(Mat::Identity(2, 2));
    Mat E00 = Mat::Zero(2, 2), E11 = Mat::Zero(2, 2);
    E00(0, 0) = 1;
    E11(1, 1) = 1;
    pb.A_psd.row(0) = svec(E00).transpose();
    pb.A_psd.row(1) = svec(E11).transpose();
    pb.rhs << 1.0, 2.0;
    pb.sense = {ConeProblem::Sense::le, ConeProblem::Sense::le};
    auto sol = solve(pb, {.tol = 1e-9});
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(-sol.objective == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(sol.y[0] <= 1e-9);  // min-form multipliers on <= rows are nonpositive
    CHECK(sol.y[1] <= 1e-9);
    auto rep = certify(sol, pb, 1e-6);
    CHECK(rep.all_ok);
}

TEST_CASE("solve: scale invariance") {
    Rng rng(99);
    const int n = 4;
    auto rnd_sym = [&]() {
        Mat A = Mat::NullaryExpr(n, n, [&](int, int) { return rng.normal(); });
        return Mat(0.5 * (A + A.transpose()));
    };
    std::vector<Mat> As{Mat::Identity(n, n), rnd_sym(), rnd_sym()};
    Mat X0 = Mat::Identity(n, n);
    Vec b(3);
    for (int i = 0; i < 3; ++i) b[i] = (As[i].cwiseProduct(X0)).sum();
    Mat C = rnd_sym();
    ConeProblem pb;
    pb.init(n, 0, 0, 3);
    pb.c_psd = -svec(C);
    for (int i = 0; i < 3; ++i) pb.A_psd.row(i) = svec(As[i]).transpose();
    pb.rhs = b;
    auto s1 = solve(pb, {.tol = 1e-9});
    ConeProblem pb10 = pb;
    pb10.c_psd *= 10.0;
    pb10.rhs *= 10.0;
    auto s10 = solve(pb10, {.tol = 1e-9});
    REQUIRE(s1.status == SolveStatus::optimal);
    REQUIRE(s10.status == SolveStatus::optimal);
    CHECK(s10.objective == doctest::Approx(100.0 * s1.objective).epsilon(1e-6));
}

TEST_CASE("solve: determinism") {
    Rng rng(5);
    const int n = 3;
    auto rnd_sym = [&]() {
        Mat A = Mat::NullaryExpr(n, n, [&](int, int) { return rng.normal(); });
        return Mat(0.5 * (A + A.transpose()));
    };
    std::vector<Mat> As{Mat::Identity(n, n), rnd_sym()};
    Vec b(2);
    b << 1.0, 0.3;
    ConeProblem pb;
    pb.init(n, 0, 0, 2);
    pb.c_psd = -svec(rnd_sym());
    for (int i = 0; i < 2; ++i) pb.A_psd.row(i) = svec(As[i]).transpose();
    pb.rhs = b;
    auto a = solve(pb, {.tol = 1e-9});
    auto c = solve(pb, {.tol = 1e-9});
    CHECK(a.objective == c.objective);  // bit identical
    CHECK((a.X - c.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.iterations == c.iterations);
}

TEST_CASE("solve: gap at optimal status is within tolerance") {
    ConeProblem pb;
    pb.init(2, 1, 0, 2);
    pb.c_psd = -svec(Mat::Identity(2, 2));
    pb.c_nonneg[0] = 0.5;
    Mat E(2, 2);
    E << 1, 0, 0, 1;
    pb.A_psd.row(0) = svec(E).transpose();
    pb.A_nonneg(0, 0) = 1.0;
    pb.rhs[0] = 2.0;
    Mat F = Mat::Zero(2, 2);
    F(0, 0) = 1.0;
    pb.A_psd.row(1) = svec(F).transpose();
    pb.rhs[1] = 0.5;
    pb.sense[1] = ConeProblem::Sense::le;
    auto sol = solve(pb, {.tol = 1e-8});
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.res_gap <= 1e-8);
}

TEST_CASE("certify flags a constructed violation") {
    ConeProblem pb;
    pb.init(2, 0, 0, 1);
    Mat C(2, 2);
    C << 1, 0, 0, 2;
    pb.c_psd = -svec(C);
    pb.A_psd.row(0) = svec(Mat::Identity(2, 2)).transpose();
    pb.rhs[0] = 1.0;
    auto sol = solve(pb, {.tol = 1e-9});
    REQUIRE(sol.status == SolveStatus::optimal);
    auto ok = certify(sol, pb, 1e-6);
    CHECK(ok.all_ok);
    auto bad = sol;
    bad.X(0, 1) += 0.1;
    bad.X(1, 0) += 0.1;
    auto rep = certify(bad, pb, 1e-6);
    CHECK_FALSE(rep.all_ok);
    CHECK_FALSE(rep.psd_ok);  // the perturbed matrix dips below the cone
}

TEST_CASE("solve rejects out-of-range tolerance and reports non-optimal on bad problems") {
    ConeProblem pb;
    pb.init(0, 1, 0, 1);
    pb.A_nonneg(0, 0) = 1.0;
    pb.rhs[0] = -1.0;  // z = -1 with z >= 0: infeasible
    CHECK_THROWS_AS(solve(pb, {.tol = 1e-12}), std::invalid_argument);
    auto sol = solve(pb, {.tol = 1e-8, .max_iter = 60});
    CHECK(sol.status != SolveStatus::optimal);
}
