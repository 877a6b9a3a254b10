#pragma once

#include <algorithm>
#include <optional>
#include <sstream>

#include "ofwpep/core.hpp"
#include "ofwpep/svec.hpp"

namespace ofwpep {

// Dense conic problem over one PSD block, one nonnegative block and one free
// block:
//
//   minimize    <C, X> + c_z'z + c_f'w
//   subject to  <A_i, X> + a_i'z + f_i'w  {<=,=}  b_i,   i = 1..m
//               X PSD, z >= 0, w free.
//
// Symmetric matrices travel in scaled half-vectorized form (svec). The free
// block is used by the stepsize-optimization reformulation whose B and C
// variables are sign-unrestricted.
struct ConeProblem {
    enum class Sense : char { eq, le };

    int psd_dim = 0;
    int nonneg_dim = 0;
    int free_dim = 0;

    Vec c_psd;     // svec_len(psd_dim)
    Vec c_nonneg;  // nonneg_dim
    Vec c_free;    // free_dim

    Mat A_psd;     // m x svec_len(psd_dim)
    Mat A_nonneg;  // m x nonneg_dim
    Mat A_free;    // m x free_dim
    Vec rhs;       // m
    std::vector<Sense> sense;

    std::vector<std::string> row_names;  // optional, for reports

    int rows() const { return static_cast<int>(rhs.size()); }

    void init(int n, int p, int f, int m) {
        psd_dim = n;
        nonneg_dim = p;
        free_dim = f;
        const int ns = svec_len(n);
        c_psd = Vec::Zero(ns);
        c_nonneg = Vec::Zero(p);
        c_free = Vec::Zero(f);
        A_psd = Mat::Zero(m, ns);
        A_nonneg = Mat::Zero(m, p);
        A_free = Mat::Zero(m, f);
        rhs = Vec::Zero(m);
        sense.assign(m, Sense::eq);
    }

    void validate() const {
        const int m = rows();
        if (A_psd.rows() != m || A_nonneg.rows() != m || A_free.rows() != m)
            throw std::invalid_argument("ConeProblem: row count mismatch");
        if (A_psd.cols() != svec_len(psd_dim) || A_nonneg.cols() != nonneg_dim ||
            A_free.cols() != free_dim)
            throw std::invalid_argument("ConeProblem: column count mismatch");
        if (static_cast<int>(sense.size()) != m)
            throw std::invalid_argument("ConeProblem: sense count mismatch");
        if (!c_psd.allFinite() || !c_nonneg.allFinite() || !c_free.allFinite() ||
            !A_psd.allFinite() || !A_nonneg.allFinite() || !A_free.allFinite() ||
            !rhs.allFinite())
            throw std::invalid_argument("ConeProblem: non-finite data");
    }
};

enum class SolveStatus { optimal, max_iter, infeasible_suspected };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::max_iter: return "max_iter";
        case SolveStatus::infeasible_suspected: return "infeasible-suspected";
    }
    return "?";
}

struct SdpSolution {
    Mat X;        // PSD block value
    Vec z;        // nonneg block value
    Vec w;        // free block value
    Vec y;        // one multiplier per row of the input problem
    Vec slack;    // slack of <= rows (0 for = rows)
    double objective = 0.0;       // primal (min-form) objective
    double dual_objective = 0.0;  // b'y
    SolveStatus status = SolveStatus::max_iter;
    double res_primal = kInf, res_dual = kInf, res_gap = kInf;
    int iterations = 0;
    std::string method = "ipm-hkm";
};

struct SolveOptions {
    double tol = 1e-6;
    int max_iter = 200;  // interior-point iterations; callers tighten tol instead
    bool verbose = false;
};

namespace detail {

// Largest alpha with X + alpha*dX PSD, given X = L L'. Returns +inf when dX
// keeps the cone for every step.
inline double step_to_boundary_psd(const Eigen::LLT<Mat>& llt, const Mat& dX) {
    if (dX.rows() == 0) return kInf;
    const Mat& Lf = llt.matrixL();
    Mat M = Lf.triangularView<Eigen::Lower>().solve(dX);
    M = Lf.triangularView<Eigen::Lower>().solve(M.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()),
                                          Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin >= 0.0) return kInf;
    return -1.0 / lmin;
}

inline double step_to_boundary_vec(const Vec& x, const Vec& dx) {
    double a = kInf;
    for (int i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
    return a;
}

inline Mat herm(const Mat& M) { return 0.5 * (M + M.transpose()); }

}  // namespace detail

// Primal-dual interior-point method, HKM direction with Mehrotra
// predictor-corrector, dense linear algebra throughout. One solve is
// single-threaded and deterministic: the iteration visits blocks in the fixed
// order (psd, nonneg, free) and all reductions use Eigen's sequential kernels.
inline SdpSolution solve(const ConeProblem& input, const SolveOptions& opts = {}) {
    input.validate();
    if (!(opts.tol >= 1e-10 && opts.tol <= 1e-2))
        throw std::invalid_argument("solve: tol must lie in [1e-10, 1e-2]");

    const int n = input.psd_dim;
    const int ns = svec_len(n);

    // --- preprocessing: drop identically-zero rows and dead columns -------
    const int m_in = input.rows();
    std::vector<int> keep_rows;
    keep_rows.reserve(m_in);
    bool trivially_infeasible = false;
    for (int i = 0; i < m_in; ++i) {
        double mag = (ns > 0) ? input.A_psd.row(i).cwiseAbs().maxCoeff() : 0.0;
        if (input.nonneg_dim > 0)
            mag = std::max(mag, input.A_nonneg.row(i).cwiseAbs().maxCoeff());
        if (input.free_dim > 0)
            mag = std::max(mag, input.A_free.row(i).cwiseAbs().maxCoeff());
        if (mag == 0.0) {
            bool ok = (input.sense[i] == ConeProblem::Sense::le)
                          ? (input.rhs[i] >= -1e-12)
                          : (std::abs(input.rhs[i]) <= 1e-12);
            if (!ok) trivially_infeasible = true;
            continue;  // row dropped, multiplier 0
        }
        keep_rows.push_back(i);
    }
    std::vector<int> keep_z, keep_f;
    for (int j = 0; j < input.nonneg_dim; ++j) {
        if (input.A_nonneg.col(j).cwiseAbs().maxCoeff() == 0.0) {
            if (input.c_nonneg[j] < 0.0)
                throw std::runtime_error("solve: unbounded (dead nonneg column with negative cost)");
            continue;  // fixed to 0
        }
        keep_z.push_back(j);
    }
    for (int j = 0; j < input.free_dim; ++j) {
        if (input.A_free.col(j).cwiseAbs().maxCoeff() == 0.0) {
            if (input.c_free[j] != 0.0)
                throw std::runtime_error("solve: unbounded (dead free column with nonzero cost)");
            continue;
        }
        keep_f.push_back(j);
    }

    const int m = static_cast<int>(keep_rows.size());
    int n_slack = 0;
    for (int i : keep_rows)
        if (input.sense[i] == ConeProblem::Sense::le) ++n_slack;
    const int p = static_cast<int>(keep_z.size()) + n_slack;
    const int f = static_cast<int>(keep_f.size());

    // Assemble the equality-form data  A u = b, u = (svec X, z, w).
    Mat Ap = Mat::Zero(m, ns), Az = Mat::Zero(m, p), Af = Mat::Zero(m, f);
    Vec b(m), cz = Vec::Zero(p), cf = Vec::Zero(f);
    Vec cp = input.c_psd;
    {
        int si = static_cast<int>(keep_z.size());
        for (int r = 0; r < m; ++r) {
            int i = keep_rows[r];
            Ap.row(r) = input.A_psd.row(i);
            for (size_t jj = 0; jj < keep_z.size(); ++jj)
                Az(r, static_cast<int>(jj)) = input.A_nonneg(i, keep_z[jj]);
            for (size_t jj = 0; jj < keep_f.size(); ++jj)
                Af(r, static_cast<int>(jj)) = input.A_free(i, keep_f[jj]);
            b[r] = input.rhs[i];
            if (input.sense[i] == ConeProblem::Sense::le) Az(r, si++) = 1.0;
        }
        for (size_t jj = 0; jj < keep_z.size(); ++jj)
            cz[static_cast<int>(jj)] = input.c_nonneg[keep_z[jj]];
        for (size_t jj = 0; jj < keep_f.size(); ++jj)
            cf[static_cast<int>(jj)] = input.c_free[keep_f[jj]];
    }

    SdpSolution sol;
    sol.X = Mat::Zero(n, n);
    sol.z = Vec::Zero(input.nonneg_dim);
    sol.w = Vec::Zero(input.free_dim);
    sol.y = Vec::Zero(m_in);
    sol.slack = Vec::Zero(m_in);

    if (trivially_infeasible) {
        sol.status = SolveStatus::infeasible_suspected;
        return sol;
    }
    if (m == 0) {  // feasible, unconstrained in the cones: minimum at the origin
        if (n > 0) {
            Eigen::SelfAdjointEigenSolver<Mat> es(smat(input.c_psd), Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -1e-12)
                throw std::runtime_error("solve: unbounded (indefinite cost on an unconstrained PSD block)");
        }
        sol.status = SolveStatus::optimal;
        sol.res_primal = sol.res_dual = sol.res_gap = 0.0;
        return sol;
    }

    // --- Ruiz equilibration -----------------------------------------------
    // Row scalings are free; column scalings must keep the cones invariant,
    // so the whole PSD block shares a single scalar.
    Vec dr = Vec::Ones(m);
    double dpsd = 1.0;
    Vec dz = Vec::Ones(p), df = Vec::Ones(f);
    {
        Mat Sp = Ap;
        Mat Sz = Az;
        Mat Sf = Af;
        for (int pass = 0; pass < 6; ++pass) {
            for (int r = 0; r < m; ++r) {
                double rn = 0.0;
                if (ns > 0) rn = std::max(rn, Sp.row(r).cwiseAbs().maxCoeff());
                if (p > 0) rn = std::max(rn, Sz.row(r).cwiseAbs().maxCoeff());
                if (f > 0) rn = std::max(rn, Sf.row(r).cwiseAbs().maxCoeff());
                double s = (rn > 0) ? 1.0 / std::sqrt(rn) : 1.0;
                dr[r] *= s;
                if (ns > 0) Sp.row(r) *= s;
                if (p > 0) Sz.row(r) *= s;
                if (f > 0) Sf.row(r) *= s;
            }
            if (ns > 0) {
                double cn = Sp.cwiseAbs().maxCoeff();
                double s = (cn > 0) ? 1.0 / std::sqrt(cn) : 1.0;
                dpsd *= s;
                Sp *= s;
            }
            for (int j = 0; j < p; ++j) {
                double cn = Sz.col(j).cwiseAbs().maxCoeff();
                double s = (cn > 0) ? 1.0 / std::sqrt(cn) : 1.0;
                dz[j] *= s;
                Sz.col(j) *= s;
            }
            for (int j = 0; j < f; ++j) {
                double cn = Sf.col(j).cwiseAbs().maxCoeff();
                double s = (cn > 0) ? 1.0 / std::sqrt(cn) : 1.0;
                df[j] *= s;
                Sf.col(j) *= s;
            }
        }
        Ap = Sp;
        Az = Sz;
        Af = Sf;
    }
    b = dr.asDiagonal() * b;
    cp *= dpsd;
    cz = dz.asDiagonal() * cz;
    cf = df.asDiagonal() * cf;
    const Mat Cmat = smat(cp);

    // --- initial iterate ----------------------------------------------------
    double cnorm = std::max({cp.size() ? cp.cwiseAbs().maxCoeff() : 0.0,
                             p ? cz.cwiseAbs().maxCoeff() : 0.0,
                             f ? cf.cwiseAbs().maxCoeff() : 0.0});
    double bnorm = b.cwiseAbs().maxCoeff();
    double xi_p = std::max(1.0, bnorm);
    double xi_d = std::max(1.0, cnorm);

    Mat X = xi_p * Mat::Identity(n, n);
    Vec zv = xi_p * Vec::Ones(p);
    Vec wv = Vec::Zero(f);
    Vec y = Vec::Zero(m);
    Mat S = xi_d * Mat::Identity(n, n);
    Vec sz = xi_d * Vec::Ones(p);

    const double bden = 1.0 + b.norm();
    const double cden = 1.0 + std::sqrt(cp.squaredNorm() + cz.squaredNorm() + cf.squaredNorm());

    auto mat_At_y = [&](const Vec& yy) -> Mat { return smat(Ap.transpose() * yy); };

    double mu = 1.0;
    int it = 0;
    double best_err = kInf;
    SolveStatus status = SolveStatus::max_iter;
    double rp_rel = kInf, rd_rel = kInf, gap_rel = kInf;
    int tiny_steps = 0;

    for (it = 0; it < opts.max_iter; ++it) {
        Vec rp = b;
        if (ns > 0) rp -= Ap * svec(X, false);
        if (p > 0) rp -= Az * zv;
        if (f > 0) rp -= Af * wv;
        Mat Rd = Cmat - mat_At_y(y) - S;
        Vec rz = cz - Az.transpose() * y - sz;
        Vec rf = cf - Af.transpose() * y;

        double pobj = (Cmat.cwiseProduct(X)).sum() + cz.dot(zv) + cf.dot(wv);
        double dobj = b.dot(y);
        double xs = (X.cwiseProduct(S)).sum() + zv.dot(sz);
        mu = xs / std::max(1, n + p);

        rp_rel = rp.norm() / bden;
        rd_rel = std::sqrt(svec(Rd, false).squaredNorm() + rz.squaredNorm() + rf.squaredNorm()) / cden;
        gap_rel = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        if (opts.verbose) {
            std::ostringstream os;
            os << "it " << it << "  mu " << mu << "  rp " << rp_rel << "  rd " << rd_rel
               << "  gap " << gap_rel << "  pobj " << pobj;
            // verbose output goes to stderr; callers capture it when needed
            fprintf(stderr, "%s\n", os.str().c_str());
        }

        if (!std::isfinite(mu) || !X.allFinite() || !S.allFinite())
            throw std::runtime_error("solve: NaN/Inf detected in iterate (diverged)");

        double err = std::max({rp_rel, rd_rel, gap_rel});
        best_err = std::min(best_err, err);
        if (err <= opts.tol) {
            status = SolveStatus::optimal;
            break;
        }
        // crude infeasibility / divergence screen
        double ynorm = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
        if (ynorm > 1e12 * std::max(1.0, cnorm) && dobj > 0.0) {
            status = SolveStatus::infeasible_suspected;
            break;
        }

        // --- scaling quantities -------------------------------------------
        Eigen::LLT<Mat> lltX(X), lltS(S);
        if (lltX.info() != Eigen::Success || lltS.info() != Eigen::Success) {
            // iterate fell off the cone numerically; bail out with best data
            break;
        }
        Mat Sinv = lltS.solve(Mat::Identity(n, n));
        Sinv = detail::herm(Sinv);
        Vec d = (p > 0) ? Vec(zv.array() / sz.array()) : Vec();

        // Schur complement H = Ap (X (x)_s Sinv) Ap' + Az diag(d) Az'
        Mat H = Mat::Zero(m, m);
        if (ns > 0) {
            Mat Khat = sym_kron(X, Sinv);
            H.noalias() = Ap * Khat * Ap.transpose();
        }
        if (p > 0) H.noalias() += Az * d.asDiagonal() * Az.transpose();

        // Factor the (possibly augmented) KKT matrix once per iteration.
        Eigen::PartialPivLU<Mat> lu;
        Eigen::LLT<Mat> lltH;
        bool use_aug = (f > 0);
        if (use_aug) {
            Mat Maug = Mat::Zero(m + f, m + f);
            Maug.topLeftCorner(m, m) = H;
            Maug.topRightCorner(m, f) = Af;
            Maug.bottomLeftCorner(f, m) = Af.transpose();
            lu.compute(Maug);
        } else {
            lltH.compute(H);
            if (lltH.info() != Eigen::Success) {
                use_aug = true;
                lu.compute(H);
            }
        }

        auto solve_kkt = [&](const Vec& r1, const Vec& r2, Vec& dy, Vec& dw) {
            if (f > 0) {
                Vec rhs_big(m + f);
                rhs_big.head(m) = r1;
                rhs_big.tail(f) = r2;
                Vec t = lu.solve(rhs_big);
                dy = t.head(m);
                dw = t.tail(f);
            } else if (use_aug) {
                dy = lu.solve(r1);
                dw.resize(0);
            } else {
                dy = lltH.solve(r1);
                dw.resize(0);
            }
        };

        // One Newton direction for centering target nu and optional Mehrotra
        // cross terms.
        auto direction = [&](double nu, const Mat* dXa, const Mat* dSa, const Vec* dza,
                             const Vec* dsa, Mat& dX, Vec& dzv, Vec& dwv, Vec& dy, Mat& dS,
                             Vec& dsz) {
            Mat Rc = nu * Sinv - X;
            if (dXa) Rc -= detail::herm((*dXa) * (*dSa) * Sinv);
            Vec rcz;
            if (p > 0) {
                rcz = Vec(nu / sz.array()) - zv;
                if (dza) rcz -= Vec((dza->array() * dsa->array()) / sz.array());
            }
            // r1 = rp - Ap svec(Rc - Herm(X Rd Sinv)) - Az (rcz - d .* rz)
            Mat T = Rc - detail::herm(X * Rd * Sinv);
            Vec r1 = rp;
            if (ns > 0) r1 -= Ap * svec(T, false);
            if (p > 0) r1 -= Az * Vec(rcz.array() - d.array() * rz.array());
            solve_kkt(r1, rf, dy, dwv);
            dS = Rd - mat_At_y(dy);
            if (p > 0) {
                dsz = rz - Az.transpose() * dy;
                dzv = rcz - Vec(d.array() * dsz.array());
            } else {
                dsz.resize(0);
                dzv.resize(0);
            }
            dX = Rc - detail::herm(X * dS * Sinv);
            dX = detail::herm(dX);
            dS = detail::herm(dS);
        };

        Mat dXa, dSa;
        Vec dza, dsa, dwa, dya;
        direction(0.0, nullptr, nullptr, nullptr, nullptr, dXa, dza, dwa, dya, dSa, dsa);

        double ap = std::min(1.0, detail::step_to_boundary_psd(lltX, dXa));
        double ad = std::min(1.0, detail::step_to_boundary_psd(lltS, dSa));
        if (p > 0) {
            ap = std::min(ap, detail::step_to_boundary_vec(zv, dza));
            ad = std::min(ad, detail::step_to_boundary_vec(sz, dsa));
        }
        double mu_aff = ((X + ap * dXa).cwiseProduct(S + ad * dSa)).sum();
        if (p > 0) mu_aff += (zv + ap * dza).dot(sz + ad * dsa);
        mu_aff /= std::max(1, n + p);
        double sigma = std::pow(std::max(0.0, mu_aff / std::max(mu, 1e-300)), 3.0);
        sigma = std::min(1.0, std::max(1e-8, sigma));

        Mat dX, dS;
        Vec dzv, dsz, dwv_, dy;
        direction(sigma * mu, &dXa, &dSa, (p > 0 ? &dza : nullptr), (p > 0 ? &dsa : nullptr),
                  dX, dzv, dwv_, dy, dS, dsz);

        const double tau = 0.99;
        double app = std::min(1.0, tau * detail::step_to_boundary_psd(lltX, dX));
        double add = std::min(1.0, tau * detail::step_to_boundary_psd(lltS, dS));
        if (p > 0) {
            app = std::min(app, tau * detail::step_to_boundary_vec(zv, dzv));
            add = std::min(add, tau * detail::step_to_boundary_vec(sz, dsz));
        }

        X = detail::herm(X + app * dX);
        if (p > 0) zv += app * dzv;
        if (f > 0) wv += app * dwv_;
        y += add * dy;
        S = detail::herm(S + add * dS);
        if (p > 0) sz += add * dsz;

        if (std::min(app, add) < 1e-8) {
            if (++tiny_steps >= 3) break;  // stalled
        } else {
            tiny_steps = 0;
        }
    }

    // --- report (unscale, reinflate) ---------------------------------------
    sol.iterations = it;
    sol.status = status;
    sol.res_primal = rp_rel;
    sol.res_dual = rd_rel;
    sol.res_gap = gap_rel;

    Mat Xout = dpsd * X;
    Vec yout = dr.asDiagonal() * y;
    sol.X = Xout;
    {
        int si = static_cast<int>(keep_z.size());
        for (size_t jj = 0; jj < keep_z.size(); ++jj)
            sol.z[keep_z[jj]] = dz[static_cast<int>(jj)] * zv[static_cast<int>(jj)];
        for (size_t jj = 0; jj < keep_f.size(); ++jj)
            sol.w[keep_f[jj]] = df[static_cast<int>(jj)] * wv[static_cast<int>(jj)];
        for (int r = 0; r < m; ++r) {
            int i = keep_rows[r];
            sol.y[i] = yout[r];
            if (input.sense[i] == ConeProblem::Sense::le)
                sol.slack[i] = dz[si] * zv[si], ++si;
        }
    }
    // objective in original data
    double pobj = 0.0;
    if (ns > 0) pobj += input.c_psd.dot(svec(sol.X, false));
    if (input.nonneg_dim > 0) pobj += input.c_nonneg.dot(sol.z);
    if (input.free_dim > 0) pobj += input.c_free.dot(sol.w);
    sol.objective = pobj;
    sol.dual_objective = input.rhs.dot(sol.y);
    return sol;
}

// ---------------------------------------------------------------------------
// Independent certification: every residual recomputed from (solution,
// problem) data alone; nothing from the solver run is reused.
struct CertReport {
    bool primal_feasible = false;
    bool psd_ok = false;
    bool dual_feasible = false;
    bool gap_ok = false;
    bool all_ok = false;
    double max_row_violation = 0.0;
    double min_eig_X = 0.0;
    double min_eig_dual_slack = 0.0;
    double min_nonneg = 0.0;
    double max_dual_sign_violation = 0.0;
    double max_free_dual_residual = 0.0;
    double gap = 0.0;
    double primal_value = 0.0;
    double dual_value = 0.0;
    std::string detail;
};

inline CertReport certify(const SdpSolution& sol, const ConeProblem& pb,
                          double tol = 1e-6) {
    CertReport rep;
    const int m = pb.rows();
    const int n = pb.psd_dim;
    double scale_b = 1.0 + (m ? pb.rhs.cwiseAbs().maxCoeff() : 0.0);

    Vec xs = (n > 0) ? svec(0.5 * (sol.X + sol.X.transpose()), false) : Vec();
    double viol = 0.0;
    for (int i = 0; i < m; ++i) {
        double lhs = 0.0;
        if (n > 0) lhs += pb.A_psd.row(i).dot(xs);
        if (pb.nonneg_dim > 0) lhs += pb.A_nonneg.row(i).dot(sol.z);
        if (pb.free_dim > 0) lhs += pb.A_free.row(i).dot(sol.w);
        double v = (pb.sense[i] == ConeProblem::Sense::le) ? std::max(0.0, lhs - pb.rhs[i])
                                                           : std::abs(lhs - pb.rhs[i]);
        viol = std::max(viol, v);
    }
    rep.max_row_violation = viol;

    double min_eig_X = 0.0, scale_X = 1.0;
    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sol.X + sol.X.transpose()),
                                              Eigen::EigenvaluesOnly);
        min_eig_X = es.eigenvalues().minCoeff();
        scale_X = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    }
    rep.min_eig_X = min_eig_X;
    double minz = (pb.nonneg_dim > 0) ? sol.z.minCoeff() : 0.0;
    rep.min_nonneg = minz;
    rep.primal_feasible = viol <= tol * scale_b && minz >= -tol;
    rep.psd_ok = min_eig_X >= -tol * scale_X;

    // dual side: c - A'y in the dual cone; y <= 0 on <= rows (min form)
    double sign_viol = 0.0;
    for (int i = 0; i < m; ++i)
        if (pb.sense[i] == ConeProblem::Sense::le)
            sign_viol = std::max(sign_viol, sol.y[i]);
    rep.max_dual_sign_violation = sign_viol;

    double min_eig_Sd = 0.0, scale_Sd = 1.0;
    if (n > 0) {
        Mat Sd = smat(pb.c_psd - pb.A_psd.transpose() * sol.y);
        Eigen::SelfAdjointEigenSolver<Mat> es(Sd, Eigen::EigenvaluesOnly);
        min_eig_Sd = es.eigenvalues().minCoeff();
        scale_Sd = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    }
    rep.min_eig_dual_slack = min_eig_Sd;
    double min_dual_z = 0.0;
    if (pb.nonneg_dim > 0)
        min_dual_z = (pb.c_nonneg - pb.A_nonneg.transpose() * sol.y).minCoeff();
    double free_res = 0.0;
    if (pb.free_dim > 0)
        free_res = (pb.c_free - pb.A_free.transpose() * sol.y).cwiseAbs().maxCoeff();
    rep.max_free_dual_residual = free_res;
    double scale_c = 1.0 + std::max({n ? pb.c_psd.cwiseAbs().maxCoeff() : 0.0,
                                     pb.nonneg_dim ? pb.c_nonneg.cwiseAbs().maxCoeff() : 0.0,
                                     pb.free_dim ? pb.c_free.cwiseAbs().maxCoeff() : 0.0});
    rep.dual_feasible = min_eig_Sd >= -tol * scale_Sd && min_dual_z >= -tol * scale_c &&
                        free_res <= tol * scale_c && sign_viol <= tol;

    double pv = 0.0;
    if (n > 0) pv += pb.c_psd.dot(xs);
    if (pb.nonneg_dim > 0) pv += pb.c_nonneg.dot(sol.z);
    if (pb.free_dim > 0) pv += pb.c_free.dot(sol.w);
    double dv = pb.rhs.dot(sol.y);
    rep.primal_value = pv;
    rep.dual_value = dv;
    rep.gap = std::abs(pv - dv);
    rep.gap_ok = rep.gap <= std::sqrt(tol) * (1.0 + std::abs(pv) + std::abs(dv));
    rep.all_ok = rep.primal_feasible && rep.psd_ok && rep.dual_feasible && rep.gap_ok;
    return rep;
}

}  // namespace ofwpep
