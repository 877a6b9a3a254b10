#pragma once

#include <map>
#include <tuple>

#include "ofwpep/bounds.hpp"
#include "ofwpep/gram.hpp"

namespace ofwpep {

// Builders for the Gram-lifted programs: the tight regret problem and its
// dual, the relaxed dual used for joint stepsize optimization, the joint
// optimization itself (single- and multi-round), and the one-iteration
// potential-design program.

namespace detail {

struct OfwPoints {
    // basis coordinates of the constraint point set, with labels
    std::vector<Vec> pts;
    std::vector<std::string> labels;
};

/// {x_1, v_1..v_{T-1}, x*}; appends the played iterates x_2..x_T when the
/// schedule is not hull_safe (they are convex combinations otherwise and can
/// be omitted).
inline OfwPoints constraint_points(const GramBasis& b, const ParamSchedule& s,
                                   bool include_iterates) {
    const int T = s.T;
    OfwPoints P;
    P.pts.push_back(Vec::Zero(b.dim));
    P.labels.push_back("x1");
    for (int v = 1; v <= T - 1; ++v) {
        P.pts.push_back(b.unit(T + v - 1));
        P.labels.push_back("v" + std::to_string(v));
    }
    P.pts.push_back(b.unit(2 * T - 1));
    P.labels.push_back("x*");
    if (include_iterates) {
        for (int t = 2; t <= T; ++t) {
            Vec xt = Vec::Zero(b.dim);
            for (int u = 1; u <= t - 1; ++u) xt += s.gamma(t, u) * b.unit(T + u - 1);
            P.pts.push_back(xt);
            P.labels.push_back("x" + std::to_string(t));
        }
    }
    return P;
}

inline Vec dir_coeff(const GramBasis& b, const ParamSchedule& s, int t) {
    Vec d = Vec::Zero(b.dim);
    for (int u = 1; u <= t; ++u) d += s.eta(t, u) * b.unit(u - 1);
    for (int u = 1; u <= t - 1; ++u) d += s.beta(t, u) * b.unit(s.T + u - 1);
    return d;
}

inline Mat regret_objective(const GramBasis& b, const ParamSchedule& s) {
    const int T = s.T;
    Mat A = Mat::Zero(b.dim, b.dim);
    Vec xstar = b.unit(2 * T - 1);
    for (int t = 1; t <= T; ++t) {
        Vec gt = b.unit(t - 1);
        for (int u = 1; u <= t - 1; ++u) A += s.gamma(t, u) * odot(gt, b.unit(T + u - 1));
        A -= odot(gt, xstar);
    }
    return A;
}

inline void append_lipschitz(GramSdp& g, int T, double L) {
    for (int t = 1; t <= T; ++t) {
        GramSdp::Constraint c;
        Vec gt = g.basis.unit(t - 1);
        c.A = odot(gt, gt);
        c.rhs = L * L;
        c.tag = "lipschitz";
        c.name = "lip:g" + std::to_string(t);
        g.constraints.push_back(std::move(c));
    }
}

inline void append_diameter(GramSdp& g, const OfwPoints& P, double D) {
    for (size_t i = 0; i < P.pts.size(); ++i)
        for (size_t j = i + 1; j < P.pts.size(); ++j) {
            GramSdp::Constraint c;
            Vec d = P.pts[i] - P.pts[j];
            c.A = odot(d, d);
            c.rhs = D * D;
            c.tag = "diameter";
            c.name = "diam:" + P.labels[i] + "," + P.labels[j];
            g.constraints.push_back(std::move(c));
        }
}

}  // namespace detail

/// Tight worst-case regret of the scheme with the given coefficients, as a
/// Gram-lifted maximization over the PSD matrix of pairwise inner products.
inline GramSdp build_primal(const ParamSchedule& s, const ProblemSetting& ps) {
    if (s.T != ps.T) throw std::invalid_argument("build_primal: schedule/setting horizon mismatch");
    const int T = s.T;
    GramSdp g;
    g.basis = GramBasis::ofw(T);
    g.direction = GramSdp::Direction::maximize;
    g.objective = detail::regret_objective(g.basis, s);

    detail::append_lipschitz(g, T, ps.L);
    auto P = detail::constraint_points(g.basis, s, !s.hull_safe);
    detail::append_diameter(g, P, ps.D);
    // oracle optimality of v_t against every other constraint point
    for (int t = 1; t <= T - 1; ++t) {
        Vec dir = detail::dir_coeff(g.basis, s, t);
        Vec vt = g.basis.unit(T + t - 1);
        for (size_t j = 0; j < P.pts.size(); ++j) {
            if (P.labels[j] == "v" + std::to_string(t)) continue;
            GramSdp::Constraint c;
            c.A = odot(dir, vt - P.pts[j]);
            c.rhs = 0.0;
            c.tag = "boundary";
            c.name = "brd:v" + std::to_string(t) + "," + P.labels[j];
            g.constraints.push_back(std::move(c));
        }
    }
    return g;
}

/// Lagrange dual of build_primal: same matrices, minimize reading.
inline GramSdp build_dual(const ParamSchedule& s, const ProblemSetting& ps) {
    return build_primal(s, ps).flipped(GramSdp::Direction::minimize);
}

/// Relaxed dual: boundary multipliers restricted to forward-looking
/// opponents {v_{t+1}, ..., v_{T-1}, x*}; the constraint point set drops the
/// played iterates regardless of hull safety.
inline GramSdp build_relaxed_dual(const ParamSchedule& s, const ProblemSetting& ps) {
    if (s.T != ps.T)
        throw std::invalid_argument("build_relaxed_dual: schedule/setting horizon mismatch");
    const int T = s.T;
    GramSdp g;
    g.basis = GramBasis::ofw(T);
    g.direction = GramSdp::Direction::minimize;
    g.objective = detail::regret_objective(g.basis, s);

    detail::append_lipschitz(g, T, ps.L);
    auto P = detail::constraint_points(g.basis, s, false);
    detail::append_diameter(g, P, ps.D);
    for (int t = 1; t <= T - 1; ++t) {
        Vec dir = detail::dir_coeff(g.basis, s, t);
        Vec vt = g.basis.unit(T + t - 1);
        for (int j = t + 1; j <= T; ++j) {  // v_{t+1}..v_{T-1} and x* (as j = T)
            Vec u = (j == T) ? g.basis.unit(2 * T - 1) : g.basis.unit(T + j - 1);
            std::string ul = (j == T) ? "x*" : "v" + std::to_string(j);
            GramSdp::Constraint c;
            c.A = odot(dir, vt - u);
            c.rhs = 0.0;
            c.tag = "boundary";
            c.name = "brd:v" + std::to_string(t) + "," + ul;
            g.constraints.push_back(std::move(c));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Joint stepsize optimization. After the change of variables, the program is
// linear in the blocks B, C (free), gamma and the multipliers (nonnegative),
// with zero-sum equalities on the B and C columns and sub-probability rows on
// gamma. Atom indices run lexicographically; (T,1) stands for x*.
struct JointOptSdp {
    ProblemSetting setting;
    int T = 0, r = 1;
    bool beta_zero = false;
    GramBasis basis;
    LmiProblem lmi;
    std::map<std::tuple<int, int, int>, int> b_idx;          // (t,k,s)
    std::map<std::tuple<int, int, int, int>, int> c_idx;     // (t,k,s,j)
    std::map<std::tuple<int, int, int>, int> gamma_idx;      // (t,s,k)
    std::vector<int> lip_idx;                                // per t
    std::map<std::pair<int, int>, int> diam_idx;             // point-pair
    std::vector<std::string> point_labels;
};

struct JointOptOptions {
    bool beta_zero = false;
    int rounds = 1;
};

inline JointOptSdp build_joint_opt(int T, const ProblemSetting& ps, JointOptOptions opts = {}) {
    if (T < 2) throw std::invalid_argument("build_joint_opt: requires T >= 2");
    if (T != ps.T) throw std::invalid_argument("build_joint_opt: setting horizon mismatch");
    const int r = opts.rounds;
    if (r < 1) throw std::invalid_argument("build_joint_opt: rounds must be >= 1");

    JointOptSdp J;
    J.setting = ps;
    J.T = T;
    J.r = r;
    J.beta_zero = opts.beta_zero;
    J.basis = GramBasis::ofw_multiround(T, r);
    const int dim = J.basis.dim;
    auto gbar = [&](int t) { return J.basis.unit(t - 1); };
    // atom (t,k) for t <= T-1; (T,1) aliases x*
    auto vbar = [&](int t, int k) {
        if (t == T) return J.basis.unit(dim - 1);
        return J.basis.unit(T + (t - 1) * r + (k - 1));
    };
    auto atom_label = [&](int t, int k) {
        if (t == T) return std::string("x*");
        return (r == 1) ? "v" + std::to_string(t)
                        : "v" + std::to_string(t) + "," + std::to_string(k);
    };
    // lexicographic enumeration of (t,k) including the sentinel (T,1)
    std::vector<std::pair<int, int>> atoms;
    for (int t = 1; t <= T - 1; ++t)
        for (int k = 1; k <= r; ++k) atoms.emplace_back(t, k);
    atoms.emplace_back(T, 1);

    LmiProblem& p = J.lmi;
    p.dim = dim;
    p.M0 = Mat::Zero(dim, dim);
    for (int t = 1; t <= T; ++t) p.M0 += odot(gbar(t), vbar(T, 1));

    auto add_var = [&](std::string name, double cost, bool nonneg, Mat M) {
        LmiVar v;
        v.name = std::move(name);
        v.cost = cost;
        v.nonneg = nonneg;
        v.M = std::move(M);
        p.vars.push_back(std::move(v));
        return static_cast<int>(p.vars.size()) - 1;
    };

    for (auto [t, k] : atoms)
        for (int s = 1; s <= t; ++s)
            J.b_idx[{t, k, s}] = add_var(
                "B[" + std::to_string(t) + "," + std::to_string(k) + ";" + std::to_string(s) + "]",
                0.0, false, odot(gbar(s), vbar(t, k)));
    if (!opts.beta_zero) {
        for (size_t ai = 0; ai < atoms.size(); ++ai) {
            auto [t, k] = atoms[ai];
            for (size_t bi = 0; bi < ai; ++bi) {
                auto [s, j] = atoms[bi];
                if (s == T) continue;  // only real atoms may be referenced
                J.c_idx[{t, k, s, j}] = add_var(
                    "C[" + std::to_string(t) + "," + std::to_string(k) + ";" + std::to_string(s) +
                        "," + std::to_string(j) + "]",
                    0.0, false, odot(vbar(s, j), vbar(t, k)));
            }
        }
    }
    for (int t = 2; t <= T; ++t)
        for (int s = 1; s <= t - 1; ++s)
            for (int k = 1; k <= r; ++k)
                J.gamma_idx[{t, s, k}] =
                    add_var("gamma[" + std::to_string(t) + ";" + std::to_string(s) + "," +
                                std::to_string(k) + "]",
                            0.0, true, Mat(-odot(gbar(t), vbar(s, k))));
    for (int t = 1; t <= T; ++t)
        J.lip_idx.push_back(
            add_var("lip:g" + std::to_string(t), ps.L * ps.L, true, odot(gbar(t), gbar(t))));
    // constraint point set {x1} + atoms + {x*}
    std::vector<Vec> pts{Vec::Zero(dim)};
    J.point_labels = {"x1"};
    for (auto [t, k] : atoms) {
        pts.push_back(vbar(t, k));
        J.point_labels.push_back(atom_label(t, k));
    }
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            Vec d = pts[i] - pts[j];
            J.diam_idx[{static_cast<int>(i), static_cast<int>(j)}] =
                add_var("diam:" + J.point_labels[i] + "," + J.point_labels[j], ps.D * ps.D, true,
                        odot(d, d));
        }

    const int K = static_cast<int>(p.vars.size());
    // zero-sum columns of B: for each s, sum over (t,k) lex >= (s,1)
    for (int s = 1; s <= T; ++s) {
        LmiProblem::Row row;
        row.coef = Vec::Zero(K);
        for (auto [t, k] : atoms)
            if (t >= s) row.coef[J.b_idx.at({t, k, s})] = 1.0;
        row.rhs = 0.0;
        row.sense = ConeProblem::Sense::eq;
        row.name = "zsB:" + std::to_string(s);
        p.rows.push_back(std::move(row));
    }
    if (!opts.beta_zero) {
        for (size_t bi = 0; bi + 1 < atoms.size(); ++bi) {
            auto [s, j] = atoms[bi];
            LmiProblem::Row row;
            row.coef = Vec::Zero(K);
            for (size_t ai = bi + 1; ai < atoms.size(); ++ai) {
                auto [t, k] = atoms[ai];
                row.coef[J.c_idx.at({t, k, s, j})] = 1.0;
            }
            row.rhs = 0.0;
            row.sense = ConeProblem::Sense::eq;
            row.name = "zsC:" + atom_label(s, j);
            p.rows.push_back(std::move(row));
        }
    }
    // sub-probability rows of gamma
    for (int t = 2; t <= T; ++t) {
        LmiProblem::Row row;
        row.coef = Vec::Zero(K);
        for (int s = 1; s <= t - 1; ++s)
            for (int k = 1; k <= r; ++k) row.coef[J.gamma_idx.at({t, s, k})] = 1.0;
        row.rhs = 1.0;
        row.sense = ConeProblem::Sense::le;
        row.name = "simplex:" + std::to_string(t);
        p.rows.push_back(std::move(row));
    }
    return J;
}

struct JointOptSolution {
    double value = 0.0;
    SolveStatus status = SolveStatus::max_iter;
    int T = 0, r = 1;
    Mat B;  // (t,s) for r = 1; zero elsewhere
    Mat C;
    std::vector<std::vector<double>> gamma_rows;  // row t (= index t-2), entries (s,k) flattened
    Vec lip;
    LmiSolution raw;
};

inline JointOptSolution solve_joint(const JointOptSdp& J, const SolveOptions& opts = {}) {
    JointOptSolution out;
    out.T = J.T;
    out.r = J.r;
    out.raw = solve_lmi(J.lmi, opts);
    out.status = out.raw.status;
    out.value = out.raw.value;
    out.B = Mat::Zero(J.T + 1, J.T + 1);
    out.C = Mat::Zero(J.T + 1, J.T + 1);
    if (J.r == 1) {
        for (const auto& [key, idx] : J.b_idx) {
            auto [t, k, s] = key;
            out.B(t, s) = out.raw.x[idx];
        }
        for (const auto& [key, idx] : J.c_idx) {
            auto [t, k, s, j] = key;
            out.C(t, s) = out.raw.x[idx];
        }
    }
    out.gamma_rows.resize(std::max(0, J.T - 1));
    for (int t = 2; t <= J.T; ++t) {
        out.gamma_rows[t - 2].assign((t - 1) * J.r, 0.0);
        for (int s = 1; s <= t - 1; ++s)
            for (int k = 1; k <= J.r; ++k)
                out.gamma_rows[t - 2][(s - 1) * J.r + (k - 1)] =
                    out.raw.x[J.gamma_idx.at({t, s, k})];
    }
    out.lip = Vec::Zero(J.T);
    for (int t = 1; t <= J.T; ++t) out.lip[t - 1] = out.raw.x[J.lip_idx[t - 1]];
    return out;
}

// ---------------------------------------------------------------------------
// Parameter recovery for the single-round joint optimum: eta = 1 everywhere,
// boundary multipliers from first differences of B columns, beta by forward
// substitution. Rows with a vanishing pivot B_{t,t} leave beta undetermined;
// they are reported, set to zero, and remain sound because the certificate
// then never uses dir_t.
struct RecoveredParams {
    ParamSchedule schedule;  // eta = 1, recovered beta, gamma from the solution
    Mat lambda_brd;          // (s,t), 1 <= s < t <= T (t = T column is x*)
    std::vector<int> undefined_beta_rows;
    double min_lambda = 0.0;         // most negative recovered multiplier
    double recovery_residual = 0.0;  // max residual of the change-of-variable equations
};

inline RecoveredParams recover_params(const JointOptSolution& jsol) {
    if (jsol.r != 1) throw std::invalid_argument("recover_params: single-round solutions only");
    const int T = jsol.T;
    RecoveredParams R;
    R.schedule = ParamSchedule::zeros(T);
    for (int t = 1; t <= T - 1; ++t)
        for (int s = 1; s <= t; ++s) R.schedule.eta(t, s) = 1.0;
    for (int t = 2; t <= T; ++t)
        for (int s = 1; s <= t - 1; ++s) R.schedule.gamma(t, s) = jsol.gamma_rows[t - 2][s - 1];

    R.lambda_brd = Mat::Zero(T + 1, T + 1);
    R.min_lambda = 0.0;
    for (int t = 2; t <= T; ++t)
        for (int s = 1; s <= t - 1; ++s) {
            double lam = jsol.B(t, s + 1) - jsol.B(t, s);
            R.lambda_brd(s, t) = lam;
            R.min_lambda = std::min(R.min_lambda, lam);
        }

    // beta rows needed by the schedule stop at T-1 (dir_T is never used)
    Mat beta = Mat::Zero(T + 1, T + 1);
    for (int t = 2; t <= T - 1; ++t) {
        double pivot = jsol.B(t, t);
        if (std::abs(pivot) < 1e-9) {
            R.undefined_beta_rows.push_back(t);
            continue;
        }
        for (int s = 1; s <= t - 1; ++s) {
            double acc = jsol.C(t, s);
            for (int j = s + 1; j <= t - 1; ++j) acc += beta(j, s) * R.lambda_brd(j, t);
            beta(t, s) = acc / pivot;
        }
    }
    for (int t = 2; t <= T - 1; ++t)
        for (int s = 1; s <= t - 1; ++s) R.schedule.beta(t, s) = beta(t, s);

    // residuals of the change-of-variable equations at eta = 1
    double res = 0.0;
    for (int t = 1; t <= T; ++t)
        for (int s = 1; s <= t; ++s) {
            double acc = 0.0;
            for (int j = t + 1; j <= T; ++j) acc += R.lambda_brd(t, j);
            for (int j = s; j <= t - 1; ++j) acc -= R.lambda_brd(j, t);
            res = std::max(res, std::abs(acc - jsol.B(t, s)));
        }
    for (int t = 2; t <= T - 1; ++t) {
        if (std::abs(jsol.B(t, t)) < 1e-9) continue;
        for (int s = 1; s <= t - 1; ++s) {
            double acc = beta(t, s) * jsol.B(t, t);
            for (int j = s + 1; j <= t - 1; ++j) acc -= beta(j, s) * R.lambda_brd(j, t);
            res = std::max(res, std::abs(acc - jsol.C(t, s)));
        }
    }
    R.recovery_residual = res;

    auto rep = validate(R.schedule);
    R.schedule.hull_safe = rep.hull_safe;
    R.schedule.meta["preset"] = "joint-opt";
    return R;
}

// ---------------------------------------------------------------------------
// One-iteration potential-design program. Size independent of the horizon:
// the six lifted coordinates are (g_t, G_{t-1}, x_t, v_t, y_t, y_{t+1}) with
// x_1 = 0 and x_{t+1} = sigma v_t + (1-sigma) x_t. The potential parameters
// (a, b) enter the objective linearly and travel as two extra nonnegative
// variables of the minimize reading.
inline GramSdp build_potential_design(double eta, double sigma, const ProblemSetting& ps) {
    if (!(eta > 0.0)) throw std::invalid_argument("build_potential_design: eta must be positive");
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw std::invalid_argument("build_potential_design: sigma must lie in (0, 1]");

    GramSdp g;
    g.basis = GramBasis::potential();
    g.direction = GramSdp::Direction::minimize;
    const Vec gbar = g.basis.unit(0);
    const Vec Gbar = g.basis.unit(1);
    const Vec xt = g.basis.unit(2);
    const Vec vt = g.basis.unit(3);
    const Vec yt = g.basis.unit(4);
    const Vec yn = g.basis.unit(5);
    const Vec x1 = Vec::Zero(6);
    const Vec xn = sigma * vt + (1.0 - sigma) * xt;

    // constant part of the potential-difference objective
    g.objective = odot(gbar, xt - yn) + odot(Gbar, yt - yn) +
                  (odot(yt, yt) - odot(yn, yn)) / (2.0 * eta);

    detail::append_lipschitz(g, 1, ps.L);
    g.constraints.back().name = "lip:g";

    std::vector<Vec> pts{x1, xt, vt, xn, yt, yn};
    std::vector<std::string> labels{"x1", "x_t", "v_t", "x_t+1", "y_t", "y_t+1"};
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            GramSdp::Constraint c;
            Vec d = pts[i] - pts[j];
            c.A = odot(d, d);
            c.rhs = ps.D * ps.D;
            c.tag = "diameter";
            c.name = "diam:" + labels[i] + "," + labels[j];
            g.constraints.push_back(std::move(c));
        }

    const Vec dir_v = eta * Gbar + eta * gbar + xt;
    const Vec dir_yt = eta * Gbar + yt;
    const Vec dir_yn = eta * Gbar + eta * gbar + yn;
    std::vector<std::pair<Vec, std::string>> opt_pts{{vt, "v_t"}, {yt, "y_t"}, {yn, "y_t+1"}};
    std::vector<std::pair<Vec, std::string>> opponents{
        {x1, "x1"}, {xt, "x_t"}, {vt, "v_t"}, {yt, "y_t"}, {yn, "y_t+1"}};
    for (const auto& [u, ul] : opt_pts) {
        const Vec& dir = (ul == "v_t") ? dir_v : (ul == "y_t" ? dir_yt : dir_yn);
        for (const auto& [w, wl] : opponents) {
            if (wl == ul) continue;
            GramSdp::Constraint c;
            c.A = odot(dir, u - w);
            c.rhs = 0.0;
            c.tag = "boundary";
            c.name = "brd:" + ul + "," + wl;
            g.constraints.push_back(std::move(c));
        }
    }

    // potential parameters a and b: nonnegative columns with zero cost
    {
        GramSdp::Constraint ca;
        ca.A = -(odot(xn - yn, xn - yn) - odot(xt - yt, xt - yt));
        ca.rhs = 0.0;
        ca.tag = "potential";
        ca.name = "a";
        g.constraints.push_back(std::move(ca));
        GramSdp::Constraint cb;
        cb.A = -(eta * (odot(Gbar + gbar, xn - yn) - odot(Gbar, xt - yt)) +
                 0.5 * (odot(xn, xn) - odot(yn, yn) - odot(xt, xt) + odot(yt, yt)));
        cb.rhs = 0.0;
        cb.tag = "potential";
        cb.name = "b";
        g.constraints.push_back(std::move(cb));
    }
    return g;
}

}  // namespace ofwpep
