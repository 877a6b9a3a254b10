#pragma once

#include "ofwpep/solver.hpp"

namespace ofwpep {

// Linear matrix inequality problem
//
//   minimize    sum_k cost_k x_k
//   subject to  S = M0 + sum_k x_k M_k  PSD,
//               x_k >= 0 (nonneg vars) or free,
//               linear scalar rows on x,
//
// lowered onto ConeProblem by introducing S as the PSD variable and linking
// it to x through svec equalities.
struct LmiVar {
    std::string name;
    double cost = 0.0;
    bool nonneg = true;
    Mat M;  // symmetric coefficient matrix
};

struct LmiProblem {
    int dim = 0;
    Mat M0;
    std::vector<LmiVar> vars;
    struct Row {
        Vec coef;  // one per var
        double rhs = 0.0;
        ConeProblem::Sense sense = ConeProblem::Sense::eq;
        std::string name;
    };
    std::vector<Row> rows;
};

struct LmiSolution {
    Vec x;          // variable values, in LmiProblem::vars order
    Mat S;          // the matrix S = M0 + sum x_k M_k at the reported point
    double value = 0.0;
    SolveStatus status = SolveStatus::max_iter;
    SdpSolution raw;       // underlying cone solution
    ConeProblem cone;      // lowered problem (kept for certification)
    std::vector<int> kept_coords;  // coordinates surviving facial reduction
};

namespace detail {

// Coordinates whose diagonal is identically zero across M0 and every M_k
// force the whole row of S to vanish. Removing them (and turning the
// corresponding off-diagonal entries into scalar equalities) restores a
// relative interior for the reduced PSD block. The potential-design SDP needs
// this: the summed-gradient coordinate carries no norm constraint.
inline std::vector<int> facially_reduced_coords(const LmiProblem& p) {
    std::vector<int> kept;
    for (int i = 0; i < p.dim; ++i) {
        double diag = std::abs(p.M0(i, i));
        for (const auto& v : p.vars) diag = std::max(diag, std::abs(v.M(i, i)));
        if (diag > 0.0) kept.push_back(i);
    }
    return kept;
}

}  // namespace detail

inline ConeProblem lmi_to_cone(const LmiProblem& p, std::vector<int>* kept_out = nullptr) {
    const int K = static_cast<int>(p.vars.size());
    std::vector<int> kept = detail::facially_reduced_coords(p);
    std::vector<int> dropped;
    {
        std::vector<char> is_kept(p.dim, 0);
        for (int i : kept) is_kept[i] = 1;
        for (int i = 0; i < p.dim; ++i)
            if (!is_kept[i]) dropped.push_back(i);
    }
    if (kept_out) *kept_out = kept;

    const int d = static_cast<int>(kept.size());
    const int ns = svec_len(d);

    std::vector<int> nn_idx, fr_idx;
    for (int k = 0; k < K; ++k)
        (p.vars[k].nonneg ? nn_idx : fr_idx).push_back(k);
    const int pnn = static_cast<int>(nn_idx.size());
    const int pfr = static_cast<int>(fr_idx.size());

    // rows: svec linkage + reduced-coordinate equalities + user rows
    std::vector<std::pair<int, int>> red_rows;  // (dropped i, any j != i)
    {
        std::vector<char> is_dropped(p.dim, 0);
        for (int i : dropped) is_dropped[i] = 1;
        for (int i : dropped)
            for (int j = 0; j < p.dim; ++j) {
                if (j == i || (is_dropped[j] && j < i)) continue;
                double mag = std::abs(p.M0(i, j));
                for (const auto& v : p.vars) mag = std::max(mag, std::abs(v.M(i, j)));
                if (mag > 0.0) red_rows.emplace_back(i, j);
            }
    }
    const int m = ns + static_cast<int>(red_rows.size()) + static_cast<int>(p.rows.size());

    ConeProblem c;
    c.init(d, pnn, pfr, m);
    for (int a = 0; a < pnn; ++a) c.c_nonneg[a] = p.vars[nn_idx[a]].cost;
    for (int a = 0; a < pfr; ++a) c.c_free[a] = p.vars[fr_idx[a]].cost;

    auto restrict_svec = [&](const Mat& M) {
        Mat R(d, d);
        for (int a = 0; a < d; ++a)
            for (int b2 = 0; b2 < d; ++b2) R(a, b2) = M(kept[a], kept[b2]);
        return svec(R, false);
    };

    // svec(S) - sum_k x_k svec(M_k) = svec(M0)
    for (int r = 0; r < ns; ++r) c.A_psd(r, r) = 1.0;
    for (int a = 0; a < pnn; ++a)
        c.A_nonneg.col(a).head(ns) = -restrict_svec(p.vars[nn_idx[a]].M);
    for (int a = 0; a < pfr; ++a)
        c.A_free.col(a).head(ns) = -restrict_svec(p.vars[fr_idx[a]].M);
    c.rhs.head(ns) = restrict_svec(p.M0);

    int r = ns;
    for (auto [i, j] : red_rows) {
        for (int a = 0; a < pnn; ++a) c.A_nonneg(r, a) = p.vars[nn_idx[a]].M(i, j);
        for (int a = 0; a < pfr; ++a) c.A_free(r, a) = p.vars[fr_idx[a]].M(i, j);
        c.rhs[r] = -p.M0(i, j);
        c.sense[r] = ConeProblem::Sense::eq;
        ++r;
    }
    for (const auto& row : p.rows) {
        if (row.coef.size() != K)
            throw std::invalid_argument("lmi_to_cone: row coefficient size mismatch");
        for (int a = 0; a < pnn; ++a) c.A_nonneg(r, a) = row.coef[nn_idx[a]];
        for (int a = 0; a < pfr; ++a) c.A_free(r, a) = row.coef[fr_idx[a]];
        c.rhs[r] = row.rhs;
        c.sense[r] = row.sense;
        ++r;
    }
    return c;
}

inline LmiSolution solve_lmi(const LmiProblem& p, const SolveOptions& opts = {}) {
    LmiSolution out;
    out.cone = lmi_to_cone(p, &out.kept_coords);
    out.raw = solve(out.cone, opts);
    out.status = out.raw.status;

    const int K = static_cast<int>(p.vars.size());
    out.x = Vec::Zero(K);
    int a_nn = 0, a_fr = 0;
    for (int k = 0; k < K; ++k) {
        if (p.vars[k].nonneg)
            out.x[k] = out.raw.z[a_nn++];
        else
            out.x[k] = out.raw.w[a_fr++];
    }
    out.S = p.M0;
    for (int k = 0; k < K; ++k) out.S += out.x[k] * p.vars[k].M;
    out.value = 0.0;
    for (int k = 0; k < K; ++k) out.value += p.vars[k].cost * out.x[k];
    return out;
}

}  // namespace ofwpep
