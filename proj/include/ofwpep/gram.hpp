#pragma once

#include "ofwpep/lmi.hpp"
#include "ofwpep/schedule.hpp"

#include <json.hpp>

namespace ofwpep {

// Labeled basis of the lifted space. Coordinates are unit vectors for the
// gradients, the oracle atoms and the comparator; x_1 sits at the origin and
// is never a basis element. Derived points (played iterates, the one-step
// update in the potential program) are affine combinations expressed in the
// same coordinates.
struct GramBasis {
    int dim = 0;
    std::vector<std::string> labels;

    Vec unit(int i) const {
        Vec e = Vec::Zero(dim);
        e[i] = 1.0;
        return e;
    }

    static GramBasis ofw(int T) {
        GramBasis b;
        b.dim = 2 * T;
        for (int t = 1; t <= T; ++t) b.labels.push_back("g" + std::to_string(t));
        for (int s = 1; s <= T - 1; ++s) b.labels.push_back("v" + std::to_string(s));
        b.labels.push_back("x*");
        return b;
    }

    /// Multi-round: gradients, atoms v_{t,k} in lexicographic order, then x*.
    static GramBasis ofw_multiround(int T, int r) {
        GramBasis b;
        b.dim = T + (T - 1) * r + 1;
        for (int t = 1; t <= T; ++t) b.labels.push_back("g" + std::to_string(t));
        for (int t = 1; t <= T - 1; ++t)
            for (int k = 1; k <= r; ++k)
                b.labels.push_back("v" + std::to_string(t) + "," + std::to_string(k));
        b.labels.push_back("x*");
        return b;
    }

    /// One-iteration potential program: (g_t, G_{t-1}, x_t, v_t, y_t, y_{t+1}).
    static GramBasis potential() {
        GramBasis b;
        b.dim = 6;
        b.labels = {"g", "G", "x_t", "v_t", "y_t", "y_t+1"};
        return b;
    }
};

/// Symmetric outer product (u v' + v u')/2 of coefficient vectors.
inline Mat odot(const Vec& u, const Vec& v) {
    return 0.5 * (u * v.transpose() + v * u.transpose());
}

// A Gram-lifted semidefinite program. Two readings share the same data:
//
//  maximize:  sup_{G PSD} tr(A_obj G)  s.t.  tr(A_k G) {<=,=} rhs_k
//  minimize:  inf_y  sum_k rhs_k y_k   s.t.  sum_k y_k A_k - A_obj  PSD,
//             y_k >= 0 on <= rows, free on = rows
//
// so the minimize reading is the mechanical Lagrange dual of the maximize
// one, and a single structure serves both sides of a primal/dual pair.
struct GramSdp {
    enum class Direction { maximize, minimize };

    GramBasis basis;
    Mat objective;
    struct Constraint {
        Mat A;
        double rhs = 0.0;
        ConeProblem::Sense sense = ConeProblem::Sense::le;
        std::string tag;   // lipschitz | diameter | boundary | linkage | potential
        std::string name;  // human-readable, e.g. "diam:v1,x*"
    };
    std::vector<Constraint> constraints;
    Direction direction = Direction::maximize;

    GramSdp flipped(Direction d) const {
        GramSdp s = *this;
        s.direction = d;
        return s;
    }

    int count_tag(const std::string& tag) const {
        int n = 0;
        for (const auto& c : constraints) n += (c.tag == tag);
        return n;
    }

    int find(const std::string& name) const {
        for (size_t i = 0; i < constraints.size(); ++i)
            if (constraints[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

struct GramSolveResult {
    double value = 0.0;  // in the GramSdp's own direction
    SolveStatus status = SolveStatus::max_iter;
    Mat G;            // primal Gram matrix (maximize direction)
    Vec multipliers;  // per constraint: dual multipliers (max) or variables (min)
    SdpSolution raw;
    ConeProblem cone;
    double res_primal = kInf, res_dual = kInf, res_gap = kInf;
};

inline ConeProblem gram_to_cone_primal(const GramSdp& g) {
    const int n = g.basis.dim;
    const int m = static_cast<int>(g.constraints.size());
    ConeProblem c;
    c.init(n, 0, 0, m);
    c.c_psd = -svec(g.objective);
    for (int i = 0; i < m; ++i) {
        c.A_psd.row(i) = svec(g.constraints[i].A).transpose();
        c.rhs[i] = g.constraints[i].rhs;
        c.sense[i] = g.constraints[i].sense;
        c.row_names.push_back(g.constraints[i].name);
    }
    return c;
}

inline LmiProblem gram_to_lmi(const GramSdp& g) {
    LmiProblem p;
    p.dim = g.basis.dim;
    p.M0 = -g.objective;
    for (const auto& cstr : g.constraints) {
        LmiVar v;
        v.name = cstr.name;
        v.cost = cstr.rhs;
        v.nonneg = (cstr.sense == ConeProblem::Sense::le);
        v.M = cstr.A;
        p.vars.push_back(std::move(v));
    }
    return p;
}

inline GramSolveResult solve_gram(const GramSdp& g, const SolveOptions& opts = {}) {
    GramSolveResult out;
    if (g.direction == GramSdp::Direction::maximize) {
        out.cone = gram_to_cone_primal(g);
        out.raw = solve(out.cone, opts);
        out.status = out.raw.status;
        out.value = -out.raw.objective;
        out.G = out.raw.X;
        out.multipliers = -out.raw.y;  // <= rows of a min problem carry y <= 0
    } else {
        LmiProblem p = gram_to_lmi(g);
        auto sol = solve_lmi(p, opts);
        out.cone = sol.cone;
        out.raw = sol.raw;
        out.status = sol.status;
        out.value = sol.value;
        out.multipliers = sol.x;
    }
    out.res_primal = out.raw.res_primal;
    out.res_dual = out.raw.res_dual;
    out.res_gap = out.raw.res_gap;
    return out;
}

/// S(y) = sum_k y_k A_k - A_obj, the certificate matrix of the minimize
/// reading; assembled from scratch so a reported multiplier point can be
/// audited independently of any solver run.
inline Mat assemble_dual_slack(const GramSdp& g, const Vec& multipliers) {
    Mat S = -g.objective;
    for (size_t k = 0; k < g.constraints.size(); ++k)
        S += multipliers[static_cast<int>(k)] * g.constraints[k].A;
    return S;
}

struct GramCertificate {
    bool feasible = false;
    double value = 0.0;
    double min_eig = 0.0;
    double min_multiplier = 0.0;
};

inline GramCertificate certify_gram_dual(const GramSdp& g, const Vec& multipliers,
                                         double tol = 1e-7) {
    GramCertificate rep;
    Mat S = assemble_dual_slack(g, multipliers);
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    rep.min_eig = es.eigenvalues().minCoeff();
    rep.min_multiplier = 0.0;
    rep.value = 0.0;
    for (size_t k = 0; k < g.constraints.size(); ++k) {
        double yk = multipliers[static_cast<int>(k)];
        rep.value += yk * g.constraints[k].rhs;
        if (g.constraints[k].sense == ConeProblem::Sense::le)
            rep.min_multiplier = std::min(rep.min_multiplier, yk);
    }
    double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    rep.feasible = rep.min_eig >= -tol * scale && rep.min_multiplier >= -tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Sparse JSON format: {dim, direction, basis, objective: [[i,j,val]],
// constraints: [{entries, rhs, sense, tag, name}]}. Entries list the lower
// triangle of each symmetric matrix.
inline nlohmann::json gram_to_json(const GramSdp& g) {
    auto mat_entries = [](const Mat& A) {
        nlohmann::json e = nlohmann::json::array();
        for (int j = 0; j < A.cols(); ++j)
            for (int i = j; i < A.rows(); ++i)
                if (A(i, j) != 0.0) e.push_back({i, j, A(i, j)});
        return e;
    };
    nlohmann::json j;
    j["dim"] = g.basis.dim;
    j["direction"] = g.direction == GramSdp::Direction::maximize ? "max" : "min";
    j["basis"] = g.basis.labels;
    j["objective"] = mat_entries(g.objective);
    j["constraints"] = nlohmann::json::array();
    for (const auto& c : g.constraints) {
        nlohmann::json cj;
        cj["entries"] = mat_entries(c.A);
        cj["rhs"] = c.rhs;
        cj["sense"] = c.sense == ConeProblem::Sense::le ? "le" : "eq";
        cj["tag"] = c.tag;
        cj["name"] = c.name;
        j["constraints"].push_back(cj);
    }
    return j;
}

inline nlohmann::json sdp_solution_to_json(const SdpSolution& s) {
    nlohmann::json j;
    j["status"] = to_string(s.status);
    j["objective"] = s.objective;
    j["dual_objective"] = s.dual_objective;
    j["residuals"] = {{"primal", s.res_primal}, {"dual", s.res_dual}, {"gap", s.res_gap}};
    j["metadata"] = {{"method", s.method}, {"iterations", s.iterations}};
    auto dense = [](const Mat& M) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < M.rows(); ++i) {
            std::vector<double> row(M.cols());
            for (int c = 0; c < M.cols(); ++c) row[c] = M(i, c);
            rows.push_back(row);
        }
        return rows;
    };
    j["X"] = dense(s.X);
    j["z"] = std::vector<double>(s.z.data(), s.z.data() + s.z.size());
    j["y"] = std::vector<double>(s.y.data(), s.y.data() + s.y.size());
    return j;
}

inline GramSdp gram_from_json(const nlohmann::json& j) {
    GramSdp g;
    g.basis.dim = j.at("dim").get<int>();
    if (j.contains("basis")) g.basis.labels = j["basis"].get<std::vector<std::string>>();
    g.direction = (j.value("direction", "max") == std::string("min"))
                      ? GramSdp::Direction::minimize
                      : GramSdp::Direction::maximize;
    auto mat_from = [&](const nlohmann::json& e) {
        Mat A = Mat::Zero(g.basis.dim, g.basis.dim);
        for (const auto& triple : e) {
            int i = triple.at(0).get<int>(), jj = triple.at(1).get<int>();
            double v = triple.at(2).get<double>();
            A(i, jj) = v;
            A(jj, i) = v;
        }
        return A;
    };
    g.objective = mat_from(j.at("objective"));
    for (const auto& cj : j.at("constraints")) {
        GramSdp::Constraint c;
        c.A = mat_from(cj.at("entries"));
        c.rhs = cj.at("rhs").get<double>();
        c.sense = cj.value("sense", "le") == std::string("eq") ? ConeProblem::Sense::eq
                                                               : ConeProblem::Sense::le;
        c.tag = cj.value("tag", "");
        c.name = cj.value("name", "");
        g.constraints.push_back(std::move(c));
    }
    return g;
}

}  // namespace ofwpep
