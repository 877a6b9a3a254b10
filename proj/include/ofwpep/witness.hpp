#pragma once

#include "ofwpep/pep.hpp"
#include "ofwpep/simulate.hpp"

namespace ofwpep {

// Explicit adversarial instance recovered from a solved Gram matrix. The
// domain is the convex hull of the sampled points; any true feasible set
// containing them incurs at least this regret.
struct WorstCase {
    int T = 0;
    int d = 0;
    std::vector<Vec> g;  // g_1..g_T
    std::vector<Vec> v;  // v_1..v_{T-1}
    Vec x_star;
    double regret = 0.0;       // sum <g_t, x_t - x*> under the generating schedule
    Vec spectrum;              // eigenvalues of the factored Gram matrix, descending

    Vec x1() const { return Vec::Zero(d); }

    Domain hull_domain() const {
        std::vector<Vec> verts;
        verts.push_back(Vec::Zero(d));
        for (const auto& vi : v) verts.push_back(vi);
        verts.push_back(x_star);
        return Domain::make_hull(std::move(verts));
    }

    /// Gram matrix of (g_1..g_T, v_1..v_{T-1}, x*), the extraction's inverse.
    Mat gram() const {
        const int n = 2 * T;
        Mat P(d, n);
        for (int t = 1; t <= T; ++t) P.col(t - 1) = g[t - 1];
        for (int s = 1; s <= T - 1; ++s) P.col(T + s - 1) = v[s - 1];
        P.col(n - 1) = x_star;
        return P.transpose() * P;
    }
};

/// Factor a solved PSD Gram matrix into explicit vectors: eigenpairs above
/// rank_tol * lambda_max survive; the factor's columns are the instance.
inline WorstCase extract(const SdpSolution& sol, const GramBasis& basis,
                         double rank_tol = 1e-7) {
    const int n = basis.dim;
    if (n % 2 != 0) throw std::invalid_argument("extract: basis is not an OFW basis");
    const int T = n / 2;
    if (sol.X.rows() != n) throw std::invalid_argument("extract: solution/basis size mismatch");

    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sol.X + sol.X.transpose()));
    const Vec& ev = es.eigenvalues();  // ascending
    double lmax = std::max(0.0, ev.maxCoeff());
    if (ev.minCoeff() < -1e-6 * (1.0 + lmax))
        throw std::invalid_argument("extract: Gram matrix is indefinite beyond tolerance");

    std::vector<int> kept;
    for (int i = n - 1; i >= 0; --i)
        if (ev[i] > rank_tol * lmax && ev[i] > 0.0) kept.push_back(i);
    WorstCase wc;
    wc.T = T;
    wc.d = std::max(1, static_cast<int>(kept.size()));
    wc.spectrum = Vec::Zero(static_cast<int>(kept.size()));
    Mat P = Mat::Zero(wc.d, n);
    for (size_t r = 0; r < kept.size(); ++r) {
        wc.spectrum[static_cast<int>(r)] = ev[kept[r]];
        P.row(static_cast<int>(r)) = std::sqrt(ev[kept[r]]) * es.eigenvectors().col(kept[r]).transpose();
    }
    for (int t = 1; t <= T; ++t) wc.g.push_back(P.col(t - 1));
    for (int s = 1; s <= T - 1; ++s) wc.v.push_back(P.col(T + s - 1));
    wc.x_star = P.col(n - 1);
    return wc;
}

/// The T = 1 instance is analytic: one gradient at full strength against the
/// farthest comparator.
inline WorstCase worst_case_T1(const ProblemSetting& ps) {
    WorstCase wc;
    wc.T = 1;
    wc.d = 1;
    Vec g1(1), xs(1);
    g1 << ps.L;
    xs << -ps.D;
    wc.g.push_back(g1);
    wc.x_star = xs;
    wc.regret = ps.L * ps.D;
    wc.spectrum = Vec::Zero(0);
    return wc;
}

struct AuditReport {
    bool feasible = false;    // gradient norms and pairwise diameters
    bool lmo_consistent = false;  // recorded atoms minimize over the hull
    bool replay_ok = false;   // replayed trace reproduces iterates and regret
    bool ties_resolved = true;  // recorded atom always within tie tolerance
    double max_grad_excess = 0.0;
    double max_diam_excess = 0.0;
    double max_lmo_violation = 0.0;
    double max_iterate_deviation = 0.0;
    double replay_regret = 0.0;
    double reference_value = 0.0;  // the SDP objective the replay must match
    std::vector<std::string> findings;
    bool all_ok() const { return feasible && lmo_consistent && replay_ok && ties_resolved; }
};

/// Checks feasibility, oracle consistency and replay closure of a witness
/// against the schedule that generated it. Never throws on a failed check.
inline AuditReport audit(const WorstCase& wc, const ParamSchedule& sched,
                         const ProblemSetting& ps, double reference_value) {
    AuditReport rep;
    rep.reference_value = reference_value;
    if (wc.T != sched.T || wc.T != ps.T || static_cast<int>(wc.g.size()) != wc.T ||
        static_cast<int>(wc.v.size()) != wc.T - 1) {
        rep.findings.push_back("size mismatch between witness, schedule and setting");
        return rep;
    }

    for (int t = 1; t <= wc.T; ++t)
        rep.max_grad_excess = std::max(rep.max_grad_excess, wc.g[t - 1].norm() - ps.L);
    std::vector<Vec> pts{wc.x1()};
    for (const auto& vi : wc.v) pts.push_back(vi);
    pts.push_back(wc.x_star);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            rep.max_diam_excess = std::max(rep.max_diam_excess, (pts[i] - pts[j]).norm() - ps.D);
    rep.feasible = rep.max_grad_excess <= 1e-6 && rep.max_diam_excess <= 1e-6;
    if (!rep.feasible) rep.findings.push_back("feasibility bounds violated");

    // oracle consistency with the recorded directions
    Domain K = wc.hull_domain();
    for (int t = 1; t <= wc.T - 1; ++t) {
        Vec dir = Vec::Zero(wc.d);
        for (int s = 1; s <= t; ++s) dir += sched.eta(t, s) * wc.g[s - 1];
        for (int s = 1; s <= t - 1; ++s) dir += sched.beta(t, s) * wc.v[s - 1];
        for (const auto& u : K.vertices)
            rep.max_lmo_violation = std::max(rep.max_lmo_violation, dir.dot(wc.v[t - 1] - u));
    }
    rep.lmo_consistent = rep.max_lmo_violation <= 1e-6;
    if (!rep.lmo_consistent) rep.findings.push_back("recorded atom is not an oracle answer");

    // replay through the actual scheme, breaking oracle ties toward the
    // recorded atoms
    bool ties = true;
    std::function<Vec(const Vec&, int)> oracle = [&](const Vec& dir, int t) {
        bool used = false;
        Vec v = lmo_prefer(K, dir, wc.v[t - 1], 1e-7, &used);
        if (!used) ties = false;
        return v;
    };
    auto tr = run_general(sched, K, wc.x1(), wc.g, &oracle);
    rep.ties_resolved = ties;
    if (!ties) rep.findings.push_back("recorded atom fell outside the tie tolerance");
    for (int t = 1; t <= wc.T - 1; ++t)
        rep.max_iterate_deviation =
            std::max(rep.max_iterate_deviation, (tr.v_at(t) - wc.v[t - 1]).norm());
    rep.replay_regret = regret(tr, wc.x_star);
    double tol = 1e-4 * (1.0 + std::abs(reference_value));
    rep.replay_ok = std::abs(rep.replay_regret - reference_value) <= tol;
    if (!rep.replay_ok) rep.findings.push_back("replayed regret misses the reference value");
    return rep;
}

// ---------------------------------------------------------------------------
inline nlohmann::json worst_case_to_json(const WorstCase& wc) {
    auto vecs = [](const std::vector<Vec>& vs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : vs) a.push_back(std::vector<double>(v.data(), v.data() + v.size()));
        return a;
    };
    nlohmann::json j;
    j["T"] = wc.T;
    j["d"] = wc.d;
    j["g"] = vecs(wc.g);
    j["v"] = vecs(wc.v);
    j["x_star"] = std::vector<double>(wc.x_star.data(), wc.x_star.data() + wc.x_star.size());
    j["regret"] = wc.regret;
    j["spectrum"] = std::vector<double>(wc.spectrum.data(), wc.spectrum.data() + wc.spectrum.size());
    return j;
}

inline WorstCase worst_case_from_json(const nlohmann::json& j) {
    WorstCase wc;
    wc.T = j.at("T").get<int>();
    wc.d = j.at("d").get<int>();
    auto load = [&](const nlohmann::json& a) {
        std::vector<Vec> out;
        for (const auto& row : a) {
            auto v = row.get<std::vector<double>>();
            out.push_back(Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size())));
        }
        return out;
    };
    wc.g = load(j.at("g"));
    wc.v = load(j.at("v"));
    auto xs = j.at("x_star").get<std::vector<double>>();
    wc.x_star = Eigen::Map<const Vec>(xs.data(), static_cast<long>(xs.size()));
    wc.regret = j.value("regret", 0.0);
    wc.spectrum = Vec::Zero(0);
    return wc;
}

}  // namespace ofwpep
