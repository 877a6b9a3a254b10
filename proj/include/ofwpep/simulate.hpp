#pragma once

#include <functional>

#include "ofwpep/domain.hpp"
#include "ofwpep/schedule.hpp"

#include <json.hpp>

namespace ofwpep {

// One run of an algorithm. x may contain the post-horizon iterate x_{T+1}
// (runners that compute it for the potential checks do), and v may contain
// v_T for the fixed-parameter algorithm, which formally computes it; no check
// ever depends on either. Losses are linear throughout.
struct Trace {
    int T = 0;
    std::vector<Vec> x;    // iterates, x[0] = x_1
    std::vector<Vec> v;    // oracle atoms, v[0] = v_1
    std::vector<Vec> dir;  // search directions
    std::vector<Vec> g;    // the gradient sequence the run saw
    std::vector<double> loss;  // <g_t, x_t>

    const Vec& x_at(int t) const { return x.at(t - 1); }  // 1-based
    const Vec& v_at(int t) const { return v.at(t - 1); }
    const Vec& g_at(int t) const { return g.at(t - 1); }
};

using GradientSequence = std::vector<Vec>;

inline void check_gradients(const GradientSequence& grads, double L, double tol = 1e-9) {
    for (const auto& g : grads) {
        if (!g.allFinite()) throw std::invalid_argument("gradients: non-finite entry");
        if (g.norm() > L + tol)
            throw std::invalid_argument("gradients: norm exceeds the bound L");
    }
}

/// Seeded gradient generator: uniform on the sphere of radius L (the
/// distribution named by the trace-export interface).
inline GradientSequence gen_gradients(std::uint64_t seed, int d, int T, double L) {
    Rng rng(seed);
    GradientSequence g;
    g.reserve(T);
    for (int t = 0; t < T; ++t) g.push_back(rng.sphere(d, L));
    return g;
}

/// Replays the general scheme. dir/v stop at T-1; x runs to x_T.
inline Trace run_general(const ParamSchedule& sched, const Domain& K, const Vec& x1,
                         const GradientSequence& grads,
                         const std::function<Vec(const Vec&, int)>* oracle_override = nullptr) {
    const int T = sched.T;
    if (static_cast<int>(grads.size()) != T)
        throw std::invalid_argument("run_general: gradient count != T");
    if (x1.size() != K.dim) throw std::invalid_argument("run_general: x1 dimension mismatch");
    for (const auto& gt : grads)
        if (gt.size() != K.dim) throw std::invalid_argument("run_general: gradient dimension mismatch");

    Trace tr;
    tr.T = T;
    tr.g = grads;
    tr.x.push_back(x1);
    for (int t = 1; t <= T; ++t) {
        const Vec& xt = tr.x.back();
        tr.loss.push_back(grads[t - 1].dot(xt));
        if (t == T) break;  // v_T never reaches a played iterate
        Vec d = Vec::Zero(K.dim);
        for (int s = 1; s <= t; ++s) d += sched.eta(t, s) * grads[s - 1];
        for (int s = 1; s <= t - 1; ++s) d += sched.beta(t, s) * (tr.v[s - 1] - x1);
        Vec vt = oracle_override ? (*oracle_override)(d, t) : lmo(K, d);
        tr.dir.push_back(d);
        tr.v.push_back(vt);
        Vec xn = x1;
        for (int s = 1; s <= t; ++s) xn += sched.gamma(t + 1, s) * (tr.v[s - 1] - x1);
        tr.x.push_back(xn);
    }
    return tr;
}

/// The fixed-parameter algorithm, implemented literally:
/// dir_t = eta * sum_{s<=t} g_s + (x_t - x_1); x_{t+1} = (1-sigma) x_t +
/// sigma v_t. Computes through t = T, so the trace carries v_T and x_{T+1}.
inline Trace run_ofw_fixed(double eta, double sigma, const Domain& K, const Vec& x1,
                           const GradientSequence& grads) {
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw std::invalid_argument("run_ofw_fixed: sigma must lie in [0, 1]");
    const int T = static_cast<int>(grads.size());
    Trace tr;
    tr.T = T;
    tr.g = grads;
    tr.x.push_back(x1);
    Vec gsum = Vec::Zero(K.dim);
    for (int t = 1; t <= T; ++t) {
        const Vec& xt = tr.x.back();
        tr.loss.push_back(grads[t - 1].dot(xt));
        gsum += grads[t - 1];
        Vec d = eta * gsum + (xt - x1);
        Vec vt = lmo(K, d);
        tr.dir.push_back(d);
        tr.v.push_back(vt);
        tr.x.push_back((1.0 - sigma) * xt + sigma * vt);
    }
    return tr;
}

/// Follow-the-regularized-leader companion. The regularized argmin equals a
/// Euclidean projection, so only ball and box domains are supported:
/// y_{t+1} = Proj_K(y_1 - eta * sum_{s<=t} g_s). Trace carries y_1..y_{T+1}.
inline Trace run_ftrl(double eta, const Domain& K, const Vec& y1, const GradientSequence& grads) {
    if (K.kind != Domain::Kind::ball && K.kind != Domain::Kind::box)
        throw std::invalid_argument("run_ftrl: domain must be ball or box");
    if (!(eta > 0.0)) throw std::invalid_argument("run_ftrl: eta must be positive");
    const int T = static_cast<int>(grads.size());
    Trace tr;
    tr.T = T;
    tr.g = grads;
    tr.x.push_back(y1);
    Vec gsum = Vec::Zero(K.dim);
    for (int t = 1; t <= T; ++t) {
        tr.loss.push_back(grads[t - 1].dot(tr.x.back()));
        gsum += grads[t - 1];
        tr.x.push_back(project(K, y1 - eta * gsum));
    }
    return tr;
}

/// Multi-round scheme in lexicographic atom order (t,1), ..., (t,r) per step.
inline Trace run_multiround(const MultiRoundSchedule& sched, const Domain& K, const Vec& x1,
                            const GradientSequence& grads) {
    const int T = sched.T;
    const int r = sched.r;
    if (static_cast<int>(grads.size()) != T)
        throw std::invalid_argument("run_multiround: gradient count != T");
    Trace tr;
    tr.T = T;
    tr.g = grads;
    tr.x.push_back(x1);
    std::vector<Vec> atoms;  // flat lex order
    for (int t = 1; t <= T; ++t) {
        tr.loss.push_back(grads[t - 1].dot(tr.x.back()));
        if (t == T) break;
        for (int k = 1; k <= r; ++k) {
            int id = sched.atom_id(t, k);
            if (static_cast<int>(sched.beta[id].size()) != id)
                throw std::invalid_argument("run_multiround: beta references out-of-order atoms");
            Vec d = Vec::Zero(K.dim);
            for (int s = 1; s <= t; ++s) d += sched.eta[t - 1][k - 1][s - 1] * grads[s - 1];
            for (int e = 0; e < id; ++e) d += sched.beta[id][e] * (atoms[e] - x1);
            Vec vtk = lmo(K, d);
            tr.dir.push_back(d);
            tr.v.push_back(vtk);
            atoms.push_back(vtk);
        }
        Vec xn = x1;
        for (int e = 0; e < (t)*r && e < static_cast<int>(atoms.size()); ++e)
            xn += sched.gamma[t - 1][e] * (atoms[e] - x1);
        tr.x.push_back(xn);
    }
    return tr;
}

/// Cumulative linear regret against a fixed comparator.
inline double regret(const Trace& tr, const Vec& x_star) {
    double acc = 0.0;
    for (int t = 1; t <= tr.T; ++t) acc += tr.g_at(t).dot(tr.x_at(t) - x_star);
    return acc;
}

/// sup over comparators of the linear total: the maximizer is a vertex, so
/// one oracle call with the summed gradient suffices.
inline double sup_regret(const Trace& tr, const Domain& K) {
    Vec gsum = Vec::Zero(K.dim);
    for (int t = 1; t <= tr.T; ++t) gsum += tr.g_at(t);
    Vec xstar = lmo(K, gsum);
    return regret(tr, xstar);
}

// ---------------------------------------------------------------------------
inline nlohmann::json trace_to_json(const Trace& tr) {
    auto vecs = [](const std::vector<Vec>& vs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : vs) a.push_back(std::vector<double>(v.data(), v.data() + v.size()));
        return a;
    };
    nlohmann::json j;
    j["T"] = tr.T;
    j["x"] = vecs(tr.x);
    j["v"] = vecs(tr.v);
    j["dir"] = vecs(tr.dir);
    j["g"] = vecs(tr.g);
    j["loss"] = tr.loss;
    return j;
}

inline GradientSequence gradients_from_json(const nlohmann::json& j) {
    GradientSequence g;
    if (j.is_array()) {
        for (const auto& row : j) {
            auto v = row.get<std::vector<double>>();
            g.push_back(Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size())));
        }
        return g;
    }
    // RNG spec form: {seed, d, T, L}
    return gen_gradients(j.at("seed").get<std::uint64_t>(), j.at("d").get<int>(),
                         j.at("T").get<int>(), j.value("L", 1.0));
}

}  // namespace ofwpep
