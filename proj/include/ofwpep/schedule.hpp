#pragma once

#include <map>

#include "ofwpep/core.hpp"

#include <json.hpp>

namespace ofwpep {

// Coefficient schedule for the general online Frank-Wolfe scheme
//
//   dir_t  = sum_{s<=t} eta[t][s] g_s + sum_{s<t} beta[t][s] (v_s - x_1)
//   v_t    = argmin_{v in K} <dir_t, v>
//   x_{t+1}= x_1 + sum_{s<=t} gamma[t+1][s] (v_s - x_1)
//
// Index ranges (1-based, as in the accessors):
//   eta[t][s]   1 <= s <= t <= T-1
//   beta[t][s]  1 <= s <  t <= T-1
//   gamma[t][s] 2 <= t <= T, 1 <= s < t
//
// The last oracle atom v_T never reaches a played iterate, so eta/beta rows
// stop at T-1.
struct ParamSchedule {
    int T = 0;
    std::vector<std::vector<double>> eta_rows;    // [t-1], t = 1..T-1, size t
    std::vector<std::vector<double>> beta_rows;   // [t-1], t = 1..T-1, size t-1
    std::vector<std::vector<double>> gamma_rows;  // [t-2], t = 2..T,   size t-1
    bool hull_safe = false;  // gamma rows are sub-probability vectors
    std::map<std::string, std::string> meta;

    static ParamSchedule zeros(int T) {
        if (T < 1) throw std::invalid_argument("ParamSchedule: T must be >= 1");
        ParamSchedule s;
        s.T = T;
        s.eta_rows.resize(std::max(0, T - 1));
        s.beta_rows.resize(std::max(0, T - 1));
        s.gamma_rows.resize(std::max(0, T - 1));
        for (int t = 1; t <= T - 1; ++t) {
            s.eta_rows[t - 1].assign(t, 0.0);
            s.beta_rows[t - 1].assign(t - 1, 0.0);
        }
        for (int t = 2; t <= T; ++t) s.gamma_rows[t - 2].assign(t - 1, 0.0);
        return s;
    }

    double eta(int t, int s) const { return eta_rows.at(t - 1).at(s - 1); }
    double beta(int t, int s) const { return beta_rows.at(t - 1).at(s - 1); }
    double gamma(int t, int s) const { return gamma_rows.at(t - 2).at(s - 1); }
    double& eta(int t, int s) { return eta_rows.at(t - 1).at(s - 1); }
    double& beta(int t, int s) { return beta_rows.at(t - 1).at(s - 1); }
    double& gamma(int t, int s) { return gamma_rows.at(t - 2).at(s - 1); }

    double gamma_row_sum(int t) const {
        double acc = 0.0;
        for (double g : gamma_rows.at(t - 2)) acc += g;
        return acc;
    }
};

/// Eq.-style coefficients equivalent to the fixed (eta, sigma) algorithm:
/// eta = (D/2L)(3/T)^{3/4}, sigma = min(1, sqrt(3/T)); beta = gamma,
/// gamma[t+1][t] = sigma, gamma[t+1][s] = (1-sigma) gamma[t][s].
inline ParamSchedule preset_ofw_new(int T, double L, double D) {
    if (T < 1) throw std::invalid_argument("preset_ofw_new: T must be >= 1");
    ProblemSetting check(L, D, T);
    const double eta = (D / (2.0 * L)) * std::pow(3.0 / T, 0.75);
    const double sigma = std::min(1.0, std::sqrt(3.0 / T));
    ParamSchedule s = ParamSchedule::zeros(T);
    for (int t = 1; t <= T - 1; ++t)
        for (int u = 1; u <= t; ++u) s.eta(t, u) = eta;
    for (int t = 2; t <= T; ++t) {
        s.gamma(t, t - 1) = sigma;
        if (t > 2)
            for (int u = 1; u <= t - 2; ++u) s.gamma(t, u) = (1.0 - sigma) * s.gamma(t - 1, u);
    }
    for (int t = 2; t <= T - 1; ++t)
        for (int u = 1; u <= t - 1; ++u) s.beta(t, u) = s.gamma(t, u);
    s.hull_safe = true;
    s.meta["preset"] = "ofw-new";
    s.meta["eta"] = std::to_string(eta);
    s.meta["sigma"] = std::to_string(sigma);
    return s;
}

enum class HazanVariant { thm44, alg27 };

/// eta[t][s] = D/(2 L T^{3/4}); beta = gamma; gamma[t][t-1] = 1/sqrt(t)
/// (thm44) or min(1, 2/sqrt(t)) (alg27); gamma[t][s] = gamma[t-1][s]
/// (1 - gamma[t][t-1]) below the subdiagonal.
inline ParamSchedule preset_hazan(int T, double L, double D, HazanVariant variant) {
    if (T < 1) throw std::invalid_argument("preset_hazan: T must be >= 1");
    ProblemSetting check(L, D, T);
    const double eta = D / (2.0 * L * std::pow(static_cast<double>(T), 0.75));
    ParamSchedule s = ParamSchedule::zeros(T);
    for (int t = 1; t <= T - 1; ++t)
        for (int u = 1; u <= t; ++u) s.eta(t, u) = eta;
    for (int t = 2; t <= T; ++t) {
        double st = (variant == HazanVariant::thm44)
                        ? 1.0 / std::sqrt(static_cast<double>(t))
                        : std::min(1.0, 2.0 / std::sqrt(static_cast<double>(t)));
        s.gamma(t, t - 1) = st;
        if (t > 2)
            for (int u = 1; u <= t - 2; ++u) s.gamma(t, u) = s.gamma(t - 1, u) * (1.0 - st);
    }
    for (int t = 2; t <= T - 1; ++t)
        for (int u = 1; u <= t - 1; ++u) s.beta(t, u) = s.gamma(t, u);
    s.hull_safe = true;
    s.meta["preset"] = (variant == HazanVariant::thm44) ? "hazan-thm44" : "hazan-alg27";
    return s;
}

enum class AnytimeBase { ofw_new, hazan_alg27 };

/// Horizon dependence replaced by the current time: at step t the scalar
/// parameters use t instead of T. beta inherits the substituted gamma, since
/// beta = gamma in both base presets.
inline ParamSchedule preset_anytime(AnytimeBase base, int T, double L, double D) {
    if (T < 1) throw std::invalid_argument("preset_anytime: T must be >= 1");
    ProblemSetting check(L, D, T);
    ParamSchedule s = ParamSchedule::zeros(T);
    for (int t = 1; t <= T - 1; ++t) {
        double eta_t = (base == AnytimeBase::ofw_new)
                           ? (D / (2.0 * L)) * std::pow(3.0 / t, 0.75)
                           : D / (2.0 * L * std::pow(static_cast<double>(t), 0.75));
        for (int u = 1; u <= t; ++u) s.eta(t, u) = eta_t;
    }
    for (int t = 2; t <= T; ++t) {
        double st;
        if (base == AnytimeBase::ofw_new) {
            // the step from x_{t-1} to x_t uses sigma at time t-1
            st = std::min(1.0, std::sqrt(3.0 / (t - 1)));
        } else {
            st = std::min(1.0, 2.0 / std::sqrt(static_cast<double>(t)));
        }
        s.gamma(t, t - 1) = st;
        if (t > 2)
            for (int u = 1; u <= t - 2; ++u) s.gamma(t, u) = s.gamma(t - 1, u) * (1.0 - st);
    }
    for (int t = 2; t <= T - 1; ++t)
        for (int u = 1; u <= t - 1; ++u) s.beta(t, u) = s.gamma(t, u);
    s.hull_safe = true;
    s.meta["preset"] = (base == AnytimeBase::ofw_new) ? "anytime-ofw-new" : "anytime-hazan-alg27";
    s.meta["note"] = "hazan anytime substitutes T by t in eta";
    return s;
}

struct ValidationReport {
    bool shape_ok = true;
    bool finite = true;
    bool hull_safe = true;
    double max_negative_gamma = 0.0;  // most negative entry, as a violation >= 0
    double max_row_sum_excess = 0.0;  // max over t of (row sum - 1), clipped at 0
    std::vector<std::string> findings;
    bool ok() const { return shape_ok && finite; }
};

/// Never throws; findings are collected in the report. hull_safe uses a
/// 1e-12 tolerance on gamma >= 0 and row sums <= 1.
inline ValidationReport validate(const ParamSchedule& s) {
    ValidationReport rep;
    const double tol = 1e-12;
    auto row_len_ok = [&](const std::vector<std::vector<double>>& rows, int first_t,
                          int expected_rows, int offset, const char* name) {
        if (static_cast<int>(rows.size()) != expected_rows) {
            rep.shape_ok = false;
            rep.findings.push_back(std::string(name) + ": wrong row count");
            return;
        }
        for (int i = 0; i < expected_rows; ++i) {
            int t = first_t + i;
            if (static_cast<int>(rows[i].size()) != t + offset) {
                rep.shape_ok = false;
                rep.findings.push_back(std::string(name) + " row t=" + std::to_string(t) +
                                       ": wrong length");
            }
            for (double v : rows[i])
                if (!std::isfinite(v)) {
                    rep.finite = false;
                    rep.findings.push_back(std::string(name) + " row t=" + std::to_string(t) +
                                           ": non-finite entry");
                    break;
                }
        }
    };
    row_len_ok(s.eta_rows, 1, std::max(0, s.T - 1), 0, "eta");
    row_len_ok(s.beta_rows, 1, std::max(0, s.T - 1), -1, "beta");
    row_len_ok(s.gamma_rows, 2, std::max(0, s.T - 1), -1, "gamma");

    if (rep.shape_ok && rep.finite) {
        for (int t = 2; t <= s.T; ++t) {
            double sum = 0.0;
            for (int u = 1; u <= t - 1; ++u) {
                double g = s.gamma(t, u);
                sum += g;
                if (g < -tol) {
                    rep.hull_safe = false;
                    rep.max_negative_gamma = std::max(rep.max_negative_gamma, -g);
                    rep.findings.push_back("gamma[" + std::to_string(t) + "][" +
                                           std::to_string(u) + "] negative");
                }
            }
            if (sum > 1.0 + tol) {
                rep.hull_safe = false;
                rep.max_row_sum_excess = std::max(rep.max_row_sum_excess, sum - 1.0);
                rep.findings.push_back("gamma row t=" + std::to_string(t) + " sums to " +
                                       std::to_string(sum));
            }
        }
    } else {
        rep.hull_safe = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Multi-round scheme: r oracle calls per round, atoms v_{t,k} indexed
// lexicographically by (t,k). beta may reference only atoms strictly
// lex-before the atom being computed.
struct MultiRoundSchedule {
    int T = 0;
    int r = 1;
    // flat atom id for (t,k), t = 1..T-1, k = 1..r
    int atom_id(int t, int k) const { return (t - 1) * r + (k - 1); }
    int n_atoms() const { return (T - 1) * r; }

    // eta[t][k][s]: s = 1..t
    std::vector<std::vector<std::vector<double>>> eta;  // [t-1][k-1][s-1]
    // beta[(t,k)][(s,j)]: (s,j) <lex (t,k), flat ids
    std::vector<std::vector<double>> beta;  // [atom_id][earlier atom_id]
    // gamma[t][(s,k)]: t = 2..T, over atoms with s < t
    std::vector<std::vector<double>> gamma;  // [t-2][atom_id], size (t-1)*r

    bool hull_safe = false;

    static MultiRoundSchedule zeros(int T, int r) {
        if (T < 1 || r < 1) throw std::invalid_argument("MultiRoundSchedule: T, r must be >= 1");
        MultiRoundSchedule s;
        s.T = T;
        s.r = r;
        s.eta.resize(std::max(0, T - 1));
        for (int t = 1; t <= T - 1; ++t) {
            s.eta[t - 1].resize(r);
            for (int k = 1; k <= r; ++k) s.eta[t - 1][k - 1].assign(t, 0.0);
        }
        s.beta.resize(s.n_atoms());
        for (int id = 0; id < s.n_atoms(); ++id) s.beta[id].assign(id, 0.0);
        s.gamma.resize(std::max(0, T - 1));
        for (int t = 2; t <= T; ++t) s.gamma[t - 2].assign((t - 1) * r, 0.0);
        return s;
    }

    /// Embeds a single-round schedule as r = 1.
    static MultiRoundSchedule from_single(const ParamSchedule& s) {
        MultiRoundSchedule m = zeros(s.T, 1);
        for (int t = 1; t <= s.T - 1; ++t)
            for (int u = 1; u <= t; ++u) m.eta[t - 1][0][u - 1] = s.eta(t, u);
        for (int t = 2; t <= s.T - 1; ++t)
            for (int u = 1; u <= t - 1; ++u) m.beta[m.atom_id(t, 1)][m.atom_id(u, 1)] = s.beta(t, u);
        for (int t = 2; t <= s.T; ++t)
            for (int u = 1; u <= t - 1; ++u) m.gamma[t - 2][m.atom_id(u, 1)] = s.gamma(t, u);
        m.hull_safe = s.hull_safe;
        return m;
    }
};

// ---------------------------------------------------------------------------
// JSON format: {"T": int, "eta": [[...]], "beta": [[...]], "gamma": [[...]],
// "meta": {...}}, rows ragged to the triangular shape. Row i of eta/beta is
// t = i+1; row i of gamma is t = i+2.
inline nlohmann::json schedule_to_json(const ParamSchedule& s) {
    nlohmann::json j;
    j["T"] = s.T;
    j["eta"] = s.eta_rows;
    j["beta"] = s.beta_rows;
    j["gamma"] = s.gamma_rows;
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : s.meta) meta[k] = v;
    meta["hull_safe"] = s.hull_safe;
    j["meta"] = meta;
    return j;
}

inline ParamSchedule schedule_from_json(const nlohmann::json& j) {
    ParamSchedule s;
    s.T = j.at("T").get<int>();
    if (s.T < 1) throw std::invalid_argument("schedule_from_json: T must be >= 1");
    s.eta_rows = j.at("eta").get<std::vector<std::vector<double>>>();
    s.beta_rows = j.at("beta").get<std::vector<std::vector<double>>>();
    s.gamma_rows = j.at("gamma").get<std::vector<std::vector<double>>>();
    if (j.contains("meta")) {
        for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it) {
            if (it.key() == "hull_safe") {
                s.hull_safe = it.value().get<bool>();
            } else if (it.value().is_string()) {
                s.meta[it.key()] = it.value().get<std::string>();
            }
        }
    }
    auto rep = validate(s);
    if (!rep.ok())
        throw std::invalid_argument("schedule_from_json: malformed schedule (" +
                                    (rep.findings.empty() ? std::string("shape") : rep.findings[0]) +
                                    ")");
    return s;
}

}  // namespace ofwpep
