#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "ofwpep/witness.hpp"

namespace ofwpep {

// Sweep over horizons: one row per T, parallel across T with a bounded worker
// pool. Per-solve determinism is unaffected by the pool; rows come back
// ordered by T regardless of completion order.
struct SweepSpec {
    enum class Mode { tight_bound, joint_opt, joint_opt_beta0, joint_opt_rounds, closed_form };

    std::string algo = "ofw-new";  // preset name; ignored by joint-opt modes
    int T_min = 3, T_max = 20;
    double L = 1.0, D = 1.0;
    Mode mode = Mode::tight_bound;
    int rounds = 1;
    double tol = 1e-8;
    int T_cap = 64;  // desk-scale guard

    std::string series_name() const {
        switch (mode) {
            case Mode::tight_bound: return "tight:" + algo;
            case Mode::joint_opt: return "joint-opt";
            case Mode::joint_opt_beta0: return "joint-opt-beta0";
            case Mode::joint_opt_rounds: return "joint-opt-r" + std::to_string(rounds);
            case Mode::closed_form: return "theorem1";
        }
        return "?";
    }
};

struct SweepRow {
    int T = 0;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string status = "error";
    double wall_ms = 0.0;
    std::string series;
    std::string error;  // nonempty on failure
};

/// Named presets shared by the CLI and the sweep engine. "b3-opt" solves the
/// joint optimization and plays the recovered parameters.
inline ParamSchedule make_preset_schedule(const std::string& algo, int T, double L, double D,
                                          double tol = 1e-8) {
    if (algo == "ofw-new") return preset_ofw_new(T, L, D);
    if (algo == "hazan-thm44") return preset_hazan(T, L, D, HazanVariant::thm44);
    if (algo == "hazan-alg27") return preset_hazan(T, L, D, HazanVariant::alg27);
    if (algo == "anytime-ofw-new") return preset_anytime(AnytimeBase::ofw_new, T, L, D);
    if (algo == "anytime-hazan-alg27") return preset_anytime(AnytimeBase::hazan_alg27, T, L, D);
    if (algo == "zero") {
        auto s = ParamSchedule::zeros(T);
        s.hull_safe = true;
        s.meta["preset"] = "zero";
        return s;
    }
    if (algo == "b3-opt" || algo == "hazan-b3-opt") {
        ProblemSetting ps(L, D, T);
        auto sol = solve_joint(build_joint_opt(T, ps), {.tol = tol});
        if (sol.status != SolveStatus::optimal)
            throw std::runtime_error("b3-opt: joint optimization did not reach optimality");
        return recover_params(sol).schedule;
    }
    throw std::invalid_argument("unknown algorithm preset: " + algo);
}

inline SweepRow sweep_one(const SweepSpec& spec, int T) {
    SweepRow row;
    row.T = T;
    row.series = spec.series_name();
    auto t0 = std::chrono::steady_clock::now();
    try {
        ProblemSetting ps(spec.L, spec.D, T);
        switch (spec.mode) {
            case SweepSpec::Mode::tight_bound: {
                auto sched = make_preset_schedule(spec.algo, T, spec.L, spec.D, spec.tol);
                auto res = solve_gram(build_primal(sched, ps), {.tol = spec.tol});
                row.value = res.value;
                row.status = to_string(res.status);
                break;
            }
            case SweepSpec::Mode::joint_opt:
            case SweepSpec::Mode::joint_opt_beta0:
            case SweepSpec::Mode::joint_opt_rounds: {
                JointOptOptions jo;
                jo.beta_zero = spec.mode == SweepSpec::Mode::joint_opt_beta0;
                jo.rounds = spec.mode == SweepSpec::Mode::joint_opt_rounds ? spec.rounds : 1;
                auto sol = solve_joint(build_joint_opt(T, ps, jo), {.tol = spec.tol});
                row.value = sol.value;
                row.status = to_string(sol.status);
                break;
            }
            case SweepSpec::Mode::closed_form: {
                auto b = theorem1_bound(T, spec.L, spec.D);
                if (!b) throw std::invalid_argument("closed form requires T >= 3");
                row.value = *b;
                row.status = "optimal";
                break;
            }
        }
    } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return row;
}

inline int sweep_thread_count() {
    if (const char* env = std::getenv("OFWPEP_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(4u, std::max(1u, hw)));
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.T_min > spec.T_max) throw std::invalid_argument("empty T range");
    if (spec.T_max > spec.T_cap)
        throw std::invalid_argument("T exceeds the configured cap (" +
                                    std::to_string(spec.T_cap) + ")");
    std::vector<int> ts;
    for (int T = spec.T_min; T <= spec.T_max; ++T) ts.push_back(T);
    std::vector<SweepRow> rows(ts.size());
    std::atomic<size_t> next{0};
    int workers = std::min<int>(sweep_thread_count(), static_cast<int>(ts.size()));
    auto work = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= ts.size()) return;
            rows[i] = sweep_one(spec, ts[i]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

inline std::string sweep_csv_header() { return "T,value,status,wall_ms,series"; }

inline std::string to_csv(const SweepRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%s,%.1f,%s", r.T, r.value, r.status.c_str(),
                  r.wall_ms, r.series.c_str());
    return buf;
}

/// Ordinary least squares slope of log(value) against log(T); the rate
/// estimator used by the sweep post-processing.
inline double loglog_slope(const std::vector<SweepRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rows) {
        if (r.status == "error" || !(r.value > 0)) continue;
        double x = std::log(static_cast<double>(r.T));
        double y = std::log(r.value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("loglog_slope: need at least two points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ofwpep
