#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ofwpep {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Problem data shared across modules: gradient-norm bound L, domain
/// diameter D, horizon T.
struct ProblemSetting {
    double L = 1.0;
    double D = 1.0;
    int T = 1;

    ProblemSetting() = default;
    ProblemSetting(double L_, double D_, int T_) : L(L_), D(D_), T(T_) {
        if (!(L > 0.0) || !(D > 0.0))
            throw std::invalid_argument("ProblemSetting: L and D must be positive");
        if (T < 1) throw std::invalid_argument("ProblemSetting: T must be >= 1");
    }
};

inline bool is_finite(double x) { return std::isfinite(x); }

inline bool all_finite(const Vec& v) { return v.allFinite(); }

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Deterministic uniform/normal deviates. std::*_distribution is not
/// bit-stable across standard libraries, so we roll our own on top of
/// mt19937_64.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform() {  // [0, 1)
        return (state_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Vec normal_vec(int d) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = normal();
        return v;
    }

    /// Uniform on the sphere of given radius.
    Vec sphere(int d, double radius) {
        Vec v = normal_vec(d);
        double n = v.norm();
        if (n < 1e-300) { v.setZero(); v[0] = 1.0; n = 1.0; }
        return (radius / n) * v;
    }

    /// Uniform in the ball of given radius.
    Vec ball(int d, double radius) {
        Vec v = sphere(d, radius);
        return v * std::pow(uniform(), 1.0 / d);
    }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

  private:
    std::mt19937_64 state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ofwpep
