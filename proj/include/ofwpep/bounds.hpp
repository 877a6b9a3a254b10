#pragma once

#include <optional>

#include "ofwpep/simulate.hpp"

namespace ofwpep {

/// Fixed tuning eta = (D/2L)(3/T)^{3/4}, sigma = min(1, sqrt(3/T)).
inline std::pair<double, double> ofw_params(int T, double L, double D) {
    if (T < 1) throw std::invalid_argument("ofw_params: T must be >= 1");
    double eta = (D / (2.0 * L)) * std::pow(3.0 / T, 0.75);
    double sigma = std::min(1.0, std::sqrt(3.0 / T));
    return {eta, sigma};
}

constexpr double kThreeToThreeQuarters = 2.2795070569547775;  // 3^{3/4}

/// 4 * 3^{-3/4} * L * D * T^{3/4}; requires T >= 3, not-applicable below.
inline std::optional<double> theorem1_bound(int T, double L, double D) {
    if (T < 3) return std::nullopt;
    return (L * D) * (4.0 / kThreeToThreeQuarters * std::pow(static_cast<double>(T), 0.75));
}

/// Three-term refined bound evaluated on a fixed-parameter trace (needs
/// v_1..v_T, so the trace must come from the literal algorithm).
inline std::optional<double> theorem1_refined(const ProblemSetting& ps, const Trace& tr,
                                              const Vec& x_star) {
    if (ps.T < 3) return std::nullopt;
    if (tr.T != ps.T || static_cast<int>(tr.v.size()) < ps.T)
        throw std::invalid_argument("theorem1_refined: trace must cover t = 1..T with atoms");
    const double T14 = std::pow(static_cast<double>(ps.T), 0.25);
    const double T34 = std::pow(static_cast<double>(ps.T), 0.75);
    double sg = 0.0, sxv = 0.0;
    for (int t = 1; t <= ps.T; ++t) {
        sg += tr.g_at(t).squaredNorm();
        sxv += (tr.x_at(t) - tr.v_at(t)).squaredNorm();
    }
    double term1 = 2.0 * ps.D / (ps.L * kThreeToThreeQuarters * T14) * sg;
    double term2 = ps.L / (ps.D * kThreeToThreeQuarters * T14) * sxv;
    double term3 = ps.L * T34 / (ps.D * kThreeToThreeQuarters) * (x_star - tr.x_at(1)).squaredNorm();
    return term1 + term2 + term3;
}

/// (eta/2) L^2 T + D^2 / (2 eta); equals L D sqrt(T) at eta = D/(L sqrt(T)).
inline double ftrl_bound(int T, double L, double D, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("ftrl_bound: eta must be positive");
    return 0.5 * eta * L * L * T + D * D / (2.0 * eta);
}

// ---------------------------------------------------------------------------
// Potentials. The coupled traces must share gradients and start at the same
// point; the fixed-parameter runner provides x up to T+1 and the FTRL runner
// y up to T+1, which phi_T needs.

namespace detail {
inline void check_coupled(const Trace& ofw, const Trace& ftrl, int t) {
    if (ofw.T != ftrl.T) throw std::invalid_argument("potential: horizon mismatch");
    if (t < 0 || t > ofw.T) throw std::invalid_argument("potential: t out of range");
    if (static_cast<int>(ofw.x.size()) < ofw.T + 1 || static_cast<int>(ftrl.x.size()) < ftrl.T + 1)
        throw std::invalid_argument("potential: traces must include the post-horizon iterate");
    for (int s = 1; s <= ofw.T; ++s)
        if ((ofw.g_at(s) - ftrl.g_at(s)).norm() > 0.0)
            throw std::invalid_argument("potential: traces saw different gradients");
}
}  // namespace detail

inline double potential_phi(int t, const Trace& ofw, const Trace& ftrl, double eta) {
    detail::check_coupled(ofw, ftrl, t);
    const Vec& ynext = ftrl.x.at(t);      // y_{t+1}
    const Vec& xnext = ofw.x.at(t);       // x_{t+1}
    const Vec& x1 = ofw.x_at(1);
    double acc = 0.0;
    for (int s = 1; s <= t; ++s) acc += ofw.g_at(s).dot(ofw.x_at(s) - ynext);
    acc += (xnext - ynext).squaredNorm() / (6.0 * eta);
    acc -= (ynext - x1).squaredNorm() / (2.0 * eta);
    return acc;
}

inline double potential_psi(int t, const Trace& ftrl, double eta) {
    if (t < 0 || t > ftrl.T) throw std::invalid_argument("potential_psi: t out of range");
    const Vec& ynext = ftrl.x.at(t);
    const Vec& y1 = ftrl.x_at(1);
    double acc = 0.0;
    for (int s = 1; s <= t; ++s) acc += ftrl.g_at(s).dot(ftrl.x_at(s) - ynext);
    acc -= (ynext - y1).squaredNorm() / (2.0 * eta);
    return acc;
}

/// Two-parameter family; coincides with phi at (a, b) = (1/(6 eta), 0).
inline double potential_family(int t, const Trace& ofw, const Trace& ftrl, double eta, double a,
                               double b) {
    detail::check_coupled(ofw, ftrl, t);
    const Vec& ynext = ftrl.x.at(t);
    const Vec& xnext = ofw.x.at(t);
    const Vec& x1 = ofw.x_at(1);
    Vec Gt = Vec::Zero(x1.size());
    for (int s = 1; s <= t; ++s) Gt += ofw.g_at(s);
    double acc = 0.0;
    for (int s = 1; s <= t; ++s) acc += ofw.g_at(s).dot(ofw.x_at(s) - ynext);
    acc += a * (xnext - ynext).squaredNorm();
    acc += b * eta * Gt.dot(xnext - ynext);
    acc += 0.5 * b * ((xnext - x1).squaredNorm() - (ynext - x1).squaredNorm());
    acc -= (ynext - x1).squaredNorm() / (2.0 * eta);
    return acc;
}

// ---------------------------------------------------------------------------
// Sum-of-squares certificate for the one-iteration potential inequality.
//
// Q(lambda) is a quadratic form in (x_t - y_{t+1}, y_t - y_{t+1}); it is a
// sum of squares iff the 2x2 coefficient matrix is PSD, which reduces to a
// sign condition, a quadratic inequality in lambda and its discriminant.
// Coefficients are reported in units of (L/D)^2 so that at the canonical
// parameter choice the discriminant reads 7 (T/3)^{3/2} / 18 regardless of
// L and D.
struct ProofParams {
    double eta = 0.0;
    double sigma = 0.0;
    double a = 0.0;
    double lambda_g = 0.0;
    double lambda = std::numeric_limits<double>::quiet_NaN();  // multiplier, set by the certificate
};

struct SosCertificate {
    bool feasible = false;
    double cond_xx = 0.0;       // 2 a sigma - 1/(4 lambda_g)
    double cond_linear = 0.0;   // linear coefficient of the lambda-quadratic
    double quad_a = 0.0, quad_b = 0.0, quad_c = 0.0;  // A x^2 - B x + C <= 0
    double discriminant = 0.0;  // B^2 - 4AC of the exact quadratic
    double discriminant_relaxed = 0.0;  // constant term relaxed to a^2
    double lambda_lo = 0.0, lambda_hi = 0.0, lambda = 0.0;  // clipped to [0, inf)
    Mat schur;  // 2x2 at the chosen lambda
};

inline SosCertificate sos_certificate(double eta, double sigma, double a, double lambda_g,
                                      double L, double D) {
    if (!(eta > 0.0) || !(lambda_g > 0.0) || !(L > 0.0) || !(D > 0.0))
        throw std::invalid_argument("sos_certificate: eta, lambda_g, L, D must be positive");
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw std::invalid_argument("sos_certificate: sigma must lie in (0, 1]");
    if (a < 0.0) throw std::invalid_argument("sos_certificate: a must be nonnegative");

    const double unit = (D / L) * (D / L);  // removes the (L/D)^2 carried by the coefficients
    const double k = 1.0 / (4.0 * lambda_g);
    SosCertificate cert;
    cert.cond_xx = 2.0 * a * sigma - k;
    const double A = (a * sigma / (2.0 * lambda_g)) * unit;
    const double B = ((2.0 * a * sigma - k) / eta - a / (2.0 * lambda_g)) * unit;
    const double C =
        ((1.0 - 2.0 * sigma) * a * a + a * k - (2.0 * a * sigma - k) / (2.0 * eta)) * unit;
    cert.cond_linear = B;
    cert.quad_a = A;
    cert.quad_b = B;
    cert.quad_c = C;
    cert.discriminant = B * B - 4.0 * A * C;
    cert.discriminant_relaxed = B * B - 4.0 * A * (a * a * unit);

    const double tol = 1e-12 * (1.0 + std::abs(B));
    bool ok = cert.cond_xx >= -1e-12 * (1.0 + 2.0 * a * sigma + k) && B >= -tol &&
              cert.discriminant >= -tol * (1.0 + std::abs(cert.discriminant));
    if (ok && A > 0.0) {
        double sq = std::sqrt(std::max(0.0, cert.discriminant));
        double lo = (B - sq) / (2.0 * A);
        double hi = (B + sq) / (2.0 * A);
        if (hi < 0.0) {
            ok = false;
        } else {
            cert.lambda_lo = std::max(0.0, lo);
            cert.lambda_hi = hi;
            cert.lambda = 0.5 * (cert.lambda_lo + cert.lambda_hi);
        }
    } else if (ok) {
        // a = 0 never reaches here (cond_xx < 0); degenerate A handled as infeasible
        ok = false;
    }
    cert.feasible = ok;

    cert.schur = Mat::Zero(2, 2);
    const double lam = cert.lambda;
    cert.schur(0, 0) = cert.cond_xx * unit;
    cert.schur(0, 1) = cert.schur(1, 0) = -(a + lam / (4.0 * lambda_g)) * unit;
    cert.schur(1, 1) = ((1.0 + 2.0 * lam) / (2.0 * eta) + a - lam * lam / (4.0 * lambda_g)) * unit;
    return cert;
}

/// eta = D 3^{3/4} / (2 L T^{3/4}), sigma = sqrt(3/T) (clamped at 1, which
/// only binds at T = 3 where the two coincide), a = 1/(6 eta),
/// lambda_g = 2 a sigma^2 D^2/L^2 = D^2/(eta T L^2).
inline ProofParams optimal_proof_params(int T, double L, double D) {
    if (T < 3) throw std::invalid_argument("optimal_proof_params: requires T >= 3");
    ProofParams p;
    p.eta = D * kThreeToThreeQuarters / (2.0 * L * std::pow(static_cast<double>(T), 0.75));
    p.sigma = std::min(1.0, std::sqrt(3.0 / T));
    p.a = 1.0 / (6.0 * p.eta);
    p.lambda_g = 2.0 * p.a * p.sigma * p.sigma * D * D / (L * L);
    return p;
}

/// The proof's assembled bound (1/2eta) D^2 + lambda_g L^2 T + a sigma^2 D^2 T.
inline double regret_upper_from_proof(int T, double L, double D, const ProofParams& p) {
    return D * D / (2.0 * p.eta) + p.lambda_g * L * L * T + p.a * p.sigma * p.sigma * D * D * T;
}

}  // namespace ofwpep
