#pragma once

#include <algorithm>

#include "ofwpep/core.hpp"

namespace ofwpep {

// Feasible sets the simulators understand. Only what the replay and the
// invariant checks need: a linear minimization oracle, membership residuals,
// a diameter, and (ball/box) Euclidean projections for the FTRL companion.
struct Domain {
    enum class Kind { ball, box, simplex, hull };
    Kind kind = Kind::ball;
    int dim = 0;

    Vec center;  // ball
    double radius = 0.0;
    Vec lower, upper;           // box
    std::vector<Vec> vertices;  // hull

    static Domain make_ball(Vec c, double r) {
        if (!(r > 0) || !c.allFinite()) throw std::invalid_argument("ball: bad parameters");
        Domain d;
        d.kind = Kind::ball;
        d.dim = static_cast<int>(c.size());
        d.center = std::move(c);
        d.radius = r;
        return d;
    }
    static Domain make_box(Vec lo, Vec hi) {
        if (lo.size() != hi.size() || !(lo.array() <= hi.array()).all())
            throw std::invalid_argument("box: bad bounds");
        Domain d;
        d.kind = Kind::box;
        d.dim = static_cast<int>(lo.size());
        d.lower = std::move(lo);
        d.upper = std::move(hi);
        return d;
    }
    static Domain make_simplex(int n) {
        if (n < 1) throw std::invalid_argument("simplex: dimension must be >= 1");
        Domain d;
        d.kind = Kind::simplex;
        d.dim = n;
        return d;
    }
    static Domain make_hull(std::vector<Vec> verts) {
        if (verts.empty()) throw std::invalid_argument("hull: vertex list is empty");
        Domain d;
        d.kind = Kind::hull;
        d.dim = static_cast<int>(verts[0].size());
        for (const auto& v : verts)
            if (v.size() != d.dim || !v.allFinite())
                throw std::invalid_argument("hull: inconsistent vertices");
        d.vertices = std::move(verts);
        return d;
    }

    double diameter() const {
        switch (kind) {
            case Kind::ball: return 2.0 * radius;
            case Kind::box: return (upper - lower).norm();
            case Kind::simplex: return dim > 1 ? std::sqrt(2.0) : 0.0;
            case Kind::hull: {
                double d2 = 0.0;
                for (size_t i = 0; i < vertices.size(); ++i)
                    for (size_t j = i + 1; j < vertices.size(); ++j)
                        d2 = std::max(d2, (vertices[i] - vertices[j]).squaredNorm());
                return std::sqrt(d2);
            }
        }
        return 0.0;
    }

    Domain translated(const Vec& c) const {
        Domain d = *this;
        switch (kind) {
            case Kind::ball: d.center += c; break;
            case Kind::box:
                d.lower += c;
                d.upper += c;
                break;
            case Kind::simplex:
                throw std::invalid_argument("simplex domain cannot be translated");
            case Kind::hull:
                for (auto& v : d.vertices) v += c;
                break;
        }
        return d;
    }
};

/// argmin_{v in K} <dir, v>. Ties break deterministically: lowest index for
/// vertex sets, lower bound for flat box coordinates, center for dir = 0 on
/// the ball.
inline Vec lmo(const Domain& K, const Vec& dir) {
    if (!dir.allFinite()) throw std::invalid_argument("lmo: non-finite direction");
    if (dir.size() != K.dim) throw std::invalid_argument("lmo: dimension mismatch");
    switch (K.kind) {
        case Domain::Kind::ball: {
            double n = dir.norm();
            if (n == 0.0) return K.center;
            return K.center - (K.radius / n) * dir;
        }
        case Domain::Kind::box: {
            Vec v(K.dim);
            for (int i = 0; i < K.dim; ++i) v[i] = (dir[i] > 0.0) ? K.lower[i] : ((dir[i] < 0.0) ? K.upper[i] : K.lower[i]);
            return v;
        }
        case Domain::Kind::simplex: {
            int best = 0;
            for (int i = 1; i < K.dim; ++i)
                if (dir[i] < dir[best]) best = i;
            Vec v = Vec::Zero(K.dim);
            v[best] = 1.0;
            return v;
        }
        case Domain::Kind::hull: {
            int best = 0;
            double bv = dir.dot(K.vertices[0]);
            for (size_t i = 1; i < K.vertices.size(); ++i) {
                double val = dir.dot(K.vertices[i]);
                if (val < bv - 0.0) {
                    bv = val;
                    best = static_cast<int>(i);
                }
            }
            return K.vertices[best];
        }
    }
    throw std::logic_error("lmo: unknown domain kind");
}

/// Hull variant with a preferred vertex: returns the preferred vertex
/// whenever its value is within tie_tol of the minimum. Used by witness
/// replay to resolve degenerate oracles toward the recorded atom.
inline Vec lmo_prefer(const Domain& K, const Vec& dir, const Vec& preferred, double tie_tol,
                      bool* used_preferred = nullptr) {
    Vec v = lmo(K, dir);
    double ref = dir.dot(v);
    double scale = 1.0 + std::abs(ref) + dir.norm() * preferred.norm();
    if (dir.dot(preferred) <= ref + tie_tol * scale) {
        if (used_preferred) *used_preferred = true;
        return preferred;
    }
    if (used_preferred) *used_preferred = false;
    return v;
}

/// Euclidean projection; closed form for ball and box only.
inline Vec project(const Domain& K, const Vec& x) {
    switch (K.kind) {
        case Domain::Kind::ball: {
            Vec d = x - K.center;
            double n = d.norm();
            if (n <= K.radius) return x;
            return K.center + (K.radius / n) * d;
        }
        case Domain::Kind::box:
            return x.cwiseMax(K.lower).cwiseMin(K.upper);
        default:
            throw std::invalid_argument("project: closed form only for ball and box");
    }
}

/// Distance from x to conv(vertices) with the witnessing weights, via an
/// active-set method on the simplex-constrained least squares problem.
/// Finite termination; exact up to linear-solve roundoff.
inline double hull_distance(const std::vector<Vec>& verts, const Vec& x, Vec* lambda_out = nullptr) {
    const int nv = static_cast<int>(verts.size());
    const int d = static_cast<int>(x.size());
    Mat V(d, nv);
    for (int j = 0; j < nv; ++j) V.col(j) = verts[j];
    Mat Gm = V.transpose() * V;
    Vec q = V.transpose() * x;

    std::vector<int> P;  // passive (support) set
    Vec lambda = Vec::Zero(nv);
    {
        int best = 0;
        double bd = (verts[0] - x).squaredNorm();
        for (int j = 1; j < nv; ++j) {
            double dd = (verts[j] - x).squaredNorm();
            if (dd < bd) {
                bd = dd;
                best = j;
            }
        }
        P.push_back(best);
        lambda[best] = 1.0;
    }

    auto solve_on_support = [&](const std::vector<int>& S, double& nu) {
        const int k = static_cast<int>(S.size());
        Mat KKT = Mat::Zero(k + 1, k + 1);
        Vec rhs(k + 1);
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) KKT(a, b) = Gm(S[a], S[b]);
            KKT(a, k) = 1.0;
            KKT(k, a) = 1.0;
            rhs[a] = q[S[a]];
        }
        rhs[k] = 1.0;
        Vec sol = KKT.colPivHouseholderQr().solve(rhs);
        nu = sol[k];
        Vec lam = Vec::Zero(nv);
        for (int a = 0; a < k; ++a) lam[S[a]] = sol[a];
        return lam;
    };

    const double tol = 1e-12;
    for (int guard = 0; guard < 100 * (nv + 1); ++guard) {
        double nu = 0.0;
        Vec cand = solve_on_support(P, nu);
        double min_cand = kInf;
        for (int j : P) min_cand = std::min(min_cand, cand[j]);
        if (min_cand < -tol) {
            // step toward cand until the first coordinate hits zero
            double alpha = 1.0;
            int drop = -1;
            for (int j : P)
                if (cand[j] < lambda[j]) {
                    double a = lambda[j] / (lambda[j] - cand[j]);
                    if (a < alpha) {
                        alpha = a;
                        drop = j;
                    }
                }
            lambda = lambda + alpha * (cand - lambda);
            if (drop >= 0) {
                lambda[drop] = 0.0;
                P.erase(std::find(P.begin(), P.end(), drop));
            }
            continue;
        }
        lambda = cand;
        // optimality over the inactive set: g_j + nu >= 0 with g = G lam - q
        Vec g = Gm * lambda - q;
        int enter = -1;
        double worst = -tol * (1.0 + x.squaredNorm());
        for (int j = 0; j < nv; ++j) {
            if (std::find(P.begin(), P.end(), j) != P.end()) continue;
            double slack = g[j] + nu;
            if (slack < worst) {
                worst = slack;
                enter = j;
            }
        }
        if (enter < 0) break;
        P.push_back(enter);
    }
    if (lambda_out) *lambda_out = lambda;
    return (V * lambda - x).norm();
}

/// Distance of x to the domain (0 when feasible up to roundoff).
inline double membership_residual(const Domain& K, const Vec& x) {
    switch (K.kind) {
        case Domain::Kind::ball:
            return std::max(0.0, (x - K.center).norm() - K.radius);
        case Domain::Kind::box: {
            double r = 0.0;
            for (int i = 0; i < K.dim; ++i)
                r = std::max({r, K.lower[i] - x[i], x[i] - K.upper[i]});
            return std::max(0.0, r);
        }
        case Domain::Kind::simplex: {
            double r = std::abs(x.sum() - 1.0);
            for (int i = 0; i < K.dim; ++i) r = std::max(r, -x[i]);
            return std::max(0.0, r);
        }
        case Domain::Kind::hull:
            return hull_distance(K.vertices, x);
    }
    return kInf;
}

}  // namespace ofwpep
