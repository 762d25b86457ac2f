#pragma once

/// The Jones family: deterministic enumeration of rational cube centers,
/// dyadically shrinking cubes B_k, smooth test bumps E_k supported on them,
/// the functionals F_k(f) = integral of E_k f, the weighted SD^p norms and
/// the SD^2 inner product with certified truncation, the duality map, and
/// the toy Kuelbs embedding.
///
/// Conventions (frozen so every number is reproducible):
///  - 1-D rationals: 0, 1, -1, 1/2, -1/2, 2, -2, 1/3, ... (Calkin-Wilf
///    interleaved with sign, zero first);
///  - n-D centers by iterated Cantor pairing of 1-D indices;
///  - the flat index k enumerates (edge level, center index) through the
///    same Cantor pairing, so cube k=1 is the unit-edge cube at the origin.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdspace/errors.hpp"
#include "sdspace/function.hpp"
#include "sdspace/gauge.hpp"
#include "sdspace/quadrature.hpp"
#include "sdspace/report.hpp"

namespace sdspace {

// ---------------------------------------------------------------------------
// Enumeration

/// Cantor pairing, 1-based on both sides.
inline std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a - 1, y = b - 1;
    return (x + y) * (x + y + 1) / 2 + y + 1;
}

inline std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t k) {
    std::uint64_t z = k - 1;
    std::uint64_t w = static_cast<std::uint64_t>((std::sqrt(8.0 * (double)z + 1.0) - 1.0) / 2.0);
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    while (w * (w + 1) / 2 > z) --w;
    std::uint64_t y = z - w * (w + 1) / 2;
    std::uint64_t x = w - y;
    return {x + 1, y + 1};
}

/// j-th positive rational in Calkin-Wilf (breadth-first) order:
/// 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...
inline double calkin_wilf(std::uint64_t j) {
    int bits = 63;
    while (bits > 0 && !((j >> bits) & 1)) --bits;
    std::uint64_t num = 1, den = 1;
    for (int i = bits - 1; i >= 0; --i) {
        if ((j >> i) & 1)
            num += den;
        else
            den += num;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

/// i-th rational: 0, 1, -1, 1/2, -1/2, 2, -2, ...
inline double rational_1d(std::uint64_t i) {
    if (i == 0) throw DomainError("rational_1d: index is 1-based");
    if (i == 1) return 0.0;
    if (i % 2 == 0) return calkin_wilf(i / 2);
    return -calkin_wilf((i - 1) / 2);
}

/// i-th point of Q^n via iterated Cantor unpairing of the coordinate indices.
inline std::vector<double> enumerate_rationals(int n, std::uint64_t i) {
    if (n < 1) throw DomainError("enumerate_rationals: order must be positive");
    std::vector<double> point;
    point.reserve(static_cast<std::size_t>(n));
    std::uint64_t rest = i;
    for (int d = 0; d < n - 1; ++d) {
        auto [a, b] = cantor_unpair(rest);
        point.push_back(rational_1d(a));
        rest = b;
    }
    point.push_back(rational_1d(rest));
    return point;
}

// ---------------------------------------------------------------------------
// Cubes and test functions

struct CubeSpec {
    std::uint64_t level = 1;  // edge level: edge = 2^{-(level-1)} / sqrt(n)
    std::uint64_t index = 1;  // center index in the rational enumeration
    std::vector<double> center;
    double edge = 0.0;
};

/// t_k = 2^{-k}; the weights sum to 1 (partial sums 1 - 2^{-K}).
inline double weight(int k) { return std::ldexp(1.0, -k); }

class CubeFamily {
  public:
    explicit CubeFamily(int order) : order_(order) {
        if (order < 1) throw DomainError("CubeFamily: order must be positive");
    }

    int order() const { return order_; }

    double edge_at_level(std::uint64_t level) const {
        return std::ldexp(1.0, -static_cast<int>(level - 1)) / std::sqrt((double)order_);
    }

    CubeSpec cube(std::uint64_t level, std::uint64_t index) const {
        CubeSpec c;
        c.level = level;
        c.index = index;
        c.center = enumerate_rationals(order_, index);
        c.edge = edge_at_level(level);
        return c;
    }

    CubeSpec cube_flat(int k) const {
        if (k < 1) throw DomainError("cube_flat: k is 1-based");
        auto [level, index] = cantor_unpair(static_cast<std::uint64_t>(k));
        return cube(level, index);
    }

    Box cube_box(const CubeSpec& c) const {
        Box b;
        for (double x : c.center) b.emplace_back(x - 0.5 * c.edge, x + 0.5 * c.edge);
        return b;
    }

  private:
    int order_;
};

class TestFunctionFamily {
  public:
    explicit TestFunctionFamily(int order) : cubes_(order) {}

    int order() const { return cubes_.order(); }
    const CubeFamily& cubes() const { return cubes_; }

    /// E_k: tensor bump supported on the closed cube B_k, peak value 1 at
    /// the center, C^inf on the open cube.
    TameFunction test_fn(int k) const {
        CubeSpec c = cubes_.cube_flat(k);
        ExprPtr e = exprs::bump(exprs::var(1), c.center[0], c.edge);
        for (int d = 2; d <= order(); ++d)
            e = exprs::node(ExprKind::Mul, std::move(e),
                            exprs::bump(exprs::var(d), c.center[(std::size_t)(d - 1)], c.edge));
        TameFunction f(order(), std::move(e), BoxSet(order(), {cubes_.cube_box(c)}),
                       Smoothness::SmoothCompact);
        f.set_sup_norm(1.0);
        f.set_name("E_" + std::to_string(k));
        return f;
    }

    /// F_k(f) = integral of E_k f over B_k. 1-D integrands with declared
    /// singular points inside the cube go through the HK integrator.
    double functional(int k, const TameFunction& f, double quad_tol) const {
        if (f.order() != order())
            throw OrderMismatchError("functional: function order != family order (promote first)");
        CubeSpec c = cubes_.cube_flat(k);
        BoxSet region = box_intersect(BoxSet(order(), {cubes_.cube_box(c)}), f.support());
        if (region.empty()) return 0.0;
        TameFunction ek = test_fn(k);

        if (order() == 1 && !f.singular_points().empty()) {
            std::vector<double> sing;
            for (const auto& s : f.singular_points()) sing.push_back(s[0]);
            double total = 0.0;
            for (const Box& b : region.boxes()) {
                bool has_sing = false;
                for (double s : sing) has_sing = has_sing || (b[0].lo <= s && s <= b[0].hi);
                auto prod = [&](double x) {
                    double p[1] = {x};
                    return ek.eval_or_zero(p) * f.eval_or_zero(p);
                };
                if (has_sing) {
                    total += hk_integrate(prod, b[0].lo, b[0].hi, sing, quad_tol).value;
                } else {
                    total += adaptive_quad(prod, b[0].lo, b[0].hi, {quad_tol}).value;
                }
            }
            return total;
        }

        double total = 0.0;
        QuadOptions opt;
        opt.tol = quad_tol;
        for (const Box& b : region.boxes()) {
            total += quad_box(
                         [&](std::span<const double> x) {
                             return ek.eval_or_zero(x) * f.eval_or_zero(x);
                         },
                         b, opt)
                         .value;
        }
        return total;
    }

  private:
    CubeFamily cubes_;
};

// ---------------------------------------------------------------------------
// Functional vectors and norms

struct SDConfig {
    double p = 2.0;  // kInf marks p = infinity
    int m = 0;       // derivative order included in the norm
    int K = 30;      // truncation depth
    double quad_tol = 1e-9;
};

/// Truncated sequence {F_k(f)} with an optional certified tail bound: when
/// |F_k(f)| <= B for all k, the discarded sum_{k>K} t_k |F_k|^p is at most
/// B^p 2^{-K}.
struct FunctionalVector {
    std::vector<double> values;  // F_1 .. F_K
    double p = 2.0;
    std::optional<double> bound;       // B
    std::optional<double> tail_bound;  // B^p 2^{-K}

    int depth() const { return static_cast<int>(values.size()); }
};

inline double norm_from_vector(const std::vector<double>& values, double p) {
    if (p == kInf) {
        double s = 0.0;
        for (double v : values) s = std::max(s, std::fabs(v));
        return s;
    }
    if (p < 1.0) throw DomainError("SD norm requires p >= 1");
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
        s += weight((int)k + 1) * std::pow(std::fabs(values[k]), p);
    return std::pow(s, 1.0 / p);
}

inline FunctionalVector functional_vector(const TestFunctionFamily& fam, const TameFunction& f,
                                          const SDConfig& cfg,
                                          std::optional<double> sup_bound = std::nullopt) {
    FunctionalVector out;
    out.p = cfg.p;
    out.values.reserve((std::size_t)cfg.K);
    for (int k = 1; k <= cfg.K; ++k) out.values.push_back(fam.functional(k, f, cfg.quad_tol));
    std::optional<double> s = sup_bound ? sup_bound : f.sup_norm();
    if (s) {
        int n = fam.order();
        double b = *s * std::pow((double)n, -0.5 * n);  // sup times vol(B at level 1)
        out.bound = b;
        if (cfg.p != kInf) out.tail_bound = std::pow(b, cfg.p) * std::ldexp(1.0, -cfg.K);
    }
    return out;
}

/// All multi-indices over dims 1..n with |beta| <= m (including beta = 0).
inline std::vector<MultiIndex> multi_indices_up_to(int n, int m) {
    std::vector<MultiIndex> out;
    MultiIndex cur;
    std::function<void(int, int)> rec = [&](int dim, int budget) {
        if (dim > n) {
            out.push_back(cur);
            return;
        }
        for (int o = 0; o <= budget; ++o) {
            cur.set(dim, o);
            rec(dim + 1, budget - o);
        }
        cur.set(dim, 0);
    };
    rec(1, m);
    return out;
}

/// <f,g> = sum t_k F_k(f) F_k(g) over k <= K (real catalog; conjugation
/// is trivial).
inline double sd_inner(const TestFunctionFamily& fam, const TameFunction& f, const TameFunction& g,
                       const SDConfig& cfg) {
    double s = 0.0;
    for (int k = 1; k <= cfg.K; ++k)
        s += weight(k) * fam.functional(k, f, cfg.quad_tol) * fam.functional(k, g, cfg.quad_tol);
    return s;
}

/// ||f||_{SD^p}: for p < inf the weighted p-sum over k and over all |beta|
/// <= m; for p = inf the sum over beta of sup_k |F_k(D^beta f)|.
inline double sd_norm(const TestFunctionFamily& fam, const TameFunction& f, const SDConfig& cfg) {
    double acc = 0.0;
    for (const MultiIndex& beta : multi_indices_up_to(f.order(), cfg.m)) {
        TameFunction dbf = beta.total() == 0 ? f : derivative(f, beta);
        FunctionalVector v = functional_vector(fam, dbf, cfg);
        if (cfg.p == kInf) {
            acc += norm_from_vector(v.values, kInf);
        } else {
            for (std::size_t k = 0; k < v.values.size(); ++k)
                acc += weight((int)k + 1) * std::pow(std::fabs(v.values[k]), cfg.p);
        }
    }
    return cfg.p == kInf ? acc : std::pow(acc, 1.0 / cfg.p);
}

// ---------------------------------------------------------------------------
// Duality map

/// L_g(f) = sum t_k l_k^p(g) F_k(g) F_k(f) with
/// l_k^p(g) = ||g||^{2-p} |F_k(g)|^{p-2}; satisfies L_g(g) = ||g||^2.
inline double duality_apply(const std::vector<double>& fg, const std::vector<double>& ff,
                            double p) {
    if (!(p > 1.0) || p == kInf) throw DomainError("duality map requires 1 < p < inf");
    double norm_g = norm_from_vector(fg, p);
    if (norm_g == 0.0) throw DomainError("duality map undefined for g = 0");
    double s = 0.0;
    for (std::size_t k = 0; k < fg.size() && k < ff.size(); ++k) {
        if (fg[k] == 0.0) continue;
        double lk = std::pow(norm_g, 2.0 - p) * std::pow(std::fabs(fg[k]), p - 2.0);
        s += weight((int)k + 1) * lk * fg[k] * ff[k];
    }
    return s;
}

inline double duality_map(const TestFunctionFamily& fam, const TameFunction& g,
                          const TameFunction& f, const SDConfig& cfg) {
    FunctionalVector vg = functional_vector(fam, g, cfg);
    FunctionalVector vf = functional_vector(fam, f, cfg);
    return duality_apply(vg.values, vf.values, cfg.p);
}

// ---------------------------------------------------------------------------
// Checks

/// Continuous-embedding check: ||f||_{SD^2} <= ||f||_q (constant 1 from
/// |E_k| <= 1, vol(B_k) <= 1, sum t_k = 1).
inline CheckResult embedding_check(const TestFunctionFamily& fam, const TameFunction& f, double q,
                                   const SDConfig& cfg) {
    SDConfig c2 = cfg;
    c2.p = 2.0;
    c2.m = 0;
    double lhs = sd_norm(fam, f, c2);
    double rhs;
    if (q == kInf) {
        if (!f.sup_norm()) throw DomainError("embedding_check: no declared sup norm");
        rhs = *f.sup_norm();
    } else {
        // L^q norm over the support.
        double acc = 0.0;
        if (f.order() == 1 && !f.singular_points().empty()) {
            std::vector<double> sing;
            for (const auto& s : f.singular_points()) sing.push_back(s[0]);
            for (const Box& b : f.support().boxes()) {
                auto absq = [&](double x) {
                    double pt[1] = {x};
                    return std::pow(std::fabs(f.eval_or_zero(pt)), q);
                };
                acc += hk_integrate(absq, b[0].lo, b[0].hi, sing, cfg.quad_tol).value;
            }
        } else {
            QuadOptions opt{cfg.quad_tol, 100'000'000};
            for (const Box& b : f.support().boxes())
                acc += quad_box(
                           [&](std::span<const double> x) {
                               return std::pow(std::fabs(f.eval_or_zero(x)), q);
                           },
                           b, opt)
                           .value;
        }
        rhs = std::pow(acc, 1.0 / q);
    }
    std::string qs = q == kInf ? "inf" : std::to_string((int)q);
    return make_check("embedding", "f=" + f.name() + ",q=" + qs, lhs, rhs, rhs - lhs,
                      lhs <= rhs + 1e-6);
}

/// Clarkson inequality on truncated functional vectors (p >= 2):
/// ||(f+g)/2||^p + ||(f-g)/2||^p <= (||f||^p + ||g||^p) / 2.
inline CheckResult clarkson_check(const std::vector<double>& vf, const std::vector<double>& vg,
                                  double p, const std::string& inputs) {
    if (!(p >= 2.0)) throw DomainError("clarkson_check requires p >= 2");
    std::vector<double> mid(vf.size()), dif(vf.size());
    for (std::size_t k = 0; k < vf.size(); ++k) {
        mid[k] = 0.5 * (vf[k] + vg[k]);
        dif[k] = 0.5 * (vf[k] - vg[k]);
    }
    double lhs = std::pow(norm_from_vector(mid, p), p) + std::pow(norm_from_vector(dif, p), p);
    double rhs = 0.5 * (std::pow(norm_from_vector(vf, p), p) + std::pow(norm_from_vector(vg, p), p));
    return make_check("clarkson", inputs, lhs, rhs, rhs - lhs, lhs <= rhs + 1e-10);
}

/// [sum t_k |F_k(f)|^p]^{1/p} <= ||f||_{SD^inf} on truncated families.
inline CheckResult sd_infty_bound(const std::vector<double>& values, double p,
                                  const std::string& inputs) {
    double lhs = norm_from_vector(values, p);
    double rhs = norm_from_vector(values, kInf);
    return make_check("sd_infty_bound", inputs, lhs, rhs, rhs - lhs, lhs <= rhs + 1e-10);
}

/// Integration-by-parts pair for Eq-style weak derivatives:
/// lhs = int E_k D^alpha f, rhs = (-1)^{|alpha|} int D^alpha E_k f.
/// Requires f smooth on a neighborhood of B_k (or support disjoint from it).
inline std::pair<double, double> derivative_pairing(const TestFunctionFamily& fam,
                                                    const TameFunction& f, int k,
                                                    const MultiIndex& alpha,
                                                    double quad_tol = 1e-9) {
    if (alpha.total() > 2) throw DomainError("derivative_pairing: |alpha| <= 2 required");
    CubeSpec c = fam.cubes().cube_flat(k);
    Box cb = fam.cubes().cube_box(c);
    BoxSet cube_set(fam.order(), {cb});
    BoxSet region = box_intersect(cube_set, f.support());
    if (region.empty()) return {0.0, 0.0};
    bool inside = std::fabs(lambda_inf(region) - lambda_inf(cube_set)) <= 1e-12;
    bool globally_smooth = f.smoothness() == Smoothness::SmoothCompact;
    if (!inside && !globally_smooth)
        throw DomainError("derivative_pairing: f not smooth on a neighborhood of the cube");
    if (f.smoothness() != Smoothness::Smooth && f.smoothness() != Smoothness::SmoothCompact)
        throw DomainError("derivative_pairing: f must be smooth");

    TameFunction ek = fam.test_fn(k);
    TameFunction df = derivative(f, alpha);
    TameFunction dek = derivative(ek, alpha);
    double sign = alpha.total() % 2 == 0 ? 1.0 : -1.0;

    QuadOptions opt{quad_tol, 100'000'000};
    auto raw_f = [&](std::span<const double> x) {
        // The smooth extension of f: precondition puts the cube inside the
        // support (or f is globally smooth), so the support cut is inert.
        return f.expr() ? eval_expr(*f.expr(), x) : f.eval_or_zero(x);
    };
    auto raw_df = [&](std::span<const double> x) {
        return df.expr() ? eval_expr(*df.expr(), x) : df.eval_or_zero(x);
    };
    double lhs = quad_box([&](std::span<const double> x) { return ek.eval_or_zero(x) * raw_df(x); },
                          cb, opt)
                     .value;
    double rhs = sign * quad_box([&](std::span<const double> x) {
                            return dek.eval_or_zero(x) * raw_f(x);
                        },
                        cb, opt)
                     .value;
    return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Kuelbs embedding (toy sequence space: B = bounded sequences under the sup
// norm, coordinate duals e_k^*(u) = u_k)

inline double kuelbs_inner(const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    std::size_t n = std::min(u.size(), v.size());
    for (std::size_t k = 0; k < n; ++k) s += weight((int)k + 1) * u[k] * v[k];
    return s;
}

inline double kuelbs_h_norm(const std::vector<double>& u) {
    return std::sqrt(kuelbs_inner(u, u));
}

inline double kuelbs_b_norm(const std::vector<double>& u) {
    double s = 0.0;
    for (double x : u) s = std::max(s, std::fabs(x));
    return s;
}

}  // namespace sdspace
