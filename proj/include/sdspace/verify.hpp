#pragma once

/// Verification suites over the builtin catalog. Every suite appends
/// CheckResult entries to a report; randomized suites draw from a
/// deterministic generator so the same seed always yields the same report.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sdspace/catalog.hpp"
#include "sdspace/jones.hpp"
#include "sdspace/report.hpp"
#include "sdspace/variation.hpp"

namespace sdspace {

/// Deterministic uniforms: mt19937_64 output mapped to [0,1) directly, so
/// the stream is identical on every platform (no distribution objects).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int below(int n) { return static_cast<int>(uniform() * n) % n; }

  private:
    std::mt19937_64 eng_;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// F-vectors of the inexpensive 1-D catalog entries, the raw material for the
// vector-level suites (norm checks are linear in F, so random scalings of
// these are themselves functional vectors of catalog multiples).
inline std::map<std::string, std::vector<double>> base_vectors(const Catalog& cat,
                                                               const SDConfig& cfg) {
    static const char* kCheap[] = {"const_one", "linear", "quadratic", "cubic", "sine",
                                   "cosine",    "sin_hi", "gaussian",  "bump1", "box_half"};
    std::map<std::string, std::vector<double>> out;
    TestFunctionFamily fam(1);
    for (const char* name : kCheap) {
        const CatalogEntry& e = cat.at(name);
        out[name] = functional_vector(fam, e.fn, cfg).values;
    }
    return out;
}

inline std::vector<double> random_vector(const std::map<std::string, std::vector<double>>& base,
                                         Rng& rng, std::string& label) {
    auto it = base.begin();
    std::advance(it, rng.below((int)base.size()));
    double scale = rng.uniform(-2.0, 2.0);
    if (scale == 0.0) scale = 1.0;
    label = it->first + "*" + fmt(scale);
    std::vector<double> v = it->second;
    for (double& x : v) x *= scale;
    return v;
}

inline Box random_box(Rng& rng, int n) {
    Box b;
    for (int d = 0; d < n; ++d) {
        double a = rng.uniform(-2.0, 2.0), c = rng.uniform(-2.0, 2.0);
        b.emplace_back(std::min(a, c), std::max(a, c));
    }
    return b;
}

inline BoxSet random_boxset(Rng& rng, int n) {
    int count = 1 + rng.below(3);
    std::vector<Box> boxes;
    for (int i = 0; i < count; ++i) boxes.push_back(random_box(rng, n));
    return BoxSet(n, std::move(boxes));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suites

inline void suite_measure(Report& rep, Rng& rng) {
    int additivity_bad = 0, translate_bad = 0, promote_bad = 0, demorgan_bad = 0;
    const int rounds = 1000;
    for (int i = 0; i < rounds; ++i) {
        int n = 1 + rng.below(3);
        BoxSet a = detail::random_boxset(rng, n);
        BoxSet b = detail::random_boxset(rng, n);

        // additivity on a disjoint pair: shift b past the hull of a
        Box hull = a.bounding_box();
        std::vector<double> shift((std::size_t)n, 0.0);
        shift[0] = hull[0].hi - b.bounding_box()[0].lo + 1.0;
        BoxSet b_far = translate(b, shift);
        double lhs = lambda_inf(box_union(a, b_far));
        if (std::fabs(lhs - (lambda_inf(a) + lambda_inf(b_far))) > 1e-9) ++additivity_bad;

        std::vector<double> v((std::size_t)n);
        for (double& x : v) x = rng.uniform(-3.0, 3.0);
        if (std::fabs(lambda_inf(translate(a, v)) - lambda_inf(a)) > 1e-9) ++translate_bad;

        int m = n + rng.below(4);
        if (std::fabs(lambda_inf(promote_order(a, m)) - lambda_inf(a)) > 1e-12) ++promote_bad;

        BoxSet lhs_set = box_complement(box_union(a, b));
        BoxSet rhs_set = box_intersect(box_complement(a), box_complement(b));
        if (!(lhs_set == rhs_set)) ++demorgan_bad;
    }
    rep.entries.push_back(make_check("measure_additivity", "1000 random configs",
                                     additivity_bad, 0, -additivity_bad, additivity_bad == 0));
    rep.entries.push_back(make_check("measure_translate", "1000 random configs", translate_bad, 0,
                                     -translate_bad, translate_bad == 0));
    rep.entries.push_back(make_check("measure_promote", "1000 random configs", promote_bad, 0,
                                     -promote_bad, promote_bad == 0));
    rep.entries.push_back(make_check("measure_demorgan", "1000 random configs", demorgan_bad, 0,
                                     -demorgan_bad, demorgan_bad == 0));

    // Integral invariance under order promotion.
    Catalog cat = builtin_catalog();
    const TameFunction& bump = cat.at("bump1").fn;
    double base = quad_nd(bump, 1e-10).value;
    for (int m = 2; m <= 5; ++m) {
        double promoted = quad_nd(promote(bump, m), 1e-10).value;
        rep.entries.push_back(make_check("measure_promote_integral", "f=bump1,m=" + std::to_string(m),
                                         promoted, base, std::fabs(promoted - base),
                                         std::fabs(promoted - base) <= 1e-8));
    }
}

inline void suite_embedding(Report& rep, const Catalog& cat, const SDConfig& cfg) {
    SDConfig c = cfg;
    c.quad_tol = std::max(cfg.quad_tol, 1e-6);  // singular entries need shells
    for (const std::string& name : cat.names()) {
        const CatalogEntry& e = cat.at(name);
        TestFunctionFamily fam(e.fn.order());
        for (double q : e.finite_lq)
            if (q == 1.0 || q == 2.0) rep.entries.push_back(embedding_check(fam, e.fn, q, c));
        if (e.finite_sup && e.fn.sup_norm())
            rep.entries.push_back(embedding_check(fam, e.fn, kInf, c));
    }
}

inline void suite_clarkson(Report& rep, const Catalog& cat, const SDConfig& cfg, Rng& rng) {
    auto base = detail::base_vectors(cat, cfg);
    for (double p : {2.0, 3.0, 4.0}) {
        for (int i = 0; i < 50; ++i) {
            std::string la, lb;
            auto vf = detail::random_vector(base, rng, la);
            auto vg = detail::random_vector(base, rng, lb);
            std::string inputs = "p=" + detail::fmt(p) + ",f=" + la + ",g=" + lb + ",#" +
                                 std::to_string(i);
            rep.entries.push_back(clarkson_check(vf, vg, p, inputs));
            if (p == 2.0) {
                // parallelogram law: equality at p = 2
                std::vector<double> mid(vf.size()), dif(vf.size());
                for (std::size_t k = 0; k < vf.size(); ++k) {
                    mid[k] = 0.5 * (vf[k] + vg[k]);
                    dif[k] = 0.5 * (vf[k] - vg[k]);
                }
                double lhs = std::pow(norm_from_vector(mid, 2), 2) +
                             std::pow(norm_from_vector(dif, 2), 2);
                double rhs = 0.5 * (std::pow(norm_from_vector(vf, 2), 2) +
                                    std::pow(norm_from_vector(vg, 2), 2));
                rep.entries.push_back(make_check("parallelogram", inputs, lhs, rhs,
                                                 std::fabs(lhs - rhs),
                                                 std::fabs(lhs - rhs) <= 1e-10));
            }
        }
    }
}

inline void suite_duality(Report& rep, const Catalog& cat, const SDConfig& cfg, Rng& rng) {
    auto base = detail::base_vectors(cat, cfg);
    for (double p : {1.5, 2.0, 3.0}) {
        for (int i = 0; i < 20; ++i) {
            std::string lg;
            auto vg = detail::random_vector(base, rng, lg);
            double lhs = duality_apply(vg, vg, p);
            double n = norm_from_vector(vg, p);
            double rhs = n * n;
            double rel = std::fabs(lhs - rhs) / std::max(rhs, 1e-300);
            rep.entries.push_back(make_check(
                "duality", "p=" + detail::fmt(p) + ",g=" + lg + ",#" + std::to_string(i), lhs, rhs,
                rel, rel <= 1e-8));
        }
    }
}

/// First `count` cubes whose closed cube sits inside the support of f.
inline std::vector<int> cubes_inside(const TestFunctionFamily& fam, const TameFunction& f,
                                     int count, int scan_limit = 400) {
    std::vector<int> out;
    for (int k = 1; k <= scan_limit && (int)out.size() < count; ++k) {
        CubeSpec c = fam.cubes().cube_flat(k);
        BoxSet cube(fam.order(), {fam.cubes().cube_box(c)});
        BoxSet inter = box_intersect(cube, f.support());
        if (std::fabs(lambda_inf(inter) - lambda_inf(cube)) <= 1e-12) out.push_back(k);
    }
    return out;
}

inline void suite_pairing(Report& rep, const Catalog& cat, const SDConfig& cfg) {
    static const char* kSmooth[] = {"quadratic", "cubic", "gaussian", "sine"};
    for (const char* name : kSmooth) {
        const CatalogEntry& e = cat.at(name);
        TestFunctionFamily fam(e.fn.order());
        std::vector<int> ks = cubes_inside(fam, e.fn, 10);
        for (int k : ks) {
            for (int ord = 1; ord <= 2; ++ord) {
                MultiIndex alpha;
                alpha.set(1, ord);
                auto [lhs, rhs] = derivative_pairing(fam, e.fn, k, alpha, cfg.quad_tol);
                double gap = std::fabs(lhs - rhs);
                rep.entries.push_back(make_check("pairing",
                                                 std::string("f=") + name + ",k=" +
                                                     std::to_string(k) + ",alpha=" +
                                                     std::to_string(ord),
                                                 lhs, rhs, gap, gap <= 1e-7));
            }
        }
    }
    // one 2-D case: tensor bump against itself
    {
        const CatalogEntry& e = cat.at("bump2d");
        TestFunctionFamily fam(2);
        std::vector<int> ks = cubes_inside(fam, e.fn, 3);
        for (int k : ks) {
            MultiIndex alpha;
            alpha.set(1, 1);
            alpha.set(2, 1);
            auto [lhs, rhs] = derivative_pairing(fam, e.fn, k, alpha, cfg.quad_tol);
            double gap = std::fabs(lhs - rhs);
            rep.entries.push_back(make_check("pairing",
                                             "f=bump2d,k=" + std::to_string(k) + ",alpha=1_1",
                                             lhs, rhs, gap, gap <= 1e-7));
        }
    }
}

inline void suite_hk_sd(Report& rep, const Catalog& cat, const SDConfig& cfg) {
    SDConfig c = cfg;
    c.quad_tol = 1e-4;  // the bound has orders of magnitude of slack
    TestFunctionFamily fam(1);
    for (const char* name : {"const_one", "sine", "bump1", "invsqrt", "osc_anti", "hk_osc"}) {
        rep.entries.push_back(hk_in_sd_check(fam, cat.at(name).fn, c));
    }
}

inline void suite_kuelbs(Report& rep, const SDConfig& cfg, Rng& rng) {
    int norm_bad = 0, cs_bad = 0;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> u((std::size_t)cfg.K), v((std::size_t)cfg.K);
        for (double& x : u) x = rng.uniform(-5.0, 5.0);
        for (double& x : v) x = rng.uniform(-5.0, 5.0);
        if (kuelbs_h_norm(u) > kuelbs_b_norm(u) + 1e-12) ++norm_bad;
        if (std::fabs(kuelbs_inner(u, v)) > kuelbs_h_norm(u) * kuelbs_h_norm(v) + 1e-12) ++cs_bad;
    }
    rep.entries.push_back(make_check("kuelbs_h_le_b", "100 random vectors", norm_bad, 0, -norm_bad,
                                     norm_bad == 0));
    rep.entries.push_back(make_check("kuelbs_cauchy_schwarz", "100 random vectors", cs_bad, 0,
                                     -cs_bad, cs_bad == 0));
}

/// f_j = sin(j x) on [0, pi]: the L^2 norms stay at sqrt(pi/2) while the
/// SD^2 norms decay (strong convergence to 0 of a sequence that is not
/// norm-null in L^2).
struct WeakStrongResult {
    std::vector<int> js;
    std::vector<double> sd_norms;
    std::vector<double> l2_norms;
};

inline TameFunction sin_section(int j) {
    TameFunction f(1, parse_expr("sin(" + std::to_string(j) + "*x1)", 1),
                   BoxSet(1, {{{0.0, std::numbers::pi}}}), Smoothness::Smooth);
    f.set_sup_norm(1.0);
    f.set_name("sin" + std::to_string(j));
    return f;
}

inline WeakStrongResult weak_strong_demo(int j_max, const SDConfig& cfg) {
    WeakStrongResult r;
    TestFunctionFamily fam(1);
    for (int j = 1; j <= j_max; j *= 2) {
        TameFunction f = sin_section(j);
        r.js.push_back(j);
        r.sd_norms.push_back(sd_norm(fam, f, cfg));
        double l2sq = adaptive_quad([j](double x) { return std::sin(j * x) * std::sin(j * x); },
                                    0.0, std::numbers::pi, {1e-12})
                          .value;
        r.l2_norms.push_back(std::sqrt(l2sq));
    }
    return r;
}

inline void suite_weakstrong(Report& rep, const SDConfig& cfg) {
    WeakStrongResult r = weak_strong_demo(64, cfg);
    double l2_ref = std::sqrt(std::numbers::pi / 2.0);
    for (std::size_t i = 0; i < r.js.size(); ++i) {
        double gap = std::fabs(r.l2_norms[i] - l2_ref);
        rep.entries.push_back(make_check("weakstrong_l2_constant",
                                         "j=" + std::to_string(r.js[i]), r.l2_norms[i], l2_ref, gap,
                                         gap <= 1e-8));
    }
    for (std::size_t i = 1; i < r.js.size(); ++i) {
        rep.entries.push_back(make_check(
            "weakstrong_decreasing",
            "j=" + std::to_string(r.js[i - 1]) + "->" + std::to_string(r.js[i]), r.sd_norms[i],
            r.sd_norms[i - 1], r.sd_norms[i - 1] - r.sd_norms[i], r.sd_norms[i] < r.sd_norms[i - 1]));
    }
    double ratio = r.sd_norms.back() / r.sd_norms.front();
    rep.entries.push_back(
        make_check("weakstrong_decay", "j=64 vs j=1", ratio, 0.1, 0.1 - ratio, ratio < 0.1));
}

// ---------------------------------------------------------------------------

inline Report run_suite(const std::string& suite, const SDConfig& cfg, std::uint64_t seed) {
    Report rep;
    rep.tool_version = "1.0.0";
    rep.config = {{"suite", suite},
                  {"p", cfg.p == kInf ? -1.0 : cfg.p},
                  {"m", cfg.m},
                  {"K", cfg.K},
                  {"quad_tol", cfg.quad_tol},
                  {"seed", seed}};
    Catalog cat = builtin_catalog();
    Rng rng(seed);
    bool any = false;
    auto want = [&](const char* name) {
        bool w = suite == name || suite == "all";
        any = any || w;
        return w;
    };
    if (want("measure")) suite_measure(rep, rng);
    if (want("embedding")) suite_embedding(rep, cat, cfg);
    if (want("clarkson")) suite_clarkson(rep, cat, cfg, rng);
    if (want("duality")) suite_duality(rep, cat, cfg, rng);
    if (want("pairing")) suite_pairing(rep, cat, cfg);
    if (want("hk-sd")) suite_hk_sd(rep, cat, cfg);
    if (want("kuelbs")) suite_kuelbs(rep, cfg, rng);
    if (want("weakstrong")) suite_weakstrong(rep, cfg);
    if (!any) throw DomainError("unknown verify suite: " + suite);
    return rep;
}

}  // namespace sdspace
