#pragma once

/// Vitali-style variation on sections, the BV-with-vanishing-tails check,
/// and the bound tying the Alexiewicz (HK) norm of a 1-D function to its
/// SD^2 norm through the variation of the test bumps.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sdspace/errors.hpp"
#include "sdspace/function.hpp"
#include "sdspace/gauge.hpp"
#include "sdspace/jones.hpp"
#include "sdspace/report.hpp"

namespace sdspace {

struct VariationResult {
    std::optional<double> value;       // empty when flagged divergent
    std::vector<double> partial_sums;  // one per expansion round
    bool converged = false;
};

namespace detail {

// Sum over a uniform grid of |Delta f| for the mixed first difference in all
// coordinates: sum_{cells} |sum_{corners} (-1)^{#lo} f(corner)|.
inline double mixed_difference_sum(const TameFunction& f, const Box& box, int cells_per_dim) {
    int n = f.order();
    std::vector<double> h((std::size_t)n);
    for (int d = 0; d < n; ++d) h[(std::size_t)d] = box[(std::size_t)d].width() / cells_per_dim;
    std::vector<int> idx((std::size_t)n, 0);
    std::vector<double> pt((std::size_t)n);
    double total = 0.0;
    bool done = false;
    while (!done) {
        double delta = 0.0;
        for (int corner = 0; corner < (1 << n); ++corner) {
            int ones = 0;
            for (int d = 0; d < n; ++d) {
                int bit = (corner >> d) & 1;
                ones += bit;
                pt[(std::size_t)d] =
                    box[(std::size_t)d].lo + (idx[(std::size_t)d] + bit) * h[(std::size_t)d];
            }
            double sign = ((n - ones) % 2 == 0) ? 1.0 : -1.0;
            delta += sign * f.eval_or_zero(pt);
        }
        total += std::fabs(delta);
        // advance the cell index
        int d = 0;
        while (d < n) {
            if (++idx[(std::size_t)d] < cells_per_dim) break;
            idx[(std::size_t)d] = 0;
            ++d;
        }
        done = (d == n);
    }
    return total;
}

// Shrink the box away from any singular point by margin eta (per dimension).
inline std::vector<Box> trim_singular(const Box& box, const std::vector<std::vector<double>>& sing,
                                      double eta) {
    std::vector<Box> out = {box};
    for (const auto& s : sing) {
        std::vector<Box> next;
        for (const Box& b : out) {
            bool inside = true;
            for (std::size_t d = 0; d < b.size(); ++d)
                inside = inside && (b[d].lo - eta <= s[d] && s[d] <= b[d].hi + eta);
            if (!inside) {
                next.push_back(b);
                continue;
            }
            // cut along dimension 0 around the singular coordinate
            double lo = s[0] - eta, hi = s[0] + eta;
            if (b[0].lo < lo) {
                Box left = b;
                left[0].hi = lo;
                next.push_back(left);
            }
            if (hi < b[0].hi) {
                Box right = b;
                right[0].lo = hi;
                next.push_back(right);
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace detail

/// Variation over the support: sup over refining uniform grids of the mixed
/// first-difference sums, approached by doubling the grid. Singular points
/// are excluded by shrinking margins eta = 2^{-i}; the result is flagged
/// divergent when the partial sums keep growing across five expansions.
inline VariationResult vitali_variation(const TameFunction& f, int max_rounds = 10) {
    if (f.order() > 3) throw DomainError("vitali_variation: order > 3 not supported");
    VariationResult res;
    if (!f.support().bounded()) return res;  // no finite exhaustion: flagged divergent
    double prev = 0.0;
    for (int i = 0; i < max_rounds; ++i) {
        double eta = f.singular_points().empty() ? 0.0 : std::ldexp(1.0, -(i + 2));
        int cells = 8 << i;
        double sum = 0.0;
        for (const Box& b : f.support().boxes()) {
            for (const Box& piece : detail::trim_singular(b, f.singular_points(), eta))
                sum += detail::mixed_difference_sum(f, piece, cells);
        }
        res.partial_sums.push_back(sum);
        std::size_t n = res.partial_sums.size();
        if (n >= 5) {
            double growth = res.partial_sums[n - 1] - res.partial_sums[n - 5];
            double recent = res.partial_sums[n - 1] - res.partial_sums[n - 2];
            if (recent <= 1e-4 * std::max(1.0, res.partial_sums[n - 1]) || growth <= 1e-3) {
                res.value = res.partial_sums[n - 1];
                res.converged = true;
                return res;
            }
        }
        prev = sum;
    }
    (void)prev;
    // Partial sums kept increasing through every expansion: flagged divergent.
    return res;
}

/// BV with vanishing tails: finite variation plus max |f| on max-norm spheres
/// of growing radius falling below tol.
inline CheckResult bv0_check(const TameFunction& f, double tol = 1e-6) {
    VariationResult v = vitali_variation(f);
    double variation = v.converged ? *v.value : kInf;

    // max |f| on the sphere {max|x_d| = R}, sampled; supports here are
    // bounded so any R beyond the support bound gives exactly 0.
    double radius = 0.0;
    for (const Box& b : f.support().boxes())
        for (const Interval& iv : b)
            radius = std::max({radius, std::fabs(iv.lo), std::fabs(iv.hi)});
    double rim = 0.0;
    int n = f.order();
    std::vector<double> pt((std::size_t)n);
    double r = radius + 1.0;
    for (int face = 0; face < n; ++face) {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            for (int trial = 0; trial < 32; ++trial) {
                for (int d = 0; d < n; ++d)
                    pt[(std::size_t)d] = -r + (2.0 * r * trial) / 31.0;
                pt[(std::size_t)face] = sgn * r;
                if (!f.singular_at(pt)) rim = std::max(rim, std::fabs(f.eval_or_zero(pt)));
            }
        }
    }
    bool pass = v.converged && rim < tol;
    return make_check("bv0", "f=" + f.name(), variation, rim, tol - rim, pass);
}

/// ||f||_{SD^2}^2 <= ||f||_HK^2 * (sup_k V(E_k))^2 for 1-D f, with the HK
/// norm read as the Alexiewicz norm over the support hull and V(E_k) the
/// variation of the test bumps (V = 2 in one dimension).
inline CheckResult hk_in_sd_check(const TestFunctionFamily& fam, const TameFunction& f,
                                  const SDConfig& cfg, double hk_tol = 1e-3) {
    if (f.order() != 1) throw DomainError("hk_in_sd_check: 1-D functions only");
    SDConfig c = cfg;
    c.p = 2.0;
    c.m = 0;
    double sd = sd_norm(fam, f, c);

    double lo = kInf, hi = -kInf;
    for (const Box& b : f.support().boxes()) {
        lo = std::min(lo, b[0].lo);
        hi = std::max(hi, b[0].hi);
    }
    std::vector<double> sing;
    for (const auto& s : f.singular_points()) sing.push_back(s[0]);
    double hk =
        alexiewicz_norm([&](double x) { return f.eval_or_zero(std::span<const double>(&x, 1)); },
                        lo, hi, sing, hk_tol);

    double sup_var = 0.0;
    for (int k = 1; k <= cfg.K; ++k) {
        VariationResult v = vitali_variation(fam.test_fn(k));
        if (v.converged) sup_var = std::max(sup_var, *v.value);
    }

    double lhs = sd * sd;
    double rhs = hk * hk * sup_var * sup_var;
    return make_check("hk_in_sd", "f=" + f.name(), lhs, rhs, rhs - lhs, lhs <= rhs + 1e-9);
}

}  // namespace sdspace
