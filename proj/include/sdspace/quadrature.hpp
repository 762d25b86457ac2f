#pragma once

/// Adaptive Gauss-Kronrod (G7,K15) quadrature, tensorized over the support
/// boxes of tame functions, plus the Cauchy-limit integral for function
/// sequences.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "sdspace/errors.hpp"
#include "sdspace/function.hpp"
#include "sdspace/measure.hpp"

namespace sdspace {

enum class Method { Gauge, AdaptiveQuad, FtcOracle, ImproperLimit };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Gauge:
            return "gauge";
        case Method::AdaptiveQuad:
            return "adaptive_quad";
        case Method::FtcOracle:
            return "ftc_oracle";
        case Method::ImproperLimit:
            return "improper_limit";
    }
    return "?";
}

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    Method method = Method::AdaptiveQuad;
    long evaluations = 0;
};

namespace detail {

// Kronrod-15 abscissae and weights on [-1,1]; the embedded Gauss-7 rule uses
// the odd-indexed abscissae.
inline constexpr std::array<double, 8> kK15Nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> kK15Weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kG7Weights = {0.129484966168870, 0.279705391489277,
                                                     0.381830050505119, 0.417959183673469};

struct PanelResult {
    double value;
    double error;
};

template <typename F>
PanelResult gk15(F&& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double k15 = 0.0, g7 = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        double x = kK15Nodes[i];
        double fv;
        if (x == 0.0) {
            fv = f(c);
            evals += 1;
        } else {
            fv = f(c - h * x) + f(c + h * x);
            evals += 2;
        }
        k15 += kK15Weights[i] * fv;
        if (i % 2 == 1) g7 += kG7Weights[i / 2] * fv;
    }
    double value = k15 * h;
    double error = std::fabs((k15 - g7) * h);
    return {value, error};
}

template <typename F>
PanelResult adaptive_1d_rec(F&& f, double a, double b, double tol, int depth, long& evals,
                            long max_evals, double scale) {
    if (evals > max_evals)
        throw BudgetExceededError("adaptive quadrature budget exceeded", 0.0);
    PanelResult r = gk15(f, a, b, evals);
    if (r.error <= tol || depth >= 50 || (b - a) <= 1e-15 * scale) return r;
    double m = 0.5 * (a + b);
    PanelResult l = adaptive_1d_rec(f, a, m, 0.5 * tol, depth + 1, evals, max_evals, scale);
    PanelResult rr = adaptive_1d_rec(f, m, b, 0.5 * tol, depth + 1, evals, max_evals, scale);
    return {l.value + rr.value, l.error + rr.error};
}

}  // namespace detail

struct QuadOptions {
    double tol = 1e-9;
    long max_evals = 100'000'000;
};

/// 1-D adaptive quadrature of an evaluator over [a,b].
template <typename F>
IntegralResult adaptive_quad(F&& f, double a, double b, const QuadOptions& opt = {}) {
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, Method::AdaptiveQuad, 0};
        throw DomainError("adaptive_quad: requires a <= b");
    }
    long evals = 0;
    auto r = detail::adaptive_1d_rec(f, a, b, opt.tol, 0, evals, opt.max_evals, b - a);
    return {r.value, r.error, Method::AdaptiveQuad, evals};
}

namespace detail {

/// Iterated adaptive quadrature of f over an axis-aligned box.
class IteratedQuad {
  public:
    IteratedQuad(std::function<double(std::span<const double>)> f, const Box& box,
                 const QuadOptions& opt)
        : f_(std::move(f)), box_(box), opt_(opt), point_(box.size()) {
        for (const Interval& iv : box)
            if (!iv.bounded()) throw DomainError("quad over unbounded box");
    }

    PanelResult run() {
        if (box_.empty()) return {f_({}), 0.0};
        return integrate_dims(static_cast<int>(box_.size()) - 1, opt_.tol);
    }
    long evaluations() const { return evals_; }

  private:
    std::function<double(std::span<const double>)> f_;
    Box box_;
    QuadOptions opt_;
    std::vector<double> point_;
    long evals_ = 0;

    PanelResult integrate_dims(int d, double tol) {
        const Interval& iv = box_[(std::size_t)d];
        double inner_err = 0.0;
        auto g = [&](double t) {
            point_[(std::size_t)d] = t;
            if (d == 0) {
                ++evals_;
                if (evals_ > opt_.max_evals)
                    throw BudgetExceededError("quad_nd budget exceeded", 0.0);
                return f_(point_);
            }
            double inner_tol = tol / (2.0 * std::max(1.0, iv.width()));
            PanelResult r = integrate_dims(d - 1, inner_tol);
            inner_err = std::max(inner_err, r.error);
            return r.value;
        };
        long dummy = 0;
        PanelResult r = adaptive_1d_rec(g, iv.lo, iv.hi, tol, 0, dummy, opt_.max_evals,
                                        std::max(iv.width(), 1.0));
        r.error += inner_err * iv.width();
        return r;
    }
};

}  // namespace detail

/// Adaptive quadrature of a pointwise evaluator over one box.
inline IntegralResult quad_box(std::function<double(std::span<const double>)> f, const Box& box,
                               const QuadOptions& opt = {}) {
    detail::IteratedQuad q(std::move(f), box, opt);
    auto r = q.run();
    return {r.value, r.error, Method::AdaptiveQuad, q.evaluations()};
}

/// Tensorized adaptive quadrature of a tame function over its support base.
inline IntegralResult quad_nd(const TameFunction& f, double tol) {
    if (f.order() > 6) throw DomainError("quad_nd: order > 6 not supported");
    if (!f.support().bounded()) throw DomainError("quad_nd: unbounded support");
    QuadOptions opt;
    opt.tol = tol;
    IntegralResult total{0.0, 0.0, Method::AdaptiveQuad, 0};
    for (const Box& b : f.support().boxes()) {
        IntegralResult r =
            quad_box([&f](std::span<const double> x) { return f.eval_or_zero(x); }, b, opt);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    return total;
}

/// Integral of an l1-Cauchy sequence: evaluate the first `depth` sections and
/// take the observed Cauchy increments as the error estimate.
inline IntegralResult limit_integral(const FunctionSequence& seq, int depth, double quad_tol) {
    if (seq.declared_mode != FunctionSequence::Mode::L1Cauchy)
        throw DomainError("limit_integral: only l1_cauchy sequences are integrable");
    if (depth < 1) throw DomainError("limit_integral: depth must be >= 1");
    std::vector<double> values;
    long evals = 0;
    double quad_err = 0.0;
    for (int m = 1; m <= depth; ++m) {
        IntegralResult r = quad_nd(seq.generator(m), quad_tol);
        values.push_back(r.value);
        evals += r.evaluations;
        quad_err = std::max(quad_err, r.error_estimate);
    }
    std::vector<double> inc;
    for (std::size_t i = 1; i < values.size(); ++i)
        inc.push_back(std::fabs(values[i] - values[i - 1]));
    if (inc.size() >= 3) {
        std::size_t n = inc.size();
        bool nondecreasing =
            inc[n - 1] >= inc[n - 2] && inc[n - 2] >= inc[n - 3] && inc[n - 1] > quad_tol;
        if (nondecreasing)
            throw NonConvergenceError("limit_integral: increments do not decay within depth");
    }
    double err = (inc.empty() ? 0.0 : inc.back()) + quad_err;
    return {values.back(), err, Method::AdaptiveQuad, evals};
}

}  // namespace sdspace
