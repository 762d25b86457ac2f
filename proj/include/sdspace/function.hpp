#pragma once

/// Tame functions f = f^n(x_1..x_n) (x) h_n(tail): an evaluator on a finite
/// section plus support and smoothness metadata. All functions on the
/// infinite-dimensional domain are represented this way; promotion to a
/// higher order multiplies by the tail-cube indicator, which has measure 1.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdspace/errors.hpp"
#include "sdspace/expr.hpp"
#include "sdspace/measure.hpp"

namespace sdspace {

/// Finite-support multi-index; zero entries are omitted.
class MultiIndex {
  public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<std::pair<const int, int>> init) : entries_(init) {
        prune();
    }

    void set(int dim, int order) {
        if (dim < 1 || order < 0) throw DomainError("MultiIndex: bad entry");
        if (order == 0)
            entries_.erase(dim);
        else
            entries_[dim] = order;
    }
    int at(int dim) const {
        auto it = entries_.find(dim);
        return it == entries_.end() ? 0 : it->second;
    }
    int total() const {
        int s = 0;
        for (auto& [d, o] : entries_) s += o;
        return s;
    }
    int max_dim() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }
    const std::map<int, int>& entries() const { return entries_; }
    bool operator==(const MultiIndex&) const = default;

  private:
    std::map<int, int> entries_;
    void prune() {
        std::erase_if(entries_, [](const auto& kv) { return kv.second == 0; });
        for (auto& [d, o] : entries_)
            if (d < 1 || o < 0) throw DomainError("MultiIndex: bad entry");
    }
};

enum class Smoothness { SmoothCompact, Smooth, Piecewise, Pathological };

class TameFunction {
  public:
    using Opaque = std::function<double(std::span<const double>)>;

    TameFunction(int order, ExprPtr expr, BoxSet support,
                 Smoothness smoothness = Smoothness::Smooth)
        : order_(order),
          expr_(std::move(expr)),
          support_(std::move(support)),
          smoothness_(smoothness) {
        if (support_.order() != order_) throw OrderMismatchError("support order != function order");
        if (expr_ && max_var_index(*expr_) > order_)
            throw DomainError("expression references variable beyond order");
    }

    TameFunction(int order, Opaque opaque, BoxSet support, Smoothness smoothness)
        : order_(order),
          opaque_(std::move(opaque)),
          support_(std::move(support)),
          smoothness_(smoothness) {
        if (support_.order() != order_) throw OrderMismatchError("support order != function order");
    }

    int order() const { return order_; }
    const ExprPtr& expr() const { return expr_; }
    const BoxSet& support() const { return support_; }
    Smoothness smoothness() const { return smoothness_; }
    bool approximate_derivative() const { return approx_deriv_; }

    const std::vector<std::vector<double>>& singular_points() const { return singulars_; }
    void add_singular_point(std::vector<double> p) {
        if (static_cast<int>(p.size()) != order_) throw DomainError("singular point dimension");
        singulars_.push_back(std::move(p));
    }

    std::optional<double> sup_norm() const { return sup_norm_; }
    void set_sup_norm(double s) { sup_norm_ = s; }

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    double eval(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != order_)
            throw OrderMismatchError("eval: point dimension != order");
        for (const auto& s : singulars_) {
            bool same = true;
            for (int d = 0; d < order_ && same; ++d)
                same = (x[(std::size_t)d] == s[(std::size_t)d]);
            if (same) throw SingularPointError("eval at declared singular point");
        }
        if (!support_.contains(x)) return 0.0;
        return opaque_ ? opaque_(x) : eval_expr(*expr_, x);
    }

    double operator()(std::initializer_list<double> x) const {
        return eval(std::span<const double>(x.begin(), x.size()));
    }

    /// True when the point is a declared singular point (eval would throw).
    bool singular_at(std::span<const double> x) const {
        for (const auto& s : singulars_) {
            bool same = true;
            for (int d = 0; d < order_ && same; ++d)
                same = (x[(std::size_t)d] == s[(std::size_t)d]);
            if (same) return true;
        }
        return false;
    }

    /// eval with singular points read as 0; integrators use this (a finite
    /// singular set never contributes to an integral).
    double eval_or_zero(std::span<const double> x) const {
        if (singular_at(x)) return 0.0;
        if (!support_.contains(x)) return 0.0;
        return opaque_ ? opaque_(x) : eval_expr(*expr_, x);
    }

  private:
    int order_;
    ExprPtr expr_;
    Opaque opaque_;
    BoxSet support_;
    Smoothness smoothness_;
    std::vector<std::vector<double>> singulars_;
    std::optional<double> sup_norm_;
    bool approx_deriv_ = false;
    std::string name_;

    friend TameFunction derivative(const TameFunction&, const MultiIndex&);
    friend TameFunction promote(const TameFunction&, int);
};

/// New order m; the evaluator picks up the indicator of the tail cube through
/// the promoted support. Integrals are preserved (tail factors have measure 1).
inline TameFunction promote(const TameFunction& f, int m) {
    if (m < f.order()) throw OrderMismatchError("promote: m < order");
    if (m == f.order()) return f;
    BoxSet sup = promote_order(f.support(), m);
    TameFunction out = [&] {
        if (f.expr()) return TameFunction(m, f.expr(), sup, f.smoothness());
        int n = f.order();
        auto inner = f;  // capture by value; evaluation drops the tail coords
        return TameFunction(
            m,
            TameFunction::Opaque([inner, n](std::span<const double> x) {
                return inner.eval(x.subspan(0, (std::size_t)n));
            }),
            sup, f.smoothness());
    }();
    for (const auto& s : f.singular_points()) {
        // A singular point of the section stays singular at tail coordinate 0.
        std::vector<double> p = s;
        p.resize((std::size_t)m, 0.0);
        out.singulars_.push_back(std::move(p));
    }
    if (f.sup_norm()) out.set_sup_norm(*f.sup_norm());
    out.approx_deriv_ = f.approx_deriv_;
    out.set_name(f.name());
    return out;
}

namespace detail {

inline constexpr double kFdStep = 1e-5;  // central differences, second order

inline double fd_derivative(const TameFunction& f, const MultiIndex& alpha,
                            std::span<const double> x) {
    // Nested central differences, one dimension at a time.
    for (const auto& [dim, ord] : alpha.entries()) {
        MultiIndex rest = alpha;
        rest.set(dim, ord - 1);
        std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
        xp[(std::size_t)(dim - 1)] += kFdStep;
        xm[(std::size_t)(dim - 1)] -= kFdStep;
        return (fd_derivative(f, rest, xp) - fd_derivative(f, rest, xm)) / (2.0 * kFdStep);
    }
    return f.eval_or_zero(x);
}

}  // namespace detail

/// D^alpha f. Symbolic when the expression admits it, otherwise central
/// finite differences (flagged approximate). Piecewise and pathological
/// functions only admit the trivial derivative.
inline TameFunction derivative(const TameFunction& f, const MultiIndex& alpha) {
    if (alpha.total() == 0) return f;
    if (alpha.max_dim() > f.order())
        throw DomainError("derivative: multi-index beyond function order");
    if (f.smoothness() == Smoothness::Piecewise || f.smoothness() == Smoothness::Pathological)
        throw DomainError("derivative of piecewise/pathological function: " + f.name());

    if (f.expr()) {
        ExprPtr g = f.expr();
        bool ok = true;
        for (const auto& [dim, ord] : alpha.entries()) {
            for (int r = 0; r < ord && ok; ++r) {
                auto d = diff_expr(g, dim);
                if (d)
                    g = *d;
                else
                    ok = false;
            }
            if (!ok) break;
        }
        if (ok) {
            TameFunction out(f.order(), g, f.support(), f.smoothness());
            for (const auto& s : f.singular_points()) out.singulars_.push_back(s);
            out.set_name(f.name());
            return out;
        }
    }

    auto base = f;
    MultiIndex a = alpha;
    TameFunction out(
        f.order(),
        TameFunction::Opaque([base, a](std::span<const double> x) {
            return detail::fd_derivative(base, a, x);
        }),
        f.support(), f.smoothness());
    out.approx_deriv_ = true;
    out.set_name(f.name());
    return out;
}

/// D_{alpha} scaled: magnitude (2*pi)^{-|alpha|} D^alpha f with the unit
/// phase (-i)^{|alpha|} tracked separately.
struct ScaledDerivative {
    TameFunction magnitude;
    std::complex<double> phase;
};

inline ScaledDerivative scaled_derivative(const TameFunction& f, const MultiIndex& alpha) {
    int m = alpha.total();
    std::complex<double> phase = std::pow(std::complex<double>(0.0, -1.0), m);
    if (m == 0) return {f, {1.0, 0.0}};
    TameFunction d = derivative(f, alpha);
    double scale = std::pow(2.0 * std::numbers::pi, -m);
    if (d.expr()) {
        TameFunction out(d.order(), exprs::mul(exprs::constant(scale), d.expr()), d.support(),
                         d.smoothness());
        for (const auto& s : d.singular_points()) out.add_singular_point(s);
        out.set_name(f.name());
        return {out, phase};
    }
    auto inner = d;
    TameFunction out(
        d.order(),
        TameFunction::Opaque(
            [inner, scale](std::span<const double> x) { return scale * inner.eval(x); }),
        d.support(), d.smoothness());
    out.set_name(f.name());
    return {out, phase};
}

/// Sequence of tame functions of nondecreasing order.
struct FunctionSequence {
    enum class Mode { PointwiseAe, L1Cauchy };
    std::function<TameFunction(int)> generator;  // 1-based index
    Mode declared_mode = Mode::L1Cauchy;
};

}  // namespace sdspace
