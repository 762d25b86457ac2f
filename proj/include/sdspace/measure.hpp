#pragma once

/// Box sets A x I_n over the finite-dimensional sections and the measure
/// lambda_inf restricted to them. A BoxSet carries a finite union of
/// axis-aligned boxes in R^n; the infinite tail I_n = prod [-1/2,1/2] is
/// implicit and contributes measure 1. Unbounded sides use +-inf sentinels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "sdspace/errors.hpp"

namespace sdspace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(lo <= hi)) throw DomainError("interval requires lo <= hi");
    }
    double width() const { return hi - lo; }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool operator==(const Interval&) const = default;
};

using Box = std::vector<Interval>;

inline double box_volume(const Box& b) {
    // A degenerate side collapses the volume to 0 even next to an
    // unbounded side.
    for (const Interval& iv : b)
        if (iv.width() == 0.0) return 0.0;
    double v = 1.0;
    for (const Interval& iv : b) {
        if (!iv.bounded()) return kInf;
        v *= iv.width();
    }
    return v;
}

inline bool box_contains(const Box& b, std::span<const double> x) {
    for (std::size_t d = 0; d < b.size(); ++d)
        if (!b[d].contains(x[d])) return false;
    return true;
}

namespace detail {

// Disjoint grid decomposition: cut every dimension at every boundary seen in
// `boxes`, keep the cells whose representative point is covered, then merge
// cells back together dimension by dimension (fixed order, so the result is
// canonical for a given point set).
inline std::vector<std::vector<double>> grid_cuts(const std::vector<Box>& boxes, int n,
                                                  bool with_inf) {
    std::vector<std::vector<double>> cuts(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        auto& c = cuts[static_cast<std::size_t>(d)];
        if (with_inf) {
            c.push_back(-kInf);
            c.push_back(kInf);
        }
        for (const Box& b : boxes) {
            c.push_back(b[static_cast<std::size_t>(d)].lo);
            c.push_back(b[static_cast<std::size_t>(d)].hi);
        }
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    return cuts;
}

inline double cell_rep(double lo, double hi) {
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    if (std::isfinite(lo)) return lo + 1.0;
    if (std::isfinite(hi)) return hi - 1.0;
    return 0.0;
}

inline void merge_cells(std::vector<Box>& cells, int n) {
    for (int d = n - 1; d >= 0; --d) {
        auto key_less = [d, n](const Box& a, const Box& b) {
            for (int e = 0; e < n; ++e) {
                if (e == d) continue;
                if (a[(std::size_t)e].lo != b[(std::size_t)e].lo)
                    return a[(std::size_t)e].lo < b[(std::size_t)e].lo;
                if (a[(std::size_t)e].hi != b[(std::size_t)e].hi)
                    return a[(std::size_t)e].hi < b[(std::size_t)e].hi;
            }
            return a[(std::size_t)d].lo < b[(std::size_t)d].lo;
        };
        auto same_key = [d, n](const Box& a, const Box& b) {
            for (int e = 0; e < n; ++e) {
                if (e == d) continue;
                if (a[(std::size_t)e] != b[(std::size_t)e]) return false;
            }
            return true;
        };
        std::sort(cells.begin(), cells.end(), key_less);
        std::vector<Box> merged;
        for (Box& c : cells) {
            if (!merged.empty() && same_key(merged.back(), c) &&
                merged.back()[(std::size_t)d].hi == c[(std::size_t)d].lo) {
                merged.back()[(std::size_t)d].hi = c[(std::size_t)d].hi;
            } else {
                merged.push_back(std::move(c));
            }
        }
        cells = std::move(merged);
    }
    std::sort(cells.begin(), cells.end(), [](const Box& a, const Box& b) {
        for (std::size_t d = 0; d < a.size(); ++d) {
            if (a[d].lo != b[d].lo) return a[d].lo < b[d].lo;
            if (a[d].hi != b[d].hi) return a[d].hi < b[d].hi;
        }
        return false;
    });
}

}  // namespace detail

/// A_n = A x I_n: normalized finite union of disjoint boxes of order n.
class BoxSet {
  public:
    explicit BoxSet(int order) : order_(order) {
        if (order < 1) throw DomainError("BoxSet order must be positive");
    }
    BoxSet(int order, std::vector<Box> boxes) : order_(order) {
        if (order < 1) throw DomainError("BoxSet order must be positive");
        for (const Box& b : boxes)
            if (static_cast<int>(b.size()) != order)
                throw DomainError("box dimension does not match order");
        boxes_ = normalize(std::move(boxes), order);
    }

    int order() const { return order_; }
    const std::vector<Box>& boxes() const { return boxes_; }
    bool empty() const { return boxes_.empty(); }

    bool contains(std::span<const double> x) const {
        for (const Box& b : boxes_)
            if (box_contains(b, x)) return true;
        return false;
    }

    bool bounded() const {
        for (const Box& b : boxes_)
            for (const Interval& iv : b)
                if (!iv.bounded()) return false;
        return true;
    }

    /// Smallest single box covering the set (empty set -> degenerate box at 0).
    Box bounding_box() const {
        Box bb(static_cast<std::size_t>(order_), Interval(0, 0));
        if (boxes_.empty()) return bb;
        for (std::size_t d = 0; d < bb.size(); ++d) {
            double lo = kInf, hi = -kInf;
            for (const Box& b : boxes_) {
                lo = std::min(lo, b[d].lo);
                hi = std::max(hi, b[d].hi);
            }
            bb[d].lo = lo;
            bb[d].hi = hi;
        }
        return bb;
    }

    bool operator==(const BoxSet& o) const { return order_ == o.order_ && boxes_ == o.boxes_; }

    static std::vector<Box> normalize(std::vector<Box> boxes, int n) {
        // Drop measure-zero boxes up front.
        std::erase_if(boxes, [](const Box& b) { return box_volume(b) == 0.0; });
        if (boxes.empty()) return {};
        auto cuts = detail::grid_cuts(boxes, n, false);
        std::vector<Box> cells;
        Box cell(static_cast<std::size_t>(n));
        std::vector<double> rep(static_cast<std::size_t>(n));
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        while (true) {
            bool ok = true;
            for (int d = 0; d < n && ok; ++d) {
                const auto& c = cuts[(std::size_t)d];
                if (idx[(std::size_t)d] + 1 >= c.size()) ok = false;
            }
            if (ok) {
                for (int d = 0; d < n; ++d) {
                    const auto& c = cuts[(std::size_t)d];
                    cell[(std::size_t)d] = Interval(c[idx[(std::size_t)d]], c[idx[(std::size_t)d] + 1]);
                    rep[(std::size_t)d] = detail::cell_rep(cell[(std::size_t)d].lo, cell[(std::size_t)d].hi);
                }
                for (const Box& b : boxes) {
                    if (box_contains(b, rep)) {
                        cells.push_back(cell);
                        break;
                    }
                }
            }
            // advance the multi-index over grid cells
            int d = 0;
            for (; d < n; ++d) {
                if (++idx[(std::size_t)d] + 1 < cuts[(std::size_t)d].size()) break;
                idx[(std::size_t)d] = 0;
            }
            if (d == n) break;
        }
        detail::merge_cells(cells, n);
        return cells;
    }

  private:
    int order_;
    std::vector<Box> boxes_;
};

/// lambda_inf(A x I_n) = lambda_n(A); +inf for unbounded bases.
inline double lambda_inf(const BoxSet& a) {
    double total = 0.0;
    for (const Box& b : a.boxes()) {
        double v = box_volume(b);
        if (v == kInf) return kInf;
        total += v;
    }
    return total;
}

inline BoxSet box_union(const BoxSet& a, const BoxSet& b) {
    if (a.order() != b.order())
        throw OrderMismatchError("box_union: order mismatch (promote first)");
    std::vector<Box> all = a.boxes();
    all.insert(all.end(), b.boxes().begin(), b.boxes().end());
    return BoxSet(a.order(), std::move(all));
}

inline BoxSet box_intersect(const BoxSet& a, const BoxSet& b) {
    if (a.order() != b.order())
        throw OrderMismatchError("box_intersect: order mismatch (promote first)");
    std::vector<Box> out;
    for (const Box& x : a.boxes()) {
        for (const Box& y : b.boxes()) {
            Box z(x.size());
            bool nonempty = true;
            for (std::size_t d = 0; d < x.size(); ++d) {
                double lo = std::max(x[d].lo, y[d].lo);
                double hi = std::min(x[d].hi, y[d].hi);
                if (lo > hi) {
                    nonempty = false;
                    break;
                }
                z[d] = Interval(lo, hi);
            }
            if (nonempty) out.push_back(std::move(z));
        }
    }
    return BoxSet(a.order(), std::move(out));
}

inline BoxSet box_complement(const BoxSet& a) {
    const int n = a.order();
    if (a.empty()) {
        return BoxSet(n, {Box(static_cast<std::size_t>(n), Interval(-kInf, kInf))});
    }
    auto cuts = detail::grid_cuts(a.boxes(), n, true);
    std::vector<Box> cells;
    Box cell(static_cast<std::size_t>(n));
    std::vector<double> rep(static_cast<std::size_t>(n));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        bool ok = true;
        for (int d = 0; d < n && ok; ++d)
            if (idx[(std::size_t)d] + 1 >= cuts[(std::size_t)d].size()) ok = false;
        if (ok) {
            for (int d = 0; d < n; ++d) {
                const auto& c = cuts[(std::size_t)d];
                cell[(std::size_t)d] = Interval(c[idx[(std::size_t)d]], c[idx[(std::size_t)d] + 1]);
                rep[(std::size_t)d] = detail::cell_rep(cell[(std::size_t)d].lo, cell[(std::size_t)d].hi);
            }
            if (!a.contains(rep)) cells.push_back(cell);
        }
        int d = 0;
        for (; d < n; ++d) {
            if (++idx[(std::size_t)d] + 1 < cuts[(std::size_t)d].size()) break;
            idx[(std::size_t)d] = 0;
        }
        if (d == n) break;
    }
    detail::merge_cells(cells, n);
    return BoxSet(n, std::move(cells));
}

inline BoxSet translate(const BoxSet& a, std::span<const double> v) {
    if (static_cast<int>(v.size()) != a.order())
        throw DomainError("translate: shift dimension does not match order");
    std::vector<Box> out = a.boxes();
    for (Box& b : out) {
        for (std::size_t d = 0; d < b.size(); ++d) {
            b[d].lo += v[d];
            b[d].hi += v[d];
        }
    }
    return BoxSet(a.order(), std::move(out));
}

/// Cross the base with [-1/2,1/2]^(m-n); lambda_inf is unchanged.
inline BoxSet promote_order(const BoxSet& a, int m) {
    if (m < a.order()) throw OrderMismatchError("promote_order: m < order");
    if (m == a.order()) return a;
    std::vector<Box> out = a.boxes();
    for (Box& b : out)
        for (int d = a.order(); d < m; ++d) b.emplace_back(-0.5, 0.5);
    return BoxSet(m, std::move(out));
}

}  // namespace sdspace
