#pragma once

/// Builtin catalog of tame functions used by the verify suites and the CLI,
/// plus the plain-text catalog format:
///
///     name = <expr> @ order=<n> support=[lo,hi;lo,hi;...]
///
/// One entry per line; blank lines and lines starting with '#' are skipped.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sdspace/errors.hpp"
#include "sdspace/expr.hpp"
#include "sdspace/function.hpp"

namespace sdspace {

struct CatalogEntry {
    TameFunction fn;
    std::vector<double> finite_lq;          // exponents q with a finite L^q norm
    bool finite_sup = true;                 // whether the sup (q = inf) is finite
    std::optional<std::string> antideriv;   // 1-D antiderivative expression, when known
};

class Catalog {
  public:
    void add(CatalogEntry e) {
        order_.push_back(e.fn.name());
        entries_.emplace(e.fn.name(), std::move(e));
    }
    const CatalogEntry& at(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw DomainError("catalog: no entry named " + name);
        return it->second;
    }
    bool has(const std::string& name) const { return entries_.count(name) != 0; }
    const std::vector<std::string>& names() const { return order_; }

  private:
    std::map<std::string, CatalogEntry> entries_;
    std::vector<std::string> order_;
};

namespace detail {

inline TameFunction make_fn(const std::string& name, const std::string& expr_text, int order,
                            const Box& support, Smoothness sm) {
    TameFunction f(order, parse_expr(expr_text, order), BoxSet(order, {support}), sm);
    f.set_name(name);
    return f;
}

}  // namespace detail

/// The builtin entries: polynomials, trig, bumps, a Gaussian, a non-absolutely
/// integrable oscillator and its antiderivative, and an integrable algebraic
/// singularity.
inline Catalog builtin_catalog() {
    const double pi = std::numbers::pi;
    Catalog cat;

    {
        auto f = detail::make_fn("const_one", "1", 1, {{0.0, 1.0}}, Smoothness::Piecewise);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, "x1"});
    }
    {
        auto f = detail::make_fn("linear", "x1", 1, {{0.0, 1.0}}, Smoothness::Smooth);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, "x1^2/2"});
    }
    {
        auto f = detail::make_fn("quadratic", "x1^2", 1, {{-1.0, 1.0}}, Smoothness::Smooth);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, "x1^3/3"});
    }
    {
        auto f = detail::make_fn("cubic", "x1^3-x1", 1, {{-1.0, 1.0}}, Smoothness::Smooth);
        f.set_sup_norm(2.0 / (3.0 * std::sqrt(3.0)));
        cat.add({std::move(f), {1, 2, 3, 4}, true, "x1^4/4-x1^2/2"});
    }
    {
        auto f = detail::make_fn("sine", "sin(x1)", 1, {{0.0, pi}}, Smoothness::Smooth);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, "0-cos(x1)"});
    }
    {
        auto f = detail::make_fn("cosine", "cos(x1)", 1, {{-pi / 2.0, pi / 2.0}},
                                 Smoothness::Smooth);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, "sin(x1)"});
    }
    {
        auto f = detail::make_fn("sin_hi", "sin(8*x1)", 1, {{0.0, pi}}, Smoothness::Smooth);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, "0-cos(8*x1)/8"});
    }
    {
        auto f = detail::make_fn("bump1", "bump(x1,0,1)", 1, {{-0.5, 0.5}},
                                 Smoothness::SmoothCompact);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, std::nullopt});
    }
    {
        TameFunction f(2,
                       exprs::mul(exprs::bump(exprs::var(1), 0.0, 1.0),
                                  exprs::bump(exprs::var(2), 0.0, 1.0)),
                       BoxSet(2, {{{-0.5, 0.5}, {-0.5, 0.5}}}), Smoothness::SmoothCompact);
        f.set_name("bump2d");
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, std::nullopt});
    }
    {
        auto f = detail::make_fn("gaussian", "exp(0-x1^2)", 1, {{-3.0, 3.0}}, Smoothness::Smooth);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, std::nullopt});
    }
    {
        // 1/sqrt(x): integrable but in no L^q beyond q=1 on (0,1].
        auto f = detail::make_fn("invsqrt", "1/sqrt(x1)", 1, {{0.0, 1.0}}, Smoothness::Smooth);
        f.add_singular_point({0.0});
        cat.add({std::move(f), {1}, false, "2*sqrt(x1)"});
    }
    {
        // d/dx [x^2 sin(x^-2)]: HK-integrable, not Lebesgue-integrable.
        auto f = detail::make_fn("hk_osc", "hk_osc(x1)", 1, {{0.0, 1.0}}, Smoothness::Pathological);
        f.add_singular_point({0.0});
        cat.add({std::move(f), {}, false, "x1^2*sin(1/x1^2)"});
    }
    {
        auto f = detail::make_fn("osc_anti", "x1^2*sin(1/x1^2)", 1, {{0.0, 1.0}},
                                 Smoothness::Smooth);
        f.add_singular_point({0.0});
        f.set_sup_norm(std::sin(1.0));
        cat.add({std::move(f), {1, 2, 3, 4}, true, std::nullopt});
    }
    {
        auto f = detail::make_fn("box_half", "1", 1, {{-0.5, 0.5}}, Smoothness::Piecewise);
        f.set_sup_norm(1.0);
        cat.add({std::move(f), {1, 2, 3, 4}, true, std::nullopt});
    }
    return cat;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parse one catalog line. Throws ParseError with the byte offset of the
/// failure within the line.
inline std::pair<std::string, TameFunction> parse_catalog_line(const std::string& line) {
    std::size_t eq = line.find('=');
    std::size_t at = line.rfind('@');
    if (eq == std::string::npos) throw ParseError("catalog line: missing '='", 0);
    if (at == std::string::npos || at < eq)
        throw ParseError("catalog line: missing '@' metadata separator", line.size());
    std::string name = detail::trim(line.substr(0, eq));
    std::string expr_text = detail::trim(line.substr(eq + 1, at - eq - 1));
    std::string meta = line.substr(at + 1);
    if (name.empty()) throw ParseError("catalog line: empty name", 0);

    int order = 0;
    Box support;
    std::size_t opos = meta.find("order=");
    std::size_t spos = meta.find("support=[");
    if (opos == std::string::npos) throw ParseError("catalog line: missing order=", at + 1);
    if (spos == std::string::npos) throw ParseError("catalog line: missing support=[", at + 1);
    order = std::atoi(meta.c_str() + opos + 6);
    if (order < 1) throw ParseError("catalog line: order must be positive", at + 1 + opos);
    std::size_t p = spos + 9;
    while (p < meta.size() && meta[p] != ']') {
        char* end = nullptr;
        double lo = std::strtod(meta.c_str() + p, &end);
        if (end == meta.c_str() + p || *end != ',')
            throw ParseError("catalog line: bad interval", at + 1 + p);
        p = (std::size_t)(end - meta.c_str()) + 1;
        double hi = std::strtod(meta.c_str() + p, &end);
        if (end == meta.c_str() + p) throw ParseError("catalog line: bad interval", at + 1 + p);
        p = (std::size_t)(end - meta.c_str());
        support.emplace_back(lo, hi);
        if (p < meta.size() && meta[p] == ';') ++p;
    }
    if ((int)support.size() != order)
        throw ParseError("catalog line: support dimension != order", at + 1 + spos);

    TameFunction f(order, parse_expr(expr_text, order), BoxSet(order, {support}),
                   Smoothness::Smooth);
    f.set_name(name);
    return {name, std::move(f)};
}

inline Catalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open catalog file: " + path);
    Catalog cat;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        try {
            auto [name, fn] = parse_catalog_line(t);
            cat.add({std::move(fn), {1, 2}, true, std::nullopt});
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), e.offset);
        }
    }
    return cat;
}

inline std::string catalog_line(const CatalogEntry& e) {
    std::ostringstream os;
    os << e.fn.name() << " = " << print_expr(*e.fn.expr()) << " @ order=" << e.fn.order()
       << " support=[";
    const Box& b = e.fn.support().boxes().front();
    for (std::size_t d = 0; d < b.size(); ++d) {
        if (d) os << ';';
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", b[d].lo, b[d].hi);
        os << buf;
    }
    os << ']';
    return os.str();
}

}  // namespace sdspace
