// Command-line driver: 1-D integration, SD norms with tail certificates, and
// the verification suites.
//
//   sdspace integrate <expr> <a> <b> [--sing x ...] [--tol t]
//   sdspace sdnorm <catalog-name | expr> [--p p] [--m m] [--K K] [--tol t]
//   sdspace verify <suite> [--seed s] [--out path]
//
// Exit codes: 0 ok, 1 usage/parse error, 2 numeric non-convergence,
// 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdspace/catalog.hpp"
#include "sdspace/gauge.hpp"
#include "sdspace/jones.hpp"
#include "sdspace/verify.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

int cmd_integrate(const std::string& expr_text, double a, double b, std::vector<double> sing,
                  double tol) {
    using namespace sdspace;
    ExprPtr e;
    Catalog cat = builtin_catalog();
    if (cat.has(expr_text)) {
        // A bare catalog name brings its declared singular points along.
        const CatalogEntry& entry = cat.at(expr_text);
        if (entry.fn.order() != 1) {
            std::cerr << "integrate: " << expr_text << " is not one-dimensional\n";
            return 1;
        }
        e = entry.fn.expr();
        for (const auto& s : entry.fn.singular_points())
            if (std::find(sing.begin(), sing.end(), s[0]) == sing.end()) sing.push_back(s[0]);
    } else {
        try {
            e = parse_expr(expr_text, 1);
        } catch (const ParseError& err) {
            std::cerr << "parse error: " << err.what() << "\n";
            return 1;
        }
    }
    try {
        auto f = [&](double x) {
            double pt[1] = {x};
            return eval_expr(*e, pt);
        };
        IntegralResult r = hk_integrate(f, a, b, sing, tol);
        std::printf("%.10g +/- %.3g (%s, %ld evaluations)\n", r.value, r.error_estimate,
                    method_name(r.method), r.evaluations);
        return 0;
    } catch (const NonConvergenceError& err) {
        std::cerr << "non-convergence: " << err.what() << "\n";
        return 2;
    } catch (const BudgetExceededError& err) {
        std::cerr << "non-convergence: " << err.what() << " (partial value " << err.partial
                  << ")\n";
        return 2;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}

int cmd_sdnorm(const std::string& what, const sdspace::SDConfig& cfg,
               const std::string& catalog_path) {
    using namespace sdspace;
    Catalog cat = builtin_catalog();
    if (!catalog_path.empty()) {
        try {
            Catalog extra = load_catalog(catalog_path);
            for (const std::string& n : extra.names())
                if (!cat.has(n)) cat.add(extra.at(n));
        } catch (const Error& err) {
            std::cerr << "catalog error: " << err.what() << "\n";
            return 1;
        }
    }

    const TameFunction* fn = nullptr;
    TameFunction parsed(1, exprs::constant(0.0), BoxSet(1, {{{0.0, 1.0}}}));
    bool non_l1 = false;
    if (cat.has(what)) {
        const CatalogEntry& e = cat.at(what);
        fn = &e.fn;
        non_l1 = e.finite_lq.empty();
    } else if (what.find_first_of("(+-*/^x") != std::string::npos) {
        try {
            parsed = TameFunction(1, parse_expr(what, 1), BoxSet(1, {{{0.0, 1.0}}}));
            parsed.set_name("inline");
            fn = &parsed;
        } catch (const ParseError& err) {
            std::cerr << "parse error: " << err.what() << "\n";
            return 1;
        }
    } else {
        std::cerr << "unknown function: " << what << "\n";
        return 1;
    }

    try {
        TestFunctionFamily fam(fn->order());
        SDConfig c = cfg;
        if (!fn->singular_points().empty()) c.quad_tol = std::max(c.quad_tol, 1e-6);
        double norm = sd_norm(fam, *fn, c);
        std::printf("||%s||_SD(p=%g, m=%d, K=%d) = %.10g\n", fn->name().c_str(),
                    c.p == kInf ? -1.0 : c.p, c.m, c.K, norm);
        FunctionalVector v = functional_vector(fam, *fn, c);
        if (v.tail_bound)
            std::printf("tail certificate: discarded weighted sum <= %.3g\n", *v.tail_bound);
        if (non_l1) std::printf("note: non-L1 input; norm computed via HK functionals\n");
        return 0;
    } catch (const NonConvergenceError& err) {
        std::cerr << "non-convergence: " << err.what() << "\n";
        return 2;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}

int cmd_verify(const std::string& suite, const sdspace::SDConfig& cfg, std::uint64_t seed,
               const std::string& out_path) {
    using namespace sdspace;
    Report rep;
    try {
        rep = run_suite(suite, cfg, seed);
    } catch (const DomainError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const NonConvergenceError& err) {
        std::cerr << "non-convergence: " << err.what() << "\n";
        return 2;
    }
    std::string doc = to_jsonl(rep);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open output file: " << out_path << "\n";
            return 1;
        }
        out << doc;
    } else {
        std::cout << doc;
    }
    std::fprintf(stderr, "%d passed, %d failed\n", rep.passed(), rep.failed());
    return rep.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong-distribution space toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    sdspace::SDConfig cfg;
    cfg.quad_tol = 1e-6;
    std::string catalog_path, out_path;
    std::uint64_t seed = 0;

    app.add_option("--p", cfg.p, "norm exponent (use a large value for sup)");
    app.add_option("--m", cfg.m, "derivative order included in the norm");
    app.add_option("--K", cfg.K, "truncation depth");
    app.add_option("--tol", cfg.quad_tol, "integration tolerance");
    app.add_option("--seed", seed, "seed for randomized suites");
    app.add_option("--out", out_path, "report output path");
    app.add_option("--catalog", catalog_path, "extra catalog file");

    std::string expr_text;
    double a = 0.0, b = 1.0;
    std::vector<double> sing;
    auto* integrate = app.add_subcommand("integrate", "HK-integrate an expression over [a,b]");
    integrate->fallthrough();
    integrate->add_option("expr", expr_text)->required();
    integrate->add_option("a", a)->required();
    integrate->add_option("b", b)->required();
    integrate->add_option("--sing", sing, "declared singular points");

    std::string what;
    auto* sdnorm = app.add_subcommand("sdnorm", "SD norm of a catalog entry or expression");
    sdnorm->fallthrough();
    sdnorm->add_option("function", what)->required();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->fallthrough();
    verify->add_option("suite", suite)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (integrate->parsed()) return cmd_integrate(expr_text, a, b, sing, cfg.quad_tol);
    if (sdnorm->parsed()) return cmd_sdnorm(what, cfg, catalog_path);
    if (verify->parsed()) return cmd_verify(suite, cfg, seed, out_path);
    return 1;
}
