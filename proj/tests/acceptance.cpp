// Acceptance gate: one pass/fail line per criterion. Takes the CLI binary
// path as argv[1] (needed for the end-to-end and determinism criteria).
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sdspace/catalog.hpp"
#include "sdspace/gauge.hpp"
#include "sdspace/jones.hpp"
#include "sdspace/variation.hpp"
#include "sdspace/verify.hpp"

using namespace sdspace;
namespace chrono = std::chrono;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

double now_seconds(const chrono::steady_clock::time_point& t0) {
    return chrono::duration<double>(chrono::steady_clock::now() - t0).count();
}

std::string run_capture(const std::string& cmd, int& exit_code) {
    std::string out;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) {
        exit_code = -1;
        return out;
    }
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    exit_code = pclose(p);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool suite_green(const std::string& name, const SDConfig& cfg, std::uint64_t seed,
                 std::string& detail) {
    Report r = run_suite(name, cfg, seed);
    detail = std::to_string(r.passed()) + "/" + std::to_string((int)r.entries.size()) + " checks";
    return r.all_passed() && !r.entries.empty();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <cli-binary>\n");
        return 127;
    }
    const std::string cli = argv[1];
    SDConfig cfg;  // p=2, m=0, K=30, quad_tol=1e-9

    // 1. Non-absolute HK integration end to end: value, budget, and the
    //    failed absolute-integrability probe.
    {
        auto t0 = chrono::steady_clock::now();
        int code = 0;
        std::string out = run_capture(cli + " integrate hk_osc 0 1 --tol 1e-6", code);
        double secs = now_seconds(t0);
        double value = std::strtod(out.c_str(), nullptr);
        bool value_ok = code == 0 && std::fabs(value - std::sin(1.0)) <= 1e-6;
        auto probe = abs_integrability_probe([](double x) { return hk_osc_value(x); }, 0, 1, {0.0});
        char d[160];
        std::snprintf(d, sizeof d, "value %.9f (sin 1 = %.9f), %.2fs, |f| probe %s", value,
                      std::sin(1.0), secs, probe.diverged ? "diverged" : "converged");
        report(1, "hk integration", value_ok && secs < 5.0 && probe.diverged, d);
    }

    // 2. The HK catalog sits inside SD^2 with the variation bound.
    {
        auto t0 = chrono::steady_clock::now();
        SDConfig c = cfg;
        c.quad_tol = 1e-4;
        TestFunctionFamily fam(1);
        CheckResult r = hk_in_sd_check(fam, builtin_catalog().at("hk_osc").fn, c);
        double secs = now_seconds(t0);
        char d[160];
        std::snprintf(d, sizeof d, "lhs %.6g <= rhs %.6g, %.1fs", r.lhs, r.rhs, secs);
        report(2, "hk inside sd2", r.pass && std::isfinite(r.lhs) && r.slack >= 0.0 && secs < 60.0,
               d);
    }

    // 3. Embedding constant 1 across the catalog and q in {1, 2, inf}.
    {
        std::string d;
        bool ok = suite_green("embedding", cfg, 0, d);
        report(3, "embedding constant", ok, d);
    }

    // 4. sin(jx) on [0,pi]: constant L^2 norms, decaying SD norms.
    {
        SDConfig c = cfg;
        WeakStrongResult r = weak_strong_demo(64, c);
        double l2_ref = std::sqrt(std::numbers::pi / 2.0);
        bool l2_ok = true;
        for (double v : r.l2_norms) l2_ok = l2_ok && std::fabs(v - l2_ref) <= 1e-8;
        bool strictly_decreasing = true;
        for (std::size_t i = 1; i < r.sd_norms.size(); ++i)
            strictly_decreasing = strictly_decreasing && r.sd_norms[i] < r.sd_norms[i - 1];
        double ratio = r.sd_norms.back() / r.sd_norms.front();
        std::string d = "sd norms";
        for (double v : r.sd_norms) {
            char b[16];
            std::snprintf(b, sizeof b, " %.4f", v);
            d += b;
        }
        char b[64];
        std::snprintf(b, sizeof b, "; ratio %.3f, L2 %s", ratio, l2_ok ? "const" : "drifts");
        d += b;
        report(4, "compactness contrast", l2_ok && strictly_decreasing && ratio < 0.1, d);
    }

    // 5. Duality map identity L_g(g) = ||g||^2.
    {
        std::string d;
        bool ok = suite_green("duality", cfg, 42, d);
        report(5, "duality map", ok, d);
    }

    // 6. Clarkson inequality and the p = 2 parallelogram law.
    {
        std::string d;
        bool ok = suite_green("clarkson", cfg, 42, d);
        report(6, "uniform convexity", ok, d);
    }

    // 7. Integration by parts against the test bumps.
    {
        std::string d;
        bool ok = suite_green("pairing", cfg, 0, d);
        report(7, "integration by parts", ok, d);
    }

    // 8. Measure algebra on 1000 random configurations + promote integrals.
    {
        std::string d;
        bool ok = suite_green("measure", cfg, 42, d);
        report(8, "measure consistency", ok, d);
    }

    // 9. Kuelbs toy embedding: H norm below B norm.
    {
        std::string d;
        bool ok = suite_green("kuelbs", cfg, 42, d);
        report(9, "kuelbs embedding", ok, d);
    }

    // 10. Tail certificates: truncating at K=10 plus the certified tail
    //     dominates the K=30 value.
    {
        TestFunctionFamily fam(1);
        SDConfig c10 = cfg, c30 = cfg;
        c10.K = 10;
        c30.K = 30;
        c10.quad_tol = c30.quad_tol = 1e-10;
        Catalog cat = builtin_catalog();
        int checked = 0, bad = 0;
        for (const std::string& name : cat.names()) {
            const CatalogEntry& e = cat.at(name);
            if (e.fn.order() != 1 || !e.fn.sup_norm() || !e.fn.singular_points().empty())
                continue;
            FunctionalVector v10 = functional_vector(fam, e.fn, c10);
            FunctionalVector v30 = functional_vector(fam, e.fn, c30);
            if (!v10.tail_bound) continue;
            ++checked;
            double n10 = norm_from_vector(v10.values, 2.0);
            double n30 = norm_from_vector(v30.values, 2.0);
            if (n10 * n10 + *v10.tail_bound < n30 * n30 - 1e-12) ++bad;
        }
        char d[96];
        std::snprintf(d, sizeof d, "%d certified runs, %d violations", checked, bad);
        report(10, "tail certificates", checked >= 8 && bad == 0, d);
    }

    // 11. Partition soundness under the independent fineness re-check.
    {
        std::mt19937_64 eng(123);
        auto uni = [&](double lo, double hi) {
            return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
        };
        int bad = 0;
        for (int trial = 0; trial < 50; ++trial) {
            double a = uni(-3, 0), b = uni(0.5, 4);
            double base = uni(0.005, 0.6), focus = uni(a, b);
            Gauge g{[base, focus](double t) {
                return base * std::min(1.0, 0.02 + std::fabs(t - focus));
            }};
            GaugePartition p = build_delta_fine_partition(g, a, b);
            if (!check_delta_fine(p, g, a, b)) ++bad;
        }
        char d[64];
        std::snprintf(d, sizeof d, "50 random gauges, %d violations", bad);
        report(11, "partition soundness", bad == 0, d);
    }

    // 12. Byte-identical reports for a fixed seed.
    {
        std::string p1 = "acceptance_report_1.jsonl", p2 = "acceptance_report_2.jsonl";
        int c1 = 0, c2 = 0;
        run_capture(cli + " verify all --seed 42 --out " + p1, c1);
        run_capture(cli + " verify all --seed 42 --out " + p2, c2);
        std::string r1 = read_file(p1), r2 = read_file(p2);
        bool ok = !r1.empty() && r1 == r2;
        char d[96];
        std::snprintf(d, sizeof d, "%zu bytes, %s", r1.size(), ok ? "identical" : "mismatch");
        report(12, "report determinism", ok, d);
        std::remove(p1.c_str());
        std::remove(p2.c_str());
    }

    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures;
}
