// Runs acceptance criteria 1-11 and prints one PASS/FAIL line per criterion.
#include <cstdio>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "heyde/verify.hpp"

using namespace heyde;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::vector<std::pair<std::string, verify::SuiteFn>> suites;
    double budget_seconds;  // 0 = no stated budget
};

struct Outcome {
    bool passed = true;
    double seconds = 0.0;
    std::vector<std::string> lines;
};

Outcome run(const Criterion& c, const verify::VerifyOptions& opts) {
    Outcome o;
    for (const auto& [name, fn] : c.suites) {
        const verify::SuiteResult r = verify::run_suite(name, fn, opts);
        o.passed = o.passed && r.passed;
        o.seconds += r.seconds;
        o.lines.push_back(name + ": " + r.summary);
        for (const auto& f : r.failures) o.lines.push_back("  failure: " + f);
    }
    if (c.budget_seconds > 0 && o.seconds >= c.budget_seconds) {
        o.passed = false;
        o.lines.push_back("  failure: runtime above budget");
    }
    return o;
}

std::pair<std::string, verify::SuiteFn> suite(const std::string& name) { return {name, *verify::find_suite(name)}; }

}  // namespace

int main() {
    verify::VerifyOptions opts;
    opts.search.threads = std::max(1u, std::thread::hardware_concurrency());

    const std::vector<Criterion> criteria = {
        {1, "exact symmetry agrees with the characteristic-function equation on >= 1000 instances", {suite("lemma1")}, 60},
        {2, "alpha = -I: equal laws are symmetric, symmetric grid hits on odd order have equal laws", {suite("corollary1")}, 30},
        {3, "symmetric instances give independent M1, M2; the independence equation agrees", {suite("lemma5"), suite("lemma8")}, 0},
        {4, "kernel construction on Z9, alpha = 5 is symmetric and not idempotent", {{"necessity", verify::necessity}}, 1},
        {5, "grid scans with invertible I + alpha on odd order find no non-idempotent symmetric pair", {suite("theoremB")}, 300},
        {6, "Haar pair on Z15 classified (K, 0); Haar pair on Z9, alpha = 4 asymmetric", {{"idempotent-witness", verify::idempotent_witness}}, 1},
        {7, "finite-difference chain residuals below 1e-8 and P = 0 under a trivial kernel", {suite("chain16"), suite("chain10")}, 120},
        {8, "quadratic functions vanish on finite groups; Gaussian iff degenerate", {suite("quadratic")}, 30},
        {9, "canonicalization keeps the verdict and reports the brute-force kernel", {suite("corollary3")}, 30},
        {10, "finite-level scans on Z27 and Z8", {suite("theoremC-finite")}, 120},
        {11, "Monte Carlo joint frequencies within 4 sqrt(|support|/count) of the exact joint", {suite("montecarlo")}, 120},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const Outcome o = run(c, opts);
        failed += !o.passed;
        char budget[48] = "no budget";
        if (c.budget_seconds > 0) std::snprintf(budget, sizeof budget, "budget %.0fs", c.budget_seconds);
        std::printf("%s criterion %d: %s [%.2fs, %s]\n", o.passed ? "PASS" : "FAIL", c.number, c.title.c_str(),
                    o.seconds, budget);
        for (const auto& l : o.lines) std::printf("    %s\n", l.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
