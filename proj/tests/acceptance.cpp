// End-to-end gate: runs every verification check at the default seed and
// enforces per-check runtime budgets on top of the pass/fail status.
#include "hodgekit/verify.hpp"

#include <cstdio>
#include <map>
#include <string>
#include <vector>

int main() {
    const std::map<std::string, double> budget_s = {
        {"weight-filtration-axioms", 30.0},
        {"splitting-identities", 10.0},
        {"limit-polarization", 1.0},
        {"schmid-decay", 60.0},
        {"siegel-containment", 300.0},
        {"limit-parabolic", 5.0},
        {"fundamental-overlaps", 60.0},
        {"hecke-degrees", 5.0},
        {"period-evaluations", 5.0},
        {"hodge-locus", 300.0},
        {"orr-covering", 60.0},
    };

    std::vector<hodgekit::CheckResult> results = hodgekit::run_suite("all", 12345);

    int failures = 0;
    if (results.size() != budget_s.size()) {
        std::printf("[FAIL] suite returned %zu checks, expected %zu\n", results.size(),
                    budget_s.size());
        ++failures;
    }
    for (const auto &r : results) {
        bool ok = r.status == "pass";
        auto it = budget_s.find(r.id);
        double budget = it == budget_s.end() ? 0.0 : it->second;
        bool in_budget = it != budget_s.end() && r.runtime_s <= budget;
        if (!in_budget)
            ok = false;
        std::printf("[%s] %-26s measured=%.6g expected=%.6g tol=%.3g (%.2f s / budget %.0f s)\n",
                    ok ? "PASS" : "FAIL", r.id.c_str(), r.measured, r.expected, r.tolerance,
                    r.runtime_s, budget);
        if (!r.detail.empty())
            std::printf("       %s\n", r.detail.c_str());
        if (!ok)
            ++failures;
    }

    std::printf("%d/%zu checks passed\n", (int)results.size() - failures, results.size());
    return failures == 0 ? 0 : 1;
}
