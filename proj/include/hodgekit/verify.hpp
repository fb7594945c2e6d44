#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hodgekit {

// One verification check. `measured` vs `expected` within `tolerance` is the
// headline number; `detail` carries the specifics of what was run.
struct CheckResult {
    std::string id;
    std::string status = "pass"; // pass | fail | skip
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    double runtime_s = 0.0;
    std::string detail;
};

// Exact-arithmetic checks.
CheckResult check_weight_filtration_axioms(std::uint64_t seed);
CheckResult check_splitting_identities(std::uint64_t seed);
CheckResult check_limit_polarization();
CheckResult check_limit_parabolic(std::uint64_t seed);
CheckResult check_fundamental_overlaps();
CheckResult check_hecke_degrees();

// Floating-point checks.
CheckResult check_schmid_decay();
CheckResult check_siegel_containment();
CheckResult check_period_evaluations(std::uint64_t seed);
CheckResult check_hodge_locus(std::uint64_t seed, double tol = 1e-6);
CheckResult check_orr_covering(std::uint64_t seed);

// suite: "exact", "numeric" or "all"; results come back in a fixed order and
// exceptions inside a check are reported as failures rather than propagated.
// locus_tol feeds the relation-residual threshold of the locus scan only.
std::vector<CheckResult> run_suite(const std::string &suite, std::uint64_t seed);
std::vector<CheckResult> run_suite_with_tolerance(const std::string &suite, std::uint64_t seed,
                                                  double locus_tol);

} // namespace hodgekit
