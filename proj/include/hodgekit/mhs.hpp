#pragma once

#include "hodgekit/filtration.hpp"

#include <map>

namespace hodgekit {

// Pair (W, F): W increasing with real (rational) steps, F decreasing over Q(i).
struct MixedHodge {
    Filtration w;
    Filtration f;
};

struct DeligneSplitting {
    int ambient = 0;
    std::map<std::pair<int, int>, Subspace> pieces; // (p,q) -> I^{p,q}, nonzero only
};

struct Sl2Triple {
    ExactMatrix lower;   // N
    ExactMatrix grading; // Y with [Y, N] = -2N
    ExactMatrix upper;   // N+ with [N+, N] = Y, [Y, N+] = 2 N+
};

struct Multigrading {
    int ambient = 0;
    int center = 0;
    std::map<std::vector<int>, Subspace> summands; // weight tuple -> joint eigenspace
};

// Bilinear form u^T q v of fixed symmetry (-1)^weight; conjugation is applied
// by callers where needed.
struct PolarizationForm {
    ExactMatrix q;
    int weight = 0;
};

// Is (W, F) a mixed Hodge structure: does F induce a pure structure of weight
// l on every Gr^W_l.
bool is_mhs(const MixedHodge &m);

// The unique bigrading with I^{p,q} = F^p meet W_{p+q} meet
// (conj F^q meet W_{p+q} + sum_{j>=1} conj F^{q-j} meet W_{p+q-j-1});
// verified to refine both filtrations before returning.
DeligneSplitting deligne_splitting(const MixedHodge &m);

bool is_r_split(const DeligneSplitting &s);

struct DeltaSplitResult {
    ExactMatrix delta;  // real, commutes into strictly lower bidegrees
    MixedHodge rsplit;  // (W, exp(-i delta) F), an R-split pair
};

// Rotate (W, F) to an R-split pair by a real nilpotent delta acting on
// bidegrees (r,s) with r < p, s < q.
DeltaSplitResult delta_splitting(const MixedHodge &m);

// Semisimple element acting on I^{p,q} by (p+q) - center.
ExactMatrix grading_element(const DeligneSplitting &s, int center);

// exp(A) for nilpotent A (exact, terminates)
ExactMatrix exp_nilpotent(const ExactMatrix &a);
// filtration with steps exp(A) F^p
Filtration transport_filtration(const ExactMatrix &g, const Filtration &f);

// Checks that (W, F) with nilpotent n and form q is a polarized mixed Hodge
// structure of central weight k: n and q compatibilities plus positivity of
// the induced hermitian forms on primitive graded pieces.
struct PolarizeReport {
    bool ok = false;
    std::string failure; // empty when ok
};
PolarizeReport polarized_mhs_check(const MixedHodge &m, const ExactMatrix &n,
                                   const PolarizationForm &q, int center);

// Complete (lower, grading) to an sl2 triple; the completion is unique and a
// failure of the preconditions throws.
Sl2Triple jacobson_morozov_completion(const ExactMatrix &lower, const ExactMatrix &grading);

// Joint integer eigenspace decomposition of commuting semisimple gradings;
// tuples are reported as center + eigenvalue.
Multigrading commuting_multigrading(const std::vector<ExactMatrix> &gradings, int center);

// Differences of consecutive cumulative gradings.
std::vector<ExactMatrix> grading_increments(const std::vector<ExactMatrix> &cumulative);

// Compression sum_m P_m op P_m along the joint eigenspace projectors; the
// result commutes with every grading.
ExactMatrix project_to_joint_kernel(const ExactMatrix &op, const std::vector<ExactMatrix> &gradings);

} // namespace hodgekit
