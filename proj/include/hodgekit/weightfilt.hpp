#pragma once

#include "hodgekit/filtration.hpp"

#include <cstdint>
#include <optional>

namespace hodgekit {

struct NilpotentOperator {
    ExactMatrix matrix;
    int index = 0; // smallest e with N^e = 0

    // throws if m is not nilpotent
    static NilpotentOperator from(const ExactMatrix &m);
};

// The unique increasing filtration W centered at `center` with
//   N W_l c W_{l-2}   and   N^l : Gr_{center+l} ~ Gr_{center-l}.
// Built from the closed formula
//   W_{center+l} = sum_{i >= max(0,-l)} ( ker N^{l+i+1}  meet  im N^i )
// and the axioms are re-verified on the result; a violation throws.
Filtration monodromy_filtration(const NilpotentOperator &n, int center);

// check both characterizing axioms of W for N centered at `center`
bool monodromy_axioms_hold(const ExactMatrix &n, int center, const Filtration &w);

// Increasing filtration M with N M_m c M_{m-2} whose induced filtration on
// every w-graded piece Gr^w_l is the monodromy filtration of the induced
// nilpotent centered at l. Returns nullopt when no such M exists.
// Preconditions: w increasing, N preserves w; violations throw.
std::optional<Filtration> relative_weight_filtration(const NilpotentOperator &n, const Filtration &w);

struct ConeSpec {
    std::vector<ExactMatrix> generators;
    // extra positive-coefficient sample points; generators alone are always
    // tried, and random positive samples are drawn when this is empty
    std::vector<std::vector<mpq_class>> sample_coefficients;
};

struct ConeConstancyResult {
    bool constant = false;
    Filtration witness;                       // common filtration when constant
    std::vector<mpq_class> coeffs_a, coeffs_b; // differing cone points otherwise
    Filtration filt_a, filt_b;
};

// Compare monodromy filtrations across positive combinations of the
// generators. Non-nilpotent combinations throw.
ConeConstancyResult cone_constancy_check(const ConeSpec &spec, int center, std::uint64_t seed);

} // namespace hodgekit
