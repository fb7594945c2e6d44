#pragma once

#include "hodgekit/exact.hpp"

#include <optional>

namespace hodgekit {

// Row-reduce m in place to reduced row echelon form; returns pivot columns.
std::vector<int> rref(ExactMatrix &m);

// Subspace of Q(i)^ambient in a canonical representation: basis columns are
// the nonzero rows of the RREF of any spanning set, so two subspaces are equal
// iff their representations are identical.
struct Subspace {
    int ambient = 0;
    ExactMatrix basis; // ambient x dim; dim == 0 allowed

    static Subspace zero(int ambient);
    static Subspace full(int ambient);
    // columns of m are spanning vectors
    static Subspace span_cols(const ExactMatrix &m);
    static Subspace span(int ambient, const std::vector<std::vector<ExactScalar>> &vectors);

    int dim() const { return basis.cols; }
    bool is_zero() const { return basis.cols == 0; }
    bool is_full() const { return basis.cols == ambient; }

    bool contains(const std::vector<ExactScalar> &v) const;
    bool contains(const Subspace &other) const;
    // coordinates of v in this basis, if v lies in the subspace
    std::optional<std::vector<ExactScalar>> coordinates(const std::vector<ExactScalar> &v) const;

    Subspace conj() const;

    friend bool operator==(const Subspace &a, const Subspace &b) {
        return a.ambient == b.ambient && a.basis == b.basis;
    }
    friend bool operator!=(const Subspace &a, const Subspace &b) { return !(a == b); }
};

Subspace sum(const Subspace &a, const Subspace &b);
Subspace intersect(const Subspace &a, const Subspace &b);

// null space of m
Subspace kernel(const ExactMatrix &m);
// column span of m
Subspace image(const ExactMatrix &m);
// one solution of m x = b, if any
std::optional<std::vector<ExactScalar>> solve(const ExactMatrix &m, const std::vector<ExactScalar> &b);
// inverse of a square matrix; throws on singular input
ExactMatrix inverse(const ExactMatrix &m);
ExactScalar determinant(ExactMatrix m);

// image of a subspace under an operator
Subspace apply(const ExactMatrix &op, const Subspace &s);
// preimage {v : op v in s}
Subspace preimage(const ExactMatrix &op, const Subspace &s);

// rows f with f * basis == 0, returned as a (codim x ambient) matrix; stacking
// these gives linear conditions cutting out the subspace
ExactMatrix annihilator_rows(const Subspace &s);

} // namespace hodgekit
