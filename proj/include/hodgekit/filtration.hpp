#pragma once

#include "hodgekit/subspace.hpp"

namespace hodgekit {

enum class FiltDirection { inc, dec };

// Finite exhaustive filtration, stored by jump weights only.
//  inc: W_l with W_l = 0 below the first jump and W_l = V from the last jump up
//  dec: F^p with F^p = V at the first jump and below, F^p = 0 above the last jump
// Steps are strictly nested between consecutive jumps; two filtrations are
// equal iff their canonical representations coincide.
struct Filtration {
    int ambient = 0;
    FiltDirection direction = FiltDirection::inc;
    std::vector<std::pair<int, Subspace>> steps; // ascending weight

    // Normalizing constructors: sort, drop repeated subspaces (keeping the
    // jump weight per direction), validate nesting and exhaustiveness.
    static Filtration increasing(int ambient, std::vector<std::pair<int, Subspace>> raw);
    static Filtration decreasing(int ambient, std::vector<std::pair<int, Subspace>> raw);

    Subspace at(int w) const;
    int lowest_jump() const;
    int highest_jump() const;

    Filtration conj() const;
    // shift all weights by d
    Filtration shifted(int d) const;

    friend bool operator==(const Filtration &a, const Filtration &b) {
        return a.ambient == b.ambient && a.direction == b.direction && a.steps == b.steps;
    }
    friend bool operator!=(const Filtration &a, const Filtration &b) { return !(a == b); }
};

// does op map w-step l into l+shift for every l
bool preserves_filtration(const ExactMatrix &op, const Filtration &w, int shift);

// W on End(V) induced by an increasing W on V:
//   W_m End = { X : X W_l c W_{l+m} for all l }
Filtration induced_filtration_on_end(const Filtration &w);

// Graded piece helpers for an increasing filtration.
struct GradedPiece {
    int weight = 0;
    ExactMatrix reps;    // ambient x dim, representatives completing W_{l-1} inside W_l
    Subspace lower;      // W_{l-1}
};
GradedPiece graded_piece(const Filtration &w, int l);
// coordinates of v (assumed in W_l) with respect to the representatives, i.e.
// the class of v in the graded piece
std::vector<ExactScalar> graded_coordinates(const GradedPiece &g, const std::vector<ExactScalar> &v);
// subspace of the graded piece spanned by classes of vectors of s (s need not
// lie in W_l; it is intersected with W_l first)
Subspace graded_subspace(const GradedPiece &g, const Filtration &w, const Subspace &s);
// matrix of the map Gr_l -> Gr_m induced by op (requires op W_l c W_m)
ExactMatrix graded_map(const GradedPiece &from, const GradedPiece &to, const ExactMatrix &op);

} // namespace hodgekit
