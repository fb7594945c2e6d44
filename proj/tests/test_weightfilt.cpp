#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgekit/weightfilt.hpp"

#include <random>

using namespace hodgekit;

namespace {

ExactMatrix jordan(int n) { // e1 -> e2 -> ... -> en -> 0
    ExactMatrix m(n, n);
    for (int i = 0; i + 1 < n; ++i)
        m.at(i + 1, i) = ExactScalar(1);
    return m;
}

ExactMatrix block_diag(const ExactMatrix &a, const ExactMatrix &b) {
    ExactMatrix m(a.rows + b.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            m.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j)
            m.at(a.rows + i, a.cols + j) = b.at(i, j);
    return m;
}

ExactMatrix random_unit_triangular(std::mt19937_64 &rng, int n, bool upper) {
    ExactMatrix m = ExactMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 2)
                (upper ? m.at(i, j) : m.at(j, i)) = ExactScalar(long(rng() % 5) - 2);
    return m;
}

ExactMatrix random_nilpotent(std::mt19937_64 &rng, int n) {
    ExactMatrix u(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 2)
                u.at(i, j) = ExactScalar(long(rng() % 5) - 2);
    ExactMatrix p = random_unit_triangular(rng, n, false) * random_unit_triangular(rng, n, true);
    return p * u * inverse(p);
}

} // namespace

TEST_CASE("weight filtration of the zero operator is a single jump") {
    ExactMatrix z(3, 3);
    Filtration w = monodromy_filtration(NilpotentOperator::from(z), 5);
    CHECK(w.steps.size() == 1);
    CHECK(w.at(5).is_full());
    CHECK(w.at(4).is_zero());
}

TEST_CASE("weight filtration of Jordan blocks") {
    SUBCASE("2x2, center 0") {
        ExactMatrix n = jordan(2);
        Filtration w = monodromy_filtration(NilpotentOperator::from(n), 0);
        CHECK(w.at(-2).is_zero());
        CHECK(w.at(-1) == image(n));
        CHECK(w.at(0) == image(n));
        CHECK(w.at(1).is_full());
    }
    SUBCASE("3x3, center 0") {
        ExactMatrix n = jordan(3);
        Filtration w = monodromy_filtration(NilpotentOperator::from(n), 0);
        CHECK(w.at(-3).is_zero());
        CHECK(w.at(-2) == image(mat_pow(n, 2)));
        CHECK(w.at(-1) == image(mat_pow(n, 2)));
        CHECK(w.at(0) == image(n));
        CHECK(w.at(1) == image(n));
        CHECK(w.at(2).is_full());
    }
}

TEST_CASE("axioms, scaling invariance and center shift on random nilpotents") {
    std::mt19937_64 rng(101);
    for (int k = 0; k < 60; ++k) {
        int n = 2 + int(rng() % 5);
        ExactMatrix nm = random_nilpotent(rng, n);
        NilpotentOperator op = NilpotentOperator::from(nm);
        int center = int(rng() % 5) - 2;
        Filtration w = monodromy_filtration(op, center);
        CHECK(monodromy_axioms_hold(nm, center, w));

        ExactMatrix scaled = ExactScalar(mpq_class(3, 7)) * nm;
        CHECK(monodromy_filtration(NilpotentOperator::from(scaled), center) == w);
        CHECK(monodromy_filtration(op, 0).shifted(center) == w);
    }
}

TEST_CASE("weight filtration of a direct sum is the sum of the filtrations") {
    std::mt19937_64 rng(103);
    for (int k = 0; k < 20; ++k) {
        int n1 = 2 + int(rng() % 2), n2 = 2 + int(rng() % 2);
        ExactMatrix a = random_nilpotent(rng, n1), b = random_nilpotent(rng, n2);
        ExactMatrix ab = block_diag(a, b);
        Filtration wa = monodromy_filtration(NilpotentOperator::from(a), 0);
        Filtration wb = monodromy_filtration(NilpotentOperator::from(b), 0);
        Filtration wab = monodromy_filtration(NilpotentOperator::from(ab), 0);
        for (int l = -4; l <= 4; ++l) {
            Subspace sa = wa.at(l), sb = wb.at(l);
            ExactMatrix joint(n1 + n2, sa.dim() + sb.dim());
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < sa.dim(); ++j)
                    joint.at(i, j) = sa.basis.at(i, j);
            for (int i = 0; i < n2; ++i)
                for (int j = 0; j < sb.dim(); ++j)
                    joint.at(n1 + i, sa.dim() + j) = sb.basis.at(i, j);
            CHECK(wab.at(l) == Subspace::span_cols(joint));
        }
    }
}

TEST_CASE("non-nilpotent input is rejected") {
    CHECK_THROWS(NilpotentOperator::from(ExactMatrix::identity(2)));
    CHECK_THROWS(NilpotentOperator::from(ExactMatrix::from_rows(2, 2, {0, 1, 1, 0})));
}

TEST_CASE("relative filtration with a single-jump base is the plain one") {
    std::mt19937_64 rng(107);
    for (int k = 0; k < 20; ++k) {
        int n = 2 + int(rng() % 4);
        ExactMatrix nm = random_nilpotent(rng, n);
        int c = int(rng() % 5) - 2;
        Filtration triv = Filtration::increasing(n, {{c, Subspace::full(n)}});
        auto rel = relative_weight_filtration(NilpotentOperator::from(nm), triv);
        REQUIRE(rel.has_value());
        CHECK(*rel == monodromy_filtration(NilpotentOperator::from(nm), c));
    }
}

TEST_CASE("relative filtration of the zero operator is the base") {
    int n = 4;
    ExactMatrix nm = block_diag(ExactMatrix(2, 2), jordan(2));
    Filtration w = monodromy_filtration(NilpotentOperator::from(nm), 1);
    auto rel = relative_weight_filtration(NilpotentOperator::from(ExactMatrix(n, n)), w);
    REQUIRE(rel.has_value());
    CHECK(*rel == w);
}

TEST_CASE("relative filtration across a two-block sum") {
    // n acts on the first plane, the base filtration comes from the second
    ExactMatrix n1 = block_diag(jordan(2), ExactMatrix(2, 2));
    ExactMatrix n2 = block_diag(ExactMatrix(2, 2), jordan(2));
    Filtration w = monodromy_filtration(NilpotentOperator::from(n2), 1);
    auto rel = relative_weight_filtration(NilpotentOperator::from(n1), w);
    REQUIRE(rel.has_value());

    // the relative filtration must agree with the one of the sum of the two
    // commuting operators
    Filtration wsum = monodromy_filtration(NilpotentOperator::from(n1 + n2), 1);
    CHECK(*rel == wsum);

    // and its defining axioms hold: n lowers by 2, and the induced filtration
    // on each graded piece of w is the centered one of the induced operator
    CHECK(preserves_filtration(n1, *rel, -2));
    for (const auto &step : w.steps) {
        int l = step.first;
        GradedPiece g = graded_piece(w, l);
        ExactMatrix ind = graded_map(g, g, n1);
        Filtration gw = monodromy_filtration(NilpotentOperator::from(ind), l);
        for (const auto &mstep : rel->steps) {
            Subspace got = graded_subspace(g, w, mstep.second);
            CHECK(got == gw.at(mstep.first));
        }
    }
}

TEST_CASE("relative filtration can fail to exist") {
    // n kills the graded pieces of w but moves across them irreducibly
    int n = 2;
    ExactMatrix nm(n, n);
    nm.at(0, 1) = ExactScalar(1); // e2 -> e1
    Filtration w = Filtration::increasing(
        n, {{0, Subspace::span(n, {{ExactScalar(1), ExactScalar(0)}})}, {1, Subspace::full(n)}});
    auto rel = relative_weight_filtration(NilpotentOperator::from(nm), w);
    CHECK(!rel.has_value());
}

TEST_CASE("relative filtration rejects operators that break the base") {
    ExactMatrix nm(2, 2);
    nm.at(1, 0) = ExactScalar(1); // e1 -> e2 leaves W_0 = span(e1)
    Filtration w = Filtration::increasing(
        2, {{0, Subspace::span(2, {{ExactScalar(1), ExactScalar(0)}})}, {1, Subspace::full(2)}});
    CHECK_THROWS(relative_weight_filtration(NilpotentOperator::from(nm), w));
}

TEST_CASE("cone constancy holds for a single generator and its multiples") {
    ConeSpec spec;
    spec.generators = {jordan(3)};
    ConeConstancyResult r = cone_constancy_check(spec, 0, 1);
    CHECK(r.constant);
    CHECK(r.witness == monodromy_filtration(NilpotentOperator::from(jordan(3)), 0));

    ConeSpec two;
    two.generators = {jordan(3), ExactScalar(2) * jordan(3)};
    CHECK(cone_constancy_check(two, 0, 2).constant);
}

TEST_CASE("cone constancy holds when every generator already has full rank drop") {
    // both generators act as rank-2 nilpotents on each combination, so the
    // filtration agrees at the generators and everywhere inside
    ConeSpec spec;
    spec.generators = {block_diag(jordan(2), jordan(2)),
                       block_diag(jordan(2), ExactScalar(2) * jordan(2))};
    ConeConstancyResult r = cone_constancy_check(spec, 1, 3);
    CHECK(r.constant);
    CHECK(r.witness ==
          monodromy_filtration(NilpotentOperator::from(block_diag(jordan(2), jordan(2))), 1));
}

TEST_CASE("cone constancy is a closed-cone check: faces count") {
    // on the boundary of the cone spanned by J2+0 and 0+J2 the filtration
    // differs from the interior one, and the generators are sampled
    ConeSpec spec;
    spec.generators = {block_diag(jordan(2), ExactMatrix(2, 2)),
                       block_diag(ExactMatrix(2, 2), jordan(2))};
    ConeConstancyResult r = cone_constancy_check(spec, 1, 3);
    CHECK(!r.constant);
    CHECK(r.filt_a != r.filt_b);
    auto combine = [&](const std::vector<mpq_class> &cs) {
        return ExactScalar(cs[0]) * spec.generators[0] + ExactScalar(cs[1]) * spec.generators[1];
    };
    CHECK(monodromy_filtration(NilpotentOperator::from(combine(r.coeffs_a)), 1) == r.filt_a);
    CHECK(monodromy_filtration(NilpotentOperator::from(combine(r.coeffs_b)), 1) == r.filt_b);
}

TEST_CASE("cone constancy fails for generic upper-triangular generators") {
    // both generators are strictly upper triangular, so the whole cone stays
    // nilpotent, but the filtration jumps around
    int n = 4;
    ExactMatrix a(n, n), b(n, n);
    a.at(0, 1) = ExactScalar(1);                            // e2 -> e1
    b.at(0, 2) = ExactScalar(1);                            // e3 -> e1
    b.at(1, 3) = ExactScalar(1);                            // e4 -> e2
    ConeSpec spec;
    spec.generators = {a, b};
    ConeConstancyResult r = cone_constancy_check(spec, 0, 5);
    CHECK(!r.constant);
    CHECK(r.filt_a != r.filt_b);

    // the reported counterexample pair must reproduce from its coefficients
    auto combine = [&](const std::vector<mpq_class> &cs) {
        ExactMatrix m(n, n);
        m = ExactScalar(cs[0]) * a + ExactScalar(cs[1]) * b;
        return m;
    };
    CHECK(monodromy_filtration(NilpotentOperator::from(combine(r.coeffs_a)), 0) == r.filt_a);
    CHECK(monodromy_filtration(NilpotentOperator::from(combine(r.coeffs_b)), 0) == r.filt_b);
}
