#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgekit/mhs.hpp"
#include "hodgekit/weightfilt.hpp"

#include <random>

using namespace hodgekit;

namespace {

const ExactScalar I = ExactScalar::i_unit();

Subspace line(int n, const std::vector<ExactScalar> &v) { return Subspace::span(n, {v}); }

// rank-2 structure with levels 0 and 2: W_0 = span(e1), F^1 = span(e2 + c e1)
MixedHodge tate2(const ExactScalar &c) {
    MixedHodge m;
    m.w = Filtration::increasing(2, {{0, line(2, {ExactScalar(1), ExactScalar(0)})},
                                     {2, Subspace::full(2)}});
    m.f = Filtration::decreasing(2, {{0, Subspace::full(2)}, {1, line(2, {c, ExactScalar(1)})}});
    return m;
}

// weight-1 rank-2 structure of an elliptic curve at tau = i
MixedHodge pure_elliptic() {
    MixedHodge m;
    m.w = Filtration::increasing(2, {{1, Subspace::full(2)}});
    m.f = Filtration::decreasing(2, {{0, Subspace::full(2)}, {1, line(2, {ExactScalar(1), I})}});
    return m;
}

} // namespace

TEST_CASE("mixed structure validator") {
    CHECK(is_mhs(pure_elliptic()));
    CHECK(is_mhs(tate2(ExactScalar(mpq_class(2, 3)))));
    CHECK(is_mhs(tate2(I)));

    // a real line cannot be a weight-1 Hodge filtration: F meets its conjugate
    MixedHodge bad;
    bad.w = Filtration::increasing(2, {{1, Subspace::full(2)}});
    bad.f = Filtration::decreasing(
        2, {{0, Subspace::full(2)}, {1, line(2, {ExactScalar(1), ExactScalar(0)})}});
    CHECK(!is_mhs(bad));
}

TEST_CASE("bigraded splitting of pure and two-level structures") {
    DeligneSplitting ps = deligne_splitting(pure_elliptic());
    REQUIRE(ps.pieces.size() == 2);
    CHECK(ps.pieces.at({1, 0}) == line(2, {ExactScalar(1), I}));
    CHECK(ps.pieces.at({0, 1}) == line(2, {ExactScalar(1), -I}));
    CHECK(is_r_split(ps));

    ExactScalar c(mpq_class(1, 2), mpq_class(3));
    DeligneSplitting ts = deligne_splitting(tate2(c));
    REQUIRE(ts.pieces.size() == 2);
    CHECK(ts.pieces.at({0, 0}) == line(2, {ExactScalar(1), ExactScalar(0)}));
    CHECK(ts.pieces.at({1, 1}) == line(2, {c, ExactScalar(1)}));

    CHECK(is_r_split(deligne_splitting(tate2(ExactScalar(mpq_class(2, 3))))));
    CHECK(!is_r_split(deligne_splitting(tate2(I))));
}

TEST_CASE("delta correction rotates a two-level structure to its real split") {
    SUBCASE("already split") {
        DeltaSplitResult dr = delta_splitting(tate2(ExactScalar(5)));
        CHECK(dr.delta.is_zero());
        CHECK(dr.rsplit.f == tate2(ExactScalar(5)).f);
    }
    SUBCASE("generic coefficient a + bi") {
        ExactScalar c(mpq_class(1, 2), mpq_class(3));
        DeltaSplitResult dr = delta_splitting(tate2(c));
        // delta sends e2 to b e1 so that exp(-i delta) F has the real slope a
        ExactMatrix expect(2, 2);
        expect.at(0, 1) = ExactScalar(3);
        CHECK(dr.delta == expect);
        CHECK(dr.rsplit.f.at(1) == line(2, {ExactScalar(mpq_class(1, 2)), ExactScalar(1)}));
        CHECK(is_r_split(deligne_splitting(dr.rsplit)));
    }
    SUBCASE("rank 4 with a three-step weight filtration") {
        MixedHodge m;
        m.w = Filtration::increasing(
            4, {{0, line(4, {ExactScalar(0), ExactScalar(1), ExactScalar(0), ExactScalar(0)})},
                {1, Subspace::span(4, {{ExactScalar(0), ExactScalar(1), ExactScalar(0), ExactScalar(0)},
                                       {ExactScalar(0), ExactScalar(0), ExactScalar(1), ExactScalar(0)},
                                       {ExactScalar(0), ExactScalar(0), ExactScalar(0), ExactScalar(1)}})},
                {2, Subspace::full(4)}});
        m.f = Filtration::decreasing(
            4, {{0, Subspace::full(4)},
                {1, Subspace::span(4, {{ExactScalar(1), I, ExactScalar(0), ExactScalar(0)},
                                       {ExactScalar(0), ExactScalar(0), ExactScalar(1), I}})}});
        REQUIRE(is_mhs(m));
        DeltaSplitResult dr = delta_splitting(m);
        CHECK(dr.delta.is_real());
        CHECK(is_r_split(deligne_splitting(dr.rsplit)));
    }
}

TEST_CASE("grading elements act by the level offset") {
    CHECK(grading_element(deligne_splitting(pure_elliptic()), 1) == ExactMatrix(2, 2));

    ExactScalar c(mpq_class(1, 2));
    ExactMatrix g = grading_element(deligne_splitting(tate2(c)), 1);
    ExactMatrix expect = ExactMatrix::from_rows(2, 2, {-1, 1, 0, 1});
    CHECK(g == expect);

    // limit structure of the one-parameter degeneration: full pipeline
    MixedHodge lim;
    lim.w = Filtration::increasing(2, {{0, line(2, {ExactScalar(0), ExactScalar(1)})},
                                       {2, Subspace::full(2)}});
    lim.f = Filtration::decreasing(2, {{0, Subspace::full(2)}, {1, line(2, {ExactScalar(1), I})}});
    DeltaSplitResult dr = delta_splitting(lim);
    CHECK(dr.delta == ExactMatrix::from_rows(2, 2, {0, 0, 1, 0}));
    ExactMatrix y = grading_element(deligne_splitting(dr.rsplit), 1);
    CHECK(y == ExactMatrix::from_rows(2, 2, {1, 0, 0, -1}));
}

TEST_CASE("polarization check on the degenerate and pure ends") {
    ExactMatrix n2 = ExactMatrix::from_rows(2, 2, {0, 0, 2, 0});
    PolarizationForm q{ExactMatrix::from_rows(2, 2, {0, 1, -1, 0}), 1};

    MixedHodge lim;
    lim.w = Filtration::increasing(2, {{0, line(2, {ExactScalar(0), ExactScalar(1)})},
                                       {2, Subspace::full(2)}});
    lim.f = Filtration::decreasing(2, {{0, Subspace::full(2)}, {1, line(2, {ExactScalar(1), I})}});
    CHECK(polarized_mhs_check(lim, n2, q, 1).ok);

    PolarizationForm negq{ExactScalar(-1) * q.q, 1};
    PolarizeReport flipped = polarized_mhs_check(lim, n2, negq, 1);
    CHECK(!flipped.ok);
    CHECK(!flipped.failure.empty());

    // with N = 0 the check reduces to classical polarization of a pure structure
    CHECK(polarized_mhs_check(pure_elliptic(), ExactMatrix(2, 2), q, 1).ok);
    PolarizeReport pure_neg = polarized_mhs_check(pure_elliptic(), ExactMatrix(2, 2), negq, 1);
    CHECK(!pure_neg.ok);
}

TEST_CASE("polarization fails when the weight filtration is not the operator's own") {
    // two-factor sum: W of the full cone, but N of a single factor cannot
    // polarize it (the induced pairing on the top graded piece degenerates)
    ExactMatrix n1(4, 4), nsum(4, 4);
    n1.at(1, 0) = ExactScalar(2);
    nsum = n1;
    nsum.at(3, 2) = ExactScalar(2);
    ExactMatrix q2 = ExactMatrix::from_rows(2, 2, {0, 1, -1, 0});
    ExactMatrix q4(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            q4.at(i, j) = q2.at(i, j);
            q4.at(2 + i, 2 + j) = q2.at(i, j);
        }
    MixedHodge m;
    m.w = monodromy_filtration(NilpotentOperator::from(nsum), 1);
    m.f = Filtration::decreasing(
        4, {{0, Subspace::full(4)},
            {1, Subspace::span(4, {{ExactScalar(1), I, ExactScalar(0), ExactScalar(0)},
                                   {ExactScalar(0), ExactScalar(0), ExactScalar(1), I}})}});
    PolarizationForm q{q4, 1};
    CHECK(polarized_mhs_check(m, nsum, q, 1).ok);
    CHECK(!polarized_mhs_check(m, n1, q, 1).ok);
}

TEST_CASE("sl2 completion solves the bracket system uniquely") {
    ExactMatrix lower = ExactMatrix::from_rows(2, 2, {0, 0, 1, 0});
    ExactMatrix y = ExactMatrix::from_rows(2, 2, {1, 0, 0, -1});
    Sl2Triple t = jacobson_morozov_completion(lower, y);
    CHECK(t.upper == ExactMatrix::from_rows(2, 2, {0, 1, 0, 0}));

    SUBCASE("block diagonal input gives block diagonal completion") {
        ExactMatrix l4(4, 4), y4(4, 4);
        l4.at(1, 0) = ExactScalar(1);
        l4.at(3, 2) = ExactScalar(1);
        y4.at(0, 0) = ExactScalar(1);
        y4.at(1, 1) = ExactScalar(-1);
        y4.at(2, 2) = ExactScalar(1);
        y4.at(3, 3) = ExactScalar(-1);
        Sl2Triple t4 = jacobson_morozov_completion(l4, y4);
        ExactMatrix e4(4, 4);
        e4.at(0, 1) = ExactScalar(1);
        e4.at(2, 3) = ExactScalar(1);
        CHECK(t4.upper == e4);
    }
    SUBCASE("relations hold on a longer string") {
        ExactMatrix l3(3, 3);
        l3.at(1, 0) = ExactScalar(1);
        l3.at(2, 1) = ExactScalar(1);
        ExactMatrix y3(3, 3);
        y3.at(0, 0) = ExactScalar(2);
        y3.at(2, 2) = ExactScalar(-2);
        Sl2Triple t3 = jacobson_morozov_completion(l3, y3);
        CHECK(bracket(y3, l3) == ExactScalar(-2) * l3);
        CHECK(bracket(t3.upper, l3) == y3);
        CHECK(bracket(y3, t3.upper) == ExactScalar(2) * t3.upper);
    }
    SUBCASE("zero grading with nonzero lower is rejected") {
        CHECK_THROWS(jacobson_morozov_completion(lower, ExactMatrix(2, 2)));
    }
}

TEST_CASE("joint gradings split the space by weight tuples") {
    // cumulative gradings of the two-factor degeneration
    ExactMatrix y1(4, 4), y2(4, 4);
    y1.at(0, 0) = ExactScalar(1);
    y1.at(1, 1) = ExactScalar(-1);
    y2.at(0, 0) = ExactScalar(1);
    y2.at(1, 1) = ExactScalar(-1);
    y2.at(2, 2) = ExactScalar(1);
    y2.at(3, 3) = ExactScalar(-1);
    Multigrading mg = commuting_multigrading({y1, y2}, 1);
    REQUIRE(mg.summands.size() == 4);
    auto tuple_of = [&](int coord) {
        std::vector<ExactScalar> e(4);
        e[coord] = ExactScalar(1);
        for (const auto &kv : mg.summands)
            if (kv.second.contains(e))
                return kv.first;
        return std::vector<int>{};
    };
    CHECK(tuple_of(0) == std::vector<int>{2, 2});
    CHECK(tuple_of(1) == std::vector<int>{0, 0});
    CHECK(tuple_of(2) == std::vector<int>{1, 2});
    CHECK(tuple_of(3) == std::vector<int>{1, 0});

    CHECK_THROWS(commuting_multigrading(
        {y1, ExactMatrix::from_rows(4, 4, {0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1})}, 1));
    CHECK_THROWS(commuting_multigrading({ExactMatrix::from_rows(2, 2, {1, 1, 0, 1})}, 0));

    std::vector<ExactMatrix> inc = grading_increments({y1, y2});
    CHECK(inc.size() == 2);
    CHECK(inc[0] == y1);
    CHECK(inc[0] + inc[1] == y2);
}

TEST_CASE("joint-kernel projection keeps exactly the commuting part") {
    ExactMatrix y = ExactMatrix::from_rows(2, 2, {1, 0, 0, -1});
    ExactMatrix lowering = ExactMatrix::from_rows(2, 2, {0, 0, 1, 0}); // ad-weight -2
    ExactMatrix diag = ExactMatrix::from_rows(2, 2, {2, 0, 0, 3});     // ad-weight 0

    CHECK(project_to_joint_kernel(lowering, {y}).is_zero());
    CHECK(project_to_joint_kernel(diag, {y}) == diag);
    ExactMatrix mixed = lowering + diag;
    ExactMatrix proj = project_to_joint_kernel(mixed, {y});
    CHECK(proj == diag);
    CHECK(project_to_joint_kernel(proj, {y}) == proj);
    CHECK(bracket(y, proj).is_zero());
}

TEST_CASE("nilpotent exponential and filtration transport") {
    ExactMatrix n3(3, 3);
    n3.at(1, 0) = ExactScalar(1);
    n3.at(2, 1) = ExactScalar(1);
    ExactMatrix en = exp_nilpotent(n3);
    CHECK(en.at(1, 0) == ExactScalar(1));
    CHECK(en.at(2, 0) == ExactScalar(mpq_class(1, 2)));
    CHECK(en * exp_nilpotent(ExactScalar(-1) * n3) == ExactMatrix::identity(3));

    Filtration f = Filtration::decreasing(
        3, {{0, Subspace::full(3)},
            {1, Subspace::span(3, {{ExactScalar(1), I, ExactScalar(0)},
                                   {ExactScalar(0), ExactScalar(1), I}})},
            {2, line(3, {ExactScalar(1), I, ExactScalar(0)})}});
    Filtration moved = transport_filtration(en, f);
    CHECK(moved != f);
    CHECK(transport_filtration(exp_nilpotent(ExactScalar(-1) * n3), moved) == f);
    CHECK(transport_filtration(ExactMatrix::identity(3), f) == f);
}
