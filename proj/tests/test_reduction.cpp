#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgekit/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace hodgekit;

namespace {

RealMatrix diag2(double a, double b) {
    RealMatrix m(2);
    m.at(0, 0) = a;
    m.at(1, 1) = b;
    return m;
}

RealMatrix diag_of(const std::vector<double> &a) {
    RealMatrix m((int)a.size());
    for (size_t i = 0; i < a.size(); ++i)
        m.at((int)i, (int)i) = a[i];
    return m;
}

// random special-linear matrix with entries in [-10, 10], rescaled to det 1
RealMatrix random_sl(std::mt19937_64 &rng, int n) {
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    for (;;) {
        RealMatrix g(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g.at(i, j) = entry(rng);
        double d = g.det();
        if (std::fabs(d) < 0.5)
            continue;
        if (d < 0) {
            for (int j = 0; j < n; ++j)
                g.at(0, j) = -g.at(0, j);
            d = -d;
        }
        double s = std::pow(d, -1.0 / n);
        for (double &v : g.a)
            v *= s;
        return g;
    }
}

std::complex<double> as_complex(const HPoint &z) { return {z.x, z.y}; }

IntMat2 inv2(const IntMat2 &g) { return IntMat2{g.d, -g.b, -g.c, g.a}; }

// random word in the two standard generators, entries kept below the bound
IntMat2 random_gamma(std::mt19937_64 &rng, long long height) {
    IntMat2 g;
    for (int step = 0; step < 12; ++step) {
        IntMat2 next = g;
        if (rng() % 2) {
            long long k = (long long)(rng() % 3) + 1;
            if (rng() % 2)
                k = -k;
            next = next * IntMat2{1, k, 0, 1};
        } else {
            next = next * IntMat2{0, -1, 1, 0};
        }
        long long h = std::max({std::llabs(next.a), std::llabs(next.b), std::llabs(next.c),
                                std::llabs(next.d)});
        if (h <= height)
            g = next;
    }
    return g;
}

} // namespace

TEST_CASE("iwasawa coordinates of simple elements") {
    IwasawaDecomposition id = iwasawa(RealMatrix::identity(3));
    CHECK(id.n_part.dist(RealMatrix::identity(3)) < 1e-14);
    for (double a : id.a_part)
        CHECK(a == doctest::Approx(1.0));
    CHECK(id.k_part.dist(RealMatrix::identity(3)) < 1e-14);

    IwasawaDecomposition dd = iwasawa(diag2(2.0, 0.5));
    CHECK(dd.a_part[0] == doctest::Approx(2.0));
    CHECK(dd.a_part[1] == doctest::Approx(0.5));
    CHECK(dd.n_part.dist(RealMatrix::identity(2)) < 1e-14);
}

TEST_CASE("iwasawa matches the hand-computed triangular factorization") {
    // g = [[1,1],[1,2]]: g g^T = [[2,3],[3,5]] = U diag(1/5, 5) U^T with
    // U = [[1, 3/5],[0,1]], so a = (1/sqrt5, sqrt5) and k = a^{-1} U^{-1} g
    RealMatrix g(2);
    g.at(0, 0) = 1;
    g.at(0, 1) = 1;
    g.at(1, 0) = 1;
    g.at(1, 1) = 2;
    IwasawaDecomposition dec = iwasawa(g);
    CHECK(dec.n_part.at(0, 1) == doctest::Approx(0.6));
    CHECK(dec.a_part[0] == doctest::Approx(1.0 / std::sqrt(5.0)));
    CHECK(dec.a_part[1] == doctest::Approx(std::sqrt(5.0)));
    double s = 1.0 / std::sqrt(5.0);
    CHECK(dec.k_part.at(0, 0) == doctest::Approx(2 * s));
    CHECK(dec.k_part.at(0, 1) == doctest::Approx(-s));
    CHECK(dec.k_part.at(1, 0) == doctest::Approx(s));
    CHECK(dec.k_part.at(1, 1) == doctest::Approx(2 * s));
}

TEST_CASE("iwasawa reconstruction and orthogonality on random elements") {
    std::mt19937_64 rng(2024);
    double worst_recon = 0.0, worst_ortho = 0.0;
    for (int k = 0; k < 10000; ++k) {
        int n = 2 + int(rng() % 3);
        RealMatrix g = random_sl(rng, n);
        IwasawaDecomposition dec = iwasawa(g);
        for (int i = 0; i < n; ++i) {
            CHECK(dec.a_part[i] > 0.0);
            CHECK(dec.n_part.at(i, i) == doctest::Approx(1.0));
            for (int j = 0; j < i; ++j)
                CHECK(dec.n_part.at(i, j) == 0.0);
        }
        RealMatrix recon = dec.n_part * diag_of(dec.a_part) * dec.k_part;
        worst_recon = std::max(worst_recon, recon.dist(g));
        worst_ortho = std::max(
            worst_ortho, (dec.k_part * dec.k_part.transpose()).dist(RealMatrix::identity(n)));
    }
    CHECK(worst_recon <= 1e-10);
    // k = a^{-1} n^{-1} g inherits the squared conditioning of g g^T, so its
    // orthogonality defect is looser than the reconstruction bound
    CHECK(worst_ortho <= 1e-7);
}

TEST_CASE("root chart of the torus part") {
    std::vector<double> c2 = ep_chart({2.0, 0.5});
    REQUIRE(c2.size() == 1);
    CHECK(c2[0] == doctest::Approx(0.25));

    std::vector<double> cid = ep_chart({1.0, 1.0, 1.0});
    for (double v : cid)
        CHECK(v == doctest::Approx(1.0));

    std::vector<double> c3 = ep_chart({4.0, 1.0, 0.25});
    REQUIRE(c3.size() == 2);
    CHECK(c3[0] == doctest::Approx(0.25));
    CHECK(c3[1] == doctest::Approx(0.25));
}

TEST_CASE("membership in a planar Siegel set") {
    SiegelSet s{2, 1.0, {{-0.5, 0.5}}};
    CHECK(siegel_membership(HPoint{0.0, 2.0}, s));
    CHECK(!siegel_membership(HPoint{0.4, 0.5}, s));
    CHECK(!siegel_membership(HPoint{0.6, 2.0}, s));

    // the group-level test through Iwasawa coordinates must agree
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.1, 4.0);
    for (int k = 0; k < 500; ++k) {
        HPoint z{ux(rng), uy(rng)};
        double r = std::sqrt(z.y);
        RealMatrix g(2);
        g.at(0, 0) = r;
        g.at(0, 1) = z.x / r;
        g.at(1, 1) = 1.0 / r;
        CHECK(siegel_membership(z, s) == siegel_membership(g, s));
    }
}

TEST_CASE("fundamental domain reduction: worked points") {
    ReduceResult a = reduce_sl2z(HPoint{5.0, 1.0});
    CHECK(a.z0.x == doctest::Approx(0.0));
    CHECK(a.z0.y == doctest::Approx(1.0));
    CHECK(a.gamma.a == 1);
    CHECK(a.gamma.b == -5);
    CHECK(a.gamma.c == 0);
    CHECK(a.gamma.d == 1);

    ReduceResult b = reduce_sl2z(HPoint{0.25, 2.0});
    CHECK(b.z0.x == doctest::Approx(0.25));
    CHECK(b.z0.y == doctest::Approx(2.0));
    CHECK(b.gamma.a == 1);
    CHECK(b.gamma.b == 0);
    CHECK(b.gamma.c == 0);
    CHECK(b.gamma.d == 1);
}

TEST_CASE("fundamental domain reduction maximizes height over the orbit") {
    // oracle: breadth-first search over short group words cannot find any
    // orbit point higher than the reduced representative
    HPoint z{0.1, 0.1};
    ReduceResult r = reduce_sl2z(z);
    HPoint img = moebius(r.gamma, z);
    CHECK(img.x == doctest::Approx(r.z0.x));
    CHECK(img.y == doctest::Approx(r.z0.y));
    CHECK(r.z0.x >= -0.5);
    CHECK(r.z0.x < 0.5);
    CHECK(r.z0.x * r.z0.x + r.z0.y * r.z0.y >= 1.0 - 1e-12);

    std::vector<IntMat2> frontier{IntMat2{}}, seen = frontier;
    double best = 0.0;
    auto key = [](const IntMat2 &g) { return std::array<long long, 4>{g.a, g.b, g.c, g.d}; };
    std::vector<std::array<long long, 4>> keys{key(IntMat2{})};
    for (int depth = 0; depth < 10; ++depth) {
        std::vector<IntMat2> next;
        for (const IntMat2 &g : frontier)
            for (int m = 0; m < 3; ++m) {
                IntMat2 h = m == 0   ? g * IntMat2{1, 1, 0, 1}
                            : m == 1 ? g * IntMat2{1, -1, 0, 1}
                                     : g * IntMat2{0, -1, 1, 0};
                auto kk = key(h);
                if (std::find(keys.begin(), keys.end(), kk) != keys.end())
                    continue;
                keys.push_back(kk);
                next.push_back(h);
                best = std::max(best, moebius(h, z).y);
            }
        frontier = std::move(next);
    }
    CHECK(r.z0.y >= best - 1e-12);
}

TEST_CASE("reduction is idempotent and orbit-equivariant") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 3.0);
    for (int k = 0; k < 200; ++k) {
        HPoint z{ux(rng), uy(rng)};
        ReduceResult r = reduce_sl2z(z);

        ReduceResult again = reduce_sl2z(r.z0);
        CHECK(again.z0.x == doctest::Approx(r.z0.x));
        CHECK(again.z0.y == doctest::Approx(r.z0.y));
        CHECK(std::llabs(again.gamma.b) + std::llabs(again.gamma.c) == 0);

        IntMat2 gp = random_gamma(rng, 50);
        ReduceResult moved = reduce_sl2z(moebius(gp, z));
        CHECK(std::abs(as_complex(moved.z0) - as_complex(r.z0)) < 1e-9);
    }
}

TEST_CASE("overlap enumeration is symmetric and shrinks with the height") {
    SiegelSet s1{2, 1.0, {{-0.5, 0.5}}};
    SiegelSet s2{2, 1.3, {{-0.6, 0.6}}};
    std::vector<IntMat2> fwd = siegel_intersection_enumerate(s1, s2, 12);
    std::vector<IntMat2> bwd = siegel_intersection_enumerate(s2, s1, 12);
    std::vector<IntMat2> fwd_inv;
    for (const IntMat2 &g : fwd)
        fwd_inv.push_back(inv2(g));
    std::sort(fwd_inv.begin(), fwd_inv.end());
    CHECK(fwd_inv == bwd);

    // high sets only meet through translations
    SiegelSet high{2, 2.0, {{-0.5, 0.5}}};
    std::vector<IntMat2> got = siegel_intersection_enumerate(high, high, 12);
    std::vector<IntMat2> expect = {{1, 0, 0, 1},   {-1, 0, 0, -1}, {1, 1, 0, 1},
                                   {-1, -1, 0, -1}, {1, -1, 0, 1},  {-1, 1, 0, -1}};
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);

    // far-apart heights: nothing but the shared translations survives, and
    // pushing the lower set far enough kills those too
    SiegelSet low{2, 0.9, {{-0.5, 0.5}}};
    SiegelSet very_high{2, 50.0, {{-0.5, 0.5}}};
    for (const IntMat2 &g : siegel_intersection_enumerate(low, very_high, 12))
        CHECK(g.c == 0);
}

TEST_CASE("hecke cosets: degrees, distinctness, multiplicativity") {
    HeckeDecomposition id = hecke_correspondence(IntMat2{1, 0, 0, 1});
    CHECK(id.degree == 1);

    HeckeDecomposition two = hecke_correspondence(IntMat2{1, 0, 0, 2});
    CHECK(two.degree == 3);
    CHECK(two.cosets.size() == 3);

    HeckeDecomposition three = hecke_correspondence(IntMat2{1, 0, 0, 3});
    CHECK(three.degree == 4);

    HeckeDecomposition four = hecke_correspondence(IntMat2{1, 0, 0, 4});
    CHECK(four.degree == 6);

    HeckeDecomposition six = hecke_correspondence(IntMat2{1, 0, 0, 6});
    CHECK(six.degree == two.degree * three.degree);

    // scalar matrices act trivially
    CHECK(hecke_correspondence(IntMat2{2, 0, 0, 2}).degree == 1);

    // p + 1 for primes: the projective line over F_p
    for (long long p : {2LL, 3LL, 5LL, 7LL, 11LL})
        CHECK(hecke_correspondence(IntMat2{1, 0, 0, p}).degree == p + 1);

    // cosets are pairwise inequivalent: gamma = c1 * c2^{-1} integral with
    // det 1 never happens across distinct representatives
    for (size_t i = 0; i < six.cosets.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            IntMat2 a = six.cosets[i], b = six.cosets[j];
            long long det_b = b.a * b.d - b.b * b.c;
            // a * adj(b) must not be det_b times an integer det-1 matrix
            IntMat2 m{a.a * b.d - a.b * b.c, -a.a * b.b + a.b * b.a,
                      a.c * b.d - a.d * b.c, -a.c * b.b + a.d * b.a};
            bool integral = m.a % det_b == 0 && m.b % det_b == 0 && m.c % det_b == 0 &&
                            m.d % det_b == 0;
            if (integral) {
                long long da = (m.a / det_b) * (m.d / det_b) - (m.b / det_b) * (m.c / det_b);
                CHECK(da != 1);
            }
        }
}

TEST_CASE("cusp chart lands on the right ray of the punctured disk") {
    const double pi = std::numbers::pi_v<double>;
    std::complex<double> a = bs_to_bb_chart(0.0, 1.0);
    CHECK(std::abs(a - std::exp(-2 * pi)) < 1e-12);
    CHECK(a.real() == doctest::Approx(0.00186744).epsilon(1e-3));

    std::complex<double> b = bs_to_bb_chart(0.25, 0.5);
    CHECK(b.real() == doctest::Approx(0.0));
    CHECK(b.imag() == doctest::Approx(std::exp(-4 * pi)));

    CHECK(std::abs(bs_to_bb_chart(0.3, 0.05)) < 1e-50);
    CHECK_THROWS(bs_to_bb_chart(0.0, 0.0));
    CHECK_THROWS(bs_to_bb_chart(0.0, -1.0));
}

TEST_CASE("covering experiment: image of a Siegel set fits in finitely many translates") {
    SiegelSet upstairs{2, 0.8, {{-0.5, 0.5}}};
    OrrCoverResult diag = orr_cover_check("diagonal", upstairs, 400, 99);
    CHECK(diag.covered_fraction == 1.0);
    CHECK(diag.c_set_size == 1);
    CHECK(diag.fitted.t > 0.0);

    OrrCoverResult sym = orr_cover_check("sym2", upstairs, 400, 100);
    CHECK(sym.covered_fraction == 1.0);
    CHECK(sym.fitted.n == 3);

    // an undersized torus bound must leave points uncovered
    OrrCoverResult small = orr_cover_check("diagonal", upstairs, 400, 99, 3.0);
    CHECK(small.covered_fraction < 1.0);

    CHECK_THROWS(orr_cover_check("unknown", upstairs, 400, 1));
}
