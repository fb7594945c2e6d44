#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hodgekit/period.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace hodgekit;

namespace {
const double kPi = std::numbers::pi_v<double>;
}

TEST_CASE("built-in families") {
    Family leg = family_by_id("legendre");
    CHECK(leg.factors == 1);
    CHECK(leg.dim == 2);
    CHECK(leg.nilpotents.size() == 1);
    CHECK(leg.nilpotents[0] == ExactMatrix::from_rows(2, 2, {0, 0, 2, 0}));

    Family prod = family_by_id("product");
    CHECK(prod.factors == 2);
    CHECK(prod.dim == 4);
    CHECK(prod.nilpotents.size() == 2);

    CHECK_THROWS(family_by_id("nope"));
}

TEST_CASE("monodromy of the local system is the exponential of the log") {
    Family leg = family_by_id("legendre");
    ExactMatrix t = exp_nilpotent(leg.nilpotents[0]);
    CHECK(t == ExactMatrix::from_rows(2, 2, {1, 0, 2, 1}));

    // the numeric period coordinate repeats the same translation: crossing
    // the loop adds exactly the monodromy shift
    for (std::complex<double> z : {std::complex<double>(0.3, 0.8),
                                   std::complex<double>(-0.2, 0.4),
                                   std::complex<double>(0.1, 2.0)}) {
        std::complex<double> jump = phi_tau(z + 1.0) - phi_tau(z);
        CHECK(std::abs(jump - 2.0) < 1e-6);
    }
}

TEST_CASE("transported limit filtration is equivariant under the loops") {
    for (const char *id : {"legendre", "product"}) {
        Family fam = family_by_id(id);
        std::vector<ExactScalar> z(fam.factors);
        z[0] = ExactScalar(mpq_class(1, 2));
        if (fam.factors > 1)
            z[1] = ExactScalar(mpq_class(-2, 5));
        for (int j = 0; j < fam.factors; ++j) {
            std::vector<ExactScalar> zj = z;
            zj[j] += ExactScalar(1);
            Filtration lhs = nilpotent_orbit_eval(fam, zj);
            Filtration rhs =
                transport_filtration(exp_nilpotent(fam.nilpotents[j]), nilpotent_orbit_eval(fam, z));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("hypergeometric ratio: special values and series/iteration agreement") {
    CHECK(std::abs(hypergeometric_period(std::complex<double>(0, 0)) - 1.0) < 1e-15);
    CHECK(std::abs(legendre_tau(0.5) - std::complex<double>(0, 1)) <= 1e-10);

    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(-0.55, 0.55);
    for (int k = 0; k < 25; ++k) {
        double re, im;
        do {
            re = u(rng);
            im = u(rng);
        } while (re * re + im * im > 0.55 * 0.55);
        std::complex<double> lam(re, im);
        CHECK(std::abs(hypergeometric_period_series(lam) - hypergeometric_period_agm(lam)) <=
              1e-12);
    }
}

TEST_CASE("period coordinate agrees with the elliptic-integral ratio") {
    // both sides are principal on the imaginary axis, where lambda = e^{-2 pi y}
    for (double y : {0.15, 0.2, 0.3, 0.5, 1.0}) {
        std::complex<double> via_series = phi_tau(std::complex<double>(0.0, y));
        std::complex<double> via_agm = legendre_tau(std::exp(-2.0 * kPi * y));
        CHECK(std::abs(via_series - via_agm) < 1e-9);
    }
    CHECK_THROWS(phi_tau(std::complex<double>(0.0, -0.1)));
}

TEST_CASE("hyperbolic distance: known values and symmetry") {
    std::vector<std::complex<double>> a{{0.0, 1.0}}, b{{0.0, 2.0}};
    CHECK(invariant_distance(a, b) == doctest::Approx(std::log(2.0)));
    CHECK(invariant_distance(b, a) == doctest::Approx(std::log(2.0)));
    CHECK(invariant_distance(a, a) == doctest::Approx(0.0));

    // product metric takes the factor maximum
    std::vector<std::complex<double>> p{{0.0, 1.0}, {0.0, 1.0}};
    std::vector<std::complex<double>> q{{0.0, 2.0}, {0.0, 8.0}};
    CHECK(invariant_distance(p, q) == doctest::Approx(std::log(8.0)));
}

TEST_CASE("distance to the orbit decays along vertical rays") {
    Family leg = family_by_id("legendre");
    double prev = -1.0;
    for (double y : {2.0, 3.0, 4.0, 6.0, 8.0}) {
        PeriodSample s = local_lift(leg, {{0.1, y}});
        CHECK(s.distance > 0.0);
        if (prev > 0.0)
            CHECK(s.distance < prev);
        prev = s.distance;
    }

    DecayFit fit = schmid_decay_fit(leg, 0.0, 2.0, 8.0, 60);
    CHECK(fit.monotone);
    CHECK(std::fabs(fit.rate - 2.0 * kPi) <= 0.05 * 2.0 * kPi);
    CHECK(fit.residual < 0.1);
    // the distances keep carrying information far below coordinate precision
    CHECK(fit.ds.back() < 1e-18);
    CHECK(fit.ds.back() > 0.0);
}

TEST_CASE("validity threshold sits below the sampling windows") {
    double thr = detect_validity_threshold();
    CHECK(thr > 0.0);
    CHECK(thr <= 1.5);
    CHECK(detect_validity_threshold() == thr);
}

TEST_CASE("sector decomposition groups points by coordinate order") {
    std::vector<SectorSpec> s = sector_decompose({{3.0, 1.0}, {5.0, 2.0}, {1.0, 4.0}});
    REQUIRE(s.size() == 2);
    int big_first = -1;
    for (size_t i = 0; i < s.size(); ++i)
        if (s[i].order == std::vector<int>{0, 1})
            big_first = (int)i;
    REQUIRE(big_first >= 0);
    CHECK(s[big_first].count == 2);
    CHECK(s[1 - big_first].order == std::vector<int>{1, 0});
    CHECK(s[1 - big_first].count == 1);
}

TEST_CASE("limit parabolic data: dimensions, membership, closure") {
    Family leg = family_by_id("legendre");
    LimitParabolic lp = build_limit_parabolic(leg, {0}, 5);
    CHECK(lp.lie_p.dim() == 3);
    CHECK(lp.nilradical.dim() == 1);
    CHECK(lp.nilradical.contains(end_to_vec(leg.nilpotents[0])));
    CHECK(bracket_closed(lp.lie_p, leg.dim));
    CHECK(bracket_closed(lp.nilradical, leg.dim));
    CHECK(nj_in_nilradical_check(leg, lp, {0}));

    Family prod = family_by_id("product");
    for (std::vector<int> ordering : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
        LimitParabolic pp = build_limit_parabolic(prod, ordering, 5);
        CHECK(pp.lie_p.dim() == 10);
        CHECK(pp.nilradical.dim() == 6);
        for (int j = 0; j < 2; ++j)
            CHECK(pp.nilradical.contains(end_to_vec(prod.nilpotents[j])));
        CHECK(bracket_closed(pp.lie_p, prod.dim));
        CHECK(bracket_closed(pp.nilradical, prod.dim));
        CHECK(nj_in_nilradical_check(prod, pp, ordering));
    }
}

TEST_CASE("horospherical tracking converges to the predicted torus factors") {
    Family leg = family_by_id("legendre");
    std::vector<std::vector<double>> path;
    for (double y = 5.0; y <= 50.0; y *= 1.3)
        path.push_back({y});
    std::vector<TrackPoint> track = horospherical_factorization_track(leg, path);
    REQUIRE(track.size() == path.size());
    for (size_t i = 0; i < track.size(); ++i) {
        CHECK(track[i].recon_err < 1e-9);
        CHECK(track[i].m_err < 1e-9);
        if (i > 0)
            CHECK(track[i].a_drift < track[i - 1].a_drift);
    }

    Family prod = family_by_id("product");
    std::vector<std::vector<double>> long_path;
    for (double s = 20.0; s <= 300.0; s *= 1.31)
        long_path.push_back({3.0 * s, s});
    long_path.push_back({900.0, 300.0});
    std::vector<TrackPoint> far = horospherical_factorization_track(prod, long_path);
    CHECK(far.back().a_drift < 1e-3);
    CHECK(far.back().recon_err < 1e-9);
}

TEST_CASE("containment of the lifted period image in fitted Siegel sets") {
    Family leg = family_by_id("legendre");
    ContainmentResult r = siegel_containment_check(leg, 0.5, 2.0, 20);
    CHECK(r.grid_points == 400);
    CHECK(r.witnesses.size() == 1);
    CHECK(r.uncovered.empty());
    CHECK(r.validity_threshold < 2.0);

    Family prod = family_by_id("product");
    ContainmentResult rp = siegel_containment_check(prod, 0.5, 2.0, 4);
    CHECK(rp.grid_points == 256);
    CHECK(rp.witnesses.size() <= 2);
    CHECK(!rp.witnesses.empty());
    CHECK(rp.uncovered.empty());
    for (const auto &w : rp.witnesses)
        CHECK(w.size() == 2);

    // a window below the validity threshold is rejected
    CHECK_THROWS(siegel_containment_check(leg, 0.5, 0.01, 4));
}

TEST_CASE("relation scan flags the diagonal and spares generic points") {
    LocusScan scan = hodge_locus_demo(24, 2, 1e-6, 777);
    CHECK(scan.grid == 24);
    CHECK(scan.diagonal_detected);
    bool found = false;
    for (const auto &c : scan.components)
        if (c.relation == std::array<long long, 4>{1, 0, 0, 1}) {
            found = true;
            CHECK(c.points >= 22);
        }
    CHECK(found);
    CHECK(scan.offsample_total > 0);
    CHECK(scan.offsample_flagged == 0);
    for (const auto &h : scan.hits) {
        CHECK(h.lam1 >= 0.02);
        CHECK(h.lam1 <= 0.98);
    }
}
