#pragma once

#include "hodgekit/mhs.hpp"
#include "hodgekit/reduction.hpp"
#include "hodgekit/weightfilt.hpp"

#include <complex>
#include <cstdint>

namespace hodgekit {

// Built-in degenerating family data. The exact side is a rational model of
// the limit structure (limit filtration spanned by (1, i) per factor), which
// differs from the analytic limit only by a real diagonal rescaling; the
// analytic side keeps the true limit point tau0 = i log(16)/pi per factor.
struct Family {
    std::string id;
    int factors = 1;
    int dim = 2;
    int weight = 1;
    std::vector<ExactMatrix> nilpotents; // N_j, one per factor
    Filtration limit_f;                  // rational model of the limit filtration
    Filtration weight_filt;              // W of the full cone, centered at `weight`
    PolarizationForm pol;
    std::vector<std::complex<double>> tau0; // analytic limit per factor
    double monodromy_shift = 2.0;           // tau translation per unipotent loop
};

Family family_by_id(const std::string &id); // "legendre" | "product"

// Full elliptic integral ratio machinery ------------------------------------

// 2F1(1/2, 1/2; 1; lambda) by power series for small |lambda|, complex AGM
// otherwise.
std::complex<double> hypergeometric_period(std::complex<double> lambda);
std::complex<double> hypergeometric_period_series(std::complex<double> lambda);
std::complex<double> hypergeometric_period_agm(std::complex<double> lambda);

// tau(lambda) = i F(1 - lambda) / F(lambda), principal branch.
std::complex<double> legendre_tau(std::complex<double> lambda);

// Period coordinate of the Legendre family on the punctured q-disk:
// tau(z) = 2z + i log(16)/pi - (i/pi) log(1 + r(u)), u = exp(2 pi i z)/16,
// where 1 + r(u) is the inverse nome series. Exactly equivariant under
// z -> z + 1 (tau -> tau + 2) and holomorphic on its validity region.
std::complex<double> phi_tau(std::complex<double> z);

// Smallest y (scanned downward in 0.05 steps) above which the reconstruction
// drift d(phi_tau(iy), orbit(iy)) stays below 1e-3 — the empirical edge of
// the orbit-approximation regime.
double detect_validity_threshold();

// Hyperbolic distance on products of upper half planes (max over factors).
double invariant_distance(const std::vector<std::complex<double>> &a,
                          const std::vector<std::complex<double>> &b);

// Period sample at a point of H^factors.
struct PeriodSample {
    std::vector<std::complex<double>> z;
    std::vector<std::complex<double>> q;      // exp(2 pi i z_j)
    std::vector<std::complex<double>> phi;    // period coordinates
    std::vector<std::complex<double>> orbit;  // tau0_j + shift * z_j
    // invariant distance phi vs orbit, evaluated from the analytic difference
    // so it stays meaningful after phi - orbit drops below coordinate roundoff
    double distance = 0.0;
};
PeriodSample local_lift(const Family &fam, const std::vector<std::complex<double>> &z);

// Exact transported filtration exp(sum z_j N_j) F of the rational model.
Filtration nilpotent_orbit_eval(const Family &fam, const std::vector<ExactScalar> &z);

// Decay of d(phi, orbit) along a vertical line: least squares fit of
// log d = log k - rate * y + beta * log y.
struct DecayFit {
    double k_hat = 0.0;
    double beta_hat = 0.0;
    double rate = 0.0;
    double residual = 0.0; // rms of fit residuals
    bool monotone = false; // distances strictly decreasing in y
    std::vector<double> ys, ds;
};
DecayFit schmid_decay_fit(const Family &fam, double x, double y_lo, double y_hi, int samples);

// Group sample points of positive parameter tuples by the descending order
// of their coordinates.
struct SectorSpec {
    std::vector<int> order; // factor indices, largest parameter first
    int count = 0;
};
std::vector<SectorSpec> sector_decompose(const std::vector<std::vector<double>> &ys);

// Limit parabolic data from the increasing chains W(N_{sigma(1)} + ... +
// N_{sigma(r)}); all subspaces live inside End(V) coordinates.
struct LimitParabolic {
    std::vector<Filtration> weight_chain; // W^(r) on V
    std::vector<Filtration> end_chain;    // induced filtrations on End(V)
    Subspace lie_p;                       // intersection of the 0-steps
    Subspace nilradical;                  // sum of (lie_p meet (-1)-steps)
};
LimitParabolic build_limit_parabolic(const Family &fam, const std::vector<int> &ordering,
                                     std::uint64_t seed);
// is the span closed under the matrix bracket
bool bracket_closed(const Subspace &lie, int n);
// exact membership pattern: N_(sigma(j)) lies in the (-2)-step of every
// induced filtration from position j on, in the 0-step before, and in the
// nilradical
bool nj_in_nilradical_check(const Family &fam, const LimitParabolic &lp,
                            const std::vector<int> &ordering);

// Horospherical tracking of the nilpotent orbit along a path of parameter
// tuples; reports the drift of each factor from its predicted limit.
struct TrackPoint {
    std::vector<double> y;
    std::vector<double> tau_im;
    double recon_err = 0.0; // reconstruction of tau from the n,a parts
    double a_drift = 0.0;   // deviation of a(s) exp(1/2 sum log s_j Yhat_j) from 1
    double n_drift = 0.0;   // movement of the unipotent coordinates
    double m_err = 0.0;     // distance of the compact part from its limit
};
std::vector<TrackPoint> horospherical_factorization_track(const Family &fam,
                                                          const std::vector<std::vector<double>> &path);

// Fit witness Siegel sets over a parameter grid and re-verify membership.
struct ContainmentResult {
    // one witness per sector present; a witness holds one planar set per factor
    std::vector<std::vector<SiegelSet>> witnesses;
    std::vector<std::vector<int>> orderings; // sector orderings, parallel to witnesses
    int grid_points = 0;
    std::vector<std::vector<double>> uncovered; // tau coordinates that failed
    double validity_threshold = 0.0;
};
ContainmentResult siegel_containment_check(const Family &fam, double r_window, double eta,
                                           int grid_per_axis);

// Two-parameter isogeny scan over the real Legendre slice.
struct LocusComponent {
    std::array<long long, 4> relation; // a, b, c, d with tau2 = (a tau1 + b)/(c tau1 + d)
    int points = 0;
};
struct LocusScan {
    int grid = 0;
    int flagged_points = 0;
    std::vector<LocusComponent> components; // sorted by size, largest first
    bool diagonal_detected = false;
    int offsample_total = 0;
    int offsample_flagged = 0;
    // flagged grid cells with their best relation, for CSV export
    struct Hit {
        double lam1, lam2;
        std::array<long long, 4> relation;
    };
    std::vector<Hit> hits;
};
LocusScan hodge_locus_demo(int grid, int bound, double tol, std::uint64_t seed);

} // namespace hodgekit
