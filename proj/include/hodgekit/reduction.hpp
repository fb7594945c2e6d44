#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace hodgekit {

// Dense real matrix, used on the numeric group side.
struct RealMatrix {
    int n = 0;
    std::vector<double> a; // row-major

    RealMatrix() = default;
    explicit RealMatrix(int dim) : n(dim), a(size_t(dim) * dim, 0.0) {}
    static RealMatrix identity(int dim);

    double &at(int i, int j) { return a[size_t(i) * n + j]; }
    double at(int i, int j) const { return a[size_t(i) * n + j]; }

    friend RealMatrix operator*(const RealMatrix &x, const RealMatrix &y);
    RealMatrix transpose() const;
    double det() const;
    RealMatrix inverse() const;
    // max abs entry of (this - other)
    double dist(const RealMatrix &other) const;
};

// g = n * a * k with n unit upper triangular, a positive diagonal, k special
// orthogonal.
struct IwasawaDecomposition {
    RealMatrix n_part;
    std::vector<double> a_part;
    RealMatrix k_part;
};
IwasawaDecomposition iwasawa(const RealMatrix &g);

// Per-root coordinates a_{i+1}/a_i of the torus part; each tends to 0 exactly
// when the corresponding root a_i/a_{i+1} tends to infinity.
std::vector<double> ep_chart(const std::vector<double> &a_part);

// Siegel set in the torus/unipotent coordinates of the standard Borel:
// all a_i/a_{i+1} > t and unipotent entries inside [u_lo, u_hi] boxes
// (one box per strict upper entry, row-major); empty boxes mean |entry| <= 1.
struct SiegelSet {
    int n = 2;
    double t = 0.0;
    std::vector<std::pair<double, double>> u_box;

    std::pair<double, double> box(int idx) const {
        if (idx < (int)u_box.size())
            return u_box[idx];
        return {-1.0, 1.0};
    }
};

bool siegel_membership(const RealMatrix &g, const SiegelSet &s);

// Upper half plane specializations (n = 2): z = x + i y corresponds to the
// coset with unipotent entry x and torus coordinate y.
struct HPoint {
    double x = 0.0;
    double y = 1.0;
};
bool siegel_membership(const HPoint &z, const SiegelSet &s);

// Integer 2x2 matrices acting on the upper half plane by fractional linear
// transformations z -> (a z + b) / (c z + d).
struct IntMat2 {
    long long a = 1, b = 0, c = 0, d = 1;

    friend IntMat2 operator*(const IntMat2 &x, const IntMat2 &y);
    IntMat2 inverse_unimodular() const; // requires det = 1
    long long det() const { return a * d - b * c; }
    friend bool operator==(const IntMat2 &x, const IntMat2 &y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    friend bool operator<(const IntMat2 &x, const IntMat2 &y) {
        return std::array<long long, 4>{x.a, x.b, x.c, x.d} <
               std::array<long long, 4>{y.a, y.b, y.c, y.d};
    }
};
HPoint moebius(const IntMat2 &g, const HPoint &z);

// Reduction into the standard fundamental domain |x| <= 1/2, |z| >= 1 (with
// the usual boundary normalization x <= 0 on the unit circle, x < 1/2).
struct ReduceResult {
    HPoint z0;
    IntMat2 gamma; // gamma z = z0
};
ReduceResult reduce_sl2z(const HPoint &z);

// All gamma with |entries| <= height_bound whose translate of s1 meets s2;
// touching within 1e-9 counts as meeting.
std::vector<IntMat2> siegel_intersection_enumerate(const SiegelSet &s1, const SiegelSet &s2,
                                                   long long height_bound);

// Coset decomposition of the double coset of an integer matrix with positive
// determinant: upper triangular representatives (a, b; 0, d), ad = det,
// 0 <= b < d, gcd(a, b, d) = 1.
struct HeckeDecomposition {
    long long degree = 0;
    std::vector<IntMat2> cosets;
};
HeckeDecomposition hecke_correspondence(const IntMat2 &g);

// Cusp chart into the punctured disk: (x, t) -> exp(2 pi i x) exp(-2 pi / t)
// for t > 0; the modulus depends on t alone and tends to 0 with t.
std::complex<double> bs_to_bb_chart(double x, double t);

// Compatibility experiment between a Siegel set upstairs and its image under
// an embedding into a larger group.
struct OrrCoverResult {
    double covered_fraction = 0.0;
    SiegelSet fitted;       // Siegel set downstairs used for the check
    int samples = 0;
    int c_set_size = 1;     // translates needed; 1 means the identity suffices
};
// embedding: "diagonal" (SL2 -> SL2 x SL2, block diagonal in SL4 coordinates,
// membership checked per factor) or "sym2" (SL2 -> SL3).
// t_scale rescales the auto-fitted torus bound; values > 1 undersize the set.
OrrCoverResult orr_cover_check(const std::string &embedding, const SiegelSet &upstairs,
                               int samples, std::uint64_t seed, double t_scale = 1.0);

} // namespace hodgekit
