#include "hodgekit/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hodgekit {

RealMatrix RealMatrix::identity(int dim) {
    RealMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        m.at(i, i) = 1.0;
    return m;
}

RealMatrix operator*(const RealMatrix &x, const RealMatrix &y) {
    if (x.n != y.n)
        throw std::invalid_argument("RealMatrix: size mismatch");
    RealMatrix out(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            double v = x.at(i, k);
            if (v == 0.0)
                continue;
            for (int j = 0; j < x.n; ++j)
                out.at(i, j) += v * y.at(k, j);
        }
    return out;
}

RealMatrix RealMatrix::transpose() const {
    RealMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(j, i) = at(i, j);
    return out;
}

double RealMatrix::det() const {
    RealMatrix m = *this;
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int i = c + 1; i < n; ++i)
            if (std::fabs(m.at(i, c)) > std::fabs(m.at(p, c)))
                p = i;
        if (m.at(p, c) == 0.0)
            return 0.0;
        if (p != c) {
            for (int j = 0; j < n; ++j)
                std::swap(m.at(p, j), m.at(c, j));
            d = -d;
        }
        d *= m.at(c, c);
        for (int i = c + 1; i < n; ++i) {
            double f = m.at(i, c) / m.at(c, c);
            for (int j = c; j < n; ++j)
                m.at(i, j) -= f * m.at(c, j);
        }
    }
    return d;
}

RealMatrix RealMatrix::inverse() const {
    RealMatrix m = *this;
    RealMatrix inv = identity(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int i = c + 1; i < n; ++i)
            if (std::fabs(m.at(i, c)) > std::fabs(m.at(p, c)))
                p = i;
        if (std::fabs(m.at(p, c)) < 1e-14)
            throw std::domain_error("RealMatrix: singular matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(p, j), m.at(c, j));
                std::swap(inv.at(p, j), inv.at(c, j));
            }
        double piv = m.at(c, c);
        for (int j = 0; j < n; ++j) {
            m.at(c, j) /= piv;
            inv.at(c, j) /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || m.at(i, c) == 0.0)
                continue;
            double f = m.at(i, c);
            for (int j = 0; j < n; ++j) {
                m.at(i, j) -= f * m.at(c, j);
                inv.at(i, j) -= f * inv.at(c, j);
            }
        }
    }
    return inv;
}

double RealMatrix::dist(const RealMatrix &other) const {
    double d = 0.0;
    for (size_t k = 0; k < a.size(); ++k)
        d = std::max(d, std::fabs(a[k] - other.a[k]));
    return d;
}

IwasawaDecomposition iwasawa(const RealMatrix &g) {
    int n = g.n;
    if (std::fabs(g.det()) < 1e-12)
        throw std::domain_error("iwasawa: matrix is numerically singular");
    // B = g g^T = U D U^T with U unit upper triangular, eliminating from the
    // bottom-right corner
    RealMatrix b = g * g.transpose();
    RealMatrix u = RealMatrix::identity(n);
    std::vector<double> d(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b.at(i, i);
        for (int k = i + 1; k < n; ++k)
            s -= u.at(i, k) * u.at(i, k) * d[k];
        if (s <= 0.0)
            throw std::domain_error("iwasawa: Gram matrix lost positivity");
        d[i] = s;
        for (int j = 0; j < i; ++j) {
            double v = b.at(j, i);
            for (int k = i + 1; k < n; ++k)
                v -= u.at(j, k) * u.at(i, k) * d[k];
            u.at(j, i) = v / d[i];
        }
    }
    IwasawaDecomposition out;
    out.n_part = u;
    out.a_part.resize(n);
    for (int i = 0; i < n; ++i)
        out.a_part[i] = std::sqrt(d[i]);
    RealMatrix ainv(n);
    for (int i = 0; i < n; ++i)
        ainv.at(i, i) = 1.0 / out.a_part[i];
    out.k_part = ainv * u.inverse() * g;
    return out;
}

std::vector<double> ep_chart(const std::vector<double> &a_part) {
    if (a_part.size() < 2)
        throw std::invalid_argument("ep_chart: need at least two torus entries");
    std::vector<double> out;
    for (size_t i = 0; i + 1 < a_part.size(); ++i)
        out.push_back(a_part[i + 1] / a_part[i]);
    return out;
}

bool siegel_membership(const RealMatrix &g, const SiegelSet &s) {
    if (g.n != s.n)
        throw std::invalid_argument("siegel_membership: size mismatch");
    IwasawaDecomposition dec = iwasawa(g);
    for (int i = 0; i + 1 < g.n; ++i)
        if (!(dec.a_part[i] / dec.a_part[i + 1] > s.t))
            return false;
    int idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j, ++idx) {
            auto [lo, hi] = s.box(idx);
            double v = dec.n_part.at(i, j);
            if (v < lo || v > hi)
                return false;
        }
    return true;
}

bool siegel_membership(const HPoint &z, const SiegelSet &s) {
    if (s.n != 2)
        throw std::invalid_argument("siegel_membership: point lives in the plane, set does not");
    auto [lo, hi] = s.box(0);
    return z.y > s.t && z.x >= lo && z.x <= hi;
}

IntMat2 operator*(const IntMat2 &x, const IntMat2 &y) {
    return IntMat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                   x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

IntMat2 IntMat2::inverse_unimodular() const {
    if (det() != 1)
        throw std::invalid_argument("inverse_unimodular: determinant is not 1");
    return IntMat2{d, -b, -c, a};
}

HPoint moebius(const IntMat2 &g, const HPoint &z) {
    if (z.y <= 0.0)
        throw std::domain_error("moebius: point not in the upper half plane");
    double qa = g.c * z.x + g.d;
    double n2 = qa * qa + double(g.c) * g.c * z.y * z.y;
    HPoint out;
    out.x = (g.a * z.x + g.b) * qa + double(g.a) * g.c * z.y * z.y;
    out.x /= n2;
    out.y = double(g.det()) * z.y / n2;
    return out;
}

ReduceResult reduce_sl2z(const HPoint &z) {
    if (z.y <= 0.0)
        throw std::domain_error("reduce_sl2z: point not in the upper half plane");
    HPoint w = z;
    IntMat2 gamma;
    const IntMat2 s{0, -1, 1, 0};
    for (int iter = 0; iter < 10000; ++iter) {
        long long k = (long long)std::floor(w.x + 0.5);
        if (k != 0) {
            w.x -= (double)k;
            gamma = IntMat2{1, -k, 0, 1} * gamma;
        }
        double n2 = w.x * w.x + w.y * w.y;
        if (n2 < 1.0 - 1e-15) {
            double nx = -w.x / n2, ny = w.y / n2;
            w.x = nx;
            w.y = ny;
            gamma = s * gamma;
            continue;
        }
        // boundary normalization: on the unit circle prefer x <= 0
        if (std::fabs(n2 - 1.0) <= 1e-15 && w.x > 1e-15) {
            w.x = -w.x;
            gamma = s * gamma;
        }
        return ReduceResult{w, gamma};
    }
    throw std::runtime_error("reduce_sl2z: reduction did not terminate");
}

namespace {

struct Interval {
    double lo, hi;
};

bool overlaps(const Interval &a, const Interval &b, double tol) {
    return a.lo <= b.hi + tol && b.lo <= a.hi + tol;
}

// conservative decision: does gamma map the closure of s1 into contact with
// the closure of s2
bool translate_meets(const IntMat2 &g, const SiegelSet &s1, const SiegelSet &s2, double tol) {
    auto [x1lo, x1hi] = s1.box(0);
    auto [x2lo, x2hi] = s2.box(0);
    double t1 = s1.t, t2 = s2.t;
    if (g.c == 0) {
        // z -> z + b/d with a = d = +-1
        double shift = (double)(g.b * g.d);
        return overlaps({x1lo + shift, x1hi + shift}, {x2lo, x2hi}, tol);
    }
    double c = (double)g.c;
    double q1 = c * (x1lo - tol) + (double)g.d;
    double q2 = c * (x1hi + tol) + (double)g.d;
    if (q1 > q2)
        std::swap(q1, q2);
    auto qabsmin = [](double lo, double hi) { return (lo <= 0.0 && 0.0 <= hi) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi)); };
    double qm_all = qabsmin(q1, q2);
    double c2 = c * c;
    double sup_im;
    if (qm_all == 0.0)
        sup_im = 1.0 / (c2 * t1);
    else if (qm_all / std::fabs(c) >= t1)
        sup_im = 1.0 / (2.0 * std::fabs(c) * qm_all);
    else
        sup_im = t1 / (qm_all * qm_all + c2 * t1 * t1);
    double tau2 = t2 - tol;
    if (sup_im < tau2)
        return false;
    if (tau2 <= 0.0)
        tau2 = 1e-12;

    int pieces = std::max(1, std::min(20000, (int)std::ceil((x1hi - x1lo) / 0.001)));
    double step = (x1hi - x1lo) / pieces;
    Interval target{x2lo - tol, x2hi + tol};
    for (int i = 0; i < pieces; ++i) {
        double xa = x1lo + i * step - tol;
        double xb = x1lo + (i + 1) * step + tol;
        double qa = c * xa + (double)g.d;
        double qb = c * xb + (double)g.d;
        if (qa > qb)
            std::swap(qa, qb);
        double qm = qabsmin(qa, qb);
        double qM = std::max(std::fabs(qa), std::fabs(qb));
        double disc = 1.0 - 4.0 * c2 * tau2 * tau2 * qm * qm;
        if (disc < 0.0)
            continue;
        double root = std::sqrt(disc);
        double ylo = std::max(t1, (1.0 - root) / (2.0 * c2 * tau2));
        double yhi = (1.0 + root) / (2.0 * c2 * tau2);
        if (yhi < ylo)
            continue;
        double dmin = qm * qm + c2 * ylo * ylo;
        double dmax = qM * qM + c2 * yhi * yhi;
        double cand[4] = {qa / (c * dmin), qa / (c * dmax), qb / (c * dmin), qb / (c * dmax)};
        double tlo = *std::min_element(cand, cand + 4) - 1e-12;
        double thi = *std::max_element(cand, cand + 4) + 1e-12;
        double a_over_c = (double)g.a / c;
        Interval re{a_over_c - thi, a_over_c - tlo};
        if (overlaps(re, target, 0.0))
            return true;
    }
    return false;
}

} // namespace

std::vector<IntMat2> siegel_intersection_enumerate(const SiegelSet &s1, const SiegelSet &s2,
                                                   long long height_bound) {
    if (s1.n != 2 || s2.n != 2)
        throw std::invalid_argument("siegel_intersection_enumerate: plane sets only");
    const double tol = 1e-9;
    std::vector<IntMat2> out;
    for (long long a = -height_bound; a <= height_bound; ++a)
        for (long long b = -height_bound; b <= height_bound; ++b)
            for (long long c = -height_bound; c <= height_bound; ++c)
                for (long long d = -height_bound; d <= height_bound; ++d) {
                    if (a * d - b * c != 1)
                        continue;
                    IntMat2 g{a, b, c, d};
                    if (translate_meets(g, s1, s2, tol))
                        out.push_back(g);
                }
    std::sort(out.begin(), out.end());
    return out;
}

HeckeDecomposition hecke_correspondence(const IntMat2 &g) {
    long long det = g.det();
    if (det <= 0)
        throw std::invalid_argument("hecke_correspondence: determinant must be positive");
    long long content = std::gcd(std::gcd(std::llabs(g.a), std::llabs(g.b)),
                                 std::gcd(std::llabs(g.c), std::llabs(g.d)));
    if (content == 0)
        throw std::invalid_argument("hecke_correspondence: zero matrix");
    if (det % (content * content) != 0)
        throw std::invalid_argument("hecke_correspondence: inconsistent content");
    long long dprim = det / (content * content);
    HeckeDecomposition out;
    for (long long a = 1; a <= dprim; ++a) {
        if (dprim % a != 0)
            continue;
        long long d = dprim / a;
        for (long long b = 0; b < d; ++b) {
            if (std::gcd(std::gcd(a, b), d) != 1)
                continue;
            out.cosets.push_back(IntMat2{content * a, content * b, 0, content * d});
        }
    }
    out.degree = (long long)out.cosets.size();
    return out;
}

std::complex<double> bs_to_bb_chart(double x, double t) {
    if (t <= 0.0)
        throw std::domain_error("bs_to_bb_chart: t must be positive");
    return std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi_v<double> * x)) *
           std::exp(-2.0 * std::numbers::pi_v<double> / t);
}

namespace {

RealMatrix sl2_point(double x, double y) {
    RealMatrix g(2);
    double r = std::sqrt(y);
    g.at(0, 0) = r;
    g.at(0, 1) = x / r;
    g.at(1, 1) = 1.0 / r;
    return g;
}

// symmetric square in the orthonormal-scaled monomial basis (e1^2, sqrt2 e1e2, e2^2)
RealMatrix sym2_embed(const RealMatrix &g) {
    double a = g.at(0, 0), b = g.at(0, 1), c = g.at(1, 0), d = g.at(1, 1);
    const double r2 = std::sqrt(2.0);
    RealMatrix m(3);
    m.at(0, 0) = a * a;
    m.at(0, 1) = r2 * a * b;
    m.at(0, 2) = b * b;
    m.at(1, 0) = r2 * a * c;
    m.at(1, 1) = a * d + b * c;
    m.at(1, 2) = r2 * b * d;
    m.at(2, 0) = c * c;
    m.at(2, 1) = r2 * c * d;
    m.at(2, 2) = d * d;
    return m;
}

} // namespace

OrrCoverResult orr_cover_check(const std::string &embedding, const SiegelSet &upstairs,
                               int samples, std::uint64_t seed, double t_scale) {
    if (upstairs.n != 2)
        throw std::invalid_argument("orr_cover_check: upstairs set must be planar");
    if (samples < 10)
        throw std::invalid_argument("orr_cover_check: need at least 10 samples");
    if (embedding != "diagonal" && embedding != "sym2")
        throw std::invalid_argument("orr_cover_check: unknown embedding " + embedding);

    std::mt19937_64 rng(seed);
    auto [xlo, xhi] = upstairs.box(0);
    std::uniform_real_distribution<double> ux(xlo, xhi), uy(0.0, 3.0);
    std::vector<HPoint> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i)
        pts.push_back(HPoint{ux(rng), upstairs.t <= 0 ? std::exp(uy(rng)) : upstairs.t * std::exp(uy(rng))});

    int fit_count = samples / 2;
    OrrCoverResult res;
    res.samples = samples;
    res.c_set_size = 1;

    if (embedding == "diagonal") {
        // image point is (z, z); per-factor coordinates are x and y themselves
        double min_y = 1e300, min_x = 1e300, max_x = -1e300;
        for (int i = 0; i < fit_count; ++i) {
            min_y = std::min(min_y, pts[i].y);
            min_x = std::min(min_x, pts[i].x);
            max_x = std::max(max_x, pts[i].x);
        }
        SiegelSet fitted;
        fitted.n = 2;
        fitted.t = 0.9 * min_y * t_scale;
        double mid = 0.5 * (min_x + max_x), half = 0.5 * (max_x - min_x);
        fitted.u_box = {{mid - 1.1 * half - 1e-9, mid + 1.1 * half + 1e-9}};
        int good = 0;
        for (const auto &z : pts)
            if (siegel_membership(z, fitted)) // both factors carry the same point
                ++good;
        res.covered_fraction = double(good) / samples;
        res.fitted = fitted;
        return res;
    }

    // sym2: fit a Siegel set for the image in the rank-two group
    std::vector<std::array<double, 5>> coords; // alpha1, alpha2, n01, n02, n12
    coords.reserve(samples);
    for (const auto &z : pts) {
        IwasawaDecomposition dec = iwasawa(sym2_embed(sl2_point(z.x, z.y)));
        coords.push_back({dec.a_part[0] / dec.a_part[1], dec.a_part[1] / dec.a_part[2],
                          dec.n_part.at(0, 1), dec.n_part.at(0, 2), dec.n_part.at(1, 2)});
    }
    double min_alpha = 1e300;
    std::array<double, 3> nlo{1e300, 1e300, 1e300}, nhi{-1e300, -1e300, -1e300};
    for (int i = 0; i < fit_count; ++i) {
        min_alpha = std::min({min_alpha, coords[i][0], coords[i][1]});
        for (int k = 0; k < 3; ++k) {
            nlo[k] = std::min(nlo[k], coords[i][2 + k]);
            nhi[k] = std::max(nhi[k], coords[i][2 + k]);
        }
    }
    SiegelSet fitted;
    fitted.n = 3;
    fitted.t = 0.9 * min_alpha * t_scale;
    fitted.u_box.clear();
    for (int k = 0; k < 3; ++k) {
        double mid = 0.5 * (nlo[k] + nhi[k]), half = 0.5 * (nhi[k] - nlo[k]);
        fitted.u_box.push_back({mid - 1.1 * half - 1e-9, mid + 1.1 * half + 1e-9});
    }
    int good = 0;
    for (const auto &cd : coords) {
        bool ok = cd[0] > fitted.t && cd[1] > fitted.t;
        for (int k = 0; k < 3 && ok; ++k)
            ok = cd[2 + k] >= fitted.u_box[k].first && cd[2 + k] <= fitted.u_box[k].second;
        if (ok)
            ++good;
    }
    res.covered_fraction = double(good) / samples;
    res.fitted = fitted;
    return res;
}

} // namespace hodgekit
