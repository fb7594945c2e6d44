#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace hodgekit {

// Gaussian rational a + b*i. Components are always kept canonicalized;
// construction from a zero denominator throws.
struct ExactScalar {
    mpq_class re;
    mpq_class im;

    ExactScalar() : re(0), im(0) {}
    ExactScalar(long v) : re(v), im(0) {}
    ExactScalar(const mpq_class &r) : re(r), im(0) {}
    ExactScalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    static ExactScalar i_unit() { return ExactScalar(mpq_class(0), mpq_class(1)); }
    // i^k for any integer k
    static ExactScalar i_pow(long k);

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    ExactScalar conj() const { return ExactScalar(re, -im); }

    ExactScalar operator-() const { return ExactScalar(-re, -im); }
    ExactScalar &operator+=(const ExactScalar &o) { re += o.re; im += o.im; return *this; }
    ExactScalar &operator-=(const ExactScalar &o) { re -= o.re; im -= o.im; return *this; }
    ExactScalar &operator*=(const ExactScalar &o);
    ExactScalar &operator/=(const ExactScalar &o);

    friend ExactScalar operator+(ExactScalar a, const ExactScalar &b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar &b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar &b) { return a *= b; }
    friend ExactScalar operator/(ExactScalar a, const ExactScalar &b) { return a /= b; }
    friend bool operator==(const ExactScalar &a, const ExactScalar &b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const ExactScalar &a, const ExactScalar &b) { return !(a == b); }

    double to_double_re() const { return re.get_d(); }
    double to_double_im() const { return im.get_d(); }

    // "p/q" for real values, "p/q+r/s i" otherwise
    std::string str() const;
    static ExactScalar parse(const std::string &s);
};

struct ExactMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<ExactScalar> e; // row-major

    ExactMatrix() = default;
    ExactMatrix(int r, int c) : rows(r), cols(c), e(size_t(r) * size_t(c)) {}

    static ExactMatrix zero(int r, int c) { return ExactMatrix(r, c); }
    static ExactMatrix identity(int n);
    // entries listed row by row
    static ExactMatrix from_rows(int r, int c, std::initializer_list<long> vals);

    ExactScalar &at(int r, int c) { return e[size_t(r) * cols + c]; }
    const ExactScalar &at(int r, int c) const { return e[size_t(r) * cols + c]; }

    bool is_zero() const;
    bool is_real() const;
    ExactMatrix transpose() const;
    ExactMatrix conj() const;
    ExactScalar trace() const;

    std::vector<ExactScalar> col(int j) const;
    void set_col(int j, const std::vector<ExactScalar> &v);

    friend ExactMatrix operator+(const ExactMatrix &a, const ExactMatrix &b);
    friend ExactMatrix operator-(const ExactMatrix &a, const ExactMatrix &b);
    friend ExactMatrix operator*(const ExactMatrix &a, const ExactMatrix &b);
    friend ExactMatrix operator*(const ExactScalar &s, const ExactMatrix &a);
    friend bool operator==(const ExactMatrix &a, const ExactMatrix &b) {
        return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
    }
    friend bool operator!=(const ExactMatrix &a, const ExactMatrix &b) { return !(a == b); }
};

ExactMatrix bracket(const ExactMatrix &a, const ExactMatrix &b);
ExactMatrix mat_pow(const ExactMatrix &a, int k);

// apply matrix to a column vector
std::vector<ExactScalar> apply(const ExactMatrix &m, const std::vector<ExactScalar> &v);

// row-major flattening of an operator on V into a vector of length dim(V)^2,
// the coordinate system used for subspaces of End(V)
std::vector<ExactScalar> end_to_vec(const ExactMatrix &op);
ExactMatrix vec_to_end(const std::vector<ExactScalar> &v, int n);

} // namespace hodgekit
