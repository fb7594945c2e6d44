#include "hodgekit/exact.hpp"

#include <stdexcept>

namespace hodgekit {

namespace {

// Parse "p", "-p", "+p", "p/q" into a canonical rational. Rejects q == 0.
mpq_class parse_rational(const std::string &raw) {
    std::string s = raw;
    if (!s.empty() && s[0] == '+')
        s.erase(0, 1);
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class num(s);
            return mpq_class(num);
        }
        mpz_class num(s.substr(0, slash));
        mpz_class den(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in rational literal");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument &) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

} // namespace

ExactScalar ExactScalar::i_pow(long k) {
    long r = ((k % 4) + 4) % 4;
    switch (r) {
    case 0: return ExactScalar(1);
    case 1: return i_unit();
    case 2: return ExactScalar(-1);
    default: return -i_unit();
    }
}

ExactScalar &ExactScalar::operator*=(const ExactScalar &o) {
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
}

ExactScalar &ExactScalar::operator/=(const ExactScalar &o) {
    mpq_class n = o.re * o.re + o.im * o.im;
    if (n == 0)
        throw std::domain_error("division by zero scalar");
    mpq_class r = (re * o.re + im * o.im) / n;
    mpq_class i = (im * o.re - re * o.im) / n;
    re = r;
    im = i;
    return *this;
}

std::string ExactScalar::str() const {
    if (im == 0)
        return re.get_str();
    std::string out = re.get_str();
    if (im > 0)
        out += "+";
    out += im.get_str();
    out += " i";
    return out;
}

ExactScalar ExactScalar::parse(const std::string &input) {
    std::string s;
    s.reserve(input.size());
    for (char c : input)
        if (c != ' ' && c != '\t')
            s += c;
    if (s.empty())
        throw std::invalid_argument("empty scalar literal");
    bool imag = s.back() == 'i';
    if (imag)
        s.pop_back();
    if (s.empty())
        return i_unit();
    if (!imag)
        return ExactScalar(parse_rational(s));
    // find the sign splitting real and imaginary parts: a '+'/'-' that is not
    // the leading sign and does not follow '/' or another sign
    size_t split = std::string::npos;
    for (size_t k = 1; k < s.size(); ++k) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/' && s[k - 1] != '+' && s[k - 1] != '-') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        std::string im_part = s;
        if (im_part == "+")
            return i_unit();
        if (im_part == "-")
            return -i_unit();
        return ExactScalar(mpq_class(0), parse_rational(im_part));
    }
    mpq_class re_part = parse_rational(s.substr(0, split));
    std::string rest = s.substr(split);
    mpq_class im_part;
    if (rest == "+")
        im_part = 1;
    else if (rest == "-")
        im_part = -1;
    else
        im_part = parse_rational(rest);
    return ExactScalar(re_part, im_part);
}

ExactMatrix ExactMatrix::identity(int n) {
    ExactMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = ExactScalar(1);
    return m;
}

ExactMatrix ExactMatrix::from_rows(int r, int c, std::initializer_list<long> vals) {
    if ((int)vals.size() != r * c)
        throw std::invalid_argument("from_rows: wrong entry count");
    ExactMatrix m(r, c);
    auto it = vals.begin();
    for (auto &x : m.e)
        x = ExactScalar(*it++);
    return m;
}

bool ExactMatrix::is_zero() const {
    for (const auto &x : e)
        if (!x.is_zero())
            return false;
    return true;
}

bool ExactMatrix::is_real() const {
    for (const auto &x : e)
        if (!x.is_real())
            return false;
    return true;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix m(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m.at(j, i) = at(i, j);
    return m;
}

ExactMatrix ExactMatrix::conj() const {
    ExactMatrix m(rows, cols);
    for (size_t k = 0; k < e.size(); ++k)
        m.e[k] = e[k].conj();
    return m;
}

ExactScalar ExactMatrix::trace() const {
    ExactScalar t;
    for (int i = 0; i < rows && i < cols; ++i)
        t += at(i, i);
    return t;
}

std::vector<ExactScalar> ExactMatrix::col(int j) const {
    std::vector<ExactScalar> v(rows);
    for (int i = 0; i < rows; ++i)
        v[i] = at(i, j);
    return v;
}

void ExactMatrix::set_col(int j, const std::vector<ExactScalar> &v) {
    for (int i = 0; i < rows; ++i)
        at(i, j) = v[i];
}

ExactMatrix operator+(const ExactMatrix &a, const ExactMatrix &b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix shape mismatch in +");
    ExactMatrix m(a.rows, a.cols);
    for (size_t k = 0; k < m.e.size(); ++k)
        m.e[k] = a.e[k] + b.e[k];
    return m;
}

ExactMatrix operator-(const ExactMatrix &a, const ExactMatrix &b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix shape mismatch in -");
    ExactMatrix m(a.rows, a.cols);
    for (size_t k = 0; k < m.e.size(); ++k)
        m.e[k] = a.e[k] - b.e[k];
    return m;
}

ExactMatrix operator*(const ExactMatrix &a, const ExactMatrix &b) {
    if (a.cols != b.rows)
        throw std::invalid_argument("matrix shape mismatch in *");
    ExactMatrix m(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const ExactScalar &aik = a.at(i, k);
            if (aik.is_zero())
                continue;
            for (int j = 0; j < b.cols; ++j)
                m.at(i, j) += aik * b.at(k, j);
        }
    return m;
}

ExactMatrix operator*(const ExactScalar &s, const ExactMatrix &a) {
    ExactMatrix m(a.rows, a.cols);
    for (size_t k = 0; k < m.e.size(); ++k)
        m.e[k] = s * a.e[k];
    return m;
}

ExactMatrix bracket(const ExactMatrix &a, const ExactMatrix &b) {
    return a * b - b * a;
}

ExactMatrix mat_pow(const ExactMatrix &a, int k) {
    if (a.rows != a.cols)
        throw std::invalid_argument("mat_pow on non-square matrix");
    if (k < 0)
        throw std::invalid_argument("mat_pow with negative exponent");
    ExactMatrix r = ExactMatrix::identity(a.rows);
    for (int i = 0; i < k; ++i)
        r = r * a;
    return r;
}

std::vector<ExactScalar> apply(const ExactMatrix &m, const std::vector<ExactScalar> &v) {
    if ((int)v.size() != m.cols)
        throw std::invalid_argument("apply: vector length mismatch");
    std::vector<ExactScalar> out(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        ExactScalar s;
        for (int j = 0; j < m.cols; ++j)
            if (!m.at(i, j).is_zero())
                s += m.at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

std::vector<ExactScalar> end_to_vec(const ExactMatrix &op) {
    return op.e;
}

ExactMatrix vec_to_end(const std::vector<ExactScalar> &v, int n) {
    if ((int)v.size() != n * n)
        throw std::invalid_argument("vec_to_end: length is not n^2");
    ExactMatrix m(n, n);
    m.e = v;
    return m;
}

} // namespace hodgekit
