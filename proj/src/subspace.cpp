#include "hodgekit/subspace.hpp"

#include <stdexcept>

namespace hodgekit {

std::vector<int> rref(ExactMatrix &m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (!m.at(i, c).is_zero()) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j)
                std::swap(m.at(p, j), m.at(r, j));
        ExactScalar inv = ExactScalar(1) / m.at(r, c);
        for (int j = c; j < m.cols; ++j)
            m.at(r, j) = inv * m.at(r, j);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c).is_zero())
                continue;
            ExactScalar f = m.at(i, c);
            for (int j = c; j < m.cols; ++j)
                m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

Subspace Subspace::zero(int ambient) {
    Subspace s;
    s.ambient = ambient;
    s.basis = ExactMatrix(ambient, 0);
    return s;
}

Subspace Subspace::full(int ambient) {
    Subspace s;
    s.ambient = ambient;
    s.basis = ExactMatrix::identity(ambient);
    return s;
}

Subspace Subspace::span_cols(const ExactMatrix &m) {
    // rows of work = candidate vectors; canonical basis = nonzero RREF rows
    ExactMatrix work = m.transpose();
    std::vector<int> piv = rref(work);
    Subspace s;
    s.ambient = m.rows;
    s.basis = ExactMatrix(m.rows, (int)piv.size());
    for (int k = 0; k < (int)piv.size(); ++k)
        for (int i = 0; i < m.rows; ++i)
            s.basis.at(i, k) = work.at(k, i);
    return s;
}

Subspace Subspace::span(int ambient, const std::vector<std::vector<ExactScalar>> &vectors) {
    ExactMatrix m(ambient, (int)vectors.size());
    for (int j = 0; j < (int)vectors.size(); ++j) {
        if ((int)vectors[j].size() != ambient)
            throw std::invalid_argument("span: vector length mismatch");
        m.set_col(j, vectors[j]);
    }
    return span_cols(m);
}

bool Subspace::contains(const std::vector<ExactScalar> &v) const {
    return coordinates(v).has_value();
}

bool Subspace::contains(const Subspace &other) const {
    if (other.ambient != ambient)
        throw std::invalid_argument("contains: ambient mismatch");
    for (int j = 0; j < other.dim(); ++j)
        if (!contains(other.basis.col(j)))
            return false;
    return true;
}

std::optional<std::vector<ExactScalar>> Subspace::coordinates(const std::vector<ExactScalar> &v) const {
    if ((int)v.size() != ambient)
        throw std::invalid_argument("coordinates: vector length mismatch");
    return solve(basis, v);
}

Subspace Subspace::conj() const {
    Subspace s = span_cols(basis.conj());
    return s;
}

Subspace sum(const Subspace &a, const Subspace &b) {
    if (a.ambient != b.ambient)
        throw std::invalid_argument("sum: ambient mismatch");
    ExactMatrix m(a.ambient, a.dim() + b.dim());
    for (int j = 0; j < a.dim(); ++j)
        m.set_col(j, a.basis.col(j));
    for (int j = 0; j < b.dim(); ++j)
        m.set_col(a.dim() + j, b.basis.col(j));
    return Subspace::span_cols(m);
}

Subspace intersect(const Subspace &a, const Subspace &b) {
    if (a.ambient != b.ambient)
        throw std::invalid_argument("intersect: ambient mismatch");
    if (a.is_zero() || b.is_zero())
        return Subspace::zero(a.ambient);
    // null space of [A | B] encodes relations A x = -B y; A x spans the meet
    ExactMatrix m(a.ambient, a.dim() + b.dim());
    for (int j = 0; j < a.dim(); ++j)
        m.set_col(j, a.basis.col(j));
    for (int j = 0; j < b.dim(); ++j)
        m.set_col(a.dim() + j, b.basis.col(j));
    Subspace rel = kernel(m);
    ExactMatrix gen(a.ambient, rel.dim());
    for (int k = 0; k < rel.dim(); ++k) {
        std::vector<ExactScalar> x(rel.basis.rows);
        for (int i = 0; i < rel.basis.rows; ++i)
            x[i] = rel.basis.at(i, k);
        std::vector<ExactScalar> v(a.ambient);
        for (int j = 0; j < a.dim(); ++j)
            for (int i = 0; i < a.ambient; ++i)
                v[i] += a.basis.at(i, j) * x[j];
        gen.set_col(k, v);
    }
    return Subspace::span_cols(gen);
}

Subspace kernel(const ExactMatrix &m) {
    ExactMatrix work = m;
    std::vector<int> piv = rref(work);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : piv)
        is_pivot[c] = true;
    ExactMatrix gen(m.cols, 0);
    std::vector<std::vector<ExactScalar>> vs;
    for (int c = 0; c < m.cols; ++c) {
        if (is_pivot[c])
            continue;
        std::vector<ExactScalar> v(m.cols);
        v[c] = ExactScalar(1);
        for (int k = 0; k < (int)piv.size(); ++k)
            v[piv[k]] = -work.at(k, c);
        vs.push_back(std::move(v));
    }
    return Subspace::span(m.cols, vs);
}

Subspace image(const ExactMatrix &m) {
    return Subspace::span_cols(m);
}

std::optional<std::vector<ExactScalar>> solve(const ExactMatrix &m, const std::vector<ExactScalar> &b) {
    if ((int)b.size() != m.rows)
        throw std::invalid_argument("solve: rhs length mismatch");
    ExactMatrix aug(m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j)
            aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    std::vector<int> piv = rref(aug);
    if (!piv.empty() && piv.back() == m.cols)
        return std::nullopt; // inconsistent
    std::vector<ExactScalar> x(m.cols);
    for (int k = 0; k < (int)piv.size(); ++k)
        x[piv[k]] = aug.at(k, m.cols);
    return x;
}

ExactMatrix inverse(const ExactMatrix &m) {
    if (m.rows != m.cols)
        throw std::invalid_argument("inverse of non-square matrix");
    int n = m.rows;
    ExactMatrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = ExactScalar(1);
    }
    std::vector<int> piv = rref(aug);
    if ((int)piv.size() != n || piv.back() != n - 1)
        throw std::domain_error("inverse of singular matrix");
    ExactMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

ExactScalar determinant(ExactMatrix m) {
    if (m.rows != m.cols)
        throw std::invalid_argument("determinant of non-square matrix");
    int n = m.rows;
    ExactScalar det(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (!m.at(i, c).is_zero()) {
                p = i;
                break;
            }
        if (p < 0)
            return ExactScalar(0);
        if (p != c) {
            for (int j = 0; j < n; ++j)
                std::swap(m.at(p, j), m.at(c, j));
            det = -det;
        }
        det *= m.at(c, c);
        ExactScalar inv = ExactScalar(1) / m.at(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (m.at(i, c).is_zero())
                continue;
            ExactScalar f = inv * m.at(i, c);
            for (int j = c; j < n; ++j)
                m.at(i, j) -= f * m.at(c, j);
        }
    }
    return det;
}

Subspace apply(const ExactMatrix &op, const Subspace &s) {
    if (op.cols != s.ambient)
        throw std::invalid_argument("apply: shape mismatch");
    return Subspace::span_cols(op * s.basis);
}

Subspace preimage(const ExactMatrix &op, const Subspace &s) {
    if (op.rows != s.ambient)
        throw std::invalid_argument("preimage: shape mismatch");
    if (s.is_full())
        return Subspace::full(op.cols);
    ExactMatrix cond = annihilator_rows(s) * op;
    return kernel(cond);
}

ExactMatrix annihilator_rows(const Subspace &s) {
    // f * basis == 0  <=>  basis^T f^T == 0
    Subspace k = kernel(s.basis.transpose());
    return k.basis.transpose();
}

} // namespace hodgekit
