#include "hodgekit/mhs.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace hodgekit {

namespace {

void require_real_weight_filtration(const Filtration &w) {
    if (w.direction != FiltDirection::inc)
        throw std::invalid_argument("weight filtration must be increasing");
    for (const auto &st : w.steps)
        if (!st.second.basis.is_real())
            throw std::invalid_argument("weight filtration must be real");
}

// image of F^p in the graded piece g of W
Subspace graded_f(const GradedPiece &g, const Filtration &w, const Filtration &f, int p) {
    return graded_subspace(g, w, f.at(p));
}

} // namespace

bool is_mhs(const MixedHodge &m) {
    require_real_weight_filtration(m.w);
    if (m.f.direction != FiltDirection::dec)
        throw std::invalid_argument("Hodge filtration must be decreasing");
    if (m.w.ambient != m.f.ambient)
        throw std::invalid_argument("filtration dimensions differ");
    for (const auto &wst : m.w.steps) {
        int l = wst.first;
        GradedPiece g = graded_piece(m.w, l);
        int gdim = g.reps.cols;
        if (gdim == 0)
            continue;
        // F^p Gr + conj F^{l-p+1} Gr must be a direct sum equal to Gr for all p
        for (int p = m.f.lowest_jump(); p <= m.f.highest_jump() + 1; ++p) {
            Subspace fp = graded_f(g, m.w, m.f, p);
            Subspace fc = graded_f(g, m.w, m.f, l - p + 1).conj();
            if (fp.dim() + fc.dim() != gdim)
                return false;
            if (intersect(fp, fc).dim() != 0)
                return false;
        }
    }
    return true;
}

DeligneSplitting deligne_splitting(const MixedHodge &m) {
    if (!is_mhs(m))
        throw std::invalid_argument("deligne_splitting: input is not a mixed Hodge structure");
    const Filtration &w = m.w;
    const Filtration &f = m.f;
    Filtration fc = f.conj();
    int n = w.ambient;
    int plo = f.lowest_jump(), phi = f.highest_jump();

    DeligneSplitting out;
    out.ambient = n;
    for (int p = plo; p <= phi; ++p)
        for (int q = plo; q <= phi; ++q) {
            Subspace rhs = intersect(fc.at(q), w.at(p + q));
            int jmax = std::max(1, q - plo + 1);
            for (int j = 1; j <= jmax; ++j)
                rhs = sum(rhs, intersect(fc.at(q - j), w.at(p + q - j - 1)));
            Subspace piece = intersect(intersect(f.at(p), w.at(p + q)), rhs);
            if (piece.dim() > 0)
                out.pieces[{p, q}] = piece;
        }

    // the bigrading must refine everything it came from
    int total = 0;
    Subspace acc = Subspace::zero(n);
    for (const auto &kv : out.pieces) {
        total += kv.second.dim();
        acc = sum(acc, kv.second);
    }
    if (total != n || acc.dim() != n)
        throw std::logic_error("deligne_splitting: pieces do not decompose the space");
    for (const auto &wst : w.steps) {
        Subspace s = Subspace::zero(n);
        for (const auto &kv : out.pieces)
            if (kv.first.first + kv.first.second <= wst.first)
                s = sum(s, kv.second);
        if (!(s == wst.second))
            throw std::logic_error("deligne_splitting: weight filtration not recovered");
    }
    for (const auto &fst : f.steps) {
        Subspace s = Subspace::zero(n);
        for (const auto &kv : out.pieces)
            if (kv.first.first >= fst.first)
                s = sum(s, kv.second);
        if (!(s == fst.second))
            throw std::logic_error("deligne_splitting: Hodge filtration not recovered");
    }
    return out;
}

bool is_r_split(const DeligneSplitting &s) {
    for (const auto &kv : s.pieces) {
        auto it = s.pieces.find({kv.first.second, kv.first.first});
        if (it == s.pieces.end())
            return false;
        if (!(kv.second.conj() == it->second))
            return false;
    }
    return true;
}

namespace {

// decompose v along the pieces; returns (p,q) -> component in standard coords
std::map<std::pair<int, int>, std::vector<ExactScalar>>
split_vector(const DeligneSplitting &s, const std::vector<ExactScalar> &v) {
    int n = s.ambient;
    std::vector<std::pair<std::pair<int, int>, int>> offsets;
    ExactMatrix P(n, n);
    int c = 0;
    for (const auto &kv : s.pieces) {
        offsets.push_back({kv.first, c});
        for (int j = 0; j < kv.second.dim(); ++j)
            P.set_col(c++, kv.second.basis.col(j));
    }
    auto x = solve(P, v);
    if (!x)
        throw std::logic_error("split_vector: vector outside the direct sum");
    std::map<std::pair<int, int>, std::vector<ExactScalar>> comp;
    for (size_t k = 0; k < offsets.size(); ++k) {
        auto key = offsets[k].first;
        int off = offsets[k].second;
        int dim = s.pieces.at(key).dim();
        std::vector<ExactScalar> part(n);
        bool nonzero = false;
        for (int j = 0; j < dim; ++j) {
            const ExactScalar &coef = (*x)[off + j];
            if (coef.is_zero())
                continue;
            nonzero = true;
            for (int i = 0; i < n; ++i)
                part[i] += coef * s.pieces.at(key).basis.at(i, j);
        }
        if (nonzero)
            comp[key] = std::move(part);
    }
    return comp;
}

} // namespace

DeltaSplitResult delta_splitting(const MixedHodge &m) {
    int n = m.w.ambient;
    ExactMatrix delta(n, n);
    int span = (m.f.highest_jump() - m.f.lowest_jump()) + (m.w.highest_jump() - m.w.lowest_jump());
    int max_rounds = 2 * span + 4;
    MixedHodge cur = m;
    for (int round = 0; round < max_rounds; ++round) {
        DeligneSplitting s = deligne_splitting(cur);
        if (is_r_split(s)) {
            DeltaSplitResult out;
            out.delta = delta;
            out.rsplit = cur;
            // delta must be real and strictly decrease both bidegrees of the
            // original splitting
            if (!delta.is_real())
                throw std::logic_error("delta_splitting: correction is not real");
            DeligneSplitting s0 = deligne_splitting(m);
            for (const auto &kv : s0.pieces)
                for (int j = 0; j < kv.second.dim(); ++j) {
                    auto comp = split_vector(s0, hodgekit::apply(delta, kv.second.basis.col(j)));
                    for (const auto &ckv : comp)
                        if (!(ckv.first.first < kv.first.first && ckv.first.second < kv.first.second))
                            throw std::logic_error("delta_splitting: correction not strictly lowering");
                }
            return out;
        }
        // smallest defect depth present
        int best = -1;
        for (const auto &kv : s.pieces) {
            int p = kv.first.first, q = kv.first.second;
            for (int j = 0; j < kv.second.dim(); ++j) {
                std::vector<ExactScalar> vb(kv.second.basis.col(j));
                for (auto &x : vb)
                    x = x.conj();
                auto comp = split_vector(s, vb);
                for (const auto &ckv : comp) {
                    if (ckv.first == std::make_pair(q, p))
                        continue;
                    int depth = (q - ckv.first.first) + (p - ckv.first.second);
                    if (depth < 2)
                        throw std::logic_error("delta_splitting: conjugate has an illegal component");
                    if (best < 0 || depth < best)
                        best = depth;
                }
            }
        }
        if (best < 0)
            throw std::logic_error("delta_splitting: no defect found yet splitting is not R-split");
        // correction: conj v = (mirror part in I^{q,p}) + defects, and the
        // defect depends anti-linearly on v, so the matrix is assembled
        // against the mirror parts: L(v) -> -(1/2i) (depth-`best` defect)
        ExactMatrix P(n, n), C(n, n);
        int c = 0;
        for (const auto &kv : s.pieces) {
            int p = kv.first.first, q = kv.first.second;
            for (int j = 0; j < kv.second.dim(); ++j) {
                std::vector<ExactScalar> v = kv.second.basis.col(j);
                std::vector<ExactScalar> vb(v);
                for (auto &x : vb)
                    x = x.conj();
                auto comp = split_vector(s, vb);
                auto lead = comp.find(std::make_pair(q, p));
                if (lead == comp.end())
                    throw std::logic_error("delta_splitting: conjugate misses its mirror piece");
                P.set_col(c, lead->second);
                std::vector<ExactScalar> corr(n);
                for (const auto &ckv : comp) {
                    if (ckv.first == std::make_pair(q, p))
                        continue;
                    if ((q - ckv.first.first) + (p - ckv.first.second) != best)
                        continue;
                    for (int i = 0; i < n; ++i)
                        corr[i] += ckv.second[i];
                }
                ExactScalar scale = ExactScalar(mpq_class(-1, 2)) / ExactScalar::i_unit();
                for (int i = 0; i < n; ++i)
                    corr[i] = scale * corr[i];
                C.set_col(c, corr);
                ++c;
            }
        }
        ExactMatrix cand = C * inverse(P);
        ExactMatrix real_part = ExactScalar(mpq_class(1, 2)) * (cand + cand.conj());
        delta = delta + real_part;
        ExactMatrix rot = exp_nilpotent(ExactScalar(0, mpq_class(-1)) * delta);
        cur.f = transport_filtration(rot, m.f);
        cur.w = m.w;
    }
    throw std::logic_error("delta_splitting: iteration failed to reach an R-split pair");
}

ExactMatrix grading_element(const DeligneSplitting &s, int center) {
    int n = s.ambient;
    ExactMatrix P(n, n), D(n, n);
    int c = 0;
    for (const auto &kv : s.pieces)
        for (int j = 0; j < kv.second.dim(); ++j) {
            P.set_col(c, kv.second.basis.col(j));
            D.at(c, c) = ExactScalar(kv.first.first + kv.first.second - center);
            ++c;
        }
    if (c != n)
        throw std::invalid_argument("grading_element: splitting does not span");
    return P * D * inverse(P);
}

ExactMatrix exp_nilpotent(const ExactMatrix &a) {
    if (a.rows != a.cols)
        throw std::invalid_argument("exp_nilpotent: non-square matrix");
    ExactMatrix out = ExactMatrix::identity(a.rows);
    ExactMatrix term = ExactMatrix::identity(a.rows);
    mpz_class fact = 1;
    for (int k = 1; k <= a.rows + 1; ++k) {
        term = term * a;
        if (term.is_zero())
            return out;
        fact *= k;
        mpq_class coef(1, fact);
        coef.canonicalize();
        out = out + ExactScalar(coef) * term;
    }
    throw std::invalid_argument("exp_nilpotent: matrix is not nilpotent");
}

Filtration transport_filtration(const ExactMatrix &g, const Filtration &f) {
    std::vector<std::pair<int, Subspace>> steps;
    for (const auto &st : f.steps)
        steps.emplace_back(st.first, hodgekit::apply(g, st.second));
    return f.direction == FiltDirection::inc ? Filtration::increasing(f.ambient, std::move(steps))
                                             : Filtration::decreasing(f.ambient, std::move(steps));
}

namespace {

ExactScalar bilinear(const ExactMatrix &q, const std::vector<ExactScalar> &u,
                     const std::vector<ExactScalar> &v) {
    ExactScalar out;
    for (int i = 0; i < q.rows; ++i) {
        if (u[i].is_zero())
            continue;
        for (int j = 0; j < q.cols; ++j)
            if (!q.at(i, j).is_zero() && !v[j].is_zero())
                out += u[i] * q.at(i, j) * v[j];
    }
    return out;
}

} // namespace

PolarizeReport polarized_mhs_check(const MixedHodge &m, const ExactMatrix &n,
                                   const PolarizationForm &q, int center) {
    PolarizeReport rep;
    auto fail = [&](const std::string &why) {
        rep.ok = false;
        rep.failure = why;
        return rep;
    };
    if (q.q.rows != m.w.ambient || q.q.cols != m.w.ambient || n.rows != m.w.ambient || n.cols != m.w.ambient)
        return fail("dimension mismatch");
    if (determinant(q.q).is_zero())
        return fail("form is degenerate");
    ExactMatrix qt = q.q.transpose();
    ExactMatrix signed_q = (center % 2 == 0) ? q.q : ExactScalar(-1) * q.q;
    if (!(qt == signed_q))
        return fail("form symmetry does not match the weight");
    ExactMatrix skew = n.transpose() * q.q + q.q * n;
    if (!skew.is_zero())
        return fail("form is not invariant under the nilpotent");
    if (!is_mhs(m))
        return fail("not a mixed Hodge structure");
    if (!preserves_filtration(n, m.w, -2))
        return fail("nilpotent does not shift the weight filtration by -2");
    if (!preserves_filtration(n, m.f, -1))
        return fail("nilpotent does not shift the Hodge filtration by -1");
    for (const auto &fst : m.f.steps) {
        Subspace other = m.f.at(center - fst.first + 1);
        for (int a = 0; a < fst.second.dim(); ++a)
            for (int b = 0; b < other.dim(); ++b)
                if (!bilinear(q.q, fst.second.basis.col(a), other.basis.col(b)).is_zero())
                    return fail("form does not pair Hodge steps to zero");
    }

    // positivity on primitive (p,q) parts of each graded piece above the center
    for (int l = 0; center + l <= m.w.highest_jump(); ++l) {
        GradedPiece hi = graded_piece(m.w, center + l);
        if (hi.reps.cols == 0)
            continue;
        GradedPiece lo2 = graded_piece(m.w, center - l - 2);
        ExactMatrix nl1 = graded_map(hi, lo2, mat_pow(n, l + 1));
        Subspace prim = kernel(nl1);
        if (prim.dim() == 0)
            continue;
        ExactMatrix nl = mat_pow(n, l);
        int covered = 0;
        for (int p = m.f.lowest_jump(); p <= m.f.highest_jump(); ++p) {
            int qq = center + l - p;
            Subspace fp = graded_f(hi, m.w, m.f, p);
            Subspace fq = graded_f(hi, m.w, m.f, qq).conj();
            Subspace piece = intersect(intersect(fp, fq), prim);
            if (piece.dim() == 0)
                continue;
            covered += piece.dim();
            // lifts of the class representatives
            std::vector<std::vector<ExactScalar>> lifts;
            for (int j = 0; j < piece.dim(); ++j) {
                std::vector<ExactScalar> lift(m.w.ambient);
                for (int r = 0; r < hi.reps.cols; ++r) {
                    const ExactScalar &coef = piece.basis.at(r, j);
                    if (coef.is_zero())
                        continue;
                    for (int i = 0; i < m.w.ambient; ++i)
                        lift[i] += coef * hi.reps.at(i, r);
                }
                lifts.push_back(std::move(lift));
            }
            int dd = (int)lifts.size();
            ExactMatrix h(dd, dd);
            ExactScalar phase = ExactScalar::i_pow(p - qq);
            for (int a = 0; a < dd; ++a)
                for (int b = 0; b < dd; ++b) {
                    std::vector<ExactScalar> vb(lifts[b]);
                    for (auto &x : vb)
                        x = x.conj();
                    h.at(a, b) = phase * bilinear(q.q, lifts[a], hodgekit::apply(nl, vb));
                }
            for (int a = 0; a < dd; ++a)
                for (int b = 0; b < dd; ++b)
                    if (!(h.at(a, b) == h.at(b, a).conj()))
                        return fail("induced form is not hermitian");
            for (int k = 1; k <= dd; ++k) {
                ExactMatrix minor(k, k);
                for (int a = 0; a < k; ++a)
                    for (int b = 0; b < k; ++b)
                        minor.at(a, b) = h.at(a, b);
                ExactScalar det = determinant(minor);
                if (!det.is_real() || !(det.re > 0))
                    return fail("induced form is not positive definite on a primitive piece");
            }
        }
        if (covered != prim.dim())
            return fail("primitive part is not spanned by its (p,q) pieces");
    }
    rep.ok = true;
    return rep;
}

namespace {

// matrix of a linear operator on n x n matrices in the row-major basis
ExactMatrix operator_on_matrices(int n, const std::function<ExactMatrix(const ExactMatrix &)> &t) {
    ExactMatrix out(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            ExactMatrix e(n, n);
            e.at(a, b) = ExactScalar(1);
            ExactMatrix img = t(e);
            int col = a * n + b;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    out.at(i * n + j, col) = img.at(i, j);
        }
    return out;
}

} // namespace

Sl2Triple jacobson_morozov_completion(const ExactMatrix &lower, const ExactMatrix &grading) {
    int n = lower.rows;
    if (!mat_pow(lower, n).is_zero())
        throw std::invalid_argument("jacobson_morozov_completion: lower element is not nilpotent");
    if (!(bracket(grading, lower) == ExactScalar(-2) * lower))
        throw std::invalid_argument("jacobson_morozov_completion: [Y, N] != -2N");

    ExactMatrix ad_low = operator_on_matrices(n, [&](const ExactMatrix &x) { return bracket(x, lower); });
    ExactMatrix ad_gr = operator_on_matrices(n, [&](const ExactMatrix &x) {
        return bracket(grading, x) - ExactScalar(2) * x;
    });
    ExactMatrix sys(2 * n * n, n * n);
    for (int i = 0; i < n * n; ++i)
        for (int j = 0; j < n * n; ++j) {
            sys.at(i, j) = ad_low.at(i, j);
            sys.at(n * n + i, j) = ad_gr.at(i, j);
        }
    std::vector<ExactScalar> rhs(2 * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rhs[i * n + j] = grading.at(i, j);
    auto x = solve(sys, rhs);
    if (!x)
        throw std::invalid_argument("jacobson_morozov_completion: no completion exists");
    if (kernel(sys).dim() != 0)
        throw std::invalid_argument("jacobson_morozov_completion: completion is not unique");
    ExactMatrix upper = vec_to_end(*x, n);
    if (!(bracket(upper, lower) == grading) || !(bracket(grading, upper) == ExactScalar(2) * upper))
        throw std::logic_error("jacobson_morozov_completion: solved triple fails its brackets");
    Sl2Triple t;
    t.lower = lower;
    t.grading = grading;
    t.upper = upper;
    return t;
}

namespace {

// integer eigenvalue candidates within the Gershgorin bound
std::vector<std::pair<int, Subspace>> integer_eigenspaces(const ExactMatrix &y) {
    int n = y.rows;
    mpq_class bound = 0;
    for (int i = 0; i < n; ++i) {
        mpq_class row = 0;
        for (int j = 0; j < n; ++j)
            row += abs(y.at(i, j).re) + abs(y.at(i, j).im);
        if (row > bound)
            bound = row;
    }
    long b = (long)(bound.get_d() + 1.0);
    std::vector<std::pair<int, Subspace>> out;
    int total = 0;
    for (long lam = -b; lam <= b; ++lam) {
        ExactMatrix shifted = y - ExactScalar(lam) * ExactMatrix::identity(n);
        Subspace es = kernel(shifted);
        if (es.dim() > 0) {
            out.emplace_back((int)lam, es);
            total += es.dim();
        }
    }
    if (total != n)
        throw std::invalid_argument("grading is not semisimple with integer eigenvalues");
    return out;
}

} // namespace

Multigrading commuting_multigrading(const std::vector<ExactMatrix> &gradings, int center) {
    if (gradings.empty())
        throw std::invalid_argument("commuting_multigrading: no gradings");
    int n = gradings.front().rows;
    for (const auto &g : gradings)
        if (g.rows != n || g.cols != n)
            throw std::invalid_argument("commuting_multigrading: shape mismatch");
    for (size_t a = 0; a < gradings.size(); ++a)
        for (size_t b = a + 1; b < gradings.size(); ++b)
            if (!bracket(gradings[a], gradings[b]).is_zero())
                throw std::invalid_argument("commuting_multigrading: gradings do not commute");

    Multigrading mg;
    mg.ambient = n;
    mg.center = center;
    std::vector<std::pair<std::vector<int>, Subspace>> parts;
    parts.push_back({{}, Subspace::full(n)});
    for (const auto &g : gradings) {
        auto eig = integer_eigenspaces(g);
        std::vector<std::pair<std::vector<int>, Subspace>> next;
        for (const auto &part : parts)
            for (const auto &ev : eig) {
                Subspace cut = intersect(part.second, ev.second);
                if (cut.dim() == 0)
                    continue;
                std::vector<int> key = part.first;
                key.push_back(center + ev.first);
                next.push_back({std::move(key), cut});
            }
        parts = std::move(next);
    }
    int total = 0;
    for (auto &p : parts) {
        total += p.second.dim();
        mg.summands[p.first] = p.second;
    }
    if (total != n)
        throw std::invalid_argument("commuting_multigrading: joint eigenspaces do not span");
    return mg;
}

std::vector<ExactMatrix> grading_increments(const std::vector<ExactMatrix> &cumulative) {
    std::vector<ExactMatrix> out;
    for (size_t k = 0; k < cumulative.size(); ++k)
        out.push_back(k == 0 ? cumulative[0] : cumulative[k] - cumulative[k - 1]);
    return out;
}

ExactMatrix project_to_joint_kernel(const ExactMatrix &op, const std::vector<ExactMatrix> &gradings) {
    int n = op.rows;
    Multigrading mg = commuting_multigrading(gradings, 0);
    ExactMatrix P(n, n);
    std::vector<int> block_of(n);
    int c = 0, blk = 0;
    for (const auto &kv : mg.summands) {
        for (int j = 0; j < kv.second.dim(); ++j) {
            P.set_col(c, kv.second.basis.col(j));
            block_of[c] = blk;
            ++c;
        }
        ++blk;
    }
    ExactMatrix conj_op = inverse(P) * op * P;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (block_of[i] != block_of[j])
                conj_op.at(i, j) = ExactScalar(0);
    return P * conj_op * inverse(P);
}

} // namespace hodgekit
