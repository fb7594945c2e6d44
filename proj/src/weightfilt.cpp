#include "hodgekit/weightfilt.hpp"

#include <random>
#include <stdexcept>

namespace hodgekit {

NilpotentOperator NilpotentOperator::from(const ExactMatrix &m) {
    if (m.rows != m.cols)
        throw std::invalid_argument("nilpotent operator must be square");
    NilpotentOperator n;
    n.matrix = m;
    ExactMatrix p = ExactMatrix::identity(m.rows);
    for (int e = 0; e <= m.rows; ++e) {
        if (p.is_zero()) {
            n.index = e;
            return n;
        }
        p = p * m;
    }
    throw std::invalid_argument("matrix is not nilpotent");
}

Filtration monodromy_filtration(const NilpotentOperator &n, int center) {
    const ExactMatrix &N = n.matrix;
    int dim = N.rows;
    int d = n.index;
    // powers 0..d+1
    std::vector<ExactMatrix> pw;
    pw.push_back(ExactMatrix::identity(dim));
    for (int i = 1; i <= d + 1; ++i)
        pw.push_back(pw.back() * N);
    std::vector<std::pair<int, Subspace>> steps;
    for (int l = -d + 1; l <= d - 1; ++l) {
        Subspace acc = Subspace::zero(dim);
        for (int i = std::max(0, -l); l + i + 1 <= d + 1 && i <= d; ++i) {
            Subspace part = intersect(kernel(pw[std::min(l + i + 1, d + 1)]), image(pw[i]));
            acc = sum(acc, part);
        }
        steps.emplace_back(center + l, acc);
    }
    if (steps.empty())
        steps.emplace_back(center, Subspace::full(dim)); // N = 0
    Filtration w = Filtration::increasing(dim, std::move(steps));
    if (!monodromy_axioms_hold(N, center, w))
        throw std::logic_error("monodromy filtration failed its defining axioms");
    return w;
}

bool monodromy_axioms_hold(const ExactMatrix &n, int center, const Filtration &w) {
    if (w.direction != FiltDirection::inc)
        return false;
    // N W_l c W_{l-2}
    for (const auto &st : w.steps) {
        Subspace target = w.at(st.first - 2);
        for (int j = 0; j < st.second.dim(); ++j)
            if (!target.contains(hodgekit::apply(n, st.second.basis.col(j))))
                return false;
    }
    // N^l : Gr_{center+l} ~ Gr_{center-l}
    int span = std::max(w.highest_jump() - center, center - w.lowest_jump());
    for (int l = 1; l <= span; ++l) {
        GradedPiece hi = graded_piece(w, center + l);
        GradedPiece lo = graded_piece(w, center - l);
        if (hi.reps.cols != lo.reps.cols)
            return false;
        if (hi.reps.cols == 0)
            continue;
        // surjectivity of the induced map plus equal dimensions
        ExactMatrix nl = mat_pow(n, l);
        Subspace img = Subspace::zero(w.ambient);
        for (int j = 0; j < hi.reps.cols; ++j)
            img = sum(img, Subspace::span(w.ambient, {hodgekit::apply(nl, hi.reps.col(j))}));
        Subspace target = w.at(center - l);
        if (!(sum(img, lo.lower) == target))
            return false;
    }
    return true;
}

namespace {

struct RestrictionData {
    ExactMatrix basis;     // ambient x a, basis of the subspace A
    ExactMatrix comp;      // ambient x b, complement representatives
    ExactMatrix op_sub;    // a x a, restriction of N to A
    ExactMatrix op_quot;   // b x b, induced map on V/A in comp coordinates
};

// coordinates (alpha, beta) of v with respect to [basis | comp]
std::pair<std::vector<ExactScalar>, std::vector<ExactScalar>>
split_coords(const RestrictionData &rd, const std::vector<ExactScalar> &v) {
    int n = (int)v.size();
    ExactMatrix m(n, rd.basis.cols + rd.comp.cols);
    for (int j = 0; j < rd.basis.cols; ++j)
        m.set_col(j, rd.basis.col(j));
    for (int j = 0; j < rd.comp.cols; ++j)
        m.set_col(rd.basis.cols + j, rd.comp.col(j));
    auto x = solve(m, v);
    if (!x)
        throw std::logic_error("split_coords: vector outside ambient decomposition");
    std::vector<ExactScalar> alpha(x->begin(), x->begin() + rd.basis.cols);
    std::vector<ExactScalar> beta(x->begin() + rd.basis.cols, x->end());
    return {std::move(alpha), std::move(beta)};
}

RestrictionData make_restriction(const ExactMatrix &N, const Subspace &A) {
    RestrictionData rd;
    rd.basis = A.basis;
    int n = A.ambient;
    // complement from standard vectors independent of A
    Subspace acc = A;
    std::vector<std::vector<ExactScalar>> comp;
    for (int j = 0; j < n && (int)comp.size() < n - A.dim(); ++j) {
        std::vector<ExactScalar> ej(n);
        ej[j] = ExactScalar(1);
        if (!acc.contains(ej)) {
            acc = sum(acc, Subspace::span(n, {ej}));
            comp.push_back(std::move(ej));
        }
    }
    rd.comp = ExactMatrix(n, (int)comp.size());
    for (int j = 0; j < (int)comp.size(); ++j)
        rd.comp.set_col(j, comp[j]);
    rd.op_sub = ExactMatrix(A.dim(), A.dim());
    for (int j = 0; j < A.dim(); ++j) {
        auto [alpha, beta] = split_coords(rd, hodgekit::apply(N, A.basis.col(j)));
        for (const auto &s : beta)
            if (!s.is_zero())
                throw std::invalid_argument("operator does not preserve the filtration step");
        for (int i = 0; i < A.dim(); ++i)
            rd.op_sub.at(i, j) = alpha[i];
    }
    rd.op_quot = ExactMatrix(rd.comp.cols, rd.comp.cols);
    for (int j = 0; j < rd.comp.cols; ++j) {
        auto [alpha, beta] = split_coords(rd, hodgekit::apply(N, rd.comp.col(j)));
        (void)alpha;
        for (int i = 0; i < rd.comp.cols; ++i)
            rd.op_quot.at(i, j) = beta[i];
    }
    return rd;
}

// quotient coordinates of the image of v in V/A
std::vector<ExactScalar> quot_coords(const RestrictionData &rd, const std::vector<ExactScalar> &v) {
    return split_coords(rd, v).second;
}

Subspace quot_image(const RestrictionData &rd, const Subspace &s) {
    std::vector<std::vector<ExactScalar>> vs;
    for (int j = 0; j < s.dim(); ++j)
        vs.push_back(quot_coords(rd, s.basis.col(j)));
    return Subspace::span(rd.comp.cols, vs);
}

// subspace of V spanned by A and the comp-lift of a quotient subspace
Subspace lift_quot(const RestrictionData &rd, const Subspace &q, const Subspace &A) {
    Subspace out = A;
    if (q.dim() > 0)
        out = sum(out, Subspace::span_cols(rd.comp * q.basis));
    return out;
}

std::optional<Filtration> relative_recursive(const ExactMatrix &N, const Filtration &w);

// Core step: w has at least two jumps; A = next-to-top step, B = V/A.
std::optional<Filtration> relative_two_level(const ExactMatrix &N, const Filtration &w) {
    int n = w.ambient;
    int top = w.highest_jump();
    Subspace A = w.steps[w.steps.size() - 2].second;
    RestrictionData rd = make_restriction(N, A);

    // lower part recursion
    std::vector<std::pair<int, Subspace>> lower_steps;
    for (size_t k = 0; k + 1 < w.steps.size(); ++k) {
        Subspace cut = w.steps[k].second;
        std::vector<std::vector<ExactScalar>> vs;
        for (int j = 0; j < cut.dim(); ++j) {
            auto [alpha, beta] = split_coords(rd, cut.basis.col(j));
            (void)beta;
            vs.push_back(alpha);
        }
        lower_steps.emplace_back(w.steps[k].first, Subspace::span(A.dim(), vs));
    }
    Filtration wA = Filtration::increasing(A.dim(), std::move(lower_steps));
    auto MA = relative_recursive(rd.op_sub, wA);
    if (!MA)
        return std::nullopt;

    // monodromy filtration on the quotient, centered at the top jump
    NilpotentOperator nq = NilpotentOperator::from(rd.op_quot);
    Filtration KB = monodromy_filtration(nq, top);

    int d = NilpotentOperator::from(N).index;
    int m_lo = w.lowest_jump() - std::max(d - 1, 0);
    int m_hi = top + std::max(d - 1, 0);

    auto MA_at = [&](int m) -> Subspace {
        // MA lives in A coordinates; return it as a subspace of V
        Subspace s = MA->at(m);
        if (s.dim() == 0)
            return Subspace::zero(n);
        return Subspace::span_cols(rd.basis * s.basis);
    };

    std::vector<std::pair<int, Subspace>> steps;
    auto recorded = [&](int mm) -> Subspace {
        if (mm < m_lo || steps.empty())
            return Subspace::zero(n);
        int idx = mm - m_lo;
        return steps[std::min(idx, (int)steps.size() - 1)].second;
    };
    for (int m = m_lo; m <= m_hi; ++m) {
        Subspace M_prev2 = recorded(m - 2);
        Subspace M_prev1 = recorded(m - 1);

        // candidates: map into KB_m upstairs and into M_{m-2} under N
        Subspace pre_kb = lift_quot(rd, KB.at(m), A);
        Subspace vm = intersect(pre_kb, preimage(N, M_prev2));

        // fresh lifts: candidates whose quotient classes extend KB_{m-1} + pi(M_{m-1})
        Subspace quot_seen = sum(KB.at(m - 1), quot_image(rd, M_prev1));
        std::vector<std::vector<ExactScalar>> lifts;
        for (int j = 0; j < vm.dim(); ++j) {
            std::vector<ExactScalar> v = vm.basis.col(j);
            std::vector<ExactScalar> q = quot_coords(rd, v);
            if (!quot_seen.contains(q)) {
                quot_seen = sum(quot_seen, Subspace::span(rd.comp.cols, {q}));
                lifts.push_back(std::move(v));
            }
        }
        Subspace next = sum(sum(M_prev1, MA_at(m)), Subspace::span(n, lifts));
        steps.emplace_back(m, next);
    }
    if (!steps.back().second.is_full())
        return std::nullopt;
    return Filtration::increasing(n, std::move(steps));
}

std::optional<Filtration> relative_recursive(const ExactMatrix &N, const Filtration &w) {
    NilpotentOperator nop = NilpotentOperator::from(N);
    if (w.steps.size() == 1)
        return monodromy_filtration(nop, w.highest_jump());
    return relative_two_level(N, w);
}

bool relative_axioms_hold(const ExactMatrix &N, const Filtration &w, const Filtration &M) {
    // N M_m c M_{m-2}
    for (const auto &st : M.steps) {
        Subspace target = M.at(st.first - 2);
        for (int j = 0; j < st.second.dim(); ++j)
            if (!target.contains(hodgekit::apply(N, st.second.basis.col(j))))
                return false;
    }
    // induced filtration on each Gr^w_l is the monodromy filtration centered at l
    for (const auto &wst : w.steps) {
        int l = wst.first;
        GradedPiece g = graded_piece(w, l);
        if (g.reps.cols == 0)
            continue;
        ExactMatrix n_gr = graded_map(g, g, N);
        Filtration expect = monodromy_filtration(NilpotentOperator::from(n_gr), l);
        std::vector<std::pair<int, Subspace>> got_steps;
        for (int m = M.lowest_jump(); m <= M.highest_jump(); ++m)
            got_steps.emplace_back(m, graded_subspace(g, w, intersect(M.at(m), wst.second)));
        Filtration got = Filtration::increasing(g.reps.cols, std::move(got_steps));
        if (!(got == expect))
            return false;
    }
    return true;
}

} // namespace

std::optional<Filtration> relative_weight_filtration(const NilpotentOperator &n, const Filtration &w) {
    if (w.direction != FiltDirection::inc)
        throw std::invalid_argument("relative_weight_filtration expects an increasing filtration");
    if (n.matrix.rows != w.ambient)
        throw std::invalid_argument("relative_weight_filtration: dimension mismatch");
    if (!preserves_filtration(n.matrix, w, 0))
        throw std::invalid_argument("operator does not preserve the filtration");
    auto M = relative_recursive(n.matrix, w);
    if (!M)
        return std::nullopt;
    if (!relative_axioms_hold(n.matrix, w, *M))
        return std::nullopt;
    return M;
}

ConeConstancyResult cone_constancy_check(const ConeSpec &spec, int center, std::uint64_t seed) {
    if (spec.generators.empty())
        throw std::invalid_argument("cone_constancy_check: no generators");
    int n = spec.generators.front().rows;
    for (const auto &g : spec.generators)
        if (g.rows != n || g.cols != n)
            throw std::invalid_argument("cone_constancy_check: generator shape mismatch");

    std::vector<std::vector<mpq_class>> points;
    for (size_t i = 0; i < spec.generators.size(); ++i) {
        std::vector<mpq_class> c(spec.generators.size(), mpq_class(0));
        c[i] = 1;
        points.push_back(std::move(c));
    }
    if (!spec.sample_coefficients.empty()) {
        for (const auto &c : spec.sample_coefficients) {
            if (c.size() != spec.generators.size())
                throw std::invalid_argument("cone_constancy_check: coefficient length mismatch");
            points.push_back(c);
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> num(1, 9), den(1, 9);
        for (int s = 0; s < 5; ++s) {
            std::vector<mpq_class> c;
            for (size_t i = 0; i < spec.generators.size(); ++i) {
                mpq_class q(num(rng), den(rng));
                q.canonicalize();
                c.push_back(q);
            }
            points.push_back(std::move(c));
        }
    }

    ConeConstancyResult res;
    bool have_first = false;
    std::vector<mpq_class> first_coeffs;
    for (const auto &c : points) {
        ExactMatrix comb(n, n);
        for (size_t i = 0; i < spec.generators.size(); ++i)
            comb = comb + ExactScalar(c[i]) * spec.generators[i];
        NilpotentOperator nc = NilpotentOperator::from(comb); // throws if not nilpotent
        Filtration w = monodromy_filtration(nc, center);
        if (!have_first) {
            res.witness = w;
            first_coeffs = c;
            have_first = true;
        } else if (!(w == res.witness)) {
            res.constant = false;
            res.coeffs_a = first_coeffs;
            res.coeffs_b = c;
            res.filt_a = res.witness;
            res.filt_b = w;
            return res;
        }
    }
    res.constant = true;
    return res;
}

} // namespace hodgekit
