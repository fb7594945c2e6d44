#include "hodgekit/filtration.hpp"

#include <algorithm>
#include <stdexcept>

namespace hodgekit {

namespace {

void sort_and_check_weights(std::vector<std::pair<int, Subspace>> &raw) {
    std::sort(raw.begin(), raw.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (size_t k = 1; k < raw.size(); ++k)
        if (raw[k].first == raw[k - 1].first && !(raw[k].second == raw[k - 1].second))
            throw std::invalid_argument("filtration: conflicting subspaces at one weight");
}

} // namespace

Filtration Filtration::increasing(int ambient, std::vector<std::pair<int, Subspace>> raw) {
    if (raw.empty())
        throw std::invalid_argument("filtration: no steps");
    sort_and_check_weights(raw);
    Filtration f;
    f.ambient = ambient;
    f.direction = FiltDirection::inc;
    for (auto &st : raw) {
        if (st.second.ambient != ambient)
            throw std::invalid_argument("filtration: ambient mismatch");
        if (!f.steps.empty()) {
            if (st.second == f.steps.back().second)
                continue; // keep the earliest weight where the subspace appears
            if (!st.second.contains(f.steps.back().second) || st.second.dim() <= f.steps.back().second.dim())
                throw std::invalid_argument("filtration: steps not increasing");
        }
        f.steps.emplace_back(st.first, st.second);
    }
    if (!f.steps.back().second.is_full())
        throw std::invalid_argument("filtration: increasing filtration must end at the full space");
    if (f.steps.front().second.is_zero())
        f.steps.erase(f.steps.begin());
    if (f.steps.empty())
        throw std::invalid_argument("filtration: empty ambient space is not supported");
    return f;
}

Filtration Filtration::decreasing(int ambient, std::vector<std::pair<int, Subspace>> raw) {
    if (raw.empty())
        throw std::invalid_argument("filtration: no steps");
    sort_and_check_weights(raw);
    Filtration f;
    f.ambient = ambient;
    f.direction = FiltDirection::dec;
    // scan from the top weight downward so that each subspace is recorded at
    // the largest weight where it appears
    std::vector<std::pair<int, Subspace>> rev;
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
        if (it->second.ambient != ambient)
            throw std::invalid_argument("filtration: ambient mismatch");
        if (!rev.empty()) {
            if (it->second == rev.back().second)
                continue;
            if (!it->second.contains(rev.back().second) || it->second.dim() <= rev.back().second.dim())
                throw std::invalid_argument("filtration: steps not decreasing");
        }
        rev.emplace_back(*it);
    }
    if (!rev.back().second.is_full())
        throw std::invalid_argument("filtration: decreasing filtration must start at the full space");
    if (rev.front().second.is_zero())
        rev.erase(rev.begin());
    if (rev.empty())
        throw std::invalid_argument("filtration: empty ambient space is not supported");
    f.steps.assign(rev.rbegin(), rev.rend());
    return f;
}

Subspace Filtration::at(int w) const {
    if (direction == FiltDirection::inc) {
        // largest jump <= w
        const Subspace *best = nullptr;
        for (const auto &st : steps) {
            if (st.first <= w)
                best = &st.second;
            else
                break;
        }
        return best ? *best : Subspace::zero(ambient);
    }
    // dec: smallest jump >= w
    for (const auto &st : steps)
        if (st.first >= w)
            return st.second;
    return Subspace::zero(ambient);
}

int Filtration::lowest_jump() const { return steps.front().first; }
int Filtration::highest_jump() const { return steps.back().first; }

Filtration Filtration::conj() const {
    Filtration f = *this;
    for (auto &st : f.steps)
        st.second = st.second.conj();
    return f;
}

Filtration Filtration::shifted(int d) const {
    Filtration f = *this;
    for (auto &st : f.steps)
        st.first += d;
    return f;
}

bool preserves_filtration(const ExactMatrix &op, const Filtration &w, int shift) {
    for (const auto &st : w.steps) {
        Subspace target = w.at(st.first + shift);
        for (int j = 0; j < st.second.dim(); ++j)
            if (!target.contains(hodgekit::apply(op, st.second.basis.col(j))))
                return false;
    }
    return true;
}

Filtration induced_filtration_on_end(const Filtration &w) {
    if (w.direction != FiltDirection::inc)
        throw std::invalid_argument("induced_filtration_on_end expects an increasing filtration");
    int n = w.ambient;
    int lo = w.lowest_jump(), hi = w.highest_jump();
    int span = hi - lo;
    std::vector<std::pair<int, Subspace>> steps;
    for (int m = -span; m <= span; ++m) {
        // conditions: for every jump l, Ann(W_{l+m}) X (basis of W_l) = 0
        std::vector<std::vector<ExactScalar>> rows;
        for (const auto &st : w.steps) {
            const Subspace &wl = st.second;
            ExactMatrix ann = annihilator_rows(w.at(st.first + m));
            for (int r = 0; r < ann.rows; ++r)
                for (int j = 0; j < wl.dim(); ++j) {
                    std::vector<ExactScalar> row(size_t(n) * n);
                    for (int i = 0; i < n; ++i) {
                        if (ann.at(r, i).is_zero())
                            continue;
                        for (int k = 0; k < n; ++k)
                            row[size_t(i) * n + k] = ann.at(r, i) * wl.basis.at(k, j);
                    }
                    rows.push_back(std::move(row));
                }
        }
        Subspace sm;
        if (rows.empty()) {
            sm = Subspace::full(n * n);
        } else {
            ExactMatrix cond((int)rows.size(), n * n);
            for (int r = 0; r < (int)rows.size(); ++r)
                for (int c = 0; c < n * n; ++c)
                    cond.at(r, c) = rows[r][c];
            sm = kernel(cond);
        }
        steps.emplace_back(m, sm);
    }
    return Filtration::increasing(n * n, std::move(steps));
}

GradedPiece graded_piece(const Filtration &w, int l) {
    if (w.direction != FiltDirection::inc)
        throw std::invalid_argument("graded_piece expects an increasing filtration");
    GradedPiece g;
    g.weight = l;
    g.lower = w.at(l - 1);
    Subspace wl = w.at(l);
    Subspace acc = g.lower;
    std::vector<std::vector<ExactScalar>> reps;
    for (int j = 0; j < wl.dim(); ++j) {
        std::vector<ExactScalar> v = wl.basis.col(j);
        if (!acc.contains(v)) {
            acc = sum(acc, Subspace::span(w.ambient, {v}));
            reps.push_back(std::move(v));
        }
    }
    g.reps = ExactMatrix(w.ambient, (int)reps.size());
    for (int j = 0; j < (int)reps.size(); ++j)
        g.reps.set_col(j, reps[j]);
    return g;
}

std::vector<ExactScalar> graded_coordinates(const GradedPiece &g, const std::vector<ExactScalar> &v) {
    // v = reps * alpha + lower * beta
    int n = (int)v.size();
    ExactMatrix m(n, g.reps.cols + g.lower.dim());
    for (int j = 0; j < g.reps.cols; ++j)
        m.set_col(j, g.reps.col(j));
    for (int j = 0; j < g.lower.dim(); ++j)
        m.set_col(g.reps.cols + j, g.lower.basis.col(j));
    auto x = solve(m, v);
    if (!x)
        throw std::invalid_argument("graded_coordinates: vector not in the filtration step");
    std::vector<ExactScalar> alpha(x->begin(), x->begin() + g.reps.cols);
    return alpha;
}

Subspace graded_subspace(const GradedPiece &g, const Filtration &w, const Subspace &s) {
    Subspace cut = intersect(s, w.at(g.weight));
    std::vector<std::vector<ExactScalar>> vs;
    for (int j = 0; j < cut.dim(); ++j)
        vs.push_back(graded_coordinates(g, cut.basis.col(j)));
    return Subspace::span(g.reps.cols, vs);
}

ExactMatrix graded_map(const GradedPiece &from, const GradedPiece &to, const ExactMatrix &op) {
    ExactMatrix m(to.reps.cols, from.reps.cols);
    for (int j = 0; j < from.reps.cols; ++j) {
        std::vector<ExactScalar> img = hodgekit::apply(op, from.reps.col(j));
        std::vector<ExactScalar> cls = graded_coordinates(to, img);
        for (int i = 0; i < to.reps.cols; ++i)
            m.at(i, j) = cls[i];
    }
    return m;
}

} // namespace hodgekit
