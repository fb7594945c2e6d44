#include "hodgekit/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace hodgekit {

using nlohmann::json;

json matrix_to_json(const ExactMatrix &m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j)
            row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(rows)}};
}

ExactMatrix matrix_from_json(const json &j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw std::invalid_argument("matrix json must have rows, cols, entries");
    int r = j.at("rows").get<int>();
    int c = j.at("cols").get<int>();
    const json &ent = j.at("entries");
    if (!ent.is_array() || (int)ent.size() != r)
        throw std::invalid_argument("matrix json: entries has wrong row count");
    ExactMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        const json &row = ent.at(i);
        if (!row.is_array() || (int)row.size() != c)
            throw std::invalid_argument("matrix json: row has wrong length");
        for (int k = 0; k < c; ++k)
            m.at(i, k) = ExactScalar::parse(row.at(k).get<std::string>());
    }
    return m;
}

json subspace_to_json(const Subspace &s) {
    json basis = json::array();
    for (int j = 0; j < s.dim(); ++j) {
        json vec = json::array();
        for (int i = 0; i < s.ambient; ++i)
            vec.push_back(s.basis.at(i, j).str());
        basis.push_back(std::move(vec));
    }
    return basis;
}

json filtration_to_json(const Filtration &f) {
    json steps = json::array();
    for (const auto &st : f.steps)
        steps.push_back(json{{"weight", st.first}, {"basis", subspace_to_json(st.second)}});
    return json{{"dim", f.ambient},
                {"direction", f.direction == FiltDirection::inc ? "inc" : "dec"},
                {"steps", std::move(steps)}};
}

Filtration filtration_from_json(const json &j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("direction") || !j.contains("steps"))
        throw std::invalid_argument("filtration json must have dim, direction, steps");
    int n = j.at("dim").get<int>();
    std::string dir = j.at("direction").get<std::string>();
    if (dir != "inc" && dir != "dec")
        throw std::invalid_argument("filtration json: direction must be inc or dec");
    std::vector<std::pair<int, Subspace>> steps;
    for (const json &st : j.at("steps")) {
        int w = st.at("weight").get<int>();
        std::vector<std::vector<ExactScalar>> vecs;
        for (const json &jv : st.at("basis")) {
            std::vector<ExactScalar> v;
            for (const json &je : jv)
                v.push_back(ExactScalar::parse(je.get<std::string>()));
            if ((int)v.size() != n)
                throw std::invalid_argument("filtration json: vector length mismatch");
            vecs.push_back(std::move(v));
        }
        steps.emplace_back(w, Subspace::span(n, vecs));
    }
    return dir == "inc" ? Filtration::increasing(n, std::move(steps))
                        : Filtration::decreasing(n, std::move(steps));
}

ExactMatrix matrix_from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return matrix_from_json(j);
}

Filtration filtration_from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return filtration_from_json(j);
}

void write_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace hodgekit
