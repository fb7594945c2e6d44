#include "hodgekit/json_io.hpp"
#include "hodgekit/mhs.hpp"
#include "hodgekit/period.hpp"
#include "hodgekit/reduction.hpp"
#include "hodgekit/verify.hpp"
#include "hodgekit/weightfilt.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using nlohmann::json;
using namespace hodgekit;

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const std::string &path, const std::string &text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + tmp);
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

// stdout by default, a file under --out when given
void emit_text(const std::string &text, const std::string &out_dir, const std::string &name) {
    if (out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(out_dir);
    std::string path = out_dir + "/" + name;
    write_atomic(path, text);
    std::cerr << "wrote " << path << "\n";
}

void emit_json(const json &j, const std::string &out_dir, const std::string &name) {
    emit_text(j.dump(2) + "\n", out_dir, name);
}

std::vector<double> parse_doubles(const std::string &s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) {
        size_t used = 0;
        out.push_back(std::stod(part, &used));
    }
    return out;
}

std::vector<std::complex<double>> parse_points(const std::string &s) {
    std::vector<std::complex<double>> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::vector<double> xy = parse_doubles(part, ',');
        if (xy.size() != 2)
            throw std::invalid_argument("expected \"x,y\" per factor: " + part);
        out.emplace_back(xy[0], xy[1]);
    }
    if (out.empty())
        throw std::invalid_argument("no point given");
    return out;
}

json complex_list(const std::vector<std::complex<double>> &v) {
    json out = json::array();
    for (const auto &c : v)
        out.push_back({c.real(), c.imag()});
    return out;
}

MixedHodge mhs_from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    json j = json::parse(in);
    return {filtration_from_json(j.at("w")), filtration_from_json(j.at("f"))};
}

// --- subcommand bodies -------------------------------------------------------

int run_wfilt(const std::string &matrix_path, int center, const std::string &relative_path,
              const std::string &out_dir) {
    NilpotentOperator op = NilpotentOperator::from(matrix_from_file(matrix_path));
    if (relative_path.empty()) {
        emit_json(filtration_to_json(monodromy_filtration(op, center)), out_dir, "wfilt.json");
        return 0;
    }
    Filtration w = filtration_from_file(relative_path);
    std::optional<Filtration> rel = relative_weight_filtration(op, w);
    json j;
    j["exists"] = rel.has_value();
    if (rel)
        j["filtration"] = filtration_to_json(*rel);
    emit_json(j, out_dir, "wfilt.json");
    return rel ? 0 : 1;
}

int run_split(const std::string &mhs_path, const std::string &out_dir) {
    MixedHodge m = mhs_from_file(mhs_path);
    DeligneSplitting ds = deligne_splitting(m);
    json pieces = json::array();
    for (const auto &kv : ds.pieces)
        pieces.push_back({{"p", kv.first.first},
                          {"q", kv.first.second},
                          {"basis", subspace_to_json(kv.second)}});
    json j{{"dim", ds.ambient}, {"pieces", pieces}, {"r_split", is_r_split(ds)}};
    if (!is_r_split(ds)) {
        DeltaSplitResult dr = delta_splitting(m);
        j["delta"] = matrix_to_json(dr.delta);
        j["rsplit_f"] = filtration_to_json(dr.rsplit.f);
    }
    emit_json(j, out_dir, "split.json");
    return 0;
}

int run_polarize(const std::string &mhs_path, const std::string &n_path,
                 const std::string &q_path, int k, const std::string &out_dir) {
    MixedHodge m = mhs_from_file(mhs_path);
    ExactMatrix n = matrix_from_file(n_path);
    PolarizationForm q{matrix_from_file(q_path), k};
    PolarizeReport rep = polarized_mhs_check(m, n, q, k);
    json j{{"ok", rep.ok}, {"failure", rep.failure}};
    emit_json(j, out_dir, "polarize-check.json");
    return rep.ok ? 0 : 1;
}

int run_reduce(const std::string &z_arg, const std::string &out_dir) {
    std::vector<double> xy = parse_doubles(z_arg, ',');
    if (xy.size() != 2)
        throw std::invalid_argument("--z expects \"x,y\"");
    ReduceResult r = reduce_sl2z(HPoint{xy[0], xy[1]});
    json j{{"z0", {r.z0.x, r.z0.y}},
           {"gamma", {{r.gamma.a, r.gamma.b}, {r.gamma.c, r.gamma.d}}}};
    emit_json(j, out_dir, "reduce.json");
    return 0;
}

RealMatrix diag_matrix(const std::vector<double> &a) {
    RealMatrix d((int)a.size());
    for (size_t i = 0; i < a.size(); ++i)
        d.at((int)i, (int)i) = a[i];
    return d;
}

int run_siegel_check(std::uint64_t seed, const std::string &out_dir) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    double worst_recon = 0.0, worst_ortho = 0.0;
    int samples = 0;
    for (int n = 2; n <= 4; ++n) {
        int want = n == 2 ? 4000 : 3000;
        while (samples < (n - 1) * 4000 - (n - 2) * 1000 && want > 0) {
            RealMatrix g(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    g.at(i, j) = entry(rng);
            double d = g.det();
            if (std::fabs(d) < 0.5)
                continue;
            if (d < 0) {
                for (int j = 0; j < n; ++j)
                    g.at(0, j) = -g.at(0, j);
                d = -d;
            }
            double scale = std::pow(d, -1.0 / n);
            for (double &v : g.a)
                v *= scale;
            IwasawaDecomposition dec = iwasawa(g);
            RealMatrix recon = dec.n_part * diag_matrix(dec.a_part) * dec.k_part;
            worst_recon = std::max(worst_recon, recon.dist(g));
            RealMatrix gram = dec.k_part * dec.k_part.transpose();
            worst_ortho = std::max(worst_ortho, gram.dist(RealMatrix::identity(n)));
            ++samples;
            --want;
        }
    }

    // membership must agree between the half-plane point and its coset matrix
    SiegelSet s{2, 1.0, {{-0.5, 0.5}}};
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.1, 5.0);
    int consistency_bad = 0;
    for (int k = 0; k < 2000; ++k) {
        HPoint z{ux(rng), uy(rng)};
        double r = std::sqrt(z.y);
        RealMatrix g(2);
        g.at(0, 0) = r;
        g.at(0, 1) = z.x / r;
        g.at(1, 1) = 1.0 / r;
        if (siegel_membership(z, s) != siegel_membership(g, s))
            ++consistency_bad;
    }

    std::vector<double> ep2 = ep_chart({2.0, 0.5});
    std::vector<double> ep3 = ep_chart({4.0, 1.0, 0.25});
    bool ep_ok = std::fabs(ep2[0] - 0.25) < 1e-12 && std::fabs(ep3[0] - 0.25) < 1e-12 &&
                 std::fabs(ep3[1] - 0.25) < 1e-12;

    bool ok = worst_recon <= 1e-10 && worst_ortho <= 1e-7 && consistency_bad == 0 && ep_ok;
    json j{{"samples", samples},
           {"max_reconstruction_error", worst_recon},
           {"max_orthogonality_error", worst_ortho},
           {"membership_mismatches", consistency_bad},
           {"root_chart_examples_ok", ep_ok},
           {"ok", ok}};
    emit_json(j, out_dir, "siegel-check.json");
    return ok ? 0 : 1;
}

// best near-witness of the overlap: the sampled point of s1 whose image under
// gamma violates s2 least (0 for genuine overlaps, ~grid resolution for
// boundary contacts kept by the conservative intersection test)
HPoint overlap_witness(const IntMat2 &g, const SiegelSet &s1, const SiegelSet &s2) {
    auto box1 = s1.box(0), box2 = s2.box(0);
    double best = 1e300;
    HPoint w{0.0, s1.t};
    for (int i = 0; i <= 200; ++i) {
        double x = box1.first + (box1.second - box1.first) * i / 200.0;
        for (int j = 0; j <= 200; ++j) {
            double y = s1.t + 2.0 * j / 200.0;
            HPoint img = moebius(g, {x, y});
            double v = std::max(0.0, s2.t - img.y) + std::max(0.0, img.x - box2.second) +
                       std::max(0.0, box2.first - img.x);
            if (v < best) {
                best = v;
                w = {x, y};
            }
        }
    }
    return w;
}

int run_enumerate(double t, long long bound, const std::string &format,
                  const std::string &out_dir) {
    SiegelSet s{2, t, {{-0.5, 0.5}}};
    std::vector<IntMat2> list = siegel_intersection_enumerate(s, s, bound);
    if (format == "json") {
        json rows = json::array();
        for (const IntMat2 &g : list) {
            HPoint w = overlap_witness(g, s, s);
            rows.push_back({{"gamma", {{g.a, g.b}, {g.c, g.d}}}, {"witness", {w.x, w.y}}});
        }
        emit_json(json{{"t", t}, {"bound", bound}, {"overlaps", rows}}, out_dir,
                  "enumerate.json");
        return 0;
    }
    std::ostringstream os;
    os << "a,b,c,d,x,y\n";
    for (const IntMat2 &g : list) {
        HPoint w = overlap_witness(g, s, s);
        os << g.a << "," << g.b << "," << g.c << "," << g.d << "," << fmt(w.x) << ","
           << fmt(w.y) << "\n";
    }
    emit_text(os.str(), out_dir, "enumerate.csv");
    return 0;
}

int run_hecke(const std::string &g_arg, const std::string &format, const std::string &out_dir) {
    std::vector<double> e = parse_doubles(g_arg, ',');
    if (e.size() != 4)
        throw std::invalid_argument("--g expects \"a,b,c,d\"");
    IntMat2 g{(long long)e[0], (long long)e[1], (long long)e[2], (long long)e[3]};
    HeckeDecomposition h = hecke_correspondence(g);
    if (format == "csv") {
        std::ostringstream os;
        os << "a,b,c,d\n";
        for (const IntMat2 &c : h.cosets)
            os << c.a << "," << c.b << "," << c.c << "," << c.d << "\n";
        emit_text(os.str(), out_dir, "hecke.csv");
        return 0;
    }
    json cosets = json::array();
    for (const IntMat2 &c : h.cosets)
        cosets.push_back({{c.a, c.b}, {c.c, c.d}});
    emit_json(json{{"degree", h.degree}, {"cosets", cosets}}, out_dir, "hecke.json");
    return 0;
}

int run_orbit(const std::string &family, const std::string &z_arg, const std::string &out_dir) {
    Family fam = family_by_id(family);
    PeriodSample s = local_lift(fam, parse_points(z_arg));
    json j{{"family", fam.id},
           {"z", complex_list(s.z)},
           {"q", complex_list(s.q)},
           {"phi", complex_list(s.phi)},
           {"orbit", complex_list(s.orbit)},
           {"distance", s.distance}};
    emit_json(j, out_dir, "orbit.json");
    return 0;
}

int run_decay(const std::string &family, const std::string &y_range, int samples, double x,
              const std::string &format, const std::string &out_dir) {
    std::vector<double> lohi = parse_doubles(y_range, ':');
    if (lohi.size() != 2)
        throw std::invalid_argument("--y expects \"lo:hi\"");
    DecayFit fit = schmid_decay_fit(family_by_id(family), x, lohi[0], lohi[1], samples);
    if (format == "json") {
        json j{{"rate", fit.rate},       {"beta", fit.beta_hat},   {"k", fit.k_hat},
               {"residual", fit.residual}, {"monotone", fit.monotone}, {"y", fit.ys},
               {"distance", fit.ds}};
        emit_json(j, out_dir, "decay.json");
        return 0;
    }
    std::ostringstream os;
    os << "y,distance,fitted,rate,beta,residual\n";
    for (size_t k = 0; k < fit.ys.size(); ++k) {
        double fitted = fit.k_hat * std::pow(fit.ys[k], fit.beta_hat) *
                        std::exp(-fit.rate * fit.ys[k]);
        os << fmt(fit.ys[k]) << "," << fmt(fit.ds[k]) << "," << fmt(fitted) << ","
           << fmt(fit.rate) << "," << fmt(fit.beta_hat) << "," << fmt(fit.residual) << "\n";
    }
    emit_text(os.str(), out_dir, "decay.csv");
    return 0;
}

int run_contain(const std::string &family, double r_window, double eta, int grid,
                const std::string &out_dir) {
    Family fam = family_by_id(family);
    if (grid <= 0)
        grid = fam.factors == 1 ? 100 : 10;
    ContainmentResult res = siegel_containment_check(fam, r_window, eta, grid);
    json wits = json::array();
    for (size_t i = 0; i < res.witnesses.size(); ++i) {
        json factors = json::array();
        for (const SiegelSet &s : res.witnesses[i])
            factors.push_back({{"t", s.t}, {"box", {s.box(0).first, s.box(0).second}}});
        wits.push_back({{"ordering", res.orderings[i]}, {"factors", factors}});
    }
    json j{{"family", fam.id},
           {"grid_points", res.grid_points},
           {"validity_threshold", res.validity_threshold},
           {"witnesses", wits},
           {"uncovered", res.uncovered}};
    emit_json(j, out_dir, "contain.json");
    return res.uncovered.empty() ? 0 : 1;
}

int run_hodge_locus(int grid, int bound, double tol, std::uint64_t seed,
                    const std::string &format, const std::string &out_dir) {
    LocusScan scan = hodge_locus_demo(grid, bound, tol, seed);
    if (format == "json") {
        json comps = json::array();
        for (const LocusComponent &c : scan.components)
            comps.push_back({{"relation", c.relation}, {"points", c.points}});
        json j{{"grid", scan.grid},
               {"flagged_points", scan.flagged_points},
               {"components", comps},
               {"diagonal_detected", scan.diagonal_detected},
               {"offsample_total", scan.offsample_total},
               {"offsample_flagged", scan.offsample_flagged}};
        emit_json(j, out_dir, "hodge-locus.json");
        return 0;
    }
    std::ostringstream os;
    os << "lam1,lam2,a,b,c,d\n";
    for (const auto &h : scan.hits)
        os << fmt(h.lam1) << "," << fmt(h.lam2) << "," << h.relation[0] << "," << h.relation[1]
           << "," << h.relation[2] << "," << h.relation[3] << "\n";
    emit_text(os.str(), out_dir, "hodge-locus.csv");
    return 0;
}

int run_verify(const std::string &suite, std::uint64_t seed, double locus_tol,
               const std::string &out_dir) {
    std::vector<CheckResult> results = run_suite_with_tolerance(suite, seed, locus_tol);
    json checks = json::array();
    bool all_ok = true;
    for (const CheckResult &r : results) {
        std::printf("[%s] %-26s measured=%.6g expected=%.6g tol=%.3g (%.2f s)\n",
                    r.status == "pass" ? "PASS" : (r.status == "skip" ? "SKIP" : "FAIL"),
                    r.id.c_str(), r.measured, r.expected, r.tolerance, r.runtime_s);
        if (!r.detail.empty())
            std::printf("       %s\n", r.detail.c_str());
        if (r.status == "fail")
            all_ok = false;
        checks.push_back({{"id", r.id},
                          {"status", r.status},
                          {"measured", r.measured},
                          {"expected", r.expected},
                          {"tolerance", r.tolerance},
                          {"runtime", r.runtime_s},
                          {"detail", r.detail}});
    }
    json report{{"suite", suite}, {"seed", seed}, {"checks", checks}};
    std::string dir = out_dir.empty() ? "." : out_dir;
    if (!out_dir.empty())
        std::filesystem::create_directories(out_dir);
    write_atomic(dir + "/report.json", report.dump(2) + "\n");
    std::cerr << "wrote " << dir << "/report.json\n";
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"reduction-theory and limit-Hodge toolkit"};
    app.require_subcommand(1);

    std::string out_dir;
    std::uint64_t seed = kDefaultSeed;

    // wfilt
    auto *wf = app.add_subcommand("wfilt", "weight filtration of a nilpotent matrix");
    std::string wf_matrix, wf_relative;
    int wf_center = 0;
    wf->add_option("--matrix", wf_matrix, "matrix JSON file")->required();
    wf->add_option("--center", wf_center, "central weight (default 0)");
    wf->add_option("--relative", wf_relative,
                   "filtration JSON file; compute the relative weight filtration over it");
    wf->add_option("--out", out_dir, "output directory");

    // split
    auto *sp = app.add_subcommand("split", "bigraded splitting of a mixed structure");
    std::string sp_mhs;
    sp->add_option("--mhs", sp_mhs, "mixed structure JSON file {\"w\":..., \"f\":...}")
        ->required();
    sp->add_option("--out", out_dir, "output directory");

    // polarize-check
    auto *pc = app.add_subcommand("polarize-check", "polarized mixed structure test");
    std::string pc_mhs, pc_n, pc_q;
    int pc_k = 0;
    pc->add_option("--mhs", pc_mhs, "mixed structure JSON file")->required();
    pc->add_option("--n", pc_n, "nilpotent matrix JSON file")->required();
    pc->add_option("--q", pc_q, "bilinear form matrix JSON file")->required();
    pc->add_option("--k", pc_k, "central weight")->required();
    pc->add_option("--out", out_dir, "output directory");

    // reduce
    auto *rd = app.add_subcommand("reduce", "reduce a point into the fundamental domain");
    std::string rd_z;
    rd->add_option("--z", rd_z, "point \"x,y\" with y > 0")->required();
    rd->add_option("--out", out_dir, "output directory");

    // siegel
    auto *sg = app.add_subcommand("siegel", "self-checks of the group decompositions");
    bool sg_check = false;
    sg->add_flag("--check", sg_check, "run the decomposition/membership checks")->required();
    sg->add_option("--seed", seed, "random seed");
    sg->add_option("--out", out_dir, "output directory");

    // enumerate
    auto *en = app.add_subcommand("enumerate", "overlap group elements of a Siegel set");
    double en_t = 1.0;
    long long en_bound = 20;
    std::string en_format = "csv";
    en->add_option("--t", en_t, "torus bound of the set (default 1.0)");
    en->add_option("--bound", en_bound, "max |entry| (default 20)");
    en->add_option("--format", en_format, "json|csv (default csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    en->add_option("--out", out_dir, "output directory");

    // hecke
    auto *hk = app.add_subcommand("hecke", "coset decomposition of a correspondence");
    std::string hk_g, hk_format = "json";
    hk->add_option("--g", hk_g, "integer matrix \"a,b,c,d\" with positive determinant")
        ->required();
    hk->add_option("--format", hk_format, "json|csv (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    hk->add_option("--out", out_dir, "output directory");

    // orbit
    auto *ob = app.add_subcommand("orbit", "period sample against the limiting orbit");
    std::string ob_family = "legendre", ob_z;
    ob->add_option("--family", ob_family, "legendre|product");
    ob->add_option("--z", ob_z, "point \"x,y\" (\"x,y;x,y\" for two factors)")->required();
    ob->add_option("--out", out_dir, "output directory");

    // decay
    auto *dc = app.add_subcommand("decay", "distance decay along a vertical ray");
    std::string dc_family = "legendre", dc_y = "2:8", dc_format = "csv";
    int dc_samples = 500;
    double dc_x = 0.0;
    dc->add_option("--family", dc_family, "legendre|product");
    dc->add_option("--y", dc_y, "range \"lo:hi\" (default 2:8)");
    dc->add_option("--samples", dc_samples, "sample count (default 500)");
    dc->add_option("--x", dc_x, "real part of the ray (default 0)");
    dc->add_option("--format", dc_format, "json|csv (default csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    dc->add_option("--out", out_dir, "output directory");

    // contain
    auto *ct = app.add_subcommand("contain", "fit witness Siegel sets over a grid");
    std::string ct_family = "legendre";
    double ct_r = 0.5, ct_eta = 2.0;
    int ct_grid = 0;
    ct->add_option("--family", ct_family, "legendre|product");
    ct->add_option("--R", ct_r, "half-width of the real window (default 0.5)");
    ct->add_option("--eta", ct_eta, "lower edge of the imaginary window (default 2)");
    ct->add_option("--grid", ct_grid, "grid points per axis (default 100 / 10 per family)");
    ct->add_option("--out", out_dir, "output directory");

    // hodge-locus
    auto *hl = app.add_subcommand("hodge-locus", "scan for isogeny relations on a real slice");
    int hl_grid = 200, hl_bound = 4;
    double hl_tol = 1e-6;
    std::string hl_format = "csv";
    hl->add_option("--grid", hl_grid, "grid size per axis (default 200)");
    hl->add_option("--bound", hl_bound, "isogeny determinant bound (default 4)");
    hl->add_option("--tolerance", hl_tol, "relation residual tolerance (default 1e-6)");
    hl->add_option("--seed", seed, "random seed for the off-locus sample");
    hl->add_option("--format", hl_format, "json|csv (default csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    hl->add_option("--out", out_dir, "output directory");

    // verify
    auto *vf = app.add_subcommand("verify", "run the verification suites");
    std::string vf_suite = "all";
    double vf_tol = 1e-6;
    vf->add_option("--suite", vf_suite, "exact|numeric|all (default all)")
        ->check(CLI::IsMember({"exact", "numeric", "all"}));
    vf->add_option("--seed", seed, "random seed");
    vf->add_option("--tolerance", vf_tol,
                   "relation residual tolerance for the locus scan (numeric suite)");
    vf->add_option("--out", out_dir, "output directory for report.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (wf->parsed())
            return run_wfilt(wf_matrix, wf_center, wf_relative, out_dir);
        if (sp->parsed())
            return run_split(sp_mhs, out_dir);
        if (pc->parsed())
            return run_polarize(pc_mhs, pc_n, pc_q, pc_k, out_dir);
        if (rd->parsed())
            return run_reduce(rd_z, out_dir);
        if (sg->parsed())
            return run_siegel_check(seed, out_dir);
        if (en->parsed())
            return run_enumerate(en_t, en_bound, en_format, out_dir);
        if (hk->parsed())
            return run_hecke(hk_g, hk_format, out_dir);
        if (ob->parsed())
            return run_orbit(ob_family, ob_z, out_dir);
        if (dc->parsed())
            return run_decay(dc_family, dc_y, dc_samples, dc_x, dc_format, out_dir);
        if (ct->parsed())
            return run_contain(ct_family, ct_r, ct_eta, ct_grid, out_dir);
        if (hl->parsed())
            return run_hodge_locus(hl_grid, hl_bound, hl_tol, seed, hl_format, out_dir);
        if (vf->parsed())
            return run_verify(vf_suite, seed, vf_tol, out_dir);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
