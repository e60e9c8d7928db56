// perco-iso: isoperimetric constants, contours, and percolation estimates on
// infinite-graph families, through finite windows with explicit certificates.
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percoiso/analysis.hpp"
#include "percoiso/contours.hpp"
#include "percoiso/enumerate.hpp"
#include "percoiso/errors.hpp"
#include "percoiso/families.hpp"
#include "percoiso/isoperimetry.hpp"
#include "percoiso/peierls.hpp"
#include "percoiso/percolation.hpp"
#include "percoiso/window.hpp"

#include "output.hpp"

using nlohmann::json;
using namespace perco;
using percotool::Csv;
using percotool::fmt_double;
using percotool::RunOutput;

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    for (auto& part : detail::split(s, ','))
        out.push_back(std::stod(part));
    return out;
}

std::vector<std::uint32_t> parse_uint_list(const std::string& s) {
    std::vector<std::uint32_t> out;
    for (auto& part : detail::split(s, ','))
        out.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    return out;
}

std::vector<std::string> parse_semi_list(const std::string& s) {
    return detail::split(s, ';');
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::optional<std::size_t> col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    }
};

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open CSV file " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = detail::split(line, ',');
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    if (first) throw DomainError("empty CSV file " + path);
    return t;
}

json vertex_list_json(const GraphOracle& g, const std::vector<VertexId>& vs) {
    json a = json::array();
    for (auto& v : vs) a.push_back(g.format_vertex(v));
    return a;
}

json edge_list_json(const GraphOracle& g, const std::vector<Edge>& es) {
    json a = json::array();
    for (auto& e : es) a.push_back(g.format_vertex(e.a) + "--" + g.format_vertex(e.b));
    return a;
}

// ---------------------------------------------------------------------------

RunOutput run_families(const std::string& family, std::uint64_t depth) {
    RunOutput out;
    std::vector<std::string> list;
    if (family.empty())
        list = {"zd:2", "zd:3", "line", "tree:3", "tree:4", "wedge:ln", "dl:2,2", "strip:2"};
    else
        list = {family};
    Csv csv({"family", "max_degree", "vertex_transitive", "has_bigeodesic", "bigeodesic_verified"});
    for (auto& spec : list) {
        auto g = make_family(spec);
        json rec;
        rec["family"] = g->family();
        rec["max_degree"] = g->max_degree();
        rec["vertex_transitive"] = g->vertex_transitive();
        rec["has_bigeodesic"] = g->has_bigeodesic();
        rec["root"] = g->format_vertex(g->root());
        bool verified = false;
        if (g->has_bigeodesic()) {
            verified = verify_bigeodesic_prefix(*g, depth);
            rec["bigeodesic_verified_depth"] = depth;
        }
        rec["bigeodesic_verified"] = verified;
        json caps = json::object();
        for (std::uint64_t n : {4, 6, 8, 12}) {
            auto c = g->interior_cap(n);
            caps[std::to_string(n)] = c ? json(*c) : json(nullptr);
        }
        rec["interior_cap"] = caps;
        out.records.push_back(rec);
        csv.row({g->family(), std::to_string(g->max_degree()),
                 g->vertex_transitive() ? "1" : "0", g->has_bigeodesic() ? "1" : "0",
                 verified ? "1" : "0"});
    }
    out.csv = csv.str();
    return out;
}

json constant_record(const GraphOracle& g, const ConstantEstimate& e) {
    json rec;
    rec["constant"] = std::string(1, e.constant);
    rec["value"] = e.value;
    rec["boundary"] = e.num;
    rec["denominator"] = e.den;
    rec["max_size"] = e.max_size;
    rec["window"] = e.window_descriptor;
    rec["minimizer"] = vertex_list_json(g, e.minimizer);
    rec["bound_kind"] = "upper bound on the infimum restricted to |W| <= max_size";
    return rec;
}

RunOutput run_estimate_constants(const std::string& family, std::uint32_t max_size,
                                 std::int64_t radius) {
    RunOutput out;
    auto g = make_family(family);
    std::uint32_t r = radius >= 0 ? static_cast<std::uint32_t>(radius) : 2 * max_size + 2;
    Window w = Window::ball(g, g->root(), r);
    Csv csv({"constant", "value", "boundary", "denominator", "max_size"});
    auto emit = [&](const ConstantEstimate& e) {
        out.records.push_back(constant_record(*g, e));
        csv.row({std::string(1, e.constant), fmt_double(e.value), std::to_string(e.num),
                 std::to_string(e.den), std::to_string(e.max_size)});
    };
    emit(estimate_R(w, max_size));
    try {
        emit(estimate_P(w, max_size));
    } catch (const DomainError&) {
        // no admissible set (needs diam >= 2); recorded as absent
        out.flags["P"] = "no admissible set at this max_size";
    }
    emit(estimate_C(w, max_size));
    out.flags["provenance"] = "exact enumeration";
    out.csv = csv.str();
    return out;
}

RunOutput run_enumerate_contours(const std::string& family, const std::string& around,
                                 std::uint64_t max_boundary, std::int64_t radius) {
    RunOutput out;
    auto g = make_family(family);
    std::vector<VertexId> targets;
    for (auto& tok : parse_semi_list(around)) targets.push_back(g->parse_vertex(tok));
    if (targets.empty()) throw DomainError("--around needs at least one vertex");
    std::uint64_t rad;
    if (radius >= 0) {
        rad = static_cast<std::uint64_t>(radius);
    } else {
        auto reach = g->anchored_reach(targets[0], max_boundary);
        if (!reach)
            throw PaddingError("family has no containment certificate at this boundary size; "
                               "pass --radius to enumerate in lower-bound mode");
        std::uint64_t dmax = 0;
        for (auto& t : targets) {
            auto d = path_distance(*g, targets[0], t, 4096);
            if (!d) throw BudgetError("targets too far apart");
            dmax = std::max(dmax, *d);
        }
        rad = std::max(*reach + 1, dmax + 1);
    }
    Window w = Window::ball(g, targets[0], static_cast<std::uint32_t>(rad));
    std::vector<std::uint32_t> idx;
    for (auto& t : targets) idx.push_back(w.index_of(t));
    json samples = json::array();
    auto res = enumerate_contours(w, idx, max_boundary, [&](const Contour& c) {
        if (samples.size() < 3) {
            std::vector<Edge> es;
            for (auto e : c.edges)
                es.emplace_back(w.vertex(w.edge(e).a), w.vertex(w.edge(e).b));
            samples.push_back(edge_list_json(*g, es));
        }
    });
    Csv csv({"n", "count", "certified"});
    for (auto& [n, cnt] : res.count_by_size) {
        json rec;
        rec["n"] = n;
        rec["count"] = cnt;
        rec["certified"] = res.certified;
        out.records.push_back(rec);
        csv.row({std::to_string(n), std::to_string(cnt), res.certified ? "1" : "0"});
    }
    out.flags["certified"] = res.certified;
    out.flags["count_kind"] = res.certified ? "exact" : "lower-bound";
    out.flags["ambiguous_skipped"] = res.ambiguous_skipped;
    out.flags["total"] = res.total;
    out.flags["window"] = w.descriptor();
    out.flags["sample_contours"] = samples;
    out.csv = csv.str();
    return out;
}

RunOutput run_contour_distance(const std::string& family, const std::string& xs,
                               const std::string& ys, std::uint64_t max_boundary) {
    RunOutput out;
    auto g = make_family(family);
    auto x = g->parse_vertex(xs), y = g->parse_vertex(ys);
    auto res = contour_distance_auto(g, x, y, max_boundary);
    json rec;
    rec["x"] = xs;
    rec["y"] = ys;
    rec["f"] = res.distance;
    rec["certified"] = res.certified;
    rec["witness_interior"] = vertex_list_json(*g, res.witness_interior);
    rec["witness_edges"] = edge_list_json(*g, res.witness_edges);
    out.records.push_back(rec);
    Csv csv({"x", "y", "f", "certified"});
    csv.row({xs, ys, std::to_string(res.distance), res.certified ? "1" : "0"});
    out.csv = csv.str();
    out.flags["measured"] = "minimum over certified complete enumeration";
    return out;
}

RunOutput run_peierls_bound(const std::string& family, std::uint32_t max_size, bool with_wedge,
                            std::int64_t radius) {
    RunOutput out;
    auto g = make_family(family);
    std::uint32_t r = radius >= 0 ? static_cast<std::uint32_t>(radius) : 2 * max_size + 2;
    Window w = Window::ball(g, g->root(), r);
    auto R = estimate_R(w, max_size);
    std::optional<ConstantEstimate> P;
    if (with_wedge) P = estimate_P(w, max_size);
    auto b = make_bundle(g->max_degree(), R.value,
                         P ? std::optional<double>(P->value) : std::nullopt);
    json rec;
    rec["family"] = g->family();
    rec["delta"] = b.delta;
    rec["R_hat"] = b.R_hat;
    rec["R_hat_ratio"] = {{"boundary", R.num}, {"tree_distance", R.den}};
    if (P) {
        rec["P_hat"] = *b.P_hat;
        rec["P_hat_ratio"] = {{"boundary", P->num}, {"diam", P->den}};
    }
    rec["r"] = b.r;
    rec["pc_bound"] = b.pc_bound;
    rec["p_valid_exp"] = b.p_valid_exp;
    if (b.r_bar) {
        rec["r_bar"] = *b.r_bar;
        rec["pc_bound_wedge"] = *b.pc_bound_wedge;
        rec["p_valid_bracket"] = *b.p_valid_bracket;
        rec["p_valid_bracket_stated"] = *b.p_valid_bracket_stated;
    }
    rec["estimation_scale"] = {{"max_size", max_size}, {"window", w.descriptor()}};
    rec["caveat"] =
        "R_hat/P_hat are windowed upper bounds of the true infima; the derived thresholds are "
        "conditional on the estimation scale";
    out.records.push_back(rec);
    Csv csv({"family", "delta", "R_hat", "P_hat", "r", "r_bar", "pc_bound", "pc_bound_wedge",
             "p_valid_exp", "p_valid_bracket"});
    csv.row({g->family(), std::to_string(b.delta), fmt_double(b.R_hat),
             b.P_hat ? fmt_double(*b.P_hat) : "", fmt_double(b.r),
             b.r_bar ? fmt_double(*b.r_bar) : "", fmt_double(b.pc_bound),
             b.pc_bound_wedge ? fmt_double(*b.pc_bound_wedge) : "", fmt_double(b.p_valid_exp),
             b.p_valid_bracket ? fmt_double(*b.p_valid_bracket) : ""});
    out.csv = csv.str();
    return out;
}

RunOutput run_simulate_theta(const std::string& family, const std::string& xs,
                             const std::string& ps, const std::string& radii, std::uint64_t samples,
                             std::uint64_t seed, int workers) {
    RunOutput out;
    auto g = make_family(family);
    VertexId x = xs.empty() ? g->root() : g->parse_vertex(xs);
    Csv csv({"p", "radius", "value", "stderr", "samples", "seed"});
    for (double p : parse_double_list(ps)) {
        auto ests = estimate_theta(g, x, p, parse_uint_list(radii), samples, seed, workers);
        std::size_t ri = 0;
        auto rlist = parse_uint_list(radii);
        for (auto& e : ests) {
            json rec;
            rec["kind"] = "theta-proxy";
            rec["p"] = p;
            rec["radius"] = rlist[ri];
            rec["value"] = e.value;
            rec["stderr"] = e.std_error;
            rec["samples"] = e.samples;
            rec["successes"] = e.successes;
            rec["seed"] = e.seed;
            rec["window"] = e.window_descriptor;
            rec["event"] = e.event;
            out.records.push_back(rec);
            csv.row({fmt_double(p), std::to_string(rlist[ri]), fmt_double(e.value),
                     fmt_double(e.std_error), std::to_string(e.samples), std::to_string(seed)});
            ++ri;
        }
    }
    out.flags["provenance"] = "monte-carlo";
    out.flags["proxy"] = "P(cluster reaches window rim); upper bound, decreasing in radius";
    out.csv = csv.str();
    return out;
}

RunOutput run_simulate_phi(const std::string& family, const std::string& xs,
                           const std::string& ys_list, const std::string& ps,
                           const std::string& window_desc, std::int64_t radius,
                           std::uint64_t samples, std::uint64_t seed, const std::string& rule_s,
                           bool with_f, int workers) {
    RunOutput out;
    auto g = make_family(family);
    auto x = g->parse_vertex(xs);
    std::vector<VertexId> targets;
    for (auto& t : parse_semi_list(ys_list)) targets.push_back(g->parse_vertex(t));
    ClusterRule rule = rule_s == "window-free" ? ClusterRule::window_free : ClusterRule::rim_free;

    std::vector<std::uint64_t> dists;
    std::uint64_t dmax = 0;
    for (auto& t : targets) {
        auto d = path_distance(*g, x, t, 4096);
        if (!d) throw BudgetError("target too far from x");
        dists.push_back(*d);
        dmax = std::max(dmax, *d);
    }
    Window w = window_desc.empty()
                   ? Window::ball(g, x, static_cast<std::uint32_t>(
                                            radius >= 0 ? radius : static_cast<std::int64_t>(dmax) + 8))
                   : window_from_descriptor(g, window_desc);

    std::vector<std::uint64_t> fvals(targets.size(), 0);
    if (with_f)
        for (std::size_t i = 0; i < targets.size(); ++i)
            fvals[i] = contour_distance_auto(g, x, targets[i]).distance;

    Csv csv({"p", "d", "phi", "stderr", "samples", "seed", "f"});
    for (double p : parse_double_list(ps)) {
        for (std::size_t i = 0; i < targets.size(); ++i) {
            auto e = estimate_phi_f(w, x, targets[i], p, samples, seed, workers, rule);
            json rec;
            rec["kind"] = "phi-f";
            rec["p"] = p;
            rec["x"] = xs;
            rec["y"] = g->format_vertex(targets[i]);
            rec["d"] = dists[i];
            rec["value"] = e.value;
            rec["stderr"] = e.std_error;
            rec["samples"] = e.samples;
            rec["successes"] = e.successes;
            rec["seed"] = e.seed;
            rec["window"] = w.descriptor();
            rec["rule"] = rule_s.empty() ? "rim-free" : rule_s;
            if (with_f) rec["f"] = fvals[i];
            out.records.push_back(rec);
            csv.row({fmt_double(p), std::to_string(dists[i]), fmt_double(e.value),
                     fmt_double(e.std_error), std::to_string(e.samples), std::to_string(seed),
                     with_f ? std::to_string(fvals[i]) : ""});
        }
    }
    out.flags["provenance"] = "monte-carlo";
    out.flags["window"] = w.descriptor();
    out.csv = csv.str();
    return out;
}

RunOutput run_exact_phi(const std::string& family, const std::string& window_desc,
                        const std::string& xs, const std::string& ys, const std::string& ps,
                        const std::string& rule_s, bool with_contour_form, int workers) {
    RunOutput out;
    auto g = make_family(family);
    Window w = window_from_descriptor(g, window_desc);
    auto x = g->parse_vertex(xs), y = g->parse_vertex(ys);
    ClusterRule rule = rule_s == "window-free" ? ClusterRule::window_free : ClusterRule::rim_free;
    Csv csv({"p", "phi", "engine"});
    for (double p : parse_double_list(ps)) {
        auto r = exact_phi_f(w, x, y, p, rule, with_contour_form, workers);
        json rec;
        rec["p"] = p;
        rec["phi"] = static_cast<double>(r.value);
        rec["lambda_form"] = static_cast<double>(r.lambda_form);
        rec["normalization_error"] = static_cast<double>(fabsl(r.normalization - 1.0L));
        if (r.contour_form) rec["contour_form"] = static_cast<double>(*r.contour_form);
        rec["engine"] = r.engine;
        rec["window"] = w.descriptor();
        rec["rule"] = rule_s.empty() ? "rim-free" : rule_s;
        out.records.push_back(rec);
        csv.row({fmt_double(p), fmt_double(static_cast<double>(r.value)), r.engine});
    }
    out.flags["provenance"] = "exact";
    out.csv = csv.str();
    return out;
}

json fit_json(const char* model, const FitResult& f) {
    json j;
    j["model"] = model;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["residual"] = f.residual;
    j["points_used"] = f.points_used;
    j["dropped_zero"] = f.dropped_zero;
    return j;
}

DecayCurve curve_from_csv(const CsvTable& t, std::optional<double> p_override) {
    DecayCurve c;
    auto dcol = t.col("d");
    if (!dcol) dcol = t.col("n");
    auto pcol = t.col("phi");
    auto scol = t.col("stderr");
    if (!scol) scol = t.col("se");
    if (!dcol || !pcol) throw DomainError("CSV needs columns d (or n) and phi");
    auto ppcol = t.col("p");
    for (auto& row : t.rows) {
        DecayPoint pt;
        pt.d = std::stod(row[*dcol]);
        pt.phi = std::stod(row[*pcol]);
        pt.se = scol ? std::stod(row[*scol]) : 0.0;
        c.points.push_back(pt);
        if (ppcol) c.p = std::stod(row[*ppcol]);
    }
    if (p_override) c.p = *p_override;
    return c;
}

RunOutput run_fit_decay(const std::string& input, const std::string& model, double threshold) {
    RunOutput out;
    auto curve = curve_from_csv(read_csv(input), std::nullopt);
    Csv csv({"model", "slope", "intercept", "residual", "points_used", "verdict", "residual_ratio"});
    if (model == "exp") {
        auto f = fit_exponential(curve);
        out.records.push_back(fit_json("exponential", f));
        csv.row({"exponential", fmt_double(f.slope), fmt_double(f.intercept),
                 fmt_double(f.residual), std::to_string(f.points_used), "", ""});
    } else if (model == "poly") {
        auto f = fit_polynomial(curve);
        out.records.push_back(fit_json("polynomial", f));
        csv.row({"polynomial", fmt_double(f.slope), fmt_double(f.intercept),
                 fmt_double(f.residual), std::to_string(f.points_used), "", ""});
    } else {
        auto cl = classify_decay(curve, threshold);
        json rec;
        rec["verdict"] = cl.verdict;
        rec["residual_ratio"] = cl.residual_ratio;
        rec["exponential"] = fit_json("exponential", cl.exponential);
        rec["polynomial"] = fit_json("polynomial", cl.polynomial);
        out.records.push_back(rec);
        csv.row({"exponential", fmt_double(cl.exponential.slope),
                 fmt_double(cl.exponential.intercept), fmt_double(cl.exponential.residual),
                 std::to_string(cl.exponential.points_used), cl.verdict,
                 fmt_double(cl.residual_ratio)});
        csv.row({"polynomial", fmt_double(cl.polynomial.slope),
                 fmt_double(cl.polynomial.intercept), fmt_double(cl.polynomial.residual),
                 std::to_string(cl.polynomial.points_used), cl.verdict,
                 fmt_double(cl.residual_ratio)});
    }
    out.csv = csv.str();
    return out;
}

RunOutput run_compare_bracket(const std::string& input, const std::string& bundle_path,
                              double p_opt) {
    RunOutput out;
    auto table = read_csv(input);
    auto curve = curve_from_csv(table, p_opt >= 0 ? std::optional<double>(p_opt) : std::nullopt);
    auto fcol = table.col("f");
    if (!fcol) throw DomainError("CSV needs an f column (use simulate phi --with-f)");
    std::vector<std::uint64_t> fvals;
    for (auto& row : table.rows) fvals.push_back(std::stoull(row[*fcol]));

    std::ifstream bf(bundle_path);
    if (!bf) throw DomainError("cannot open bundle " + bundle_path);
    json bj = json::parse(bf);
    const json& rec0 = bj.contains("records") ? bj["records"][0] : bj;
    auto bundle = make_bundle(rec0["delta"].get<int>(), rec0["R_hat"].get<double>(),
                              rec0.contains("P_hat")
                                  ? std::optional<double>(rec0["P_hat"].get<double>())
                                  : std::nullopt);
    auto rows = bracket_compare(curve, bundle, fvals);
    Csv csv({"d", "f", "phi", "se", "lower", "upper", "pass"});
    bool all = true;
    for (auto& b : rows) {
        json rec;
        rec["d"] = b.d;
        rec["f"] = b.f;
        rec["phi"] = b.phi;
        rec["se"] = b.se;
        rec["lower"] = b.lower;
        rec["upper"] = b.upper;
        rec["pass"] = b.pass;
        out.records.push_back(rec);
        all = all && b.pass;
        csv.row({fmt_double(b.d), std::to_string(b.f), fmt_double(b.phi), fmt_double(b.se),
                 fmt_double(b.lower), fmt_double(b.upper), b.pass ? "1" : "0"});
    }
    out.flags["all_pass"] = all;
    out.flags["p"] = curve.p;
    out.csv = csv.str();
    return out;
}

// ---------------------------------------------------------------------------

RunOutput dispatch(const std::vector<std::string>& args, int workers) {
    CLI::App app{"perco-iso"};
    app.require_subcommand(1);

    // families
    std::string fam, around, xs, ys, ps, radii, window_desc, rule = "rim-free", input, bundle,
                model = "auto", name;
    std::uint64_t depth = 4, max_boundary = 32, samples = 10000, seed = 1;
    std::uint32_t max_size = 4;
    std::int64_t radius = -1;
    double threshold = 0.8, p_opt = -1;
    bool with_wedge = false, with_f = false, with_contour_form = false;

    auto* c_fam = app.add_subcommand("families", "list family metadata");
    c_fam->add_option("--family", fam);
    c_fam->add_option("--depth", depth);

    auto* c_est = app.add_subcommand("estimate-constants", "windowed isoperimetric constants");
    c_est->add_option("--family", fam)->required();
    c_est->add_option("--max-size", max_size)->required();
    c_est->add_option("--radius", radius);

    auto* c_enum = app.add_subcommand("enumerate-contours", "certified contour counts");
    c_enum->add_option("--family", fam)->required();
    c_enum->add_option("--around", around)->required();
    c_enum->add_option("--max-boundary", max_boundary)->required();
    c_enum->add_option("--radius", radius);

    auto* c_cd = app.add_subcommand("contour-distance", "minimum surrounding contour size");
    c_cd->add_option("--family", fam)->required();
    c_cd->add_option("--x", xs)->required();
    c_cd->add_option("--y", ys)->required();
    c_cd->add_option("--max-boundary", max_boundary);

    auto* c_pb = app.add_subcommand("peierls-bound", "threshold bundle from windowed constants");
    c_pb->add_option("--family", fam)->required();
    c_pb->add_option("--max-size", max_size)->required();
    c_pb->add_flag("--with-wedge", with_wedge);
    c_pb->add_option("--radius", radius);

    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo estimators");
    auto* c_sim_theta = c_sim->add_subcommand("theta", "rim-reach proxy");
    c_sim_theta->add_option("--family", fam)->required();
    c_sim_theta->add_option("--x", xs);
    c_sim_theta->add_option("--p", ps)->required();
    c_sim_theta->add_option("--radius", radii)->required();
    c_sim_theta->add_option("--samples", samples);
    c_sim_theta->add_option("--seed", seed);
    auto* c_sim_phi = c_sim->add_subcommand("phi", "two-point finite connectivity");
    c_sim_phi->add_option("--family", fam)->required();
    c_sim_phi->add_option("--x", xs)->required();
    c_sim_phi->add_option("--y", ys)->required();
    c_sim_phi->add_option("--p", ps)->required();
    c_sim_phi->add_option("--window", window_desc);
    c_sim_phi->add_option("--window-radius", radius);
    c_sim_phi->add_option("--samples", samples);
    c_sim_phi->add_option("--seed", seed);
    c_sim_phi->add_option("--rule", rule)->check(CLI::IsMember({"rim-free", "window-free"}));
    c_sim_phi->add_flag("--with-f", with_f);

    auto* c_ex = app.add_subcommand("exact", "exact finite-volume computations");
    auto* c_ex_phi = c_ex->add_subcommand("phi", "exact two-point finite connectivity");
    c_ex_phi->add_option("--family", fam)->required();
    c_ex_phi->add_option("--window", window_desc)->required();
    c_ex_phi->add_option("--x", xs)->required();
    c_ex_phi->add_option("--y", ys)->required();
    c_ex_phi->add_option("--p", ps)->required();
    c_ex_phi->add_option("--rule", rule)->check(CLI::IsMember({"rim-free", "window-free"}));
    c_ex_phi->add_flag("--with-contour-form", with_contour_form);

    auto* c_fit = app.add_subcommand("fit-decay", "exponential vs polynomial decay");
    c_fit->add_option("--input", input)->required();
    c_fit->add_option("--model", model)->check(CLI::IsMember({"auto", "exp", "poly"}));
    c_fit->add_option("--threshold", threshold);

    auto* c_cb = app.add_subcommand("compare-bracket", "two-sided f-bracket comparison");
    c_cb->add_option("--input", input)->required();
    c_cb->add_option("--bundle", bundle)->required();
    c_cb->add_option("--p", p_opt);

    std::vector<char*> argv;
    std::string prog = "perco-iso";
    argv.push_back(prog.data());
    std::vector<std::string> mut = args;
    for (auto& a : mut) argv.push_back(a.data());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (*c_fam) return run_families(fam, depth);
    if (*c_est) return run_estimate_constants(fam, max_size, radius);
    if (*c_enum) return run_enumerate_contours(fam, around, max_boundary, radius);
    if (*c_cd) return run_contour_distance(fam, xs, ys, max_boundary);
    if (*c_pb) return run_peierls_bound(fam, max_size, with_wedge, radius);
    if (*c_sim && *c_sim_theta)
        return run_simulate_theta(fam, xs, ps, radii, samples, seed, workers);
    if (*c_sim && *c_sim_phi)
        return run_simulate_phi(fam, xs, ys, ps, window_desc, radius, samples, seed, rule, with_f,
                                workers);
    if (*c_ex && *c_ex_phi)
        return run_exact_phi(fam, window_desc, xs, ys, ps, rule, with_contour_form, workers);
    if (*c_fit) return run_fit_decay(input, model, threshold);
    if (*c_cb) return run_compare_bracket(input, bundle, p_opt);
    throw DomainError("no subcommand selected");
}

int run_reproduce(const std::string& manifest_path, int workers_override) {
    std::ifstream f(manifest_path);
    if (!f) throw DomainError("cannot open manifest " + manifest_path);
    json m = json::parse(f);
    std::vector<std::string> command = m["command"].get<std::vector<std::string>>();
    int workers = workers_override > 0 ? workers_override : m["workers"].get<int>();
    RunOutput fresh = dispatch(command, workers);
    const bool records_match = fresh.records.dump() == m["records"].dump();
    const bool csv_match = fresh.csv == m["csv"].get<std::string>();
    if (records_match && csv_match) {
        std::cout << "reproduce: OK (records and csv byte-identical, workers=" << workers << ")\n";
        return 0;
    }
    std::cout << "reproduce: MISMATCH (records " << (records_match ? "ok" : "differ") << ", csv "
              << (csv_match ? "ok" : "differ") << ")\n";
    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    std::string out_dir_s, name;
    int workers = 1;
    std::vector<std::string> rest;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        auto take = [&](const char* key, std::string& into) {
            if (a == key && i + 1 < argc) {
                into = argv[++i];
                return true;
            }
            if (a.rfind(std::string(key) + "=", 0) == 0) {
                into = a.substr(std::string(key).size() + 1);
                return true;
            }
            return false;
        };
        std::string wtmp;
        if (take("--out", out_dir_s)) continue;
        if (take("--name", name)) continue;
        if (take("--workers", wtmp)) {
            workers = std::stoi(wtmp);
            continue;
        }
        rest.push_back(a);
    }
    try {
        if (!rest.empty() && rest[0] == "reproduce") {
            if (rest.size() < 2) throw DomainError("usage: perco-iso reproduce <manifest.json>");
            return run_reproduce(rest[1], workers);
        }
        auto t0 = std::chrono::steady_clock::now();
        percotool::Manifest man;
        man.command = rest;
        man.workers = workers;
        man.out = dispatch(rest, workers);
        man.wallclock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (name.empty()) name = rest.empty() ? "run" : rest[0];
        auto dir = percotool::output_dir(out_dir_s);
        percotool::write_outputs(man, dir, name);
        std::cout << "wrote " << (dir / (name + ".json")).string() << " ("
                  << man.out.records.size() << " records, "
                  << fmt_double(man.wallclock_seconds) << " s)\n";
        return 0;
    } catch (const CLI::CallForHelp&) {
        std::cout << "perco-iso <subcommand> [options]; see README\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientDataError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const PaddingError& e) {
        std::cerr << "padding error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
