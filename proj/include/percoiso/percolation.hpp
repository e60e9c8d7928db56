#pragma once
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "percoiso/bitset.hpp"
#include "percoiso/contours.hpp"
#include "percoiso/errors.hpp"
#include "percoiso/peierls.hpp"
#include "percoiso/rng.hpp"
#include "percoiso/window.hpp"

namespace perco {

// Two window readings of "x and y lie in one finite open cluster":
//   rim_free     the cluster contains no rim vertex (so its whole edge
//                boundary is inside the window and closed) -- the default
//   window_free  plain connectivity inside the window graph
// Both converge to the infinite-volume finite connectivity as windows grow.
enum class ClusterRule { rim_free, window_free };

struct EdgeConfiguration {
    const Window* window;
    DynBitset open;  // one bit per window edge
};

inline EdgeConfiguration sample_configuration(const Window& w, double p, std::uint64_t seed,
                                              std::uint64_t sample_index) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_configuration: p outside [0,1]");
    EdgeConfiguration c{&w, DynBitset(w.n_edges())};
    for (std::uint32_t e = 0; e < w.n_edges(); ++e)
        if (edge_open(seed, sample_index, e, p)) c.open.set(e);
    return c;
}

struct ClusterResult {
    std::vector<std::uint32_t> vertices;  // sorted
    bool touches_rim = false;
};

inline ClusterResult open_cluster_of(const EdgeConfiguration& c, std::uint32_t x) {
    const Window& w = *c.window;
    ClusterResult res;
    DynBitset seen(w.n_vertices());
    seen.set(x);
    std::vector<std::uint32_t> stack{x};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        res.vertices.push_back(v);
        if (w.on_rim(v)) res.touches_rim = true;
        for (auto e : w.incident_edges(v)) {
            if (!c.open.test(e)) continue;
            auto [a, b] = w.edge(e);
            auto u = a == v ? b : a;
            if (!seen.test(u)) {
                seen.set(u);
                stack.push_back(u);
            }
        }
    }
    std::sort(res.vertices.begin(), res.vertices.end());
    return res;
}

// Monte Carlo result. Reproducible: (seed, window, p, samples, event) fixes
// the value bit-exactly, for any worker count.
struct Estimate {
    double value = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
    std::uint64_t seed = 0;
    double p = 0;
    std::string window_descriptor;
    std::string event;
};

namespace detail {

// Lazy single-cluster walk: each incident edge is sampled on first touch via
// the counter generator, so the outcome matches the eager configuration.
// stop_at_rim: abort as soon as the cluster proves rim contact (the event is
// already decided); stop_at_target: abort once the target joins the cluster.
inline bool walk_cluster(const Window& w, std::uint32_t x, double p, std::uint64_t seed,
                         std::uint64_t sample, std::optional<std::uint32_t> target,
                         bool stop_at_rim, bool stop_at_target, bool& hit_rim,
                         std::vector<std::uint32_t>& stack, std::vector<std::uint32_t>& stamp,
                         std::uint32_t tick) {
    hit_rim = false;
    bool found = false;
    stack.clear();
    stack.push_back(x);
    stamp[x] = tick;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (w.on_rim(v)) {
            hit_rim = true;
            if (stop_at_rim) return found;
        }
        if (target && v == *target) {
            found = true;
            if (stop_at_target) return found;
        }
        for (auto e : w.incident_edges(v)) {
            auto [a, b] = w.edge(e);
            auto u = a == v ? b : a;
            if (stamp[u] == tick) continue;
            if (!edge_open(seed, sample, e, p)) continue;
            stamp[u] = tick;
            stack.push_back(u);
        }
    }
    return found;
}

template <class EventFn>
inline Estimate mc_run(const Window& w, double p, std::uint64_t samples, std::uint64_t seed,
                       int workers, EventFn&& event, std::string event_desc) {
    if (samples < 1) throw DomainError("need samples >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p outside [0,1]");
    if (workers < 1) workers = 1;
    constexpr std::uint64_t CHUNK = 8192;
    const std::uint64_t n_chunks = (samples + CHUNK - 1) / CHUNK;
    std::vector<std::uint64_t> chunk_hits(n_chunks, 0);
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        std::vector<std::uint32_t> stack;
        std::vector<std::uint32_t> stamp(w.n_vertices(), 0);
        std::uint32_t tick = 0;
        while (true) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            std::uint64_t lo = c * CHUNK, hi = std::min(samples, lo + CHUNK);
            std::uint64_t hits = 0;
            for (std::uint64_t s = lo; s < hi; ++s)
                if (event(s, stack, stamp, ++tick)) ++hits;
            chunk_hits[c] = hits;
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    Estimate est;
    est.samples = samples;
    est.seed = seed;
    est.p = p;
    est.window_descriptor = w.descriptor();
    est.event = std::move(event_desc);
    for (auto h : chunk_hits) est.successes += h;
    est.value = static_cast<double>(est.successes) / static_cast<double>(samples);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(samples));
    return est;
}

}  // namespace detail

// P(open cluster of x reaches the window rim): the finite-volume proxy for
// the percolation probability; an upper bound decreasing in the radius.
inline Estimate mc_theta(const Window& w, std::uint32_t x, double p, std::uint64_t samples,
                         std::uint64_t seed, int workers = 1) {
    return detail::mc_run(
        w, p, samples, seed, workers,
        [&](std::uint64_t s, std::vector<std::uint32_t>& stack, std::vector<std::uint32_t>& stamp,
            std::uint32_t tick) {
            bool hit_rim = false;
            detail::walk_cluster(w, x, p, seed, s, std::nullopt, /*stop_at_rim=*/true,
                                 /*stop_at_target=*/false, hit_rim, stack, stamp, tick);
            return hit_rim;
        },
        "theta-proxy:" + w.oracle().format_vertex(w.vertex(x)));
}

inline std::vector<Estimate> estimate_theta(const OraclePtr& g, const VertexId& x, double p,
                                            const std::vector<std::uint32_t>& radii,
                                            std::uint64_t samples, std::uint64_t seed,
                                            int workers = 1) {
    std::vector<Estimate> out;
    for (auto r : radii) {
        Window w = Window::ball(g, x, r);
        out.push_back(mc_theta(w, w.index_of(x), p, samples, seed, workers));
    }
    return out;
}

// P(x and y lie in one open cluster that is finite in the window reading).
inline Estimate estimate_phi_f(const Window& w, const VertexId& x, const VertexId& y, double p,
                               std::uint64_t samples, std::uint64_t seed, int workers = 1,
                               ClusterRule rule = ClusterRule::rim_free) {
    auto xi = w.index_of(x), yi = w.index_of(y);
    if (rule == ClusterRule::rim_free && (w.on_rim(xi) || w.on_rim(yi)))
        throw PaddingError("estimate_phi_f: endpoint on the window rim");
    const bool rim_free = rule == ClusterRule::rim_free;
    return detail::mc_run(
        w, p, samples, seed, workers,
        [&, xi, yi, rim_free](std::uint64_t s, std::vector<std::uint32_t>& stack,
                              std::vector<std::uint32_t>& stamp, std::uint32_t tick) {
            bool hit_rim = false;
            bool found = detail::walk_cluster(w, xi, p, seed, s, yi, /*stop_at_rim=*/rim_free,
                                              /*stop_at_target=*/!rim_free, hit_rim, stack, stamp,
                                              tick);
            return rim_free ? (found && !hit_rim) : found;
        },
        std::string("phi-f:") + w.oracle().format_vertex(x) + ":" + w.oracle().format_vertex(y) +
            (rim_free ? ":rim-free" : ":window-free"));
}

// ---------------------------------------------------------------------------
// Exact engines
// ---------------------------------------------------------------------------

struct ExactResult {
    long double value = 0;          // direct event form, sum of p^|O| (1-p)^|C|
    long double normalization = 0;  // sum over all configurations (must be 1)
    long double lambda_form = 0;    // same event summed as lambda^|C|, then * p^|E|
    std::optional<long double> contour_form;  // surrounded-and-not-separated closed sets
    const char* engine = "config-enum";
};

namespace detail {

struct KahanAcc {
    long double s = 0, c = 0;
    void add(long double x) {
        long double y = x - c;
        long double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

inline bool cluster_event_mask(const Window& w, std::uint64_t open_mask, std::uint32_t x,
                               std::optional<std::uint32_t> y, ClusterRule rule, bool theta_event) {
    // BFS over open edges; small windows only
    std::uint64_t seen = std::uint64_t{1} << x;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = x;
    bool rim = false, got = false;
    while (top) {
        auto v = stack[--top];
        if (w.on_rim(v)) rim = true;
        if (y && v == *y) got = true;
        for (auto e : w.incident_edges(v)) {
            if (!(open_mask >> e & 1)) continue;
            auto [a, b] = w.edge(e);
            auto u = a == v ? b : a;
            if (seen >> u & 1) continue;
            seen |= std::uint64_t{1} << u;
            stack[top++] = u;
        }
    }
    if (theta_event) return rim;
    if (rule == ClusterRule::rim_free) return got && !rim;
    return got;
}

}  // namespace detail

// Full enumeration over all 2^|E| configurations, |E| <= 26 (the guaranteed
// contract is 24; two extra bits of headroom are accepted). Deterministic for
// any worker count: fixed 2^16-mask blocks merged in block order.
template <class Pred>
ExactResult exact_event(const Window& w, Pred&& predicate, double p, int workers = 1) {
    const std::uint32_t E = w.n_edges();
    if (w.n_vertices() > 64) throw BudgetError("exact_event: window exceeds 64 vertices");
    if (E > 26)
        throw BudgetError("exact_event: " + std::to_string(E) + " edges exceeds the 2^24-scale budget");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p outside [0,1]");
    std::vector<long double> pw(E + 1), qw(E + 1), lw(E + 1);
    const long double lam = p > 0 ? static_cast<long double>(1.0 - p) / p : 0.0L;
    pw[0] = qw[0] = lw[0] = 1.0L;
    for (std::uint32_t k = 1; k <= E; ++k) {
        pw[k] = pw[k - 1] * p;
        qw[k] = qw[k - 1] * (1.0L - p);
        lw[k] = lw[k - 1] * lam;
    }
    const std::uint64_t total = std::uint64_t{1} << E;
    const std::uint64_t BLOCK = std::min<std::uint64_t>(total, 1u << 16);
    const std::uint64_t n_blocks = total / BLOCK;
    struct Part {
        long double ev = 0, norm = 0, lam = 0;
    };
    std::vector<Part> parts(n_blocks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        while (true) {
            std::uint64_t blk = next.fetch_add(1);
            if (blk >= n_blocks) break;
            Part acc;
            for (std::uint64_t m = blk * BLOCK; m < (blk + 1) * BLOCK; ++m) {
                const int open = std::popcount(m);
                const long double wgt = pw[open] * qw[E - open];
                acc.norm += wgt;
                if (predicate(m)) {
                    acc.ev += wgt;
                    acc.lam += lw[E - open];
                }
            }
            parts[blk] = acc;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    detail::KahanAcc ev, norm, lamsum;
    for (auto& b : parts) {
        ev.add(b.ev);
        norm.add(b.norm);
        lamsum.add(b.lam);
    }
    ExactResult r;
    r.value = ev.s;
    r.normalization = norm.s;
    r.lambda_form = p > 0 ? lamsum.s * pw[E] : r.value;
    return r;
}

// Exact finite connectivity via the closed-set contour characterization:
// a configuration realizes the event iff its closed set contains a contour
// surrounding {x,y} and no contour separating them. (Containing a surrounding
// contour alone over-counts: a closed wall splitting the interior keeps the
// surrounding contour closed while x and y sit in different clusters.)
inline long double exact_phi_contour_form(const Window& w, std::uint32_t x, std::uint32_t y,
                                          double p) {
    const std::uint32_t E = w.n_edges();
    if (E > 26) throw BudgetError("contour-form: too many edges");
    std::vector<std::uint64_t> surround_masks, separate_masks;
    std::vector<std::uint32_t> pair{x, y};
    auto res1 = enumerate_contours(w, {std::min(x, y)}, E, [&](const Contour& c) {
        std::uint64_t m = 0;
        for (auto e : c.edges) m |= std::uint64_t{1} << e;
        if (surrounds(c, pair)) surround_masks.push_back(m);
        else if (separates(c, pair)) separate_masks.push_back(m);
    });
    // also contours anchored at y that miss x entirely (they separate)
    auto res2 = enumerate_contours(w, {std::max(x, y)}, E, [&](const Contour& c) {
        if (std::binary_search(c.interior.begin(), c.interior.end(), std::min(x, y))) return;
        std::uint64_t m = 0;
        for (auto e : c.edges) m |= std::uint64_t{1} << e;
        if (separates(c, pair)) separate_masks.push_back(m);
    });
    if (res1.ambiguous_skipped || res2.ambiguous_skipped)
        throw PaddingError("contour-form: undecidable complement components; enlarge the window");
    std::vector<long double> pw(E + 1), qw(E + 1);
    pw[0] = qw[0] = 1.0L;
    for (std::uint32_t k = 1; k <= E; ++k) {
        pw[k] = pw[k - 1] * p;
        qw[k] = qw[k - 1] * (1.0L - p);
    }
    detail::KahanAcc acc;
    const std::uint64_t total = std::uint64_t{1} << E;
    for (std::uint64_t open = 0; open < total; ++open) {
        const std::uint64_t closed = ~open & (total - 1);
        bool surrounded = false;
        for (auto m : surround_masks)
            if ((m & closed) == m) {
                surrounded = true;
                break;
            }
        if (!surrounded) continue;
        bool cut = false;
        for (auto m : separate_masks)
            if ((m & closed) == m) {
                cut = true;
                break;
            }
        if (cut) continue;
        const int nopen = std::popcount(open);
        acc.add(pw[nopen] * qw[E - nopen]);
    }
    return acc.s;
}

// Exact finite connectivity by summing over the cluster of x: for each
// connected rim-free S containing x and y, P(cluster(x) = S) =
// P(open subgraph on S is connected) * (1-p)^|boundary edges of S|. The
// spanning-connectedness probabilities come from the standard complement
// recursion over subsets. Handles windows far beyond the 2^|E| budget as long
// as the non-rim region has at most 16 vertices.
inline long double exact_phi_cluster_sum(const Window& w, std::uint32_t x, std::uint32_t y,
                                         double p) {
    std::vector<std::uint32_t> region;
    std::vector<std::uint32_t> local(w.n_vertices(), Window::UNREACHED);
    for (std::uint32_t v = 0; v < w.n_vertices(); ++v)
        if (!w.on_rim(v)) {
            local[v] = static_cast<std::uint32_t>(region.size());
            region.push_back(v);
        }
    const std::size_t R = region.size();
    if (local[x] == Window::UNREACHED || local[y] == Window::UNREACHED)
        throw PaddingError("exact_phi_cluster_sum: endpoint on the window rim");
    if (R > 16) throw BudgetError("exact_phi_cluster_sum: non-rim region exceeds 16 vertices");
    std::vector<std::uint32_t> adjmask(R, 0), deg(R, 0);
    for (std::size_t i = 0; i < R; ++i) {
        deg[i] = static_cast<std::uint32_t>(w.adj(region[i]).size());
        for (auto u : w.adj(region[i]))
            if (local[u] != Window::UNREACHED) adjmask[i] |= std::uint32_t{1} << local[u];
    }
    const std::size_t FULL = std::size_t{1} << R;
    std::vector<long double> qpow(static_cast<std::size_t>(w.oracle().max_degree()) * R + 2);
    qpow[0] = 1.0L;
    for (std::size_t k = 1; k < qpow.size(); ++k) qpow[k] = qpow[k - 1] * (1.0L - p);
    std::vector<long double> pconn(FULL, 0.0L);
    for (std::size_t S = 1; S < FULL; ++S) {
        const std::uint32_t low = std::countr_zero(static_cast<std::uint64_t>(S));
        if ((S & (S - 1)) == 0) {
            pconn[S] = 1.0L;
            continue;
        }
        // sum over proper subsets T of S containing the lowest vertex
        const std::size_t rest = S & ~(std::size_t{1} << low);
        long double sum = 0.0L;
        for (std::size_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
            const std::size_t T = sub | (std::size_t{1} << low);
            const std::size_t U = S & ~T;  // nonempty because sub < rest
            std::uint32_t cut = 0;
            std::size_t t = T;
            while (t) {
                const std::uint32_t i = std::countr_zero(static_cast<std::uint64_t>(t));
                cut += std::popcount(adjmask[i] & static_cast<std::uint32_t>(U));
                t &= t - 1;
            }
            sum += pconn[T] * qpow[cut];
            if (sub == 0) break;
        }
        pconn[S] = 1.0L - sum;
    }
    detail::KahanAcc acc;
    const std::size_t want = (std::size_t{1} << local[x]) | (std::size_t{1} << local[y]);
    for (std::size_t S = 1; S < FULL; ++S) {
        if ((S & want) != want) continue;
        if (pconn[S] <= 0.0L) continue;
        // edges from S to the rest of the window
        std::uint32_t bnd = 0;
        std::size_t t = S;
        while (t) {
            const std::uint32_t i = std::countr_zero(static_cast<std::uint64_t>(t));
            bnd += deg[i] - std::popcount(adjmask[i] & static_cast<std::uint32_t>(S));
            t &= t - 1;
        }
        acc.add(pconn[S] * qpow[bnd]);
    }
    return acc.s;
}

// Dispatcher: configuration enumeration when the window is small enough (with
// the lambda-form cross-check and, on request, the contour-form route), else
// the cluster-sum engine.
inline ExactResult exact_phi_f(const Window& w, const VertexId& x, const VertexId& y, double p,
                               ClusterRule rule = ClusterRule::rim_free,
                               bool with_contour_form = false, int workers = 1) {
    auto xi = w.index_of(x), yi = w.index_of(y);
    if (rule == ClusterRule::rim_free && (w.on_rim(xi) || w.on_rim(yi)))
        throw PaddingError("exact_phi_f: endpoint on the window rim");
    if (w.n_edges() <= 26) {
        auto res = exact_event(
            w,
            [&](std::uint64_t open) {
                return detail::cluster_event_mask(w, open, xi, yi, rule, false);
            },
            p, workers);
        if (with_contour_form && rule == ClusterRule::rim_free)
            res.contour_form = exact_phi_contour_form(w, xi, yi, p);
        return res;
    }
    if (rule != ClusterRule::rim_free)
        throw BudgetError("exact_phi_f: window-free rule needs the configuration engine");
    ExactResult res;
    res.value = exact_phi_cluster_sum(w, xi, yi, p);
    res.normalization = 1.0L;
    res.lambda_form = res.value;
    res.engine = "cluster-sum";
    return res;
}

// ---------------------------------------------------------------------------
// Supercritical bracket evaluation
// ---------------------------------------------------------------------------

struct SlackLine {
    std::string name;
    long double lhs = 0, rhs = 0;
    bool holds = false;
};

struct BracketReport {
    long double phi = 0;
    const char* engine = "";
    long double contour_sum = 0;  // sum of lambda^|gamma| over in-window contours around {x,y}
    std::uint64_t n_contours = 0;
    std::uint64_t f_xy = 0;
    std::uint32_t dist_xy = 0;
    bool p_in_exp_range = false;
    bool p_in_bracket_range = false;
    std::vector<SlackLine> lines;
};

// Evaluates, on one window: exact phi, the contour-sum upper bound, the
// exponential-regime upper bound (when lambda <= 1/(4r)) and the two-sided
// f-bracket (when lambda <= 1/(4 r_bar)). All slacks are reported; nothing is
// clamped.
inline BracketReport check_supercritical_brackets(const Window& w, const VertexId& x,
                                                  const VertexId& y, double p,
                                                  const PeierlsBundle& bundle,
                                                  std::uint64_t f_xy) {
    BracketReport rep;
    rep.f_xy = f_xy;
    auto ex = exact_phi_f(w, x, y, p, ClusterRule::rim_free);
    rep.phi = ex.value;
    rep.engine = ex.engine;
    auto xi = w.index_of(x), yi = w.index_of(y);
    rep.dist_xy = oracle_distance_in_window(w, xi, yi);

    const long double lam = static_cast<long double>(1.0 - p) / p;
    detail::KahanAcc csum;
    std::uint64_t n_contours = 0;
    auto cres = enumerate_contours(w, {std::min(xi, yi), std::max(xi, yi)}, w.n_edges(),
                                   [&](const Contour& c) {
                                       csum.add(powl(lam, static_cast<long double>(c.edges.size())));
                                       ++n_contours;
                                   });
    if (cres.ambiguous_skipped)
        throw PaddingError("bracket check: undecidable complement components; enlarge the window");
    rep.contour_sum = csum.s;
    rep.n_contours = n_contours;
    rep.lines.push_back({"phi <= contour-sum", rep.phi, rep.contour_sum,
                         rep.phi <= rep.contour_sum * (1 + 1e-15L)});

    if (lam <= 1.0L / (4.0L * bundle.r)) {
        rep.p_in_exp_range = true;
        long double ub = (4.0L / 3.0L) * powl(static_cast<long double>(bundle.r) * lam,
                                              static_cast<long double>(bundle.R_hat) * rep.dist_xy);
        rep.lines.push_back({"phi <= (4/3)(r*lambda)^(R*d)", rep.phi, ub, rep.phi <= ub});
    }
    if (bundle.r_bar && lam <= 1.0L / (4.0L * *bundle.r_bar)) {
        rep.p_in_bracket_range = true;
        long double lo = (1.0L / 3.0L) *
                         powl(lam * powl(static_cast<long double>(p), 1.0L + 1.0L / bundle.R_hat),
                              static_cast<long double>(f_xy));
        long double ub = (4.0L / 3.0L) *
                         powl(static_cast<long double>(*bundle.r_bar) * lam,
                              static_cast<long double>(f_xy));
        rep.lines.push_back({"(1/3)(lambda*p^(1+1/R))^f <= phi", lo, rep.phi, lo <= rep.phi});
        rep.lines.push_back({"phi <= (4/3)(r_bar*lambda)^f", rep.phi, ub, rep.phi <= ub});
    }
    return rep;
}

}  // namespace perco
