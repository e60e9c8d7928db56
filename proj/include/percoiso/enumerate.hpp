#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "percoiso/bitset.hpp"
#include "percoiso/errors.hpp"
#include "percoiso/window.hpp"

namespace perco {

// Duplicate-free streaming enumeration of connected vertex sets, by rooted
// growth with forbidden sets (Redelmeier's scheme generalized to arbitrary
// adjacency). Each set is emitted exactly once; nothing is stored.
//
// With an anchor: every connected set containing the anchor. Without: every
// connected set, generated from its minimal vertex with all smaller vertices
// forbidden.
//
// `boundary_budget` prunes branches whose committed boundary (edges from the
// current set to forbidden or ineligible vertices) already exceeds the budget;
// committed edges stay boundary edges in every descendant, so the pruning
// loses no set whose final boundary is within budget.

struct EnumOptions {
    std::uint32_t max_size;
    std::optional<std::uint64_t> boundary_budget;  // prune on committed boundary
    std::optional<std::uint64_t> size_budget;      // additional |W| cap (certificates)
    const DynBitset* eligible = nullptr;           // default: all window vertices
    std::uint64_t node_budget = 400'000'000;       // hard stop -> BudgetError
};

namespace detail {

class ConnectedSetEnumerator {
public:
    template <class Fn>
    ConnectedSetEnumerator(const Window& w, const EnumOptions& opts, Fn&& visit)
        : w_(w), opts_(opts) {
        if (opts.max_size < 1) throw DomainError("max_size must be >= 1");
        if (opts.max_size > w.n_vertices())
            throw BudgetError("max_size " + std::to_string(opts.max_size) +
                              " exceeds window size " + std::to_string(w.n_vertices()));
        in_set_ = DynBitset(w.n_vertices());
        banned_ = DynBitset(w.n_vertices());
        limit_ = opts.max_size;
        if (opts.size_budget) limit_ = std::min<std::uint64_t>(limit_, *opts.size_budget);
        visit_ = [&visit](const std::vector<std::uint32_t>& s) { visit(s); };
    }

    std::uint64_t run_anchored(std::uint32_t anchor) {
        if (opts_.eligible && !opts_.eligible->test(anchor))
            throw DomainError("anchor not in the eligible region");
        if (limit_ == 0) return 0;
        cur_.clear();
        committed_ = 0;
        add_vertex(anchor);
        emit();
        if (cur_.size() < limit_ && within_budget()) {
            std::vector<std::uint32_t> cands;
            for (auto u : w_.adj(anchor)) push_candidate(u, cands);
            grow(cands);
        }
        remove_vertex(anchor);
        return emitted_;
    }

    // Enumerates sets whose minimal vertex is `anchor` for each anchor in
    // ascending order; bans accumulate so every set appears exactly once.
    std::uint64_t run_all() {
        for (std::uint32_t v = 0; v < w_.n_vertices(); ++v) {
            if (opts_.eligible && !opts_.eligible->test(v)) continue;
            run_anchored(v);
            banned_.set(v);
        }
        return emitted_;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    bool eligible(std::uint32_t v) const { return !opts_.eligible || opts_.eligible->test(v); }

    bool within_budget() const {
        return !opts_.boundary_budget || committed_ <= *opts_.boundary_budget;
    }

    void add_vertex(std::uint32_t v) {
        cur_.push_back(v);
        in_set_.set(v);
        for (auto u : w_.adj(v))
            if (banned_.test(u) || !eligible(u)) ++committed_;
        if (++nodes_ > opts_.node_budget)
            throw BudgetError("enumeration node budget exhausted", emitted_);
    }

    void remove_vertex(std::uint32_t v) {
        for (auto u : w_.adj(v))
            if (banned_.test(u) || !eligible(u)) --committed_;
        in_set_.reset(v);
        cur_.pop_back();
    }

    void push_candidate(std::uint32_t u, std::vector<std::uint32_t>& cands) const {
        if (in_set_.test(u) || banned_.test(u) || !eligible(u)) return;
        for (auto c : cands)
            if (c == u) return;
        cands.push_back(u);
    }

    void emit() {
        ++emitted_;
        visit_(cur_);
    }

    void grow(const std::vector<std::uint32_t>& cands) {
        std::vector<std::uint32_t> local_bans;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const std::uint32_t v = cands[i];
            add_vertex(v);
            if (within_budget()) {
                emit();
                if (cur_.size() < limit_) {
                    std::vector<std::uint32_t> next(cands.begin() + i + 1, cands.end());
                    for (auto u : w_.adj(v)) push_candidate(u, next);
                    grow(next);
                }
            }
            remove_vertex(v);
            banned_.set(v);
            local_bans.push_back(v);
            // edges from the current set to v are now committed
            for (auto u : w_.adj(v))
                if (in_set_.test(u)) ++committed_;
            if (!within_budget()) break;  // committed only grows at this level
        }
        for (auto v : local_bans) {
            for (auto u : w_.adj(v))
                if (in_set_.test(u)) --committed_;
            banned_.reset(v);
        }
    }

    const Window& w_;
    const EnumOptions& opts_;
    std::function<void(const std::vector<std::uint32_t>&)> visit_;
    std::vector<std::uint32_t> cur_;
    DynBitset in_set_, banned_;
    std::uint64_t committed_ = 0;
    std::uint64_t limit_;
    std::uint64_t emitted_ = 0;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

// Streams every connected W with |W| <= max_size and (if given) anchor in W.
// Returns the number of sets emitted.
template <class Fn>
std::uint64_t enumerate_connected_sets(const Window& w, std::optional<std::uint32_t> anchor,
                                       std::uint32_t max_size, Fn&& visit,
                                       EnumOptions opts = {}) {
    opts.max_size = max_size;
    detail::ConnectedSetEnumerator e(w, opts, visit);
    return anchor ? e.run_anchored(*anchor) : e.run_all();
}

}  // namespace perco
