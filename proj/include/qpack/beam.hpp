#pragma once

#include <chrono>
#include <optional>
#include <random>

#include "qpack/incidence.hpp"

namespace qpack {

/// Per-column sets of nonzero row indices, ascending. This is the elimination
/// structure: two columns conflict iff their row sets intersect.
struct Delta {
    std::vector<std::vector<std::uint32_t>> rows_of;
};

inline Delta build_delta(const IncidenceMatrix& a) {
    Delta d;
    d.rows_of.resize(a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (a.at(i, j) > 0) d.rows_of[j].push_back(static_cast<std::uint32_t>(i));
    return d;
}

/// Stopping rule for the search; whichever condition fires first ends the run.
/// With only an iteration or target stop the run is bit-reproducible; a
/// wall-clock stop trades that for a bounded runtime.
struct StopRule {
    std::optional<std::uint64_t> max_iterations;
    std::optional<std::chrono::milliseconds> time_limit;
    std::optional<std::uint64_t> target_size;
};

struct SolverParams {
    std::uint32_t alpha = 1;  // beam width
    std::uint32_t beta = 1;   // extensions sampled per state
    std::uint64_t seed = 0;
    StopRule stop;  // empty = default 5 s wall clock
};

struct BeamLogEntry {
    std::uint64_t iter;
    std::uint64_t best_f;
    std::uint64_t best_size;
    std::string to_line() const {
        return "iter=" + std::to_string(iter) + " best_f=" + std::to_string(best_f) +
               " best_size=" + std::to_string(best_size);
    }
};

struct BeamResult {
    Solution best;
    std::vector<BeamLogEntry> log;
    std::uint64_t iterations = 0;
    std::uint64_t restarts = 0;
    std::vector<std::string> warnings;
};

namespace detail {

class DynBitset {
public:
    DynBitset() = default;
    explicit DynBitset(std::size_t n, bool fill = false)
        : n_(n), w_((n + 63) / 64, fill ? ~std::uint64_t(0) : 0) {
        trim();
    }

    std::size_t size() const { return n_; }
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(std::size_t i) const { return w_[i >> 6] >> (i & 63) & 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    void and_not_inplace(const DynBitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    }

    void and_inplace(const DynBitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    }

    void or_inplace(const DynBitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    }

    std::size_t count_and_not(const DynBitset& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(w_[i] & ~o.w_[i]));
        return c;
    }

    /// Index of the idx-th set bit (0-based); idx must be below count().
    std::size_t select(std::size_t idx) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            auto c = static_cast<std::size_t>(std::popcount(w_[i]));
            if (idx < c) {
                std::uint64_t w = w_[i];
                while (idx--) w &= w - 1;
                return i * 64 + static_cast<std::size_t>(std::countr_zero(w));
            }
            idx -= c;
        }
        throw std::logic_error("select out of range");
    }

private:
    void trim() {
        if (n_ % 64) w_.back() &= (std::uint64_t(1) << (n_ % 64)) - 1;
    }
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Unbiased bounded draw by rejection; together with the fixed mt19937_64
// engine this makes runs reproducible across platforms.
inline std::uint64_t bounded_draw(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

// Stream for (seed, restart, iteration, rank); parallel evaluation of the
// beam states cannot change the sampled extensions.
inline std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t restart,
                                     std::uint64_t iter, std::uint64_t rank) {
    std::uint64_t s = mix64(seed ^ mix64(restart ^ mix64(iter ^ mix64(rank ^ 0x5eed))));
    return std::mt19937_64(s);
}

// Floyd's sampling of `want` distinct values from [0, m), returned ascending.
inline std::vector<std::uint64_t> sample_distinct(std::mt19937_64& g, std::uint64_t m,
                                                  std::uint64_t want) {
    std::vector<std::uint64_t> out;
    if (want >= m) {
        out.resize(m);
        for (std::uint64_t i = 0; i < m; ++i) out[i] = i;
        return out;
    }
    std::unordered_set<std::uint64_t> chosen;
    for (std::uint64_t j = m - want; j < m; ++j) {
        std::uint64_t t = bounded_draw(g, j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
        out.clear();
    }
    out.assign(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

struct BeamState {
    std::vector<std::uint32_t> chosen;  // sorted column ids
    DynBitset remaining;
    std::uint64_t f = 0;
    std::uint64_t weighted = 0;
};

struct U32VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 0xa0761d6478bd642full;
        for (auto x : v) h = mix64(h ^ x);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Beam search over an incidence matrix (plain or reduced): alpha parallel
/// partial solutions, beta sampled extensions each, objective f = number of
/// surviving columns. Restarts until the stopping rule fires and returns the
/// feasible solution with the largest orbit-weighted size seen anywhere.
///
/// `warm_start`, when given, seeds every restart with that (feasible)
/// solution and the search extends it. `allowed`, when given, restricts the
/// selectable columns (already-selected warm columns are exempt).
inline BeamResult beam_search(const IncidenceMatrix& a, const SolverParams& params,
                              const std::optional<Solution>& warm_start = std::nullopt,
                              const std::vector<std::uint8_t>* allowed = nullptr) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    if (a.cols == 0) throw std::invalid_argument("matrix has no columns");
    if (params.alpha < 1 || params.beta < 1)
        throw std::invalid_argument("alpha and beta must be at least 1");

    StopRule stop = params.stop;
    if (!stop.max_iterations && !stop.time_limit && !stop.target_size)
        stop.time_limit = std::chrono::milliseconds(5000);

    BeamResult result;

    // selectable universe: admissible columns, optionally masked further
    auto admissible = admissible_columns(a);
    detail::DynBitset universe(a.cols);
    for (std::size_t j = 0; j < a.cols; ++j)
        if (admissible[j] && (!allowed || (*allowed)[j])) universe.set(j);

    // conflict[c]: columns sharing a nonzero row with c, including c itself
    Delta delta = build_delta(a);
    std::vector<detail::DynBitset> conflict(a.cols, detail::DynBitset(a.cols));
    {
        std::vector<std::vector<std::uint32_t>> cols_of_row(a.rows);
        for (std::size_t j = 0; j < a.cols; ++j)
            for (auto i : delta.rows_of[j]) cols_of_row[i].push_back(static_cast<std::uint32_t>(j));
        for (std::size_t j = 0; j < a.cols; ++j) conflict[j].set(j);
        for (const auto& cols : cols_of_row)
            for (auto c : cols)
                for (auto c2 : cols) conflict[c].set(c2);
    }

    detail::BeamState base;
    base.remaining = universe;
    if (warm_start) {
        if (!is_feasible(a, warm_start->selected))
            throw std::invalid_argument("warm start solution is infeasible");
        for (std::size_t j = 0; j < a.cols; ++j)
            if (warm_start->selected[j]) {
                base.chosen.push_back(static_cast<std::uint32_t>(j));
                base.weighted += a.col_weights[j];
                base.remaining.and_not_inplace(conflict[j]);
            }
    }
    base.f = base.remaining.count();

    result.best = Solution{std::vector<std::uint8_t>(a.cols, 0), base.weighted};
    for (auto j : base.chosen) result.best.selected[j] = 1;

    std::uint32_t alpha = params.alpha;
    if (alpha > universe.count()) {
        alpha = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(universe.count()));
        result.warnings.push_back("alpha clamped to " + std::to_string(alpha) +
                                  " (selectable column count)");
    }

    auto should_stop = [&] {
        if (stop.target_size && result.best.weighted_size >= *stop.target_size) return true;
        if (stop.max_iterations && result.iterations >= *stop.max_iterations) return true;
        if (stop.time_limit && clock::now() - t0 >= *stop.time_limit) return true;
        return false;
    };

    auto offer_best = [&](const detail::BeamState& s) {
        if (s.weighted > result.best.weighted_size) {
            result.best.weighted_size = s.weighted;
            std::fill(result.best.selected.begin(), result.best.selected.end(), 0);
            for (auto j : s.chosen) result.best.selected[j] = 1;
        }
    };

    auto extend = [&](const detail::BeamState& parent, std::uint32_t c) {
        detail::BeamState child;
        child.chosen = parent.chosen;
        child.chosen.insert(std::lower_bound(child.chosen.begin(), child.chosen.end(), c), c);
        child.remaining = parent.remaining;
        child.remaining.and_not_inplace(conflict[c]);
        child.f = child.remaining.count();
        child.weighted = parent.weighted + a.col_weights[c];
        return child;
    };

    while (!should_stop()) {
        // (B1) fresh states from randomly chosen first columns
        std::uint32_t width = static_cast<std::uint32_t>(
            std::min<std::uint64_t>(alpha, base.remaining.count()));
        std::vector<detail::BeamState> beam;
        {
            auto rng = detail::derive_stream(params.seed, result.restarts, 0, 0);
            for (auto idx : detail::sample_distinct(rng, base.remaining.count(), width)) {
                beam.push_back(extend(base, static_cast<std::uint32_t>(base.remaining.select(
                                                static_cast<std::size_t>(idx)))));
                offer_best(beam.back());
            }
        }
        ++result.iterations;
        {
            std::uint64_t bf = 0;
            for (const auto& s : beam) bf = std::max(bf, s.f);
            result.log.push_back({result.iterations, bf, result.best.weighted_size});
        }
        if (beam.empty()) {
            // nothing selectable at all (e.g. warm start already maximal)
            ++result.restarts;
            if (base.f == 0) break;
            continue;
        }

        // (B2)/(B3) iterate: sample extensions, keep the alpha best by f
        std::uint64_t pass_iter = 0;
        while (width > 0 && !should_stop()) {
            ++pass_iter;
            struct Cand {
                std::uint32_t parent;
                std::uint32_t col;
                std::uint64_t f;
                std::uint64_t weighted;
                std::uint64_t tie;
            };
            std::vector<Cand> cands;
            std::vector<detail::BeamState> live;
            for (std::uint32_t rank = 0; rank < beam.size(); ++rank) {
                detail::BeamState& s = beam[rank];
                if (s.f == 0) {
                    // maximal state: cannot be extended, the beam shrinks
                    --width;
                    continue;
                }
                auto rng = detail::derive_stream(params.seed, result.restarts, pass_iter,
                                                 rank + 1);
                auto picks = detail::sample_distinct(
                    rng, s.f, std::min<std::uint64_t>(params.beta, s.f));
                const auto parent_idx = static_cast<std::uint32_t>(live.size());
                for (auto p : picks) {
                    auto c = static_cast<std::uint32_t>(
                        s.remaining.select(static_cast<std::size_t>(p)));
                    cands.push_back({parent_idx, c,
                                     s.remaining.count_and_not(conflict[c]),
                                     s.weighted + a.col_weights[c], 0});
                }
                live.push_back(std::move(s));
            }
            if (width == 0 || cands.empty()) break;

            // collapse duplicate states (same chosen set reached twice)
            {
                std::unordered_set<std::vector<std::uint32_t>, detail::U32VecHash> seen;
                std::vector<Cand> unique;
                unique.reserve(cands.size());
                std::vector<std::uint32_t> key;
                for (const auto& c : cands) {
                    key = live[c.parent].chosen;
                    key.insert(std::lower_bound(key.begin(), key.end(), c.col), c.col);
                    if (seen.insert(key).second) unique.push_back(c);
                }
                cands = std::move(unique);
            }

            // rank by f, ties by weighted size, then by a random tiebreak
            {
                auto rng = detail::derive_stream(params.seed, result.restarts, pass_iter, 0);
                for (auto& c : cands) c.tie = rng();
            }
            std::sort(cands.begin(), cands.end(), [&](const Cand& x, const Cand& y) {
                if (x.f != y.f) return x.f > y.f;
                if (x.weighted != y.weighted) return x.weighted > y.weighted;
                if (x.tie != y.tie) return x.tie > y.tie;
                return std::tie(x.parent, x.col) < std::tie(y.parent, y.col);
            });

            std::uint32_t keep = std::min<std::uint32_t>(
                width, static_cast<std::uint32_t>(cands.size()));
            std::vector<detail::BeamState> next;
            next.reserve(keep);
            for (std::uint32_t i = 0; i < keep; ++i) {
                next.push_back(extend(live[cands[i].parent], cands[i].col));
                offer_best(next.back());
            }
            width = keep;
            beam = std::move(next);

            ++result.iterations;
            std::uint64_t bf = 0;
            for (const auto& s : beam) bf = std::max(bf, s.f);
            result.log.push_back({result.iterations, bf, result.best.weighted_size});
        }
        ++result.restarts;
    }
    return result;
}

}  // namespace qpack
