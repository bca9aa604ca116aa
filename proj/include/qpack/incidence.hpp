#pragma once

#include "qpack/orbit.hpp"

namespace qpack {

/// Incidence matrix between t- and k-subspaces, plain or orbit-reduced.
/// Rows and columns are identified by orbit representatives and carry the
/// orbit sizes as weights; a plain matrix is the reduced matrix of the
/// trivial group (all weights 1).
struct IncidenceMatrix {
    std::uint32_t q = 0, n = 0, t = 0, k = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<std::vector<std::uint64_t>> row_reps, col_reps;
    std::vector<std::uint16_t> a;  // dense, row-major; entries bounded by [k t]_q
    std::vector<std::uint64_t> row_weights, col_weights;

    std::uint16_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    std::uint16_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

/// 0-1 column selection with its orbit-weighted size.
struct Solution {
    std::vector<std::uint8_t> selected;
    std::uint64_t weighted_size = 0;
};

inline Solution make_solution(const IncidenceMatrix& a, std::vector<std::uint8_t> selected) {
    if (selected.size() != a.cols) throw std::invalid_argument("selection length mismatch");
    Solution s{std::move(selected), 0};
    for (std::size_t j = 0; j < a.cols; ++j)
        if (s.selected[j]) s.weighted_size += a.col_weights[j];
    return s;
}

/// A - selected is feasible iff every coordinate of A*x is at most 1.
inline bool is_feasible(const IncidenceMatrix& a, const std::vector<std::uint8_t>& selected,
                        std::vector<std::uint32_t>* violated_rows = nullptr) {
    if (selected.size() != a.cols) throw std::invalid_argument("selection length mismatch");
    bool ok = true;
    for (std::size_t i = 0; i < a.rows; ++i) {
        std::uint32_t acc = 0;
        for (std::size_t j = 0; j < a.cols; ++j)
            if (selected[j]) acc += a.at(i, j);
        if (acc > 1) {
            ok = false;
            if (violated_rows)
                violated_rows->push_back(static_cast<std::uint32_t>(i));
            else
                return false;
        }
    }
    return ok;
}

namespace detail {

inline std::size_t find_row(const std::vector<std::uint64_t>& flat, std::size_t count,
                            std::uint32_t t, const std::uint64_t* key) {
    std::size_t lo = 0, hi = count;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (tuple_less(&flat[mid * t], key, t))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo >= count || !std::equal(key, key + t, &flat[lo * t]))
        throw std::logic_error("t-subspace not found among rows");
    return lo;
}

}  // namespace detail

/// Plain incidence matrix A_{t,k}: a[T][K] = 1 iff T is contained in K, rows
/// and columns in ascending canonical order.
inline IncidenceMatrix plain_matrix(std::uint32_t n, std::uint32_t t, std::uint32_t k,
                                    FieldOrder q, std::uint64_t cap = kDefaultEnumerationCap) {
    if (!(t >= 1 && t < k && k <= n)) throw std::invalid_argument("need 1 <= t < k <= n");
    auto trows = enumerate_subspaces(n, t, q, cap);
    auto kcols = enumerate_subspaces(n, k, q, cap);

    IncidenceMatrix m;
    m.q = q.value();
    m.n = n;
    m.t = t;
    m.k = k;
    m.rows = trows.size();
    m.cols = kcols.size();
    m.row_reps.reserve(m.rows);
    std::vector<std::uint64_t> row_flat;
    row_flat.reserve(m.rows * t);
    for (const auto& s : trows) {
        m.row_reps.push_back(s.encoding());
        row_flat.insert(row_flat.end(), s.encoding().begin(), s.encoding().end());
    }
    m.col_reps.reserve(m.cols);
    for (const auto& s : kcols) m.col_reps.push_back(s.encoding());
    m.a.assign(m.rows * m.cols, 0);
    m.row_weights.assign(m.rows, 1);
    m.col_weights.assign(m.cols, 1);

    BlockTEnumerator ben(q.value(), n, k, t);
    std::vector<std::uint64_t> tsubs;
    for (std::size_t j = 0; j < m.cols; ++j) {
        tsubs.clear();
        ben.enumerate(m.col_reps[j].data(), tsubs);
        for (std::size_t s = 0; s < tsubs.size(); s += t)
            m.at(detail::find_row(row_flat, m.rows, t, &tsubs[s]), j) = 1;
    }
    return m;
}

/// Orbit-reduced Kramer-Mesner matrix A^G_{t,k}. The entry for (T-orbit,
/// K-orbit) counts the elements of the K-orbit containing the representative
/// T; it is recovered from the total incidence count between the two orbits,
/// which the orbit size of T always divides exactly.
inline IncidenceMatrix reduced_matrix(const GroupGens& gens, std::uint32_t t, std::uint32_t k,
                                      std::uint64_t cap = kDefaultEnumerationCap) {
    if (!(t >= 1 && t < k && k <= gens.n)) throw std::invalid_argument("need 1 <= t < k <= n");
    OrbitPartition tpart = orbit_partition(gens, t, cap);
    OrbitPartition kpart = orbit_partition(gens, k, cap);
    OrbitIndex tindex(tpart);

    IncidenceMatrix m;
    m.q = gens.q.value();
    m.n = gens.n;
    m.t = t;
    m.k = k;
    m.rows = tpart.orbits.size();
    m.cols = kpart.orbits.size();
    for (const auto& o : tpart.orbits) {
        m.row_reps.push_back(o.representative.encoding());
        m.row_weights.push_back(o.size);
    }
    for (const auto& o : kpart.orbits) {
        m.col_reps.push_back(o.representative.encoding());
        m.col_weights.push_back(o.size);
    }
    m.a.assign(m.rows * m.cols, 0);

    BlockTEnumerator ben(m.q, m.n, k, t);
    std::vector<std::uint64_t> tsubs;
    std::vector<std::uint64_t> counts(m.rows);
    for (std::size_t j = 0; j < m.cols; ++j) {
        std::fill(counts.begin(), counts.end(), 0);
        const Orbit& orb = kpart.orbits[j];
        for (std::size_t e = 0; e < orb.element_count(); ++e) {
            tsubs.clear();
            ben.enumerate(orb.element(e), tsubs);
            for (std::size_t s = 0; s < tsubs.size(); s += t)
                ++counts[tindex.orbit_of(&tsubs[s])];
        }
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (counts[i] % m.row_weights[i] != 0)
                throw std::logic_error("incidence count not divisible by orbit size");
            std::uint64_t entry = counts[i] / m.row_weights[i];
            if (entry > 0xffff) throw std::logic_error("incidence entry overflow");
            m.at(i, j) = static_cast<std::uint16_t>(entry);
        }
    }
    return m;
}

/// Result of fusing A^H along a subgroup chain: the intermediate matrix A'
/// (H-rows by G-columns, columns of A^H summed per part) and the deduplicated
/// G-matrix.
struct FuseResult {
    IncidenceMatrix intermediate;
    IncidenceMatrix coarse;
};

inline FuseResult fuse_matrix(const IncidenceMatrix& a_h, const FusionMap& fmap_cols,
                              const FusionMap& fmap_rows) {
    auto check_reps = [](const std::vector<std::vector<std::uint64_t>>& reps,
                         const OrbitPartition& part, const char* what) {
        if (reps.size() != part.orbits.size())
            throw std::invalid_argument(std::string("fusion map does not match matrix ") + what);
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (reps[i] != part.orbits[i].representative.encoding())
                throw std::invalid_argument(std::string("fusion map does not match matrix ") +
                                            what);
    };
    check_reps(a_h.col_reps, fmap_cols.fine, "columns");
    check_reps(a_h.row_reps, fmap_rows.fine, "rows");

    const std::size_t gcols = fmap_cols.coarse.orbits.size();
    const std::size_t grows = fmap_rows.coarse.orbits.size();

    FuseResult out;
    IncidenceMatrix& ap = out.intermediate;
    ap.q = a_h.q;
    ap.n = a_h.n;
    ap.t = a_h.t;
    ap.k = a_h.k;
    ap.rows = a_h.rows;
    ap.cols = gcols;
    ap.row_reps = a_h.row_reps;
    ap.row_weights = a_h.row_weights;
    ap.a.assign(ap.rows * ap.cols, 0);
    for (std::size_t jg = 0; jg < gcols; ++jg) {
        ap.col_reps.push_back(fmap_cols.coarse.orbits[jg].representative.encoding());
        ap.col_weights.push_back(fmap_cols.coarse.orbits[jg].size);
    }
    for (std::size_t j = 0; j < a_h.cols; ++j) {
        std::size_t jg = fmap_cols.assignment[j];
        for (std::size_t i = 0; i < a_h.rows; ++i) {
            std::uint32_t v = ap.at(i, jg) + a_h.at(i, j);
            if (v > 0xffff) throw std::logic_error("incidence entry overflow");
            ap.at(i, jg) = static_cast<std::uint16_t>(v);
        }
    }

    // rows fusing to the same G-orbit must be identical in A'
    IncidenceMatrix& ag = out.coarse;
    ag.q = a_h.q;
    ag.n = a_h.n;
    ag.t = a_h.t;
    ag.k = a_h.k;
    ag.rows = grows;
    ag.cols = gcols;
    ag.col_reps = ap.col_reps;
    ag.col_weights = ap.col_weights;
    ag.a.assign(grows * gcols, 0);
    std::vector<bool> seen(grows, false);
    ag.row_reps.resize(grows);
    ag.row_weights.assign(grows, 0);
    for (std::size_t ig = 0; ig < grows; ++ig) {
        ag.row_reps[ig] = fmap_rows.coarse.orbits[ig].representative.encoding();
        ag.row_weights[ig] = fmap_rows.coarse.orbits[ig].size;
    }
    for (std::size_t i = 0; i < a_h.rows; ++i) {
        std::size_t ig = fmap_rows.assignment[i];
        if (!seen[ig]) {
            seen[ig] = true;
            for (std::size_t j = 0; j < gcols; ++j) ag.at(ig, j) = ap.at(i, j);
        } else {
            for (std::size_t j = 0; j < gcols; ++j)
                if (ag.at(ig, j) != ap.at(i, j))
                    throw std::logic_error(
                        "fusion violates incidence preservation: rows within a part differ");
        }
    }
    return out;
}

/// Translate a feasible solution for A^G down to the subgroup H: an H-orbit
/// is selected iff its parent G-orbit is. Preserves feasibility, the weighted
/// size, and the expanded block set.
inline Solution translate_solution(const IncidenceMatrix& a_g, const Solution& x,
                                   const FusionMap& fmap_cols) {
    if (x.selected.size() != a_g.cols) throw std::invalid_argument("selection length mismatch");
    if (a_g.cols != fmap_cols.coarse.orbits.size())
        throw std::invalid_argument("fusion map does not match matrix columns");
    if (!is_feasible(a_g, x.selected))
        throw std::invalid_argument("cannot translate an infeasible solution");
    std::vector<std::uint8_t> y(fmap_cols.fine.orbits.size(), 0);
    std::uint64_t wsize = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = x.selected[fmap_cols.assignment[i]];
        if (y[i]) wsize += fmap_cols.fine.orbits[i].size;
    }
    return Solution{std::move(y), wsize};
}

/// Mask of columns whose entries are all at most 1; only these can appear in
/// a design admitting the group.
inline std::vector<std::uint8_t> admissible_columns(const IncidenceMatrix& a) {
    std::vector<std::uint8_t> mask(a.cols, 1);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (a.at(i, j) > 1) mask[j] = 0;
    return mask;
}

/// H-columns excluded from the continued zoom search: everything whose parent
/// G-orbit is admissible (a maximal G-solution already rules those out).
inline std::vector<std::uint8_t> zoom_prune(const FusionMap& fmap_cols,
                                            const std::vector<std::uint8_t>& admissible_g) {
    if (admissible_g.size() != fmap_cols.coarse.orbits.size())
        throw std::invalid_argument("mask length does not match coarse orbit count");
    std::vector<std::uint8_t> excluded(fmap_cols.fine.orbits.size(), 0);
    for (std::size_t i = 0; i < excluded.size(); ++i)
        excluded[i] = admissible_g[fmap_cols.assignment[i]];
    return excluded;
}

struct LocalModifyResult {
    bool feasible = false;
    Solution solution;                    // modified solution when feasible
    std::vector<std::uint32_t> violated;  // offending rows otherwise
};

/// Swap columns out of / into a solution; reports infeasibility instead of
/// applying a bad swap.
inline LocalModifyResult local_modify(const IncidenceMatrix& a, const Solution& y,
                                      const std::vector<std::uint32_t>& remove,
                                      const std::vector<std::uint32_t>& add) {
    std::vector<std::uint8_t> sel = y.selected;
    if (sel.size() != a.cols) throw std::invalid_argument("selection length mismatch");
    for (auto j : remove) {
        if (j >= a.cols || !sel[j])
            throw std::invalid_argument("column " + std::to_string(j) + " is not selected");
        sel[j] = 0;
    }
    for (auto j : add) {
        if (j >= a.cols) throw std::invalid_argument("column index out of range");
        sel[j] = 1;
    }
    LocalModifyResult res;
    if (is_feasible(a, sel, &res.violated)) {
        res.feasible = true;
        res.solution = make_solution(a, std::move(sel));
    }
    return res;
}

}  // namespace qpack
