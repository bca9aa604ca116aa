#pragma once

#include <unordered_map>

#include "qpack/enumerate.hpp"
#include "qpack/group.hpp"

namespace qpack {

namespace detail {

// Orbits are keyed by the encoding tuple. When q = 2 and the k encodings fit
// one machine word the key is packed; otherwise the tuple itself is hashed.
inline bool key_packable(std::uint32_t q, std::uint32_t n, std::uint32_t k) {
    return q == 2 && std::uint64_t(n) * k <= 64;
}

inline std::uint64_t pack_key(const std::uint64_t* cols, std::uint32_t n, std::uint32_t k) {
    std::uint64_t key = 0;
    for (std::uint32_t i = 0; i < k; ++i) key |= cols[i] << (i * n);
    return key;
}

// BFS over generator applications. Fills `flat` with the orbit's canonical
// subspaces, k words each, starting from the seed. Order of discovery.
template <typename Insert>
void orbit_bfs(const std::vector<ActionMatrix>& gens, std::vector<std::uint64_t>& flat,
               std::uint32_t k, Insert&& insert_if_new) {
    std::vector<std::uint64_t> next(k);
    for (std::size_t head = 0; head + k <= flat.size(); head += k) {
        for (const auto& g : gens) {
            for (std::uint32_t i = 0; i < k; ++i) next[i] = g.apply(flat[head + i]);
            canonical_basis(g.q, g.n, next);  // rank stays k: g is invertible
            if (insert_if_new(next)) flat.insert(flat.end(), next.begin(), next.end());
        }
    }
}

// Runs the BFS with the appropriate key set; returns orbit elements flat.
inline std::vector<std::uint64_t> orbit_elements(const std::vector<ActionMatrix>& gens,
                                                 const std::vector<std::uint64_t>& seed,
                                                 std::uint32_t q, std::uint32_t n) {
    const auto k = static_cast<std::uint32_t>(seed.size());
    std::vector<std::uint64_t> flat(seed);
    if (key_packable(q, n, k)) {
        std::unordered_set<std::uint64_t> seen{pack_key(seed.data(), n, k)};
        orbit_bfs(gens, flat, k, [&](const std::vector<std::uint64_t>& s) {
            return seen.insert(pack_key(s.data(), n, k)).second;
        });
    } else {
        std::unordered_set<std::vector<std::uint64_t>, VecU64Hash> seen{seed};
        orbit_bfs(gens, flat, k, [&](const std::vector<std::uint64_t>& s) {
            return seen.insert(s).second;
        });
    }
    return flat;
}

inline std::vector<ActionMatrix> gen_actions(const GroupGens& gens) {
    std::vector<ActionMatrix> out;
    out.reserve(gens.generators.size());
    for (const auto& g : gens.generators) out.push_back(ActionMatrix::from(g));
    return out;
}

// lexicographic compare of two k-tuples in flat storage
inline bool tuple_less(const std::uint64_t* a, const std::uint64_t* b, std::uint32_t k) {
    for (std::uint32_t i = 0; i < k; ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

}  // namespace detail

/// One orbit of a subgroup of GL(n,q) on k-subspaces. The representative is
/// the lexicographically smallest encoding in the orbit. Elements, when
/// materialized, are stored flat (k encodings per subspace) in ascending order.
struct Orbit {
    Subspace representative;
    std::uint64_t size = 0;
    std::uint32_t k = 0;
    std::vector<std::uint64_t> elements_flat;  // empty unless materialized

    bool materialized() const { return !elements_flat.empty() || size == 0; }
    std::size_t element_count() const { return elements_flat.size() / k; }
    const std::uint64_t* element(std::size_t i) const { return elements_flat.data() + i * k; }

    Subspace element_subspace(std::size_t i) const {
        return Subspace::from_canonical(
            representative.q(), representative.n(),
            {element(i), element(i) + k});
    }
};

/// Orbit of K under the generated group, by BFS on generator applications;
/// never forms the group closure.
inline Orbit orbit_of(const GroupGens& gens, const Subspace& k_sub, bool materialize = true) {
    if (gens.n != k_sub.n() || gens.q.value() != k_sub.q())
        throw std::invalid_argument("group and subspace ambient mismatch");
    auto actions = detail::gen_actions(gens);
    auto flat = detail::orbit_elements(actions, k_sub.encoding(), k_sub.q(), k_sub.n());
    const std::uint32_t k = k_sub.k();
    const std::size_t count = flat.size() / k;

    // sort elements ascending; the representative is the first
    std::vector<std::uint32_t> order(count);
    for (std::uint32_t i = 0; i < count; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return detail::tuple_less(&flat[a * k], &flat[b * k], k);
    });
    std::vector<std::uint64_t> sorted;
    sorted.reserve(flat.size());
    for (auto i : order) sorted.insert(sorted.end(), &flat[i * k], &flat[i * k] + k);

    Orbit o{Subspace::from_canonical(k_sub.q(), k_sub.n(), {sorted.begin(), sorted.begin() + k}),
            count, k, {}};
    if (materialize) o.elements_flat = std::move(sorted);
    return o;
}

/// The full partition of the k-subspaces of F_q^n into orbits, sorted by
/// representative encoding.
struct OrbitPartition {
    GroupGens gens;
    std::uint32_t k = 0;
    std::vector<Orbit> orbits;

    std::uint64_t total_size() const {
        std::uint64_t s = 0;
        for (const auto& o : orbits) s += o.size;
        return s;
    }
};

inline OrbitPartition orbit_partition(const GroupGens& gens, std::uint32_t k,
                                      std::uint64_t cap = kDefaultEnumerationCap) {
    auto all = enumerate_subspaces(gens.n, k, gens.q, cap);
    auto actions = detail::gen_actions(gens);

    // flat sorted encodings for index lookup
    const std::size_t count = all.size();
    std::vector<std::uint64_t> flat;
    flat.reserve(count * k);
    for (const auto& s : all) flat.insert(flat.end(), s.encoding().begin(), s.encoding().end());

    auto index_of = [&](const std::uint64_t* cols) -> std::size_t {
        std::size_t lo = 0, hi = count;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (detail::tuple_less(&flat[mid * k], cols, k))
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    };

    std::vector<bool> assigned(count, false);
    OrbitPartition part{gens, k, {}};
    for (std::size_t i = 0; i < count; ++i) {
        if (assigned[i]) continue;
        // ascending scan: i is the minimal element of a fresh orbit
        auto elems = detail::orbit_elements(actions, all[i].encoding(), gens.q.value(), gens.n);
        const std::size_t osize = elems.size() / k;
        for (std::size_t e = 0; e < osize; ++e) {
            std::size_t idx = index_of(&elems[e * k]);
            if (idx >= count || !std::equal(&elems[e * k], &elems[e * k] + k, &flat[idx * k]))
                throw std::logic_error("orbit element missing from enumeration");
            assigned[idx] = true;
        }
        std::vector<std::uint32_t> order(osize);
        for (std::uint32_t j = 0; j < osize; ++j) order[j] = j;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return detail::tuple_less(&elems[a * k], &elems[b * k], k);
        });
        std::vector<std::uint64_t> sorted;
        sorted.reserve(elems.size());
        for (auto j : order) sorted.insert(sorted.end(), &elems[j * k], &elems[j * k] + k);
        part.orbits.push_back(Orbit{all[i], osize, k, std::move(sorted)});
    }
    return part;
}

/// Lookup from a subspace's encoding tuple to its orbit index in a partition.
class OrbitIndex {
public:
    explicit OrbitIndex(const OrbitPartition& part)
        : q_(part.gens.q.value()), n_(part.gens.n), k_(part.k),
          packed_(detail::key_packable(q_, n_, k_)) {
        for (std::uint32_t oi = 0; oi < part.orbits.size(); ++oi) {
            const Orbit& o = part.orbits[oi];
            if (!o.materialized())
                throw std::logic_error("OrbitIndex needs materialized orbits");
            for (std::size_t e = 0; e < o.element_count(); ++e) {
                if (packed_)
                    by_key_[detail::pack_key(o.element(e), n_, k_)] = oi;
                else
                    by_tuple_[{o.element(e), o.element(e) + k_}] = oi;
            }
        }
    }

    std::uint32_t orbit_of(const std::uint64_t* cols) const {
        if (packed_) {
            auto it = by_key_.find(detail::pack_key(cols, n_, k_));
            if (it == by_key_.end()) throw std::logic_error("subspace missing from partition");
            return it->second;
        }
        auto it = by_tuple_.find({cols, cols + k_});
        if (it == by_tuple_.end()) throw std::logic_error("subspace missing from partition");
        return it->second;
    }

    std::uint32_t orbit_of(const Subspace& s) const { return orbit_of(s.encoding().data()); }

private:
    std::uint32_t q_, n_, k_;
    bool packed_;
    std::unordered_map<std::uint64_t, std::uint32_t> by_key_;
    std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, detail::VecU64Hash> by_tuple_;
};

/// How the orbits of a subgroup H <= G refine the orbits of G: assignment maps
/// each H-orbit to the unique G-orbit containing it.
struct FusionMap {
    OrbitPartition fine;    // under H
    OrbitPartition coarse;  // under G
    std::vector<std::uint32_t> assignment;

    std::vector<std::vector<std::uint32_t>> parts() const {
        std::vector<std::vector<std::uint32_t>> p(coarse.orbits.size());
        for (std::uint32_t i = 0; i < assignment.size(); ++i) p[assignment[i]].push_back(i);
        return p;
    }
};

/// Builds the fusion of H-orbits into G-orbits on k-subspaces. H must be a
/// subgroup of G; this is verified by membership of H's generators in G's
/// closure.
inline FusionMap fuse(const GroupGens& gens_h, const GroupGens& gens_g, std::uint32_t k,
                      std::uint64_t order_cap = kDefaultOrderCap,
                      std::uint64_t enum_cap = kDefaultEnumerationCap) {
    if (gens_h.n != gens_g.n || gens_h.q.value() != gens_g.q.value())
        throw std::invalid_argument("subgroup/group ambient mismatch");
    GroupClosure gc = close_group(gens_g, order_cap);
    std::unordered_set<std::vector<std::uint64_t>, detail::VecU64Hash> gset;
    for (const auto& e : gc.elements) gset.insert(e.column_encodings());
    for (const auto& h : gens_h.generators)
        if (!gset.count(h.column_encodings()))
            throw std::invalid_argument("H is not a subgroup of G: generator not in closure");

    FusionMap fm{orbit_partition(gens_h, k, enum_cap), orbit_partition(gens_g, k, enum_cap), {}};
    OrbitIndex coarse_index(fm.coarse);
    fm.assignment.reserve(fm.fine.orbits.size());
    for (const auto& o : fm.fine.orbits)
        fm.assignment.push_back(coarse_index.orbit_of(o.representative));

    // size consistency: H-orbit sizes within a part sum to the G-orbit size
    std::vector<std::uint64_t> sums(fm.coarse.orbits.size(), 0);
    for (std::size_t i = 0; i < fm.assignment.size(); ++i)
        sums[fm.assignment[i]] += fm.fine.orbits[i].size;
    for (std::size_t j = 0; j < sums.size(); ++j)
        if (sums[j] != fm.coarse.orbits[j].size)
            throw std::logic_error("fusion size inconsistency");
    return fm;
}

}  // namespace qpack
