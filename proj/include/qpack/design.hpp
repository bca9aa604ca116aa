#pragma once

#include <limits>
#include <map>
#include <random>

#include "qpack/gaussian.hpp"
#include "qpack/orbit.hpp"

namespace qpack {

/// A list of k-subspaces of F_q^n, stored flat (k encodings per block).
struct Design {
    std::uint32_t q = 0, n = 0, t = 0, k = 0;
    std::vector<std::uint64_t> blocks_flat;

    std::size_t size() const { return k ? blocks_flat.size() / k : 0; }
    const std::uint64_t* block(std::size_t i) const { return blocks_flat.data() + i * k; }

    Subspace block_subspace(std::size_t i) const {
        return Subspace::from_canonical(q, n, {block(i), block(i) + k});
    }

    static Design from_subspaces(std::uint32_t t, const std::vector<Subspace>& blocks) {
        if (blocks.empty()) throw std::invalid_argument("design needs at least one block");
        Design d{blocks[0].q(), blocks[0].n(), t, blocks[0].k(), {}};
        if (t < 1 || t > d.k) throw std::invalid_argument("need 1 <= t <= k");
        d.blocks_flat.reserve(blocks.size() * d.k);
        for (const auto& b : blocks) {
            if (b.q() != d.q || b.n() != d.n || b.k() != d.k)
                throw std::invalid_argument("blocks disagree on (q, n, k)");
            d.blocks_flat.insert(d.blocks_flat.end(), b.encoding().begin(), b.encoding().end());
        }
        return d;
    }
};

/// Expand orbit representatives into the full design, the union of their
/// orbits. Representatives must lie in pairwise distinct orbits.
inline Design expand(const std::vector<Subspace>& reps, const GroupGens& gens, std::uint32_t t) {
    if (reps.empty()) throw std::invalid_argument("no representatives");
    const std::uint32_t k = reps[0].k();
    Design d{gens.q.value(), gens.n, t, k, {}};
    if (t < 1 || t > k) throw std::invalid_argument("need 1 <= t <= k");

    std::vector<std::uint32_t> owner;  // rep index per block, parallel to blocks
    for (std::size_t r = 0; r < reps.size(); ++r) {
        if (reps[r].k() != k || reps[r].n() != gens.n || reps[r].q() != gens.q.value())
            throw std::invalid_argument("representative " + std::to_string(r) +
                                        " disagrees on (q, n, k)");
        Orbit o = orbit_of(gens, reps[r]);
        d.blocks_flat.insert(d.blocks_flat.end(), o.elements_flat.begin(),
                             o.elements_flat.end());
        owner.insert(owner.end(), o.size, static_cast<std::uint32_t>(r));
    }

    // sort blocks ascending; equal neighbours expose overlapping orbits
    const std::size_t count = owner.size();
    std::vector<std::uint32_t> order(count);
    for (std::uint32_t i = 0; i < count; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return detail::tuple_less(d.block(a), d.block(b), k);
    });
    std::vector<std::uint64_t> sorted;
    sorted.reserve(d.blocks_flat.size());
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0 && std::equal(d.block(order[i]), d.block(order[i]) + k, d.block(order[i - 1])))
            throw std::invalid_argument(
                "representatives " + std::to_string(owner[order[i - 1]]) + " and " +
                std::to_string(owner[order[i]]) + " lie in the same orbit");
        sorted.insert(sorted.end(), d.block(order[i]), d.block(order[i]) + k);
    }
    d.blocks_flat = std::move(sorted);
    return d;
}

struct Violation {
    std::vector<std::uint64_t> t_encoding;
    std::vector<std::uint32_t> blocks;  // indices of all blocks covering it
    bool operator==(const Violation&) const = default;
};

inline constexpr std::size_t kViolationListCap = 100;

struct ValidityReport {
    bool valid = false;
    std::uint64_t size = 0;
    std::uint64_t covered = 0;           // distinct t-subspaces covered
    std::uint64_t total_violations = 0;  // t-subspaces covered more than once
    std::vector<Violation> violations;   // first kViolationListCap of them
    std::vector<std::pair<std::uint32_t, std::uint32_t>> duplicate_blocks;
};

namespace detail {

// basis of S cap K by filtering the vectors of S for membership in K
inline std::vector<std::uint64_t> intersection_basis(const std::uint64_t* s, std::uint32_t ks,
                                                     const std::uint64_t* kk, std::uint32_t kks,
                                                     std::uint32_t q, std::uint32_t n) {
    std::vector<std::uint64_t> members;
    if (q == 2) {
        for (std::uint64_t m = 1; m < (std::uint64_t(1) << ks); ++m) {
            std::uint64_t v = 0, mm = m;
            while (mm) {
                v ^= s[std::countr_zero(mm)];
                mm &= mm - 1;
            }
            std::uint64_t w = v;
            for (std::uint32_t j = 0; j < kks; ++j) {
                std::uint64_t b = kk[j];
                if (w >> (63 - std::countl_zero(b)) & 1) w ^= b;
            }
            if (w == 0) members.push_back(v);
        }
    } else {
        // all nonzero coefficient combinations; canonical_basis dedups scalars
        std::vector<std::uint8_t> coeff(ks, 0), acc(n), tmp(n), bcol(n);
        std::vector<std::vector<std::uint8_t>> sdig(ks, std::vector<std::uint8_t>(n));
        std::vector<std::vector<std::uint8_t>> kdig(kks, std::vector<std::uint8_t>(n));
        for (std::uint32_t j = 0; j < ks; ++j) decode_digits(s[j], sdig[j].data(), n, q);
        for (std::uint32_t j = 0; j < kks; ++j) decode_digits(kk[j], kdig[j].data(), n, q);
        while (true) {
            std::size_t i = 0;
            for (; i < ks; ++i) {
                if (++coeff[i] < q) break;
                coeff[i] = 0;
            }
            if (i == ks) break;
            std::fill(acc.begin(), acc.end(), 0);
            for (std::uint32_t j = 0; j < ks; ++j)
                if (coeff[j])
                    for (std::uint32_t r = 0; r < n; ++r)
                        acc[r] = static_cast<std::uint8_t>((acc[r] + coeff[j] * sdig[j][r]) % q);
            tmp = acc;
            for (std::uint32_t j = 0; j < kks; ++j) {
                int p = pivot_row(kdig[j].data(), n);
                if (p >= 0 && tmp[static_cast<std::size_t>(p)])
                    submul(tmp.data(), kdig[j].data(), tmp[static_cast<std::size_t>(p)], n, q);
            }
            if (pivot_row(tmp.data(), n) < 0) members.push_back(encode_digits(acc.data(), n, q));
        }
    }
    canonical_basis(q, n, members);
    return members;
}

inline bool coverage_key_packable(std::uint32_t q, std::uint32_t n, std::uint32_t t) {
    return q == 2 && std::uint64_t(n) * t <= 60;
}

}  // namespace detail

/// Pairwise verifier (Lemma-1 route): valid iff every pair of blocks meets in
/// dimension at most t-1 and no block repeats. Quadratic in the block count.
inline ValidityReport verify_pairwise(const Design& d, std::uint64_t pair_threshold = 10000) {
    const std::uint64_t s = d.size();
    if (s > pair_threshold)
        throw std::invalid_argument("design has " + std::to_string(s) +
                                    " blocks; pairwise scan capped at " +
                                    std::to_string(pair_threshold) +
                                    " - use verify_coverage instead");
    ValidityReport rep;
    rep.size = s;

    std::map<std::vector<std::uint64_t>, std::vector<std::uint32_t>> mult;  // t-enc -> blocks
    std::vector<std::uint64_t> joint;
    for (std::uint32_t i = 0; i < s; ++i) {
        for (std::uint32_t j = i + 1; j < s; ++j) {
            joint.assign(d.block(i), d.block(i) + d.k);
            joint.insert(joint.end(), d.block(j), d.block(j) + d.k);
            detail::canonical_basis(d.q, d.n, joint);
            std::uint32_t idim = 2 * d.k - static_cast<std::uint32_t>(joint.size());
            if (idim == d.k) rep.duplicate_blocks.emplace_back(i, j);
            if (idim < d.t) continue;
            auto ibasis = detail::intersection_basis(d.block(i), d.k, d.block(j), d.k, d.q, d.n);
            BlockTEnumerator ben(d.q, d.n, static_cast<std::uint32_t>(ibasis.size()), d.t);
            std::vector<std::uint64_t> tsubs;
            ben.enumerate(ibasis.data(), tsubs);
            for (std::size_t p = 0; p < tsubs.size(); p += d.t) {
                auto& lst = mult[{&tsubs[p], &tsubs[p] + d.t}];
                for (std::uint32_t b : {i, j})
                    if (std::find(lst.begin(), lst.end(), b) == lst.end()) lst.push_back(b);
            }
        }
    }
    rep.total_violations = mult.size();
    std::uint64_t overcount = 0;
    for (auto& [key, lst] : mult) {
        std::sort(lst.begin(), lst.end());
        overcount += lst.size() - 1;
        if (rep.violations.size() < kViolationListCap) rep.violations.push_back({key, lst});
    }
    rep.covered = s * static_cast<std::uint64_t>(gaussian_binomial(d.k, d.t, d.q)) - overcount;
    rep.valid = rep.total_violations == 0 && rep.duplicate_blocks.empty();
    return rep;
}

/// Coverage verifier: enumerates every block's t-subspaces and detects
/// duplicate coverage. Memory is proportional to size * [k t]_q.
inline ValidityReport verify_coverage(const Design& d) {
    ValidityReport rep;
    rep.size = d.size();
    BlockTEnumerator ben(d.q, d.n, d.k, d.t);
    const std::size_t per_block = ben.count_per_block();

    // duplicate blocks: adjacent equality after expand/load keeps blocks sorted,
    // but a hand-built design may not be, so scan via sorted order
    {
        std::vector<std::uint32_t> order(rep.size);
        for (std::uint32_t i = 0; i < rep.size; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return detail::tuple_less(d.block(a), d.block(b), d.k);
        });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (std::equal(d.block(order[i]), d.block(order[i]) + d.k, d.block(order[i - 1])))
                rep.duplicate_blocks.emplace_back(std::min(order[i - 1], order[i]),
                                                  std::max(order[i - 1], order[i]));
    }

    if (detail::coverage_key_packable(d.q, d.n, d.t)) {
        std::vector<std::uint64_t> keys;
        keys.reserve(rep.size * per_block);
        std::vector<std::uint64_t> tsubs;
        for (std::size_t b = 0; b < rep.size; ++b) {
            tsubs.clear();
            ben.enumerate(d.block(b), tsubs);
            for (std::size_t p = 0; p < tsubs.size(); p += d.t)
                keys.push_back(detail::pack_key(&tsubs[p], d.n, d.t));
        }
        std::sort(keys.begin(), keys.end());
        std::unordered_set<std::uint64_t> dup_keys;
        for (std::size_t i = 0; i < keys.size();) {
            std::size_t j = i;
            while (j < keys.size() && keys[j] == keys[i]) ++j;
            ++rep.covered;
            if (j - i > 1) {
                ++rep.total_violations;
                dup_keys.insert(keys[i]);
            }
            i = j;
        }
        if (!dup_keys.empty()) {
            // second pass attributes the duplicated t-subspaces to their blocks
            std::map<std::uint64_t, std::vector<std::uint32_t>> attr;
            for (std::size_t b = 0; b < rep.size; ++b) {
                tsubs.clear();
                ben.enumerate(d.block(b), tsubs);
                for (std::size_t p = 0; p < tsubs.size(); p += d.t) {
                    std::uint64_t key = detail::pack_key(&tsubs[p], d.n, d.t);
                    if (dup_keys.count(key)) attr[key].push_back(static_cast<std::uint32_t>(b));
                }
            }
            for (auto& [key, lst] : attr) {
                if (rep.violations.size() >= kViolationListCap) break;
                std::vector<std::uint64_t> enc(d.t);
                for (std::uint32_t i = 0; i < d.t; ++i)
                    enc[i] = key >> (i * d.n) & ((std::uint64_t(1) << d.n) - 1);
                rep.violations.push_back({enc, lst});
            }
        }
    } else {
        std::map<std::vector<std::uint64_t>, std::vector<std::uint32_t>> seen;
        std::vector<std::uint64_t> tsubs;
        for (std::size_t b = 0; b < rep.size; ++b) {
            tsubs.clear();
            ben.enumerate(d.block(b), tsubs);
            for (std::size_t p = 0; p < tsubs.size(); p += d.t)
                seen[{&tsubs[p], &tsubs[p] + d.t}].push_back(static_cast<std::uint32_t>(b));
        }
        rep.covered = seen.size();
        for (auto& [key, lst] : seen)
            if (lst.size() > 1) {
                ++rep.total_violations;
                if (rep.violations.size() < kViolationListCap) rep.violations.push_back({key, lst});
            }
    }
    rep.valid = rep.total_violations == 0 && rep.duplicate_blocks.empty();
    return rep;
}

/// floor([n t]_q / [k t]_q): the packing bound on the design size.
inline BigInt packing_bound(std::uint32_t n, std::uint32_t t, std::uint32_t k, std::uint32_t q) {
    if (!(t <= k && k <= n)) throw std::invalid_argument("need t <= k <= n");
    return gaussian_binomial(n, t, q) / gaussian_binomial(k, t, q);
}

/// A valid design is a q-Steiner system iff it covers every t-subspace.
inline bool is_steiner(const Design& d) {
    ValidityReport rep = verify_coverage(d);
    if (!rep.valid) throw std::invalid_argument("design is not a valid packing");
    return BigInt(rep.covered) == gaussian_binomial(d.n, d.t, d.q);
}

struct CodeParameters {
    std::uint32_t n, k, d;  // d = 2(k - t + 1)
    std::uint64_t s;
    std::uint32_t q;
    std::uint32_t min_distance;  // observed pairwise minimum
    bool exhaustive;             // full pair scan vs fixed-seed sample
};

/// Constant-dimension-code view of a valid design.
inline CodeParameters code_parameters(const Design& d, std::uint64_t pair_threshold = 10000) {
    ValidityReport rep = verify_coverage(d);
    if (!rep.valid) throw std::invalid_argument("design is not a valid packing");
    CodeParameters cp{d.n, d.k, 2 * (d.k - d.t + 1), rep.size, d.q, 2 * d.k, false};
    const std::uint64_t s = rep.size;
    auto dist = [&](std::size_t i, std::size_t j) {
        std::vector<std::uint64_t> joint(d.block(i), d.block(i) + d.k);
        joint.insert(joint.end(), d.block(j), d.block(j) + d.k);
        detail::canonical_basis(d.q, d.n, joint);
        std::uint32_t idim = 2 * d.k - static_cast<std::uint32_t>(joint.size());
        return 2 * (d.k - idim);
    };
    if (s < 2) {
        cp.exhaustive = true;
        return cp;
    }
    if (s <= pair_threshold) {
        cp.exhaustive = true;
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = i + 1; j < s; ++j)
                cp.min_distance = std::min<std::uint32_t>(cp.min_distance, dist(i, j));
    } else {
        std::mt19937_64 rng(0xc0de5eed);
        for (std::uint64_t trial = 0; trial < 1000000; ++trial) {
            std::size_t i = static_cast<std::size_t>(rng() % s);
            std::size_t j = static_cast<std::size_t>(rng() % s);
            if (i == j) continue;
            cp.min_distance = std::min<std::uint32_t>(cp.min_distance, dist(i, j));
        }
    }
    return cp;
}

/// Order of the normalizer of a Singer cycle: n (q^n - 1).
inline std::uint64_t ns_order(std::uint32_t n, std::uint32_t q) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    BigInt o = BigInt(n) * (boost::multiprecision::pow(BigInt(q), n) - 1);
    if (o > std::numeric_limits<std::uint64_t>::max())
        throw std::overflow_error("normalizer order exceeds 64 bits");
    return static_cast<std::uint64_t>(o);
}

}  // namespace qpack
