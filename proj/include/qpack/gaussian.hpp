#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

namespace qpack {

using BigInt = boost::multiprecision::cpp_int;

/// Gaussian binomial [n k]_q: the number of k-subspaces of F_q^n, computed
/// exactly by the product formula. Returns 0 when k > n.
inline BigInt gaussian_binomial(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    if (k > n) return 0;
    BigInt num = 1, den = 1;
    const BigInt bq = q;
    for (std::uint32_t i = 0; i < k; ++i) {
        num *= boost::multiprecision::pow(bq, n - i) - 1;
        den *= boost::multiprecision::pow(bq, k - i) - 1;
    }
    return num / den;  // always divides exactly
}

}  // namespace qpack
