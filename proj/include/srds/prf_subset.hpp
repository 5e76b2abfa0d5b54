#pragma once

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "srds/errors.hpp"
#include "srds/primitive.hpp"

namespace srds {

// Deterministic pseudorandom subset of {0,...,n-1}: exactly out_size distinct
// members, sorted ascending. Rejection sampling keeps the per-draw
// distribution uniform.
inline std::vector<uint32_t> prf_subset(const Seed& seed, uint64_t party_id,
                                        uint32_t n, uint32_t out_size) {
    if (n == 0) throw ParameterError("prf_subset: n must be positive");
    if (out_size > n) throw ParameterError("prf_subset: out_size exceeds n");
    PrfStream stream(tag::kSubsetPrf, seed, party_id);
    std::unordered_set<uint32_t> seen;
    std::vector<uint32_t> out;
    out.reserve(out_size);
    while (out.size() < out_size) {
        uint32_t v = uint32_t(stream.next_below(n));
        if (seen.insert(v).second) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace srds
