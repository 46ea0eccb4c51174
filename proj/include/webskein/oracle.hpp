#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "webskein/lpoly.hpp"
#include "webskein/web.hpp"

namespace webskein {

// State sum of a closed crossing-free web. Throws Error("oracle requires closed web")
// for open boundaries.
LPoly eval_web(const SliceWeb& w, int n);

// Same contraction, but crossing slices are allowed and are expanded locally on the fly.
// Equals the sum of eval_web over expand_crossings(w, n).
LPoly eval_sliced(const SliceWeb& w, int n);

// Open webs: map from (bottom subsets, top subsets) to the weight sum.
using Tensor = std::map<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>, LPoly>;
Tensor eval_tensor(const SliceWeb& w, int n);

// Edges are numbered in creation order (bottom strands, then cups, merges, splits).
struct StateWeight {
    std::vector<uint32_t> subsets;  // per edge, as a bit mask of {1..n}
    LPoly weight;
};
std::vector<StateWeight> enumerate_states(const SliceWeb& w, int n);

// weight helpers, exposed for tests
int rho(uint32_t a, int n);
int pi_count(uint32_t a, uint32_t b);

}  // namespace webskein
