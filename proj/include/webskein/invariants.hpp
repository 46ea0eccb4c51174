#pragma once

#include <memory>

#include "webskein/diagram.hpp"
#include "webskein/lpoly.hpp"
#include "webskein/reduce.hpp"

namespace webskein {

class Cache;

enum class Engine { Rewrite, Oracle, Both };
Engine engine_from_name(const std::string& s);
std::string engine_name(Engine e);

// Raised by the rewrite engine when fallback is off and a web does not reduce.
struct Irreducible : Error {
    explicit Irreducible(SliceWeb w) : Error("irreducible web"), residual(std::move(w)) {}
    SliceWeb residual;
};

struct EvalOptions {
    Engine engine = Engine::Both;
    // when the rewriter is stuck, evaluate that web with the oracle
    bool fallback = true;
    Cache* cache = nullptr;
};

struct EvalStats {
    size_t terms = 0;
    size_t stuck = 0;
    size_t cache_hits = 0;
    size_t curls = 0;
};

// v^{sign * i(n-i+1)}: removing a curl of sign `sign` on a color-i strand
LPoly curl_factor(int i, int n, int sign);

LPoly bracket(const Diagram& d, const Coloring& mu, int n, const EvalOptions& opt = {}, EvalStats* stats = nullptr);
LPoly k_invariant(const Diagram& d, const Coloring& mu, int n, const EvalOptions& opt = {}, EvalStats* stats = nullptr);
LPoly homfly_pn(const Diagram& d, int n, const EvalOptions& opt = {}, EvalStats* stats = nullptr);

// Recursion on crossing switches toward a descending diagram, unknot = qint(n).
LPoly skein_oracle_pn(const Diagram& d, int n);

// Closed web evaluation with the chosen engine.
LPoly eval_closed_web(const SliceWeb& w, int n, const EvalOptions& opt = {}, EvalStats* stats = nullptr);

}  // namespace webskein
