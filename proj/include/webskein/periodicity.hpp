#pragma once

#include <json.hpp>

#include "webskein/diagram.hpp"
#include "webskein/invariants.hpp"
#include "webskein/modpoly.hpp"

namespace webskein {

enum class Invariant { K, P };

struct Verdict {
    bool obstructed = false;
    ModPoly residue;  // zero unless obstructed
    LPoly delta;
    int n = 0;
    long p = 0;
    IdealSpec ideal;
    std::string test;  // "factor" or "mirror"
};

// K_n(L) - K_n(Lbar)^p tested in I_n. Throws Error("unsupported period (composite)").
Verdict check_factor_congruence(const Diagram& L, const Coloring& mu, const Diagram& Lbar, const Coloring& mubar,
                                long p, int n, const EvalOptions& opt = {}, Invariant inv = Invariant::K);
// K_n(L) - K_n(mirror L) reduced mod (p, q^p - 1).
Verdict check_mirror_congruence(const Diagram& L, const Coloring& mu, long p, int n, const EvalOptions& opt = {});

nlohmann::json verdict_to_json(const Verdict& v);

}  // namespace webskein
