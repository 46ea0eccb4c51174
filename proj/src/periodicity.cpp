#include "webskein/periodicity.hpp"

namespace webskein {

Verdict check_factor_congruence(const Diagram& L, const Coloring& mu, const Diagram& Lbar, const Coloring& mubar,
                                long p, int n, const EvalOptions& opt, Invariant inv) {
    if (p < 2) throw Error("period must be at least 2");
    if (!is_prime(p)) throw Error("unsupported period (composite)");
    if (n < 1) throw Error("n out of range (n >= 1 required)");
    auto value = [&](const Diagram& d, const Coloring& c) {
        if (inv == Invariant::P) return homfly_pn(d, n, opt);
        return k_invariant(d, c, n, opt);
    };
    Verdict v;
    v.test = "factor";
    v.n = n;
    v.p = p;
    v.ideal = IdealSpec::In(n, p);
    v.delta = value(L, mu) - value(Lbar, mubar).pow(unsigned(p));
    v.residue = residue(v.delta, v.ideal);
    v.obstructed = !v.residue.is_zero();
    return v;
}

Verdict check_mirror_congruence(const Diagram& L, const Coloring& mu, long p, int n, const EvalOptions& opt) {
    if (p < 2) throw Error("period must be at least 2");
    Verdict v;
    v.test = "mirror";
    v.n = n;
    v.p = p;
    v.ideal = IdealSpec::PQp(p);
    v.delta = k_invariant(L, mu, n, opt) - k_invariant(mirror(L), mu, n, opt);
    v.residue = reduce_mod_pqp(v.delta, p);
    v.obstructed = !v.residue.is_zero();
    return v;
}

nlohmann::json verdict_to_json(const Verdict& v) {
    nlohmann::json j;
    j["status"] = v.obstructed ? "obstructed" : "consistent";
    j["test"] = v.test;
    j["p"] = v.p;
    j["n"] = v.n;
    j["ideal"] = v.ideal.describe();
    j["residue"] = v.residue.to_json();
    return j;
}

}  // namespace webskein
