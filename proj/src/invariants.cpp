#include "webskein/invariants.hpp"

#include <map>

#include "webskein/cache.hpp"
#include "webskein/compile.hpp"
#include "webskein/oracle.hpp"

namespace webskein {

Engine engine_from_name(const std::string& s) {
    if (s == "rewrite") return Engine::Rewrite;
    if (s == "oracle") return Engine::Oracle;
    if (s == "both") return Engine::Both;
    throw Error("unknown engine " + s);
}

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::Rewrite: return "rewrite";
        case Engine::Oracle: return "oracle";
        case Engine::Both: return "both";
    }
    return "?";
}

LPoly curl_factor(int i, int n, int sign) { return vpow(sign * i * (n - i + 1)); }

namespace {

// Rewrite engine on an already compiled diagram: expand, then reduce term by term.
LPoly rewrite_sliced(const SliceWeb& w, int n, const EvalOptions& opt, EvalStats* stats) {
    WebSum sum = expand_crossings(w, n);
    Reducer r(n);
    LPoly total;
    for (auto& t : sum.terms()) {
        if (stats) stats->terms++;
        PlanarWeb p = planar_from_slices(t.web, n);
        std::string key;
        if (opt.cache) {
            key = web_code(p);
            if (auto hit = opt.cache->get(key, n)) {
                if (stats) stats->cache_hits++;
                total += t.coeff * *hit;
                continue;
            }
        }
        ReduceResult res = r.reduce(p);
        LPoly val;
        if (res.stuck) {
            if (stats) stats->stuck++;
            if (!opt.fallback) throw Irreducible(res.residual);
            val = eval_web(t.web, n);
        } else {
            val = res.value;
        }
        if (opt.cache) opt.cache->put(key, n, val);
        total += t.coeff * val;
    }
    return total;
}

// Removes every curl, returning the accumulated factor (the Curl relation).
LPoly strip_curls(Diagram& d, Coloring& mu, int n, EvalStats* stats) {
    LPoly f(1);
    for (;;) {
        auto sites = enumerate_sites(d, Move::R1Remove);
        if (sites.empty()) return f;
        const Crossing& c = d.crossings()[size_t(sites[0].crossing)];
        int color = mu[size_t(d.component_of(c.over_in))];
        f *= curl_factor(color, n, c.sign);
        std::vector<int> origin;
        Diagram e = apply_reidemeister(d, Move::R1Remove, sites[0], &origin);
        mu = transport_coloring(d, mu, e, origin);
        d = std::move(e);
        if (stats) stats->curls++;
    }
}

}  // namespace

LPoly eval_closed_web(const SliceWeb& w, int n, const EvalOptions& opt, EvalStats* stats) {
    if (has_crossings(w)) throw Error("web has crossings");
    LPoly rw, orc;
    if (opt.engine != Engine::Oracle) rw = rewrite_sliced(w, n, opt, stats);
    if (opt.engine != Engine::Rewrite) orc = eval_web(w, n);
    if (opt.engine == Engine::Both && rw != orc) throw Error("engine mismatch: rewrite and oracle disagree");
    return opt.engine == Engine::Oracle ? orc : rw;
}

LPoly bracket(const Diagram& d, const Coloring& mu, int n, const EvalOptions& opt, EvalStats* stats) {
    check_coloring(d, mu, n);
    LPoly rw, orc;
    if (opt.engine != Engine::Oracle) {
        Diagram e = d;
        Coloring m = mu;
        LPoly f = strip_curls(e, m, n, stats);
        rw = f * rewrite_sliced(compile(e, m, n), n, opt, stats);
    }
    if (opt.engine != Engine::Rewrite) orc = eval_sliced(compile(d, mu, n), n);
    if (opt.engine == Engine::Both && rw != orc) throw Error("engine mismatch: rewrite and oracle disagree");
    return opt.engine == Engine::Oracle ? orc : rw;
}

LPoly k_invariant(const Diagram& d, const Coloring& mu, int n, const EvalOptions& opt, EvalStats* stats) {
    LPoly b = bracket(d, mu, n, opt, stats);
    int e = 0;
    for (int i = 1; i <= std::max(1, n - 1); ++i) e -= colored_writhe(d, mu, i) * i * (n - i + 1);
    return b.shifted(e);
}

LPoly homfly_pn(const Diagram& d, int n, const EvalOptions& opt, EvalStats* stats) {
    if (n < 1) throw Error("n must be at least 1");
    return k_invariant(d, uniform_coloring(d, 1), n, opt, stats);
}

namespace {

struct SkeinOracle {
    int n;
    std::map<std::string, LPoly> memo;

    static std::string key(const Diagram& d) {
        std::string k = std::to_string(d.num_arcs()) + ":";
        for (auto& c : d.crossings())
            k += std::to_string(c.sign) + "," + std::to_string(c.over_in) + "," + std::to_string(c.over_out) + "," +
                 std::to_string(c.under_in) + "," + std::to_string(c.under_out) + ";";
        return k;
    }

    // first crossing met as an under-pass before it is met as an over-pass
    int first_bad(const Diagram& d) const {
        std::vector<char> seen(size_t(d.num_crossings()), 0);
        for (auto& comp : d.components())
            for (int a : comp) {
                int c = d.head_crossing(a);
                if (c < 0 || seen[size_t(c)]) continue;
                seen[size_t(c)] = 1;
                if (!d.head_is_over(a)) return c;
            }
        return -1;
    }

    LPoly eval(const Diagram& d) {
        std::string k = key(d);
        if (auto it = memo.find(k); it != memo.end()) return it->second;
        LPoly r;
        int c = first_bad(d);
        if (c < 0) {
            r = qint(n).pow(unsigned(d.num_components()));
        } else {
            int sign = d.crossings()[size_t(c)].sign;
            LPoly other = eval(switch_crossing(d, c));
            LPoly zero = eval(smooth_crossing(d, c));
            LPoly z = vpow(1) - vpow(-1);
            // v^n P(L+) - v^-n P(L-) = (v - v^-1) P(L0)
            if (sign > 0)
                r = other.shifted(-2 * n) + (z * zero).shifted(-n);
            else
                r = other.shifted(2 * n) - (z * zero).shifted(n);
        }
        memo.emplace(k, r);
        return r;
    }
};

}  // namespace

LPoly skein_oracle_pn(const Diagram& d, int n) {
    if (n < 1) throw Error("n must be at least 1");
    SkeinOracle o{n, {}};
    return o.eval(d);
}

}  // namespace webskein
