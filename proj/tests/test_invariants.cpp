#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "corpus.hpp"
#include "webskein/cache.hpp"
#include "webskein/invariants.hpp"

using namespace webskein;

namespace {

EvalOptions engine(Engine e) {
    EvalOptions o;
    o.engine = e;
    return o;
}

Coloring mixed(const Diagram& d, int n, int offset = 0) {
    Coloring mu;
    for (int c = 0; c < d.num_components(); ++c) mu.push_back(1 + (c + offset) % std::min(2, n - 1));
    return mu;
}

std::string temp_path(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("webskein_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove(p);
    return p.string();
}

}  // namespace

TEST_CASE("bracket examples") {
    for (int n = 2; n <= 5; ++n)
        for (int i = 1; i < n; ++i) {
            CHECK(bracket(from_braid({}, 1), {i}, n) == qbinom(n, i));
            Diagram curl = from_braid({1}, 2);
            CHECK(bracket(curl, {i}, n) == vpow(i * (n - i + 1)) * qbinom(n, i));
            CHECK(bracket(from_braid({-1}, 2), {i}, n) == vpow(-i * (n - i + 1)) * qbinom(n, i));
            CHECK(k_invariant(curl, {i}, n) == qbinom(n, i));
            CHECK(k_invariant(parse_pd("X[1,1,2,2]"), {i}, n) == qbinom(n, i));
            CHECK(curl_factor(i, n, 1) == vpow(i * (n - i + 1)));
        }
    CHECK(bracket(Diagram(), {}, 3) == LPoly(1));
    CHECK(k_invariant(Diagram(), {}, 3) == LPoly(1));
}

TEST_CASE("P_n examples") {
    for (int n = 1; n <= 5; ++n) {
        CHECK(homfly_pn(from_braid({}, 1), n) == qint(n));
        CHECK(homfly_pn(from_braid({}, 3), n) == qint(n).pow(3));
        CHECK(skein_oracle_pn(from_braid({}, 3), n) == qint(n).pow(3));
        CHECK(skein_oracle_pn(Diagram(), n) == LPoly(1));
    }
    // Hopf link by hand: q P(H) - q^-1 P(unlink) = (v - v^-1) P(unknot)
    LPoly two = qint(2);
    LPoly hopf = vpow(-2) * (vpow(-2) * two * two + (vpow(1) - vpow(-1)) * two);
    CHECK(hopf == LPoly(1) + vpow(-2) + vpow(-4) + vpow(-6));
    CHECK(skein_oracle_pn(from_braid({1, 1}, 2), 2) == hopf);
    CHECK(homfly_pn(from_braid({1, 1}, 2), 2) == hopf);
    // trefoil: switching one crossing leaves the unknot, smoothing leaves the Hopf link
    LPoly tref = vpow(-2) * (vpow(-2) * two + (vpow(1) - vpow(-1)) * hopf);
    CHECK(homfly_pn(from_braid({1, 1, 1}, 2), 2) == tref);
    CHECK(k_invariant(from_braid({1, 1, 1}, 2), {1}, 2) == skein_oracle_pn(from_braid({1, 1, 1}, 2), 2));
}

TEST_CASE("P_1 is 1 and P_n agrees with the skein recursion") {
    for (auto& [name, d] : corpus::diagrams()) {
        CAPTURE(name);
        CHECK(homfly_pn(d, 1) == LPoly(1));
        for (int n = 2; n <= 4; ++n) CHECK(homfly_pn(d, n) == skein_oracle_pn(d, n));
    }
    std::mt19937 rng(9);
    for (int t = 0; t < 30; ++t) {
        Diagram d = corpus::random_braid(rng, 4, 8);
        for (int n = 1; n <= 4; ++n) CHECK(homfly_pn(d, n) == skein_oracle_pn(d, n));
    }
}

TEST_CASE("skein relation at every crossing") {
    for (int n = 2; n <= 4; ++n)
        for (auto& [name, d] : corpus::diagrams()) {
            CAPTURE(name);
            for (int c = 0; c < d.num_crossings(); ++c) {
                Diagram plus = d.crossings()[size_t(c)].sign > 0 ? d : switch_crossing(d, c);
                Diagram minus = d.crossings()[size_t(c)].sign > 0 ? switch_crossing(d, c) : d;
                Diagram zero = smooth_crossing(d, c);
                CHECK(vpow(n) * homfly_pn(plus, n) - vpow(-n) * homfly_pn(minus, n) ==
                      (vpow(1) - vpow(-1)) * homfly_pn(zero, n));
            }
        }
}

namespace {

int check_moves(const Diagram& d, const Coloring& mu, int n, const EvalOptions& opt, size_t per_move) {
    int moves = 0;
    LPoly k = k_invariant(d, mu, n, opt);
    LPoly b = bracket(d, mu, n, opt);
    for (Move m : {Move::R1Plus, Move::R1Minus, Move::R2, Move::R3}) {
        auto sites = enumerate_sites(d, m);
        size_t stride = std::max<size_t>(1, sites.size() / per_move);
        for (size_t x = 0; x < sites.size(); x += stride) {
            auto& s = sites[x];
            CAPTURE(s.describe());
            std::vector<int> origin;
            Diagram r = apply_reidemeister(d, m, s, &origin);
            Coloring mu2 = transport_coloring(d, mu, r, origin);
            ++moves;
            CHECK(k_invariant(r, mu2, n, opt) == k);
            if (m == Move::R2 || m == Move::R3) {
                CHECK(bracket(r, mu2, n, opt) == b);
            } else {
                int i = mu[size_t(d.component_of(s.arc))];
                CHECK(bracket(r, mu2, n, opt) == curl_factor(i, n, m == Move::R1Plus ? 1 : -1) * b);
            }
        }
    }
    return moves;
}

}  // namespace

TEST_CASE("Reidemeister invariance") {
    int moves = 0;
    for (int n = 2; n <= 3; ++n)
        for (auto& [name, d] : corpus::diagrams()) {
            CAPTURE(name);
            CAPTURE(n);
            for (int off = 0; off < (n > 2 ? 2 : 1); ++off) moves += check_moves(d, mixed(d, n, off), n, engine(Engine::Oracle), 12);
        }
    CHECK(moves >= 200);
}

TEST_CASE("Reidemeister invariance through both engines") {
    for (int n = 2; n <= 3; ++n)
        for (auto& [name, d] : corpus::diagrams()) {
            if (d.num_crossings() > 3) continue;
            CAPTURE(name);
            check_moves(d, mixed(d, n), n, engine(Engine::Both), 4);
        }
}

TEST_CASE("mirror conjugates") {
    for (int n = 2; n <= 3; ++n)
        for (auto& [name, d] : corpus::diagrams()) {
            CAPTURE(name);
            for (int off = 0; off < 2; ++off) {
                Coloring mu = mixed(d, n, off);
                auto o = engine(Engine::Oracle);
                CHECK(k_invariant(mirror(d), mu, n, o) == qconj(k_invariant(d, mu, n, o)));
            }
        }
}

TEST_CASE("distant union multiplies") {
    auto c = corpus::small_diagrams();
    for (int n = 2; n <= 3; ++n)
        for (size_t a = 0; a < c.size(); a += 3)
            for (size_t b = 1; b < c.size(); b += 4) {
                Diagram u = disjoint_union(c[a].d, c[b].d);
                Coloring ma = mixed(c[a].d, n), mb = mixed(c[b].d, n, 1), mu = ma;
                mu.insert(mu.end(), mb.begin(), mb.end());
                CHECK(k_invariant(u, mu, n) == k_invariant(c[a].d, ma, n) * k_invariant(c[b].d, mb, n));
            }
}

TEST_CASE("engines agree") {
    for (int n = 2; n <= 4; ++n)
        for (auto& [name, d] : corpus::diagrams()) {
            CAPTURE(name);
            Coloring mu = mixed(d, n);
            CHECK(k_invariant(d, mu, n, engine(Engine::Rewrite)) == k_invariant(d, mu, n, engine(Engine::Oracle)));
        }
    CHECK(engine_from_name("rewrite") == Engine::Rewrite);
    CHECK(engine_name(Engine::Both) == "both");
    CHECK_THROWS_AS(engine_from_name("fast"), Error);
}

TEST_CASE("rewrite without fallback reports the irreducible web") {
    EvalOptions o = engine(Engine::Rewrite);
    o.fallback = false;
    Diagram t = from_braid({1, 1, 1}, 2);
    bool thrown = false;
    try {
        k_invariant(t, {3}, 5, o);
    } catch (const Irreducible& e) {
        thrown = true;
        CHECK(!validate(e.residual, 5));
        CHECK(!e.residual.slices.empty());
    }
    CHECK(thrown);
    EvalStats st;
    o.fallback = true;
    CHECK(k_invariant(t, {3}, 5, o, &st) == k_invariant(t, {3}, 5, engine(Engine::Oracle)));
    CHECK(st.stuck > 0);
}

TEST_CASE("persistent cache") {
    std::string path = temp_path("cache");
    Diagram d = from_braid({1, -2, 1, -2}, 3);
    LPoly ref = k_invariant(d, {1}, 3);
    {
        Cache c(path);
        EvalOptions o;
        o.cache = &c;
        EvalStats st;
        CHECK(k_invariant(d, {1}, 3, o, &st) == ref);
        CHECK(st.cache_hits < st.terms);
        CHECK(c.size() > 0);
    }
    {
        Cache c(path);
        CHECK(c.rejected_lines() == 0);
        EvalOptions o;
        o.cache = &c;
        EvalStats st;
        CHECK(k_invariant(d, {1}, 3, o, &st) == ref);
        CHECK(st.cache_hits == st.terms);
        CHECK(c.get("no such web", 3) == std::nullopt);
    }
    // tamper with one value: the line is rejected and recomputed
    {
        std::ifstream in(path);
        std::string first, rest, line;
        std::getline(in, first);
        while (std::getline(in, line)) rest += line + "\n";
        auto j = nlohmann::json::parse(first);
        j["value"] = LPoly(12345).to_json();
        std::ofstream out(path);
        out << j.dump() << "\n" << rest << "this is not json\n";
    }
    {
        Cache c(path);
        CHECK(c.rejected_lines() == 2);
        EvalOptions o;
        o.cache = &c;
        CHECK(k_invariant(d, {1}, 3, o) == ref);
    }
    std::filesystem::remove(path);
}
