#include <doctest.h>

#include "corpus.hpp"
#include "webskein/diagram.hpp"

using namespace webskein;

TEST_CASE("parse_pd examples") {
    Diagram e = parse_pd("");
    CHECK(e.num_crossings() == 0);
    CHECK(e.num_components() == 0);

    Diagram t = parse_pd("X[4,2,5,1], X[2,6,3,5], X[6,4,1,3]");
    CHECK(t.num_crossings() == 3);
    CHECK(t.num_components() == 1);
    CHECK(std::abs(writhe(t)) == 3);

    Diagram c = parse_pd("X[1,1,2,2]");
    CHECK(c.num_crossings() == 1);
    CHECK(c.num_components() == 1);
    CHECK(std::abs(writhe(c)) == 1);

    CHECK_THROWS_WITH(parse_pd("X[1,2,3,4]"), "arc used ≠ 2 times");
    CHECK_THROWS_AS(parse_pd("X[1,2"), Error);
}

TEST_CASE("from_braid examples") {
    Diagram u = from_braid({}, 2);
    CHECK(u.num_components() == 2);
    CHECK(u.num_crossings() == 0);
    Diagram t = from_braid({1, 1, 1}, 2);
    CHECK(t.num_components() == 1);
    CHECK(writhe(t) == 3);
    Diagram k = from_braid({1}, 2);
    CHECK(k.num_components() == 1);
    CHECK(k.num_crossings() == 1);
    CHECK_THROWS_WITH(from_braid({3}, 3), "generator index out of range");
    CHECK(parse_braid_word("1,-2, 1") == std::vector<int>{1, -2, 1});
    CHECK(parse_braid_word("").empty());
}

TEST_CASE("trefoil from PD and from braid are isomorphic up to mirror") {
    Diagram pd = parse_pd("X[4,2,5,1], X[2,6,3,5], X[6,4,1,3]");
    Diagram br = from_braid({1, 1, 1}, 2);
    CHECK((isomorphic(pd, br) || isomorphic(mirror(pd), br)));
}

TEST_CASE("colored writhe") {
    Diagram t = from_braid({1, 1, 1}, 2);
    CHECK(colored_writhe(t, {1}, 1) == 3);
    Diagram hopf = from_braid({1, 1}, 2);
    CHECK(colored_writhe(hopf, {1, 2}, 1) == 0);
    CHECK(colored_writhe(hopf, {1, 2}, 2) == 0);
    CHECK(colored_writhe(hopf, {2, 2}, 2) == 2);
    Diagram curl = parse_pd("X[1,1,2,2]");
    CHECK(colored_writhe(curl, {2}, 2) == writhe(curl));
    CHECK_THROWS_WITH(colored_writhe(hopf, {1}, 1), "coloring not total");
}

TEST_CASE("JSON round trip") {
    for (auto& [name, d] : corpus::diagrams()) {
        CAPTURE(name);
        Coloring mu;
        for (int c = 0; c < d.num_components(); ++c) mu.push_back(1 + c % 2);
        auto j = diagram_to_json(d, &mu);
        Coloring back;
        Diagram d2 = parse_pd(j.dump(), &back);
        CHECK(d2 == d);
        CHECK(back == mu);
        CHECK(diagram_to_json(d2, &back) == j);
    }
}

TEST_CASE("PD text round trip") {
    for (auto& [name, d] : corpus::diagrams()) {
        bool loops = false;
        for (int a = 0; a < d.num_arcs(); ++a) loops = loops || d.is_free_loop(a);
        if (loops || d.num_crossings() < 3) continue;
        CAPTURE(name);
        CHECK(isomorphic(parse_pd(to_pd(d)), d));
    }
}

TEST_CASE("mirror is an involution negating colored writhes") {
    CHECK(mirror(Diagram()) == Diagram());
    CHECK(writhe(mirror(from_braid({1, 1, 1}, 2))) == -3);
    for (auto& [name, d] : corpus::diagrams()) {
        CAPTURE(name);
        CHECK(mirror(mirror(d)) == d);
        Coloring mu;
        for (int c = 0; c < d.num_components(); ++c) mu.push_back(1 + c % 2);
        for (int i = 1; i <= 2; ++i) CHECK(colored_writhe(mirror(d), mu, i) == -colored_writhe(d, mu, i));
    }
}

TEST_CASE("periodic covers") {
    Tangle s1 = parse_tangle("sigma1", 2, {1, 1});
    auto c1 = periodic_cover(s1, 1);
    CHECK(c1.diagram.num_components() == 1);
    CHECK(c1.diagram.num_crossings() == 1);
    auto c2 = periodic_cover(s1, 2);
    CHECK(c2.diagram.num_components() == 2);
    CHECK(c2.diagram.num_crossings() == 2);
    auto c3 = periodic_cover(s1, 3);
    CHECK(c3.diagram.num_crossings() == 3);
    CHECK(isomorphic(c3.diagram, from_braid({1, 1, 1}, 2)));

    // colors swapped by the permutation: not self-composable
    CHECK_THROWS_WITH(periodic_cover(parse_tangle("sigma1", 2, {1, 2}), 2), "tangle not self-composable");

    for (auto text : {"sigma1", "sigma1 sigma1", "sigma1 sigma2", "1,-2", "1,2,-1"}) {
        int strands = std::string(text).find('2') != std::string::npos ? 3 : 2;
        Tangle t = parse_tangle(text, strands, std::vector<int>(size_t(strands), 1));
        for (int p : {2, 3, 5}) {
            CAPTURE(text);
            CAPTURE(p);
            auto L = periodic_cover(t, p);
            CHECK(L.diagram.num_crossings() == p * closure(t).diagram.num_crossings());
            auto rot = cover_rotation(t, p);
            CHECK(is_automorphism(L.diagram, rot));
            // rotation of order p acting freely on crossings
            int m = L.diagram.num_crossings();
            std::vector<int> cur(static_cast<size_t>(m));
            for (int x = 0; x < m; ++x) cur[size_t(x)] = x;
            for (int k = 1; k <= p; ++k) {
                for (auto& x : cur) x = rot.crossing_perm[size_t(x)];
                int fixed = 0;
                for (int x = 0; x < m; ++x) fixed += cur[size_t(x)] == x;
                CHECK(fixed == (k == p ? m : 0));
            }
            // coloring is constant on rotation orbits
            for (int a = 0; a < L.diagram.num_arcs(); ++a)
                CHECK(L.coloring[size_t(L.diagram.component_of(a))] ==
                      L.coloring[size_t(L.diagram.component_of(rot.arc_perm[size_t(a)]))]);
        }
    }
}

TEST_CASE("Reidemeister moves") {
    int instances = 0;
    for (auto& [name, d] : corpus::diagrams()) {
        CAPTURE(name);
        Coloring mu;
        for (int c = 0; c < d.num_components(); ++c) mu.push_back(1 + c % 2);
        for (Move m : {Move::R1Plus, Move::R1Minus, Move::R2, Move::R3}) {
            for (auto& s : enumerate_sites(d, m)) {
                CAPTURE(s.describe());
                std::vector<int> origin;
                Diagram r = apply_reidemeister(d, m, s, &origin);
                Coloring mu2 = transport_coloring(d, mu, r, origin);
                ++instances;
                CHECK(r.num_components() == d.num_components());
                CHECK(is_planar(r));
                int changed = 0;
                for (int i = 1; i <= 2; ++i) {
                    int delta = colored_writhe(r, mu2, i) - colored_writhe(d, mu, i);
                    if (m == Move::R1Plus || m == Move::R1Minus) {
                        CHECK(std::abs(delta) <= 1);
                        changed += std::abs(delta);
                    } else {
                        CHECK(delta == 0);
                    }
                }
                if (m == Move::R1Plus || m == Move::R1Minus) {
                    CHECK(changed == 1);
                    CHECK(r.num_crossings() == d.num_crossings() + 1);
                }
                if (m == Move::R3) CHECK(r.num_crossings() == d.num_crossings());
                if (m == Move::R2) {
                    CHECK(r.num_crossings() == d.num_crossings() + 2);
                    bool undone = false;
                    for (auto& back : enumerate_sites(r, Move::R2Remove))
                        undone = undone || isomorphic(apply_reidemeister(r, Move::R2Remove, back), d);
                    CHECK(undone);
                }
            }
        }
    }
    CHECK(instances >= 200);
    CHECK(!enumerate_sites(from_braid({1, 2, 1}, 3), Move::R3).empty());
}

TEST_CASE("illegal site") {
    Diagram t = from_braid({1, 1, 1}, 2);
    Site bogus;
    bogus.arc = 999;
    CHECK_THROWS_WITH(apply_reidemeister(t, Move::R1Plus, bogus), "move not applicable at site");
}

TEST_CASE("smoothing and switching") {
    Diagram t = from_braid({1, 1, 1}, 2);
    CHECK(smooth_crossing(t, 0).num_crossings() == 2);
    CHECK(smooth_crossing(t, 0).num_components() == 2);
    CHECK(writhe(switch_crossing(t, 0)) == 1);
    CHECK(disjoint_union(t, t).num_components() == 2);
}
