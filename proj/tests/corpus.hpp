#pragma once

#include <random>
#include <string>
#include <vector>

#include "webskein/diagram.hpp"

namespace corpus {

struct Entry {
    std::string name;
    webskein::Diagram d;
};

inline std::vector<int> repeat(const std::vector<int>& w, int times) {
    std::vector<int> out;
    for (int t = 0; t < times; ++t) out.insert(out.end(), w.begin(), w.end());
    return out;
}

// all diagrams have at most 10 crossings
inline std::vector<Entry> diagrams() {
    using webskein::from_braid;
    using webskein::parse_pd;
    std::vector<Entry> c;
    c.push_back({"unknot", from_braid({}, 1)});
    c.push_back({"unlink2", from_braid({}, 2)});
    for (int k = 1; k <= 7; ++k) c.push_back({"T(2," + std::to_string(k) + ")", from_braid(repeat({1}, k), 2)});
    for (int m = 1; m <= 5; ++m) c.push_back({"(s1 s2^-1)^" + std::to_string(m), from_braid(repeat({1, -2}, m), 3)});
    c.push_back({"figure-eight", from_braid({1, -2, 1, -2}, 3)});
    c.push_back({"s1 s2 s1", from_braid({1, 2, 1}, 3)});
    c.push_back({"T(3,3)", from_braid(repeat({1, 2}, 3), 3)});
    c.push_back({"T(3,4)", from_braid(repeat({1, 2}, 4), 3)});
    c.push_back({"5_2", from_braid({1, 1, 1, 2, -1, 2}, 3)});
    c.push_back({"3-chain", from_braid({1, 1, 2, 2}, 3)});
    c.push_back({"4-strand", from_braid({1, -2, 3, 1, -2, 3, 2}, 4)});
    c.push_back({"pd trefoil", parse_pd("X[4,2,5,1], X[2,6,3,5], X[6,4,1,3]")});
    c.push_back({"pd curl", parse_pd("X[1,1,2,2]")});
    return c;
}

// a smaller slice of the corpus for the slow (per-web oracle) checks
inline std::vector<Entry> small_diagrams() {
    std::vector<Entry> out;
    for (auto& e : diagrams())
        if (e.d.num_crossings() <= 6) out.push_back(e);
    return out;
}

inline webskein::Diagram random_braid(std::mt19937& rng, int max_strands, int max_len) {
    int s = 2 + int(rng() % unsigned(max_strands - 1));
    int len = 1 + int(rng() % unsigned(max_len));
    std::vector<int> w;
    for (int i = 0; i < len; ++i) {
        int g = 1 + int(rng() % unsigned(s - 1));
        w.push_back(rng() % 2 ? g : -g);
    }
    return webskein::from_braid(w, s);
}

}  // namespace corpus
