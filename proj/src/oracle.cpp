#include "webskein/oracle.hpp"

#include <bit>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace webskein {

int rho(uint32_t a, int n) {
    int r = 0;
    for (int b = 0; b < n; ++b)
        if (a >> b & 1u) r += n - 1 - 2 * b;
    return r;
}

int pi_count(uint32_t a, uint32_t b) {
    int c = 0;
    for (uint32_t x = a; x; x &= x - 1) {
        int i = std::countr_zero(x);
        c += std::popcount(b & ((1u << i) - 1));
    }
    return c;
}

namespace {

// Polynomials below are in u = v^{1/2}: every exponent is doubled.
LPoly doubled(const LPoly& f) {
    std::map<int, mpz_class> t;
    for (auto& [e, c] : f.terms()) t[2 * e] = c;
    return LPoly::from_terms(t);
}

LPoly halved(const LPoly& f) {
    std::map<int, mpz_class> t;
    for (auto& [e, c] : f.terms()) {
        if (e % 2 != 0) throw Error("internal: odd total turning weight");
        t[e / 2] = c;
    }
    return LPoly::from_terms(t);
}

const std::vector<uint32_t>& subsets_of_size(int n, int c) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<uint32_t>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& v = cache[{n, c}];
    if (v.empty() && c >= 0 && c <= n)
        for (uint32_t m = 0; m < (1u << n); ++m)
            if (std::popcount(m) == c) v.push_back(m);
    return v;
}

using Key = std::string;
using Frontier = std::unordered_map<Key, LPoly>;

uint32_t get(const Key& k, size_t i) { return uint32_t(uint8_t(k[2 * i])) | uint32_t(uint8_t(k[2 * i + 1])) << 8; }

void put(Key& k, uint32_t m) {
    k.push_back(char(m & 0xff));
    k.push_back(char(m >> 8 & 0xff));
}

void add_to(Frontier& f, Key&& k, const LPoly& val) {
    auto it = f.find(k);
    if (it == f.end())
        f.emplace(std::move(k), val);
    else {
        it->second += val;
        if (it->second.is_zero()) f.erase(it);
    }
}

struct Local {
    uint32_t a, b;
    LPoly w;
};

const std::vector<Local>& crossing_matrix(int j, int i, int sign, uint32_t A, uint32_t B, int n);

// One slice applied to every frontier state. `pre` strands at the front of each key are
// carried along untouched (bottom labels of a tensor).
Frontier step(const Frontier& in, const Word& word, const Slice& s, int n, size_t pre) {
    Frontier out;
    out.reserve(in.size() * 2);
    size_t p = pre + size_t(s.pos);
    for (auto& [key, val] : in) {
        auto prefix = [&](Key& k) { k.assign(key, 0, 2 * p); };
        auto suffix = [&](Key& k, size_t from) { k.append(key, 2 * from, Key::npos); };
        switch (s.kind) {
            case SliceKind::Cup: {
                int eps = s.ccw ? 1 : -1;
                for (uint32_t m : subsets_of_size(n, s.a)) {
                    Key k;
                    prefix(k);
                    put(k, m);
                    put(k, m);
                    suffix(k, p);
                    add_to(out, std::move(k), val.shifted(eps * rho(m, n)));
                }
                break;
            }
            case SliceKind::Cap: {
                uint32_t l = get(key, p), r = get(key, p + 1);
                if (l != r) break;
                int eps = word[s.pos].up ? -1 : 1;
                Key k;
                prefix(k);
                suffix(k, p + 2);
                add_to(out, std::move(k), val.shifted(eps * rho(l, n)));
                break;
            }
            case SliceKind::Merge: {
                uint32_t l = get(key, p), r = get(key, p + 1);
                if (l & r) break;
                int e = 2 * pi_count(l, r) * (word[s.pos].up ? 1 : -1);
                Key k;
                prefix(k);
                put(k, l | r);
                suffix(k, p + 2);
                add_to(out, std::move(k), val.shifted(e));
                break;
            }
            case SliceKind::Split: {
                uint32_t c = get(key, p);
                bool up = word[s.pos].up;
                for (uint32_t l : subsets_of_size(n, s.a)) {
                    if ((l & c) != l) continue;
                    uint32_t r = c & ~l;
                    int e = 2 * pi_count(r, l) * (up ? -1 : 1);
                    Key k;
                    prefix(k);
                    put(k, l);
                    put(k, r);
                    suffix(k, p + 1);
                    add_to(out, std::move(k), val.shifted(e));
                }
                break;
            }
            case SliceKind::Crossing: {
                int j = word[s.pos].color, i = word[s.pos + 1].color;
                for (auto& loc : crossing_matrix(j, i, s.sign, get(key, p), get(key, p + 1), n)) {
                    Key k;
                    prefix(k);
                    put(k, loc.a);
                    put(k, loc.b);
                    suffix(k, p + 2);
                    add_to(out, std::move(k), val * loc.w);
                }
                break;
            }
        }
    }
    return out;
}

const std::vector<Local>& crossing_matrix(int j, int i, int sign, uint32_t A, uint32_t B, int n) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, uint32_t, uint32_t, int>, std::vector<Local>> cache;
    auto key = std::make_tuple(j, i, sign, A, B, n);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    Frontier total;
    for (auto& term : crossing_expansion(j, i, sign, n)) {
        Frontier f;
        Key k0;
        put(k0, A);
        put(k0, B);
        f.emplace(k0, doubled(term.coeff));
        Word w{{j, true}, {i, true}};
        for (auto& s : term.slices) {
            f = step(f, w, s, n, 0);
            apply_slice(w, s, n);
        }
        for (auto& [k, v] : f) add_to(total, Key(k), v);
    }
    std::vector<Local> out;
    for (auto& [k, v] : total) out.push_back({get(k, 0), get(k, 1), v});
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, std::move(out)).first->second;
}

Frontier run(const SliceWeb& w, int n, Frontier f, size_t pre) {
    Word word = w.bottom;
    for (auto& s : w.slices) {
        f = step(f, word, s, n, pre);
        if (auto e = apply_slice(word, s, n)) throw Error(*e);
    }
    return f;
}

void check(const SliceWeb& w, int n, bool allow_crossings) {
    if (n < 1 || n > 16) throw Error("n out of supported range 1..16");
    if (auto e = validate(w, n, false, allow_crossings)) throw Error(*e);
    if (!w.bottom.empty() || !top_word(w, n).empty()) throw Error("oracle requires closed web");
}

}  // namespace

LPoly eval_web(const SliceWeb& w, int n) {
    check(w, n, false);
    Frontier f;
    f.emplace(Key(), LPoly(1));
    f = run(w, n, std::move(f), 0);
    auto it = f.find(Key());
    return it == f.end() ? LPoly() : halved(it->second);
}

LPoly eval_sliced(const SliceWeb& w, int n) {
    check(w, n, true);
    Frontier f;
    f.emplace(Key(), LPoly(1));
    f = run(w, n, std::move(f), 0);
    auto it = f.find(Key());
    return it == f.end() ? LPoly() : halved(it->second);
}

Tensor eval_tensor(const SliceWeb& w, int n) {
    if (auto e = validate(w, n, false, true)) throw Error(*e);
    size_t wb = w.bottom.size();
    // every labelling of the bottom, then the same labels as the running word
    Frontier f;
    std::vector<Key> keys{Key()};
    for (auto& st : w.bottom) {
        std::vector<Key> next;
        for (auto& k : keys)
            for (uint32_t m : subsets_of_size(n, st.color)) {
                Key x = k;
                put(x, m);
                next.push_back(x);
            }
        keys = std::move(next);
    }
    for (auto& k : keys) f.emplace(k + k, LPoly(1));
    f = run(w, n, std::move(f), wb);
    Tensor t;
    for (auto& [k, v] : f) {
        std::vector<uint32_t> bot, top;
        for (size_t i = 0; i < wb; ++i) bot.push_back(get(k, i));
        for (size_t i = wb; i < k.size() / 2; ++i) top.push_back(get(k, i));
        // open boundaries may carry half-integral turning; keep the doubled form then
        bool even = true;
        for (auto& [e, c] : v.terms()) even = even && e % 2 == 0;
        t[{bot, top}] = even ? halved(v) : v;
    }
    return t;
}

std::vector<StateWeight> enumerate_states(const SliceWeb& w, int n) {
    check(w, n, false);
    struct Node {
        std::vector<uint32_t> edge_sets;
        std::vector<int> strand_edge;
        std::vector<uint32_t> strand_set;
        int exp2 = 0;
    };
    std::vector<StateWeight> out;
    std::vector<Word> words{w.bottom};
    for (auto& s : w.slices) {
        Word x = words.back();
        apply_slice(x, s, n);
        words.push_back(x);
    }
    // depth-first in slice order, subsets ascending
    auto rec = [&](auto& self, size_t idx, Node node) -> void {
        if (idx == w.slices.size()) {
            out.push_back({node.edge_sets, halved(LPoly::monomial(node.exp2))});
            return;
        }
        const Slice& s = w.slices[idx];
        const Word& word = words[idx];
        size_t p = size_t(s.pos);
        switch (s.kind) {
            case SliceKind::Cup:
                for (uint32_t m : subsets_of_size(n, s.a)) {
                    Node c = node;
                    int e = int(c.edge_sets.size());
                    c.edge_sets.push_back(m);
                    c.strand_edge.insert(c.strand_edge.begin() + long(p), {e, e});
                    c.strand_set.insert(c.strand_set.begin() + long(p), {m, m});
                    c.exp2 += (s.ccw ? 1 : -1) * rho(m, n);
                    self(self, idx + 1, std::move(c));
                }
                break;
            case SliceKind::Cap: {
                if (node.strand_set[p] != node.strand_set[p + 1]) return;
                Node c = node;
                c.exp2 += (word[p].up ? -1 : 1) * rho(c.strand_set[p], n);
                c.strand_edge.erase(c.strand_edge.begin() + long(p), c.strand_edge.begin() + long(p) + 2);
                c.strand_set.erase(c.strand_set.begin() + long(p), c.strand_set.begin() + long(p) + 2);
                self(self, idx + 1, std::move(c));
                break;
            }
            case SliceKind::Merge: {
                uint32_t l = node.strand_set[p], r = node.strand_set[p + 1];
                if (l & r) return;
                Node c = node;
                int e = int(c.edge_sets.size());
                c.edge_sets.push_back(l | r);
                c.exp2 += 2 * pi_count(l, r) * (word[p].up ? 1 : -1);
                c.strand_edge.erase(c.strand_edge.begin() + long(p) + 1);
                c.strand_set.erase(c.strand_set.begin() + long(p) + 1);
                c.strand_edge[p] = e;
                c.strand_set[p] = l | r;
                self(self, idx + 1, std::move(c));
                break;
            }
            case SliceKind::Split: {
                uint32_t all = node.strand_set[p];
                for (uint32_t l : subsets_of_size(n, s.a)) {
                    if ((l & all) != l) continue;
                    uint32_t r = all & ~l;
                    Node c = node;
                    int e = int(c.edge_sets.size());
                    c.edge_sets.push_back(l);
                    c.edge_sets.push_back(r);
                    c.exp2 += 2 * pi_count(r, l) * (word[p].up ? -1 : 1);
                    c.strand_edge[p] = e;
                    c.strand_set[p] = l;
                    c.strand_edge.insert(c.strand_edge.begin() + long(p) + 1, e + 1);
                    c.strand_set.insert(c.strand_set.begin() + long(p) + 1, r);
                    self(self, idx + 1, std::move(c));
                }
                break;
            }
            case SliceKind::Crossing: break;
        }
    };
    rec(rec, 0, Node{});
    return out;
}

}  // namespace webskein
