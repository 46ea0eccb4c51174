#include "webskein/diagram.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace webskein {

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(size_t(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::array<CrossingEnd, 4> ccw_ends(const Crossing& c) {
    if (c.sign > 0)
        return {CrossingEnd{c.over_in, true, true}, CrossingEnd{c.under_in, true, false},
                CrossingEnd{c.over_out, false, true}, CrossingEnd{c.under_out, false, false}};
    return {CrossingEnd{c.under_in, true, false}, CrossingEnd{c.over_in, true, true},
            CrossingEnd{c.under_out, false, false}, CrossingEnd{c.over_out, false, true}};
}

Diagram Diagram::make(std::vector<Crossing> crossings, int num_arcs, std::vector<int>* old_to_new) {
    if (num_arcs < 0) throw Error("negative arc count");
    std::vector<int> ins(size_t(num_arcs), 0), outs(size_t(num_arcs), 0);
    std::vector<int> head(size_t(num_arcs), -1), tail(size_t(num_arcs), -1);
    std::vector<char> hover(size_t(num_arcs), 0), tover(size_t(num_arcs), 0);
    for (size_t ci = 0; ci < crossings.size(); ++ci) {
        const Crossing& c = crossings[ci];
        if (c.sign != 1 && c.sign != -1) throw Error("crossing sign must be +1 or -1");
        for (int a : {c.over_in, c.over_out, c.under_in, c.under_out})
            if (a < 0 || a >= num_arcs) throw Error("arc id out of range");
        ins[c.over_in]++;
        ins[c.under_in]++;
        outs[c.over_out]++;
        outs[c.under_out]++;
        head[c.over_in] = int(ci);
        hover[c.over_in] = 1;
        head[c.under_in] = int(ci);
        tail[c.over_out] = int(ci);
        tover[c.over_out] = 1;
        tail[c.under_out] = int(ci);
    }
    for (int a = 0; a < num_arcs; ++a)
        if (!((ins[a] == 1 && outs[a] == 1) || (ins[a] == 0 && outs[a] == 0))) throw Error("arc used ≠ 2 times");

    auto next = [&](int a) {
        if (head[a] < 0) return a;
        const Crossing& c = crossings[head[a]];
        return hover[a] ? c.over_out : c.under_out;
    };

    std::vector<int> relabel(size_t(num_arcs), -1);
    int fresh = 0;
    for (int a = 0; a < num_arcs; ++a) {
        if (relabel[a] >= 0) continue;
        int x = a;
        do {
            if (relabel[x] >= 0) throw Error("inconsistent orientation");
            relabel[x] = fresh++;
            x = next(x);
        } while (x != a);
    }

    Diagram d;
    d.num_arcs_ = num_arcs;
    for (auto& c : crossings) {
        Crossing r = c;
        r.over_in = relabel[c.over_in];
        r.over_out = relabel[c.over_out];
        r.under_in = relabel[c.under_in];
        r.under_out = relabel[c.under_out];
        d.crossings_.push_back(r);
    }
    std::sort(d.crossings_.begin(), d.crossings_.end());

    d.head_.assign(size_t(num_arcs), -1);
    d.tail_.assign(size_t(num_arcs), -1);
    d.head_over_.assign(size_t(num_arcs), 0);
    d.tail_over_.assign(size_t(num_arcs), 0);
    for (size_t ci = 0; ci < d.crossings_.size(); ++ci) {
        const Crossing& c = d.crossings_[ci];
        d.head_[c.over_in] = int(ci);
        d.head_over_[c.over_in] = 1;
        d.head_[c.under_in] = int(ci);
        d.tail_[c.over_out] = int(ci);
        d.tail_over_[c.over_out] = 1;
        d.tail_[c.under_out] = int(ci);
    }
    d.arc_component_.assign(size_t(num_arcs), -1);
    for (int a = 0; a < num_arcs; ++a) {
        if (d.arc_component_[a] >= 0) continue;
        int comp = int(d.components_.size());
        d.components_.emplace_back();
        int x = a;
        do {
            d.arc_component_[x] = comp;
            d.components_.back().push_back(x);
            x = d.next_arc(x);
        } while (x != a);
    }
    if (old_to_new) *old_to_new = relabel;
    return d;
}

int Diagram::next_arc(int arc) const {
    if (head_[arc] < 0) return arc;
    const Crossing& c = crossings_[head_[arc]];
    return head_over_[arc] ? c.over_out : c.under_out;
}

Coloring uniform_coloring(const Diagram& d, int color) { return Coloring(size_t(d.num_components()), color); }

void check_coloring(const Diagram& d, const Coloring& mu, int n) {
    if (int(mu.size()) != d.num_components()) throw Error("coloring not total");
    for (int c : mu)
        // n = 1 admits the single color 1 (every invariant is then 1)
        if (c < 1 || (c > n - 1 && !(n == 1 && c == 1))) throw Error("color out of range 1..n-1");
}

// ---------------------------------------------------------------- parsing

namespace {

Diagram from_labeled(const std::vector<std::array<int, 4>>& xs, const std::vector<int>& signs_or_empty,
                     const std::vector<std::pair<int, int>>& closures, std::vector<int>* class_of_label_out,
                     std::map<int, int>* label_index_out) {
    // xs entries are (over_in, over_out, under_in, under_out) labels
    std::map<int, int> idx;
    for (auto& x : xs)
        for (int a : x) idx.emplace(a, 0);
    for (auto& [a, b] : closures) {
        idx.emplace(a, 0);
        idx.emplace(b, 0);
    }
    int k = 0;
    for (auto& [lab, i] : idx) i = k++;
    std::vector<int> head_uses(size_t(k), 0), tail_uses(size_t(k), 0);
    for (auto& x : xs) {
        head_uses[idx[x[0]]]++;
        tail_uses[idx[x[1]]]++;
        head_uses[idx[x[2]]]++;
        tail_uses[idx[x[3]]]++;
    }
    UnionFind uf(k);
    for (auto& [a, b] : closures) {
        head_uses[idx[a]]++;
        tail_uses[idx[b]]++;
        uf.unite(idx[a], idx[b]);
    }
    for (int i = 0; i < k; ++i)
        if (head_uses[i] != 1 || tail_uses[i] != 1) throw Error("arc used ≠ 2 times");
    std::map<int, int> cls;
    for (int i = 0; i < k; ++i) cls.emplace(uf.find(i), 0);
    int m = 0;
    for (auto& [r, j] : cls) j = m++;
    std::vector<Crossing> cs;
    for (size_t ci = 0; ci < xs.size(); ++ci) {
        auto& x = xs[ci];
        Crossing c;
        c.sign = signs_or_empty.empty() ? 1 : signs_or_empty[ci];
        c.over_in = cls[uf.find(idx[x[0]])];
        c.over_out = cls[uf.find(idx[x[1]])];
        c.under_in = cls[uf.find(idx[x[2]])];
        c.under_out = cls[uf.find(idx[x[3]])];
        cs.push_back(c);
    }
    std::vector<int> o2n;
    Diagram d = Diagram::make(cs, m, &o2n);
    if (class_of_label_out) {
        class_of_label_out->assign(size_t(k), 0);
        for (int i = 0; i < k; ++i) (*class_of_label_out)[i] = o2n[cls[uf.find(i)]];
    }
    if (label_index_out) *label_index_out = idx;
    return d;
}

}  // namespace

Diagram parse_pd(const std::string& text, Coloring* mu) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        if (mu) mu->clear();
        return Diagram();
    }
    if (text[first] == '{') return diagram_from_json(nlohmann::json::parse(text), mu);

    std::regex xre(R"(X\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\])");
    std::vector<std::array<int, 4>> pd;
    std::string rest;
    auto begin = std::sregex_iterator(text.begin(), text.end(), xre);
    size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        rest += text.substr(last, size_t(it->position()) - last);
        last = size_t(it->position() + it->length());
        pd.push_back({std::stoi((*it)[1]), std::stoi((*it)[2]), std::stoi((*it)[3]), std::stoi((*it)[4])});
    }
    rest += text.substr(last);
    for (char ch : rest)
        if (!(std::isspace((unsigned char)ch) || ch == ',' || ch == 'P' || ch == 'D' || ch == '[' || ch == ']'))
            throw Error("malformed PD text");
    if (pd.empty()) throw Error("malformed PD text");

    std::map<int, int> uses;
    for (auto& x : pd)
        for (int a : x) uses[a]++;
    for (auto& [a, u] : uses)
        if (u != 2) throw Error("arc used ≠ 2 times");

    // orientation of the over strand: 0 unknown, 1 means b -> d, -1 means d -> b
    std::vector<int> dir(pd.size(), 0);
    std::map<int, int> ins, outs;
    for (auto& x : pd) {
        ins[x[0]]++;
        outs[x[2]]++;
    }
    auto assign = [&](size_t i, int dval) {
        dir[i] = dval;
        auto& x = pd[i];
        int in = dval > 0 ? x[1] : x[3], out = dval > 0 ? x[3] : x[1];
        ins[in]++;
        outs[out]++;
        if (ins[in] > 1 || outs[out] > 1) throw Error("inconsistent orientation");
    };
    auto propagate = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < pd.size(); ++i) {
                if (dir[i]) continue;
                int b = pd[i][1], d = pd[i][3];
                if (b == d) throw Error("inconsistent orientation");
                bool b_in_taken = ins[b] > 0, b_out_taken = outs[b] > 0;
                bool d_in_taken = ins[d] > 0, d_out_taken = outs[d] > 0;
                bool can_bd = !b_in_taken && !d_out_taken;
                bool can_db = !d_in_taken && !b_out_taken;
                if (!can_bd && !can_db) throw Error("inconsistent orientation");
                if (can_bd != can_db) {
                    assign(i, can_bd ? 1 : -1);
                    changed = true;
                }
            }
        }
    };
    propagate();
    for (size_t i = 0; i < pd.size(); ++i) {
        if (dir[i]) continue;
        int b = pd[i][1], d = pd[i][3];
        // arcs are numbered increasingly along the orientation, wrapping at the end of a component
        int dval;
        if (d == b + 1)
            dval = 1;
        else if (b == d + 1)
            dval = -1;
        else
            dval = b > d ? 1 : -1;
        assign(i, dval);
        propagate();
    }
    std::vector<std::array<int, 4>> xs;
    std::vector<int> signs;
    for (size_t i = 0; i < pd.size(); ++i) {
        auto& x = pd[i];
        int oi = dir[i] > 0 ? x[1] : x[3], oo = dir[i] > 0 ? x[3] : x[1];
        xs.push_back({oi, oo, x[0], x[2]});
        // counterclockwise (u_in, b, u_out, d): positive when the over strand runs d -> b
        signs.push_back(dir[i] < 0 ? 1 : -1);
    }
    Diagram d = from_labeled(xs, signs, {}, nullptr, nullptr);
    if (mu) *mu = uniform_coloring(d, 1);
    return d;
}

Diagram diagram_from_json(const nlohmann::json& j, Coloring* mu) {
    if (j.contains("strands") && j.contains("word")) {
        Diagram d = from_braid(j.at("word").get<std::vector<int>>(), j.at("strands").get<int>());
        if (mu) *mu = uniform_coloring(d, 1);
        return d;
    }
    std::vector<std::array<int, 4>> xs;
    std::vector<int> signs;
    if (j.contains("crossings")) {
        for (auto& c : j.at("crossings")) {
            auto o = c.at("over").get<std::vector<int>>();
            auto u = c.at("under").get<std::vector<int>>();
            if (o.size() != 2 || u.size() != 2) throw Error("crossing strands must be [in, out]");
            xs.push_back({o[0], o[1], u[0], u[1]});
            signs.push_back(c.at("sign").get<int>());
        }
    }
    std::vector<std::pair<int, int>> cl;
    if (j.contains("closures"))
        for (auto& c : j.at("closures")) {
            auto v = c.get<std::vector<int>>();
            if (v.size() != 2) throw Error("closure must be [arc, arc]");
            cl.emplace_back(v[0], v[1]);
        }
    Diagram d = from_labeled(xs, signs, cl, nullptr, nullptr);
    if (mu) {
        *mu = uniform_coloring(d, 1);
        if (j.contains("coloring")) {
            auto& cj = j.at("coloring");
            std::vector<char> seen(size_t(d.num_components()), 0);
            for (auto it = cj.begin(); it != cj.end(); ++it) {
                int idx = std::stoi(it.key());
                if (idx < 0 || idx >= d.num_components()) throw Error("coloring names unknown component");
                (*mu)[idx] = it.value().get<int>();
                seen[idx] = 1;
            }
            for (char s : seen)
                if (!s) throw Error("coloring not total");
        }
    }
    return d;
}

nlohmann::json diagram_to_json(const Diagram& d, const Coloring* mu) {
    nlohmann::json j;
    j["crossings"] = nlohmann::json::array();
    for (auto& c : d.crossings())
        j["crossings"].push_back(
            {{"sign", c.sign}, {"over", {c.over_in + 1, c.over_out + 1}}, {"under", {c.under_in + 1, c.under_out + 1}}});
    j["closures"] = nlohmann::json::array();
    for (int a = 0; a < d.num_arcs(); ++a)
        if (d.is_free_loop(a)) j["closures"].push_back({a + 1, a + 1});
    if (mu) {
        nlohmann::json cj = nlohmann::json::object();
        for (size_t i = 0; i < mu->size(); ++i) cj[std::to_string(i)] = (*mu)[i];
        j["coloring"] = cj;
    }
    return j;
}

std::string to_pd(const Diagram& d) {
    for (int a = 0; a < d.num_arcs(); ++a)
        if (d.is_free_loop(a)) throw Error("PD notation cannot express crossingless components");
    std::ostringstream os;
    bool first = true;
    for (auto& c : d.crossings()) {
        auto e = ccw_ends(c);
        int s = 0;
        while (!(e[s].in && !e[s].over)) ++s;
        if (!first) os << ", ";
        first = false;
        os << "X[" << e[s].arc + 1 << "," << e[(s + 1) % 4].arc + 1 << "," << e[(s + 2) % 4].arc + 1 << ","
           << e[(s + 3) % 4].arc + 1 << "]";
    }
    return os.str();
}

std::vector<int> parse_braid_word(const std::string& text) {
    std::vector<int> w;
    std::string tok;
    std::istringstream is(text);
    while (std::getline(is, tok, ',')) {
        auto a = tok.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        auto b = tok.find_last_not_of(" \t");
        tok = tok.substr(a, b - a + 1);
        size_t used = 0;
        int g = 0;
        try {
            g = std::stoi(tok, &used);
        } catch (...) {
            throw Error("malformed braid word");
        }
        if (used != tok.size() || g == 0) throw Error("malformed braid word");
        w.push_back(g);
    }
    return w;
}

namespace {

// Braid closure before canonicalization: arcs labeled by creation order, crossings in word order.
struct RawBraid {
    std::vector<Crossing> crossings;
    int num_arcs = 0;
    std::vector<int> bottom;  // arc at each bottom position (after closure identification)
};

RawBraid raw_braid(const std::vector<int>& word, int strands) {
    if (strands < 0) throw Error("strand count must be nonnegative");
    for (int g : word)
        if (g == 0 || std::abs(g) > strands - 1) throw Error("generator index out of range");
    RawBraid r;
    std::vector<int> cur(static_cast<size_t>(strands));
    int next = 0;
    for (int t = 0; t < strands; ++t) cur[t] = next++;
    std::vector<int> bottom = cur;
    for (int g : word) {
        int k = std::abs(g) - 1;
        int l = next++, rr = next++;  // new arcs at positions k and k+1
        Crossing c;
        c.sign = g > 0 ? 1 : -1;
        if (g > 0) {
            c.over_in = cur[k];
            c.over_out = rr;
            c.under_in = cur[k + 1];
            c.under_out = l;
        } else {
            c.over_in = cur[k + 1];
            c.over_out = l;
            c.under_in = cur[k];
            c.under_out = rr;
        }
        r.crossings.push_back(c);
        cur[k] = l;
        cur[k + 1] = rr;
    }
    UnionFind uf(next);
    for (int t = 0; t < strands; ++t) uf.unite(cur[t], bottom[t]);
    std::map<int, int> cls;
    for (int a = 0; a < next; ++a) cls.emplace(uf.find(a), 0);
    int m = 0;
    for (auto& [x, i] : cls) i = m++;
    auto f = [&](int a) { return cls[uf.find(a)]; };
    for (auto& c : r.crossings) {
        c.over_in = f(c.over_in);
        c.over_out = f(c.over_out);
        c.under_in = f(c.under_in);
        c.under_out = f(c.under_out);
    }
    r.num_arcs = m;
    for (int t = 0; t < strands; ++t) r.bottom.push_back(f(bottom[t]));
    return r;
}

}  // namespace

Diagram from_braid(const std::vector<int>& word, int strands) {
    RawBraid r = raw_braid(word, strands);
    Diagram d = Diagram::make(r.crossings, r.num_arcs);
    d.set_braid_hint(BraidWord{strands, word});
    return d;
}

Diagram mirror(const Diagram& d) {
    std::vector<Crossing> cs;
    for (auto& c : d.crossings()) {
        Crossing m;
        m.sign = -c.sign;
        m.over_in = c.under_in;
        m.over_out = c.under_out;
        m.under_in = c.over_in;
        m.under_out = c.over_out;
        cs.push_back(m);
    }
    Diagram r = Diagram::make(cs, d.num_arcs());
    if (d.braid_hint()) {
        BraidWord b = *d.braid_hint();
        for (int& g : b.word) g = -g;
        r.set_braid_hint(b);
    }
    return r;
}

int writhe(const Diagram& d) {
    int w = 0;
    for (auto& c : d.crossings()) w += c.sign;
    return w;
}

int colored_writhe(const Diagram& d, const Coloring& mu, int i) {
    if (int(mu.size()) != d.num_components()) throw Error("coloring not total");
    int w = 0;
    for (auto& c : d.crossings())
        if (mu[d.component_of(c.over_in)] == i && mu[d.component_of(c.under_in)] == i) w += c.sign;
    return w;
}

// ---------------------------------------------------------------- tangles

Tangle parse_tangle(const std::string& text, int strands, const std::vector<int>& colors) {
    Tangle t;
    std::string s = text;
    std::vector<int> word;
    if (s.find("sigma") != std::string::npos) {
        std::string rest = s;
        std::regex item(R"(sigma\s*(-?\d+)(\s*\^\s*(-?\d+))?)");
        for (auto it = std::sregex_iterator(rest.begin(), rest.end(), item); it != std::sregex_iterator(); ++it) {
            int g = std::stoi((*it)[1]);
            int e = (*it)[3].matched ? std::stoi((*it)[3]) : 1;
            for (int k = 0; k < std::abs(e); ++k) word.push_back(e < 0 ? -g : g);
        }
        if (word.empty()) throw Error("malformed tangle word");
    } else {
        word = parse_braid_word(s);
    }
    int need = 1;
    for (int g : word) need = std::max(need, std::abs(g) + 1);
    t.strands = strands > 0 ? strands : need;
    t.word = word;
    if (colors.empty())
        t.colors.assign(size_t(t.strands), 1);
    else if (colors.size() == 1)
        t.colors.assign(size_t(t.strands), colors[0]);
    else
        t.colors = colors;
    if (int(t.colors.size()) != t.strands) throw Error("tangle colors must match strand count");
    for (int g : word)
        if (std::abs(g) > t.strands - 1) throw Error("generator index out of range");
    return t;
}

std::vector<int> tangle_permutation(const Tangle& t) {
    std::vector<int> at(size_t(t.strands));  // at[pos] = starting position of strand now at pos
    std::iota(at.begin(), at.end(), 0);
    for (int g : t.word) std::swap(at[std::abs(g) - 1], at[std::abs(g)]);
    std::vector<int> perm(size_t(t.strands));
    for (int pos = 0; pos < t.strands; ++pos) perm[at[pos]] = pos;
    return perm;
}

bool self_composable(const Tangle& t) {
    if (int(t.colors.size()) != t.strands) return false;
    auto perm = tangle_permutation(t);
    for (int s = 0; s < t.strands; ++s)
        if (t.colors[perm[s]] != t.colors[s]) return false;
    return true;
}

namespace {

ColoredDiagram build_cover(const Tangle& t, int p, std::vector<int>* raw_to_canon_crossing, RawBraid* raw_out,
                           std::vector<int>* arc_o2n) {
    if (p < 1) throw Error("period must be >= 1");
    if (!self_composable(t)) throw Error("tangle not self-composable");
    std::vector<int> word;
    for (int r = 0; r < p; ++r) word.insert(word.end(), t.word.begin(), t.word.end());
    RawBraid raw = raw_braid(word, t.strands);
    std::vector<int> o2n;
    Diagram d = Diagram::make(raw.crossings, raw.num_arcs, &o2n);
    d.set_braid_hint(BraidWord{t.strands, word});
    Coloring mu(size_t(d.num_components()), 0);
    for (int pos = 0; pos < t.strands; ++pos) mu[d.component_of(o2n[raw.bottom[pos]])] = t.colors[pos];
    if (raw_to_canon_crossing) {
        raw_to_canon_crossing->clear();
        for (auto& c : raw.crossings) {
            int oi = o2n[c.over_in];
            int idx = 0;
            while (d.crossings()[idx].over_in != oi) ++idx;
            raw_to_canon_crossing->push_back(idx);
        }
    }
    if (raw_out) *raw_out = raw;
    if (arc_o2n) *arc_o2n = o2n;
    return {d, mu};
}

}  // namespace

ColoredDiagram closure(const Tangle& t) {
    Diagram d = from_braid(t.word, t.strands);
    RawBraid raw = raw_braid(t.word, t.strands);
    std::vector<int> o2n;
    Diagram::make(raw.crossings, raw.num_arcs, &o2n);
    Coloring mu(size_t(d.num_components()), 0);
    for (int pos = 0; pos < t.strands; ++pos) mu[d.component_of(o2n[raw.bottom[pos]])] = t.colors[pos];
    return {d, mu};
}

ColoredDiagram periodic_cover(const Tangle& t, int p) { return build_cover(t, p, nullptr, nullptr, nullptr); }

Symmetry cover_rotation(const Tangle& t, int p) {
    std::vector<int> r2c;
    RawBraid raw;
    std::vector<int> o2n;
    ColoredDiagram cd = build_cover(t, p, &r2c, &raw, &o2n);
    const Diagram& d = cd.diagram;
    int L = int(t.word.size());
    Symmetry s;
    s.crossing_perm.assign(size_t(d.num_crossings()), -1);
    for (int r = 0; r < p; ++r)
        for (int j = 0; j < L; ++j) s.crossing_perm[r2c[r * L + j]] = r2c[((r + 1) % p) * L + j];
    s.arc_perm.assign(size_t(d.num_arcs()), -1);
    for (int ci = 0; ci < d.num_crossings(); ++ci) {
        const Crossing& a = d.crossings()[ci];
        const Crossing& b = d.crossings()[s.crossing_perm[ci]];
        s.arc_perm[a.over_out] = b.over_out;
        s.arc_perm[a.under_out] = b.under_out;
    }
    // crossingless strands: the rotation shifts each one to itself
    for (int a = 0; a < d.num_arcs(); ++a)
        if (s.arc_perm[a] < 0) s.arc_perm[a] = a;
    return s;
}

bool is_automorphism(const Diagram& d, const Symmetry& s) {
    if (int(s.crossing_perm.size()) != d.num_crossings() || int(s.arc_perm.size()) != d.num_arcs()) return false;
    std::vector<int> seen(size_t(d.num_crossings()), 0);
    for (int x : s.crossing_perm) {
        if (x < 0 || x >= d.num_crossings() || seen[x]) return false;
        seen[x] = 1;
    }
    for (int ci = 0; ci < d.num_crossings(); ++ci) {
        const Crossing& a = d.crossings()[ci];
        const Crossing& b = d.crossings()[s.crossing_perm[ci]];
        if (a.sign != b.sign) return false;
        if (s.arc_perm[a.over_in] != b.over_in || s.arc_perm[a.over_out] != b.over_out ||
            s.arc_perm[a.under_in] != b.under_in || s.arc_perm[a.under_out] != b.under_out)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------- faces

namespace {

// position of an arc end at a crossing in ccw order
int end_position(const Crossing& c, int arc, bool in) {
    auto e = ccw_ends(c);
    for (int k = 0; k < 4; ++k)
        if (e[k].arc == arc && e[k].in == in) return k;
    throw Error("internal: arc end not at crossing");
}

}  // namespace

std::vector<std::vector<int>> diagram_pieces(const Diagram& d) {
    int nc = d.num_crossings();
    UnionFind uf(nc + d.num_arcs());
    for (int a = 0; a < d.num_arcs(); ++a) {
        if (d.is_free_loop(a)) continue;
        uf.unite(nc + a, d.head_crossing(a));
        uf.unite(nc + a, d.tail_crossing(a));
    }
    std::map<int, std::vector<int>> groups;
    for (int ci = 0; ci < nc; ++ci) groups[uf.find(ci)].push_back(ci);
    std::vector<std::vector<int>> r;
    for (auto& [k, v] : groups) r.push_back(v);
    return r;
}

std::vector<DiagramFace> diagram_faces(const Diagram& d) {
    std::vector<DiagramFace> faces;
    std::set<std::pair<int, bool>> used;
    for (int a = 0; a < d.num_arcs(); ++a) {
        if (d.is_free_loop(a)) continue;
        for (bool fw : {true, false}) {
            if (used.count({a, fw})) continue;
            DiagramFace f;
            int arc = a;
            bool forward = fw;
            while (!used.count({arc, forward})) {
                used.insert({arc, forward});
                f.darts.push_back({arc, forward});
                int ci = forward ? d.head_crossing(arc) : d.tail_crossing(arc);
                const Crossing& c = d.crossings()[ci];
                int k = end_position(c, arc, forward);
                auto e = ccw_ends(c)[(k + 3) % 4];
                arc = e.arc;
                forward = !e.in;
            }
            if (!(arc == a && forward == fw)) throw Error("no planar embedding");
            faces.push_back(std::move(f));
        }
    }
    // Euler check per piece: V - E + F = 2 with E = 2V
    auto pieces = diagram_pieces(d);
    std::vector<int> piece_of(size_t(d.num_crossings()), -1);
    for (size_t i = 0; i < pieces.size(); ++i)
        for (int c : pieces[i]) piece_of[c] = int(i);
    std::vector<int> fcount(pieces.size(), 0);
    for (auto& f : faces) {
        int a = f.darts[0].arc;
        fcount[piece_of[d.head_crossing(a)]]++;
    }
    for (size_t i = 0; i < pieces.size(); ++i) {
        int v = int(pieces[i].size());
        if (v - 2 * v + fcount[i] != 2) throw Error("no planar embedding");
    }
    return faces;
}

bool is_planar(const Diagram& d) {
    try {
        diagram_faces(d);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// ---------------------------------------------------------------- moves

std::string move_name(Move m) {
    switch (m) {
        case Move::R1Plus: return "R1+";
        case Move::R1Minus: return "R1-";
        case Move::R2: return "R2";
        case Move::R3: return "R3";
        case Move::R1Remove: return "R1^-1";
        case Move::R2Remove: return "R2^-1";
    }
    return "?";
}

std::string Site::describe() const {
    std::ostringstream os;
    if (arc >= 0) os << "arc " << arc << (first_over ? " over-first" : " under-first");
    if (face >= 0) os << "face " << face << " darts " << i << "," << j << (a_over ? " a-over" : " a-under");
    if (crossing >= 0) os << "crossing " << crossing;
    return os.str();
}

namespace {

// Build a diagram from crossings over arcs that may be merged by a union-find.
Diagram rebuild(const std::vector<Crossing>& cs, UnionFind& uf, int num_arcs, const std::vector<int>& origin_in,
                std::vector<int>* origin) {
    std::map<int, int> cls;
    for (int a = 0; a < num_arcs; ++a) cls.emplace(uf.find(a), 0);
    int m = 0;
    for (auto& [r, i] : cls) i = m++;
    std::vector<Crossing> out;
    for (auto c : cs) {
        c.over_in = cls[uf.find(c.over_in)];
        c.over_out = cls[uf.find(c.over_out)];
        c.under_in = cls[uf.find(c.under_in)];
        c.under_out = cls[uf.find(c.under_out)];
        out.push_back(c);
    }
    std::vector<int> o2n;
    Diagram d = Diagram::make(out, m, &o2n);
    if (origin) {
        origin->assign(size_t(m), -1);
        for (int a = num_arcs - 1; a >= 0; --a) (*origin)[o2n[cls[uf.find(a)]]] = origin_in[a];
    }
    return d;
}

std::vector<int> identity_origin(int n) {
    std::vector<int> v(static_cast<size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

void replace_in(std::vector<Crossing>& cs, int old_arc, int new_arc) {
    for (auto& c : cs) {
        if (c.over_in == old_arc) c.over_in = new_arc;
        if (c.under_in == old_arc) c.under_in = new_arc;
    }
}

[[noreturn]] void not_applicable() { throw Error("move not applicable at site"); }

Diagram apply_r1(const Diagram& d, int sign, const Site& s, std::vector<int>* origin) {
    if (s.arc < 0 || s.arc >= d.num_arcs()) not_applicable();
    std::vector<Crossing> cs = d.crossings();
    int n = d.num_arcs();
    std::vector<int> org = identity_origin(n);
    int x = s.arc, y = n, z = d.is_free_loop(x) ? x : n + 1;
    int total = d.is_free_loop(x) ? n + 1 : n + 2;
    org.push_back(x);
    if (!d.is_free_loop(x)) {
        org.push_back(x);
        replace_in(cs, x, z);
    }
    Crossing c;
    c.sign = sign;
    if (s.first_over) {
        c.over_in = x;
        c.over_out = y;
        c.under_in = y;
        c.under_out = z;
    } else {
        c.under_in = x;
        c.under_out = y;
        c.over_in = y;
        c.over_out = z;
    }
    cs.push_back(c);
    UnionFind uf(total);
    return rebuild(cs, uf, total, org, origin);
}

Diagram apply_r2(const Diagram& d, const Site& s, std::vector<int>* origin) {
    auto faces = diagram_faces(d);
    if (s.face < 0 || s.face >= int(faces.size())) not_applicable();
    const auto& f = faces[s.face];
    if (s.i < 0 || s.j < 0 || s.i >= int(f.darts.size()) || s.j >= int(f.darts.size()) || s.i == s.j)
        not_applicable();
    Dart da = f.darts[s.i], db = f.darts[s.j];
    if (da.arc == db.arc) not_applicable();
    int a = da.arc, b = db.arc;
    bool aLR = da.forward, bLR = !db.forward;
    std::vector<Crossing> cs = d.crossings();
    int n = d.num_arcs();
    std::vector<int> org = identity_origin(n);
    int a2 = n, a3 = n + 1, b2 = n + 2, b3 = n + 3;
    org.insert(org.end(), {a, a, b, b});
    replace_in(cs, a, a3);
    replace_in(cs, b, b3);
    // local picture: a runs along the bottom of the face, b along the top; a is pushed up across b
    for (int side = 0; side < 2; ++side) {  // 0 = left crossing, 1 = right crossing
        bool a_first = (side == 0) == aLR;
        bool a_up = a_first;
        bool b_first = (side == 0) == bLR;
        int a_in = a_first ? a : a2, a_out = a_first ? a2 : a3;
        int b_in = b_first ? b : b2, b_out = b_first ? b2 : b3;
        // ccw positions E, N, W, S
        struct End {
            int arc;
            bool in;
            bool is_a;
        };
        std::array<End, 4> pos{};
        pos[3] = a_up ? End{a_in, true, true} : End{a_out, false, true};
        pos[1] = a_up ? End{a_out, false, true} : End{a_in, true, true};
        pos[2] = bLR ? End{b_in, true, false} : End{b_out, false, false};
        pos[0] = bLR ? End{b_out, false, false} : End{b_in, true, false};
        Crossing c;
        int oin = -1;
        for (int k = 0; k < 4; ++k) {
            bool over = pos[k].is_a == s.a_over;
            if (over && pos[k].in) oin = k;
            int& slot = over ? (pos[k].in ? c.over_in : c.over_out) : (pos[k].in ? c.under_in : c.under_out);
            slot = pos[k].arc;
        }
        auto nxt = pos[(oin + 1) % 4];
        bool nxt_over = nxt.is_a == s.a_over;
        c.sign = (!nxt_over && nxt.in) ? 1 : -1;
        cs.push_back(c);
    }
    UnionFind uf(n + 4);
    Diagram r = rebuild(cs, uf, n + 4, org, origin);
    if (!is_planar(r)) throw Error("internal: R2 produced a non-planar diagram");
    return r;
}

Diagram apply_r3(const Diagram& d, const Site& s, std::vector<int>* origin) {
    auto faces = diagram_faces(d);
    if (s.face < 0 || s.face >= int(faces.size())) not_applicable();
    const auto& f = faces[s.face];
    if (f.darts.size() != 3) not_applicable();
    std::set<int> arcs, xs;
    for (auto& dt : f.darts) {
        arcs.insert(dt.arc);
        xs.insert(d.head_crossing(dt.arc));
        xs.insert(d.tail_crossing(dt.arc));
    }
    if (arcs.size() != 3 || xs.size() != 3) not_applicable();
    bool some_over_over = false;
    for (int m : arcs)
        if (d.tail_is_over(m) && d.head_is_over(m)) some_over_over = true;
    if (!some_over_over) not_applicable();
    std::vector<Crossing> cs = d.crossings();
    struct Plan {
        int P, Q, pre, post;
        bool overP, overQ;
        int m;
    };
    std::vector<Plan> plans;
    for (int m : arcs) {
        Plan pl;
        pl.m = m;
        pl.P = d.tail_crossing(m);
        pl.Q = d.head_crossing(m);
        pl.overP = d.tail_is_over(m);
        pl.overQ = d.head_is_over(m);
        const Crossing& cp = d.crossings()[pl.P];
        const Crossing& cq = d.crossings()[pl.Q];
        pl.pre = pl.overP ? cp.over_in : cp.under_in;
        pl.post = pl.overQ ? cq.over_out : cq.under_out;
        if (arcs.count(pl.pre) || arcs.count(pl.post)) not_applicable();
        plans.push_back(pl);
    }
    for (auto& pl : plans) {
        Crossing& cp = cs[pl.P];
        Crossing& cq = cs[pl.Q];
        (pl.overP ? cp.over_in : cp.under_in) = pl.m;
        (pl.overP ? cp.over_out : cp.under_out) = pl.post;
        (pl.overQ ? cq.over_in : cq.under_in) = pl.pre;
        (pl.overQ ? cq.over_out : cq.under_out) = pl.m;
    }
    UnionFind uf(d.num_arcs());
    Diagram r = rebuild(cs, uf, d.num_arcs(), identity_origin(d.num_arcs()), origin);
    if (!is_planar(r)) throw Error("internal: R3 produced a non-planar diagram");
    return r;
}

}  // namespace

Diagram remove_crossings(const Diagram& d, const std::vector<int>& which, std::vector<int>* origin) {
    std::set<int> rm(which.begin(), which.end());
    UnionFind uf(d.num_arcs());
    std::vector<Crossing> cs;
    for (int ci = 0; ci < d.num_crossings(); ++ci) {
        const Crossing& c = d.crossings()[ci];
        if (rm.count(ci)) {
            uf.unite(c.over_in, c.over_out);
            uf.unite(c.under_in, c.under_out);
        } else {
            cs.push_back(c);
        }
    }
    return rebuild(cs, uf, d.num_arcs(), identity_origin(d.num_arcs()), origin);
}

Diagram smooth_crossing(const Diagram& d, int crossing, std::vector<int>* origin) {
    UnionFind uf(d.num_arcs());
    std::vector<Crossing> cs;
    for (int ci = 0; ci < d.num_crossings(); ++ci) {
        const Crossing& c = d.crossings()[ci];
        if (ci == crossing) {
            uf.unite(c.over_in, c.under_out);
            uf.unite(c.under_in, c.over_out);
        } else {
            cs.push_back(c);
        }
    }
    return rebuild(cs, uf, d.num_arcs(), identity_origin(d.num_arcs()), origin);
}

Diagram switch_crossing(const Diagram& d, int crossing) {
    std::vector<Crossing> cs = d.crossings();
    Crossing& c = cs[crossing];
    Crossing m;
    m.sign = -c.sign;
    m.over_in = c.under_in;
    m.over_out = c.under_out;
    m.under_in = c.over_in;
    m.under_out = c.over_out;
    c = m;
    return Diagram::make(cs, d.num_arcs());
}

std::vector<Site> enumerate_sites(const Diagram& d, Move m) {
    std::vector<Site> sites;
    switch (m) {
        case Move::R1Plus:
        case Move::R1Minus:
            for (int a = 0; a < d.num_arcs(); ++a)
                for (bool fo : {true, false}) {
                    Site s;
                    s.arc = a;
                    s.first_over = fo;
                    sites.push_back(s);
                }
            break;
        case Move::R2: {
            auto faces = diagram_faces(d);
            for (int fi = 0; fi < int(faces.size()); ++fi) {
                auto& f = faces[fi];
                for (int i = 0; i < int(f.darts.size()); ++i)
                    for (int j = 0; j < int(f.darts.size()); ++j) {
                        if (i == j || f.darts[i].arc == f.darts[j].arc) continue;
                        for (bool ao : {true, false}) {
                            Site s;
                            s.face = fi;
                            s.i = i;
                            s.j = j;
                            s.a_over = ao;
                            sites.push_back(s);
                        }
                    }
            }
            break;
        }
        case Move::R3: {
            auto faces = diagram_faces(d);
            for (int fi = 0; fi < int(faces.size()); ++fi) {
                if (faces[fi].darts.size() != 3) continue;
                Site s;
                s.face = fi;
                try {
                    apply_reidemeister(d, Move::R3, s);
                    sites.push_back(s);
                } catch (const Error&) {
                }
            }
            break;
        }
        case Move::R1Remove:
            for (int ci = 0; ci < d.num_crossings(); ++ci) {
                const Crossing& c = d.crossings()[ci];
                if (c.over_out == c.under_in || c.under_out == c.over_in) {
                    Site s;
                    s.crossing = ci;
                    sites.push_back(s);
                }
            }
            break;
        case Move::R2Remove: {
            auto faces = diagram_faces(d);
            for (int fi = 0; fi < int(faces.size()); ++fi) {
                if (faces[fi].darts.size() != 2) continue;
                Site s;
                s.face = fi;
                try {
                    apply_reidemeister(d, Move::R2Remove, s);
                    sites.push_back(s);
                } catch (const Error&) {
                }
            }
            break;
        }
    }
    return sites;
}

Diagram apply_reidemeister(const Diagram& d, Move m, const Site& s, std::vector<int>* origin) {
    switch (m) {
        case Move::R1Plus: return apply_r1(d, 1, s, origin);
        case Move::R1Minus: return apply_r1(d, -1, s, origin);
        case Move::R2: return apply_r2(d, s, origin);
        case Move::R3: return apply_r3(d, s, origin);
        case Move::R1Remove: {
            if (s.crossing < 0 || s.crossing >= d.num_crossings()) not_applicable();
            const Crossing& c = d.crossings()[s.crossing];
            if (!(c.over_out == c.under_in || c.under_out == c.over_in)) not_applicable();
            return remove_crossings(d, {s.crossing}, origin);
        }
        case Move::R2Remove: {
            auto faces = diagram_faces(d);
            if (s.face < 0 || s.face >= int(faces.size()) || faces[s.face].darts.size() != 2) not_applicable();
            int e1 = faces[s.face].darts[0].arc, e2 = faces[s.face].darts[1].arc;
            if (e1 == e2) not_applicable();
            int c1 = d.tail_crossing(e1), c2 = d.head_crossing(e1);
            if (c1 == c2) not_applicable();
            bool o1 = d.tail_is_over(e1), o2 = d.head_is_over(e1);
            if (o1 != o2) not_applicable();
            std::set<int> ends{d.tail_crossing(e2), d.head_crossing(e2)};
            if (ends != std::set<int>{c1, c2}) not_applicable();
            return remove_crossings(d, {c1, c2}, origin);
        }
    }
    not_applicable();
}

Coloring transport_coloring(const Diagram& from, const Coloring& mu, const Diagram& to, const std::vector<int>& origin) {
    Coloring r(size_t(to.num_components()), 0);
    for (int a = 0; a < to.num_arcs(); ++a) r[to.component_of(a)] = mu[from.component_of(origin[a])];
    return r;
}

// ---------------------------------------------------------------- isomorphism

bool isomorphic(const Diagram& a, const Diagram& b) {
    if (a.num_arcs() != b.num_arcs() || a.num_crossings() != b.num_crossings() ||
        a.num_components() != b.num_components())
        return false;
    int n = a.num_arcs();
    std::function<bool(std::vector<int>&, std::vector<int>&)> solve = [&](std::vector<int>& fwd,
                                                                         std::vector<int>& bwd) -> bool {
        int start = -1;
        for (int x = 0; x < n; ++x)
            if (fwd[x] < 0) {
                start = x;
                break;
            }
        if (start < 0) return true;
        for (int y = 0; y < n; ++y) {
            if (bwd[y] >= 0) continue;
            auto f2 = fwd, b2 = bwd;
            std::vector<std::pair<int, int>> stack{{start, y}};
            bool ok = true;
            while (ok && !stack.empty()) {
                auto [x, z] = stack.back();
                stack.pop_back();
                if (f2[x] >= 0 || b2[z] >= 0) {
                    if (f2[x] != z || b2[z] != x) ok = false;
                    continue;
                }
                if (a.is_free_loop(x) != b.is_free_loop(z)) {
                    ok = false;
                    continue;
                }
                f2[x] = z;
                b2[z] = x;
                if (a.is_free_loop(x)) continue;
                const Crossing& ca = a.crossings()[a.head_crossing(x)];
                const Crossing& cb = b.crossings()[b.head_crossing(z)];
                if (ca.sign != cb.sign || a.head_is_over(x) != b.head_is_over(z)) {
                    ok = false;
                    continue;
                }
                stack.push_back({ca.over_in, cb.over_in});
                stack.push_back({ca.over_out, cb.over_out});
                stack.push_back({ca.under_in, cb.under_in});
                stack.push_back({ca.under_out, cb.under_out});
                const Crossing& ta = a.crossings()[a.tail_crossing(x)];
                const Crossing& tb = b.crossings()[b.tail_crossing(z)];
                if (ta.sign != tb.sign || a.tail_is_over(x) != b.tail_is_over(z)) {
                    ok = false;
                    continue;
                }
                stack.push_back({ta.over_in, tb.over_in});
                stack.push_back({ta.under_in, tb.under_in});
            }
            if (ok && solve(f2, b2)) {
                fwd = f2;
                bwd = b2;
                return true;
            }
        }
        return false;
    };
    std::vector<int> fwd(size_t(n), -1), bwd(size_t(n), -1);
    return solve(fwd, bwd);
}

Diagram disjoint_union(const Diagram& a, const Diagram& b) {
    std::vector<Crossing> cs = a.crossings();
    int off = a.num_arcs();
    for (auto c : b.crossings()) {
        c.over_in += off;
        c.over_out += off;
        c.under_in += off;
        c.under_out += off;
        cs.push_back(c);
    }
    return Diagram::make(cs, a.num_arcs() + b.num_arcs());
}

}  // namespace webskein
