#include "webskein/planar.hpp"

#include <algorithm>
#include <numeric>

namespace webskein {

bool PlanarWeb::port_is_tail(int v, int port) const { return vertices[size_t(v)].merge ? port == 0 : port != 0; }

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[size_t(x)] == x ? x : p[size_t(x)] = find(p[size_t(x)]); }
    void unite(int a, int b) { p[size_t(find(a))] = find(b); }
};

}  // namespace

void PlanarWeb::check(int n) const {
    for (size_t e = 0; e < edges.size(); ++e) {
        auto& ed = edges[e];
        if (ed.color < 1 || ed.color > n) throw Error("color exceeds n");
        for (const PEnd* end : {&ed.tail, &ed.head}) {
            if (end->v < 0 || end->v >= int(vertices.size()) || end->port < 0 || end->port > 2)
                throw Error("dangling edge");
            if (vertices[size_t(end->v)].port_edge[end->port] != int(e)) throw Error("inconsistent incidence");
        }
        if (!port_is_tail(ed.tail.v, ed.tail.port) || port_is_tail(ed.head.v, ed.head.port))
            throw Error("edge orientation disagrees with vertex");
    }
    for (size_t v = 0; v < vertices.size(); ++v) {
        auto& pv = vertices[v];
        int c[3];
        for (int k = 0; k < 3; ++k) {
            int e = pv.port_edge[k];
            if (e < 0 || e >= int(edges.size())) throw Error("dangling vertex port");
            c[k] = edges[size_t(e)].color;
        }
        if (c[0] != c[1] + c[2]) throw Error("flow not conserved at vertex");
    }
    for (int c : loops)
        if (c < 1 || c > n) throw Error("color exceeds n");
}

int PlanarWeb::num_components() const { return int(components().size()); }

std::vector<PlanarWeb> PlanarWeb::components() const {
    Dsu d(vertices.size());
    for (auto& e : edges) d.unite(e.tail.v, e.head.v);
    std::vector<int> root_index(vertices.size(), -1);
    std::vector<PlanarWeb> out;
    std::vector<int> vmap(vertices.size()), emap(edges.size());
    for (size_t v = 0; v < vertices.size(); ++v) {
        int r = d.find(int(v));
        if (root_index[size_t(r)] < 0) {
            root_index[size_t(r)] = int(out.size());
            out.emplace_back();
        }
        auto& c = out[size_t(root_index[size_t(r)])];
        vmap[v] = int(c.vertices.size());
        c.vertices.push_back(vertices[v]);
    }
    for (size_t e = 0; e < edges.size(); ++e) {
        auto& c = out[size_t(root_index[size_t(d.find(edges[e].tail.v))])];
        emap[e] = int(c.edges.size());
        PEdge ed = edges[e];
        ed.tail.v = vmap[size_t(ed.tail.v)];
        ed.head.v = vmap[size_t(ed.head.v)];
        c.edges.push_back(ed);
    }
    for (auto& c : out)
        for (auto& v : c.vertices)
            for (auto& pe : v.port_edge) pe = emap[size_t(pe)];
    for (int c : loops) {
        PlanarWeb l;
        l.loops.push_back(c);
        out.push_back(l);
    }
    return out;
}

PlanarWeb planar_from_slices(const SliceWeb& w, int n) {
    if (auto e = validate(w, n, true, false)) throw Error(*e);
    // Every pending strand end is an "end" id; partner links the two ends of each path piece.
    struct End {
        PEnd fixed;
        int color = 0;
    };
    std::vector<End> ends;
    std::vector<int> partner;
    auto new_end = [&](int color, PEnd f = {}) {
        ends.push_back({f, color});
        partner.push_back(-1);
        return int(ends.size()) - 1;
    };
    auto link = [&](int a, int b) {
        partner[size_t(a)] = b;
        partner[size_t(b)] = a;
    };
    // attach the piece ending at open end a to a fixed vertex port
    auto attach = [&](int a, int v, int port) {
        int f = new_end(ends[size_t(a)].color, PEnd{v, port});
        link(partner[size_t(a)], f);
    };
    PlanarWeb p;
    Word word;
    std::vector<int> open;  // open end per strand
    for (auto& s : w.slices) {
        size_t x = size_t(s.pos);
        switch (s.kind) {
            case SliceKind::Cup: {
                int a = new_end(s.a), b = new_end(s.a);
                link(a, b);
                open.insert(open.begin() + long(x), {a, b});
                break;
            }
            case SliceKind::Cap: {
                int a = open[x], b = open[x + 1];
                if (partner[size_t(a)] == b)
                    p.loops.push_back(ends[size_t(a)].color);
                else
                    link(partner[size_t(a)], partner[size_t(b)]);
                open.erase(open.begin() + long(x), open.begin() + long(x) + 2);
                break;
            }
            case SliceKind::Merge: {
                int v = int(p.vertices.size());
                bool up = word[x].up;
                p.vertices.push_back(PVertex{up, {-1, -1, -1}});
                int c = word[x].color + word[x + 1].color;
                // up: (out=T, inL=BL, inR=BR); down: (in=T, outR=BL, outL=BR)
                attach(open[x], v, 1);
                attach(open[x + 1], v, 2);
                int f = new_end(c, PEnd{v, 0}), o = new_end(c);
                link(f, o);
                open.erase(open.begin() + long(x) + 1);
                open[x] = o;
                break;
            }
            case SliceKind::Split: {
                int v = int(p.vertices.size());
                bool up = word[x].up;
                p.vertices.push_back(PVertex{!up, {-1, -1, -1}});
                attach(open[x], v, 0);
                // up: (in, outR=TR, outL=TL); down: (out, inL=TR, inR=TL)
                int fl = new_end(s.a, PEnd{v, 2}), ol = new_end(s.a);
                int fr = new_end(s.b, PEnd{v, 1}), orr = new_end(s.b);
                link(fl, ol);
                link(fr, orr);
                open[x] = ol;
                open.insert(open.begin() + long(x) + 1, orr);
                break;
            }
            case SliceKind::Crossing: throw Error("web has crossings");
        }
        apply_slice(word, s, n);
    }
    // every remaining piece joins two fixed ends
    for (size_t a = 0; a < ends.size(); ++a) {
        if (ends[a].fixed.v < 0) continue;
        int b = partner[a];
        if (b < 0 || size_t(b) < a || ends[size_t(b)].fixed.v < 0) continue;
        int e = int(p.edges.size());
        PEdge ed;
        ed.color = ends[a].color;
        PEnd x = ends[a].fixed, y = ends[size_t(b)].fixed;
        p.vertices[size_t(x.v)].port_edge[x.port] = e;
        p.vertices[size_t(y.v)].port_edge[y.port] = e;
        if (p.port_is_tail(x.v, x.port)) {
            ed.tail = x;
            ed.head = y;
        } else {
            ed.tail = y;
            ed.head = x;
        }
        p.edges.push_back(ed);
    }
    p.check(n);
    return p;
}

MorseMap morse_map(const PlanarWeb& p) {
    MorseMap m;
    for (size_t v = 0; v < p.vertices.size(); ++v) {
        MorseVertex mv;
        mv.kind = p.vertices[v].merge ? MorseVertex::Kind::FlowMerge : MorseVertex::Kind::FlowSplit;
        for (int k = 0; k < 3; ++k) {
            mv.port_edge.push_back(p.vertices[v].port_edge[k]);
            mv.port_tail.push_back(p.port_is_tail(int(v), k));
        }
        m.vertices.push_back(mv);
    }
    for (auto& e : p.edges) m.edge_color.push_back(e.color);
    m.loop_colors = p.loops;
    return m;
}

SliceWeb to_slices(const PlanarWeb& p) {
    SliceWeb w;
    w.slices = morse_slices(morse_map(p));
    return w;
}

bool Face::valid_sign_type() const {
    if (signs.empty() || signs.size() % 2) return false;
    for (size_t i = 0; i < signs.size(); ++i)
        if (signs[i] == signs[(i + 1) % signs.size()]) return false;
    return true;
}

std::vector<Face> faces(const PlanarWeb& p) {
    std::vector<Face> out;
    // dart 2e+0 runs tail->head, 2e+1 head->tail
    std::vector<char> seen(2 * p.edges.size(), 0);
    std::vector<int> face_count(p.vertices.size(), 0);
    Dsu comp(p.vertices.size());
    for (auto& e : p.edges) comp.unite(e.tail.v, e.head.v);
    for (size_t d0 = 0; d0 < seen.size(); ++d0) {
        if (seen[d0]) continue;
        Face f;
        size_t d = d0;
        while (!seen[d]) {
            seen[d] = 1;
            int e = int(d / 2);
            bool fwd = d % 2 == 0;
            auto& ed = p.edges[size_t(e)];
            f.darts.push_back({e, fwd});
            f.colors.push_back(ed.color);
            PEnd at = fwd ? ed.head : ed.tail;
            f.signs.push_back(p.vertices[size_t(at.v)].merge ? '-' : '+');
            int nport = (at.port + 2) % 3;
            int ne = p.vertices[size_t(at.v)].port_edge[nport];
            auto& nd = p.edges[size_t(ne)];
            bool nfwd = nd.tail.v == at.v && nd.tail.port == nport;
            d = size_t(2 * ne + (nfwd ? 0 : 1));
        }
        face_count[size_t(comp.find(f.darts.empty() ? 0 : p.edges[size_t(f.darts[0].edge)].tail.v))]++;
        out.push_back(std::move(f));
    }
    // Euler characteristic per component
    std::vector<int> V(p.vertices.size(), 0), E(p.vertices.size(), 0);
    for (size_t v = 0; v < p.vertices.size(); ++v) V[size_t(comp.find(int(v)))]++;
    for (auto& e : p.edges) E[size_t(comp.find(e.tail.v))]++;
    for (size_t r = 0; r < p.vertices.size(); ++r)
        if (V[r] > 0 && V[r] - E[r] + face_count[r] != 2) throw Error("no planar embedding");
    for (size_t i = 0; i < p.loops.size(); ++i)
        for (int side = 0; side < 2; ++side) {
            Face f;
            f.darts.push_back({-1 - int(i), side == 0});
            f.colors.push_back(p.loops[i]);
            out.push_back(f);
        }
    return out;
}

std::vector<Face> faces(const SliceWeb& w, int n) { return faces(planar_from_slices(w, n)); }

std::string canonical_code(const PlanarWeb& c) {
    if (c.vertices.empty()) {
        std::vector<int> l = c.loops;
        std::sort(l.begin(), l.end());
        std::string s;
        for (int x : l) s += "L" + std::to_string(x);
        return s;
    }
    std::string best;
    size_t nv = c.vertices.size();
    std::vector<int> num(nv);
    std::vector<int> order;
    for (size_t start = 0; start < nv; ++start) {
        std::fill(num.begin(), num.end(), -1);
        order.clear();
        num[start] = 0;
        order.push_back(int(start));
        std::string code;
        bool worse = false;
        for (size_t i = 0; i < order.size(); ++i) {
            int v = order[i];
            auto& pv = c.vertices[size_t(v)];
            code += pv.merge ? 'm' : 's';
            for (int k = 0; k < 3; ++k) {
                auto& ed = c.edges[size_t(pv.port_edge[k])];
                PEnd other = c.port_is_tail(v, k) ? ed.head : ed.tail;
                if (num[size_t(other.v)] < 0) {
                    num[size_t(other.v)] = int(order.size());
                    order.push_back(other.v);
                }
                code += std::to_string(num[size_t(other.v)]) + "." + std::to_string(other.port) + "." +
                        std::to_string(ed.color) + ",";
            }
            if (!best.empty() && code.compare(0, std::min(code.size(), best.size()), best, 0,
                                              std::min(code.size(), best.size())) > 0) {
                worse = true;
                break;
            }
        }
        if (worse) continue;
        if (order.size() != nv) throw Error("canonical_code needs a connected web");
        if (best.empty() || code < best) best = code;
    }
    return best;
}

std::string web_code(const PlanarWeb& p) {
    std::vector<std::string> codes;
    for (auto& c : p.components()) codes.push_back(canonical_code(c));
    std::sort(codes.begin(), codes.end());
    std::string s;
    for (auto& x : codes) s += x + "|";
    return s;
}

}  // namespace webskein
