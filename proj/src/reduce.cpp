#include "webskein/reduce.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <random>

#include "webskein/cache.hpp"
#include "webskein/program.hpp"

namespace webskein {

std::string relation_name(Relation r) {
    switch (r) {
        case Relation::Circle: return "Circle";
        case Relation::Bigon: return "Bigon";
        case Relation::FourId1: return "FourId1";
        case Relation::FourId2: return "FourId2";
        case Relation::Rect1: return "Rect1";
        case Relation::Rect2: return "Rect2";
        case Relation::Curl: return "Curl";
    }
    return "?";
}

std::optional<Relation> relation_from_name(const std::string& s) {
    for (auto r : {Relation::Circle, Relation::Bigon, Relation::FourId1, Relation::FourId2, Relation::Rect1,
                   Relation::Rect2, Relation::Curl})
        if (relation_name(r) == s) return r;
    return std::nullopt;
}

std::string RelSite::describe() const {
    std::string s = relation_name(rel);
    if (rel == Relation::Circle) return s + " loop " + std::to_string(loop);
    s += (variant & 1) ? " mirrored" : "";
    s += (variant & 2) ? " reversed" : "";
    s += " at";
    for (int v : vmap) s += " " + std::to_string(v);
    s += " (";
    for (size_t i = 0; i < params.size(); ++i) s += (i ? "," : "") + std::to_string(params[i]);
    return s + ")";
}

// ---------------------------------------------------------------- fragments

Fragment fragment_from_program(const Word& bottom, const std::vector<Slice>& slices, int n) {
    struct End {
        FragEnd fixed;
        bool tail = false;
        bool is_fixed = false;
        int color = 0;
    };
    std::vector<End> ends;
    std::vector<int> partner;
    auto new_end = [&](int color) {
        ends.push_back({FragEnd{}, false, false, color});
        partner.push_back(-1);
        return int(ends.size()) - 1;
    };
    auto new_fixed = [&](int color, FragEnd f, bool tail) {
        ends.push_back({f, tail, true, color});
        partner.push_back(-1);
        return int(ends.size()) - 1;
    };
    auto link = [&](int a, int b) {
        partner[size_t(a)] = b;
        partner[size_t(b)] = a;
    };
    Fragment fr;
    auto attach = [&](int a, int v, int port) {
        bool tail = fr.vertices[size_t(v)].merge ? port == 0 : port != 0;
        int f = new_fixed(ends[size_t(a)].color, FragEnd{v, port, -1}, tail);
        link(partner[size_t(a)], f);
    };
    Word word = bottom;
    std::vector<int> open;
    for (auto& s : bottom) {
        int f = new_fixed(s.color, FragEnd{-1, -1, fr.legs++}, s.up);
        int o = new_end(s.color);
        link(f, o);
        open.push_back(o);
    }
    for (auto& s : slices) {
        size_t x = size_t(s.pos);
        if (x >= word.size() + (s.kind == SliceKind::Cup ? 1 : 0)) throw Error("slice position out of range");
        Word before = word;
        if (auto e = apply_slice(word, s, n)) throw Error(*e);
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
                    fr.loops.push_back(ends[size_t(a)].color);
                else
                    link(partner[size_t(a)], partner[size_t(b)]);
                open.erase(open.begin() + long(x), open.begin() + long(x) + 2);
                break;
            }
            case SliceKind::Merge: {
                int v = int(fr.vertices.size());
                fr.vertices.push_back(PVertex{before[x].up, {-1, -1, -1}});
                attach(open[x], v, 1);
                attach(open[x + 1], v, 2);
                int c = before[x].color + before[x + 1].color;
                int f = new_fixed(c, FragEnd{v, 0, -1}, before[x].up), o = new_end(c);
                link(f, o);
                open.erase(open.begin() + long(x) + 1);
                open[x] = o;
                break;
            }
            case SliceKind::Split: {
                int v = int(fr.vertices.size());
                bool up = before[x].up;
                fr.vertices.push_back(PVertex{!up, {-1, -1, -1}});
                attach(open[x], v, 0);
                int fl = new_fixed(s.a, FragEnd{v, 2, -1}, up), ol = new_end(s.a);
                int fr2 = new_fixed(s.b, FragEnd{v, 1, -1}, up), orr = new_end(s.b);
                link(fl, ol);
                link(fr2, orr);
                open[x] = ol;
                open.insert(open.begin() + long(x) + 1, orr);
                break;
            }
            case SliceKind::Crossing: throw Error("web has crossings");
        }
    }
    for (size_t i = 0; i < open.size(); ++i) {
        int f = new_fixed(word[i].color, FragEnd{-1, -1, fr.legs++}, !word[i].up);
        link(partner[size_t(open[i])], f);
    }
    for (size_t a = 0; a < ends.size(); ++a) {
        if (!ends[a].is_fixed) continue;
        int b = partner[a];
        if (b < 0 || size_t(b) < a || !ends[size_t(b)].is_fixed) continue;
        FragEdge ed;
        ed.color = ends[a].color;
        bool a_tail = ends[a].tail;
        ed.tail = a_tail ? ends[a].fixed : ends[size_t(b)].fixed;
        ed.head = a_tail ? ends[size_t(b)].fixed : ends[a].fixed;
        int e = int(fr.edges.size());
        for (auto* end : {&ed.tail, &ed.head})
            if (end->v >= 0) fr.vertices[size_t(end->v)].port_edge[end->port] = e;
        fr.edges.push_back(ed);
    }
    return fr;
}

Fragment mirror(const Fragment& f) {
    Fragment g = f;
    auto sw = [](int p) { return p == 0 ? 0 : 3 - p; };
    for (auto& v : g.vertices) std::swap(v.port_edge[1], v.port_edge[2]);
    for (auto& e : g.edges)
        for (auto* end : {&e.tail, &e.head})
            if (end->v >= 0) end->port = sw(end->port);
    return g;
}

Fragment reversed(const Fragment& f) {
    Fragment g = f;
    for (auto& v : g.vertices) v.merge = !v.merge;
    for (auto& e : g.edges) std::swap(e.tail, e.head);
    return g;
}

namespace {

Fragment transform(const Fragment& f, int variant) {
    Fragment g = f;
    if (variant & 1) g = mirror(g);
    if (variant & 2) g = reversed(g);
    return g;
}

int port_in_variant(int p, int variant) { return (variant & 1) && p != 0 ? 3 - p : p; }

// ---------------------------------------------------------------- patterns

struct Program {
    bool ok = false;
    Word bottom;
    std::vector<Slice> slices;
};

struct RhsTerm {
    LPoly coeff;
    Program prog;
};

Program run_program(const Word& bottom, int n, const std::function<void(ProgramBuilder&)>& f) {
    ProgramBuilder b(bottom, n);
    f(b);
    Program p;
    p.ok = b.ok();
    Word real;
    for (auto& s : bottom)
        if (s.color > 0) real.push_back(s);
    p.bottom = real;
    p.slices = b.slices();
    return p;
}

Word up_word(std::initializer_list<int> colors) {
    Word w;
    for (int c : colors) w.push_back(Strand{c, true});
    return w;
}

Program bigon_lhs(int i, int j, int n) {
    return run_program(up_word({i}), n, [&](ProgramBuilder& b) {
        b.split(0, j, i - j);
        b.merge(0);
    });
}

Program dual_bigon_lhs(int a, int bcol, int n) {
    return run_program(up_word({a}), n, [&](ProgramBuilder& b) {
        b.cup(1, bcol, false);
        b.merge(0);
        b.split(0, a, bcol);
        b.cap(1);
    });
}

Program identity_prog(int c, int n) {
    return run_program(up_word({c}), n, [](ProgramBuilder&) {});
}

Program fourid_merge(int i, int j, int k, bool right_first, int n) {
    return run_program(up_word({i, j, k}), n, [&](ProgramBuilder& b) {
        b.merge(right_first ? 1 : 0);
        b.merge(0);
    });
}

Program square_lhs(int i, int j, int k, int l, int n) {
    return run_program(up_word({j, i + l}), n, [&](ProgramBuilder& b) {
        b.split(1, k, i - k + l);
        b.merge(0);
        b.split(0, i, j + k - i);
        b.merge(1);
    });
}

Program square_rhs(int i, int j, int l, int m, int n) {
    return run_program(up_word({j, i + l}), n, [&](ProgramBuilder& b) {
        b.split(0, i - m, j - i + m);
        b.merge(1);
        b.split(1, m, j + l);
        b.merge(0);
    });
}

// Rect2 written in the same square as Rect1: its bottom edge is i-j+k.
Program rect2_lhs(int i, int j, int k, int l, int n) { return square_lhs(i, j, i - j + k, l, n); }

Program rect2_rhs(int i, int j, int l, int m, int n) {
    return run_program(up_word({j, i + l}), n, [&](ProgramBuilder& b) {
        b.split(0, j - m, m);
        b.merge(1);
        b.split(1, i - j + m, j + l);
        b.merge(0);
    });
}

std::vector<RhsTerm> rect1_terms(int i, int j, int k, int l, int n) {
    std::vector<RhsTerm> out;
    for (int m = 0; m <= i; ++m) {
        LPoly c = qbinom(l, k - m);
        if (c.is_zero()) continue;
        auto p = square_rhs(i, j, l, m, n);
        if (p.ok) out.push_back({c, p});
    }
    return out;
}

std::vector<RhsTerm> rect2_terms(int i, int j, int k, int l, int n) {
    std::vector<RhsTerm> out;
    for (int m = 0; m <= j; ++m) {
        LPoly c = qbinom(l, k - m);
        if (c.is_zero()) continue;
        auto p = rect2_rhs(i, j, l, m, n);
        if (p.ok) out.push_back({c, p});
    }
    return out;
}

using ColorAt = std::function<int(int v, int port)>;

struct Shape {
    Relation rel;
    std::vector<int> variants;
    int face_size;
    Program generic;
    // reads parameters from the colors around the matched vertices (base coordinates)
    std::function<std::vector<int>(const ColorAt&)> params;
    std::function<Program(const std::vector<int>&, int n)> lhs;
    std::function<std::optional<std::vector<RhsTerm>>(const std::vector<int>&, int n)> rhs;
    Fragment base;
};

const int kGenericN = 12;

std::vector<Shape> make_shapes() {
    std::vector<Shape> s;
    auto finish = [&](Shape sh) {
        sh.base = fragment_from_program(sh.generic.bottom, sh.generic.slices, kGenericN);
        s.push_back(std::move(sh));
    };
    // 0: bigon on an i-edge split as (j, i-j)
    finish(Shape{Relation::Bigon, {0, 2}, 2, bigon_lhs(3, 1, kGenericN),
                 [](const ColorAt& c) { return std::vector<int>{c(0, 0), c(0, 2)}; },
                 [](const std::vector<int>& p, int n) { return bigon_lhs(p[0], p[1], n); },
                 [](const std::vector<int>& p, int n) -> std::optional<std::vector<RhsTerm>> {
                     return std::vector<RhsTerm>{{qbinom(p[0], p[1]), identity_prog(p[0], n)}};
                 },
                 {}});
    // 1: bigon formed by an a-edge and a returning b-edge
    finish(Shape{Relation::Bigon, {0, 1, 2, 3}, 2, dual_bigon_lhs(2, 1, kGenericN),
                 [](const ColorAt& c) { return std::vector<int>{c(0, 1), c(0, 2)}; },
                 [](const std::vector<int>& p, int n) { return dual_bigon_lhs(p[0], p[1], n); },
                 [](const std::vector<int>& p, int n) -> std::optional<std::vector<RhsTerm>> {
                     return std::vector<RhsTerm>{{qbinom(n - p[0], p[1]), identity_prog(p[0], n)}};
                 },
                 {}});
    // 2: square; Rect1 when j >= i, Rect2 otherwise
    finish(Shape{Relation::Rect1, {0, 1, 2, 3}, 4, square_lhs(2, 3, 1, 1, kGenericN),
                 [](const ColorAt& c) {
                     int j = c(1, 1), k = c(1, 2), i = c(2, 2), l = c(0, 0) - i;
                     return std::vector<int>{i, j, k, l};
                 },
                 [](const std::vector<int>& p, int n) { return square_lhs(p[0], p[1], p[2], p[3], n); },
                 [](const std::vector<int>& p, int n) -> std::optional<std::vector<RhsTerm>> {
                     int i = p[0], j = p[1], k = p[2], l = p[3];
                     if (rect1_extended(i, j, k, l, n)) return rect1_terms(i, j, k, l, n);
                     int k2 = k - i + j;
                     if (rect2_extended(i, j, k2, l, n)) return rect2_terms(i, j, k2, l, n);
                     return std::nullopt;
                 },
                 {}});
    // 3, 4: re-association of two merges (and, reversed, of two splits)
    for (int dir = 0; dir < 2; ++dir)
        for (int rev = 0; rev < 2; ++rev) {
            bool right_first = dir == 0;
            Relation rel = rev ? Relation::FourId2 : Relation::FourId1;
            finish(Shape{rel, {rev ? 2 : 0}, 0, fourid_merge(2, 3, 4, right_first, kGenericN),
                         [right_first](const ColorAt& c) {
                             if (right_first) return std::vector<int>{c(1, 1), c(0, 1), c(0, 2)};
                             return std::vector<int>{c(0, 1), c(0, 2), c(1, 2)};
                         },
                         [right_first](const std::vector<int>& p, int n) {
                             return fourid_merge(p[0], p[1], p[2], right_first, n);
                         },
                         [right_first](const std::vector<int>& p, int n) -> std::optional<std::vector<RhsTerm>> {
                             return std::vector<RhsTerm>{{LPoly(1), fourid_merge(p[0], p[1], p[2], !right_first, n)}};
                         },
                         {}});
        }
    return s;
}

const std::vector<Shape>& shapes() {
    static const std::vector<Shape> s = make_shapes();
    return s;
}

Relation site_relation(const Shape& sh, const std::vector<int>& p, int n) {
    if (sh.rel == Relation::Rect1 && !rect1_extended(p[0], p[1], p[2], p[3], n)) return Relation::Rect2;
    return sh.rel;
}

// Structural match of fragment f with vertex 0 sent to host vertex h0.
bool match_at(const Fragment& f, const PlanarWeb& h, int h0, std::vector<int>& vmap) {
    vmap.assign(f.vertices.size(), -1);
    std::vector<int> emap(f.edges.size(), -1);
    std::vector<int> host_use(h.edges.size(), 0);  // 1 internal, 2 leg
    std::vector<char> vused(h.vertices.size(), 0);
    if (h.vertices[size_t(h0)].merge != f.vertices[0].merge) return false;
    vmap[0] = h0;
    vused[size_t(h0)] = 1;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int fv = queue.front();
        queue.pop_front();
        int hv = vmap[size_t(fv)];
        for (int k = 0; k < 3; ++k) {
            int fe = f.vertices[size_t(fv)].port_edge[k];
            int he = h.vertices[size_t(hv)].port_edge[k];
            auto& fed = f.edges[size_t(fe)];
            bool internal = fed.tail.v >= 0 && fed.head.v >= 0;
            if (emap[size_t(fe)] >= 0) {
                if (emap[size_t(fe)] != he) return false;
                continue;
            }
            if (internal) {
                if (host_use[size_t(he)]) return false;
                host_use[size_t(he)] = 1;
            } else {
                if (host_use[size_t(he)] == 1) return false;
                host_use[size_t(he)] = 2;
            }
            emap[size_t(fe)] = he;
            if (!internal) continue;
            bool at_tail = fed.tail.v == fv && fed.tail.port == k;
            FragEnd other = at_tail ? fed.head : fed.tail;
            auto& hed = h.edges[size_t(he)];
            PEnd hother = at_tail ? hed.head : hed.tail;
            if (hother.port != other.port) return false;
            if (h.vertices[size_t(hother.v)].merge != f.vertices[size_t(other.v)].merge) return false;
            if (vmap[size_t(other.v)] >= 0) {
                if (vmap[size_t(other.v)] != hother.v) return false;
                continue;
            }
            if (vused[size_t(hother.v)]) return false;
            vused[size_t(hother.v)] = 1;
            vmap[size_t(other.v)] = hother.v;
            queue.push_back(other.v);
        }
    }
    // leg edges must not land on edges already taken as internal, and two leg edges
    // may share a host edge only when that edge runs between their two ports
    for (size_t e = 0; e < f.edges.size(); ++e)
        if (emap[e] < 0) return false;
    return std::all_of(vmap.begin(), vmap.end(), [](int x) { return x >= 0; });
}

int host_color(const PlanarWeb& h, int hv, int port) {
    return h.edges[size_t(h.vertices[size_t(hv)].port_edge[port])].color;
}

// Parameters of a structural match, or nullopt if the colors do not fit the pattern.
std::optional<std::vector<int>> read_params(const Shape& sh, int variant, const PlanarWeb& h,
                                            const std::vector<int>& vmap, int n) {
    ColorAt at = [&](int v, int p) { return host_color(h, vmap[size_t(v)], port_in_variant(p, variant)); };
    auto params = sh.params(at);
    Program lhs = sh.lhs(params, n);
    if (!lhs.ok) return std::nullopt;
    Fragment f;
    try {
        f = transform(fragment_from_program(lhs.bottom, lhs.slices, n), variant);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (f.vertices.size() != sh.base.vertices.size() || f.edges.size() != sh.base.edges.size()) return std::nullopt;
    for (size_t v = 0; v < f.vertices.size(); ++v)
        for (int k = 0; k < 3; ++k)
            if (f.edges[size_t(f.vertices[v].port_edge[k])].color != host_color(h, vmap[v], k)) return std::nullopt;
    return params;
}

PlanarWeb glue(const PlanarWeb& h, const Fragment& lhs, const std::vector<int>& vmap, const Fragment& rhs) {
    std::vector<char> removed_v(h.vertices.size(), 0);
    for (int v : vmap) removed_v[size_t(v)] = 1;
    // host edges touched by the pattern
    std::vector<int> used_e(h.edges.size(), -1);  // -1 untouched, 0 internal, 1 leg
    std::vector<int> leg_host(size_t(lhs.legs), -1);
    for (size_t fv = 0; fv < lhs.vertices.size(); ++fv)
        for (int k = 0; k < 3; ++k) {
            int fe = lhs.vertices[fv].port_edge[k];
            int he = h.vertices[size_t(vmap[fv])].port_edge[k];
            auto& fed = lhs.edges[size_t(fe)];
            bool internal = fed.tail.v >= 0 && fed.head.v >= 0;
            used_e[size_t(he)] = internal ? 0 : 1;
            if (!internal) leg_host[size_t(fed.tail.v >= 0 ? fed.head.leg : fed.tail.leg)] = he;
        }
    PlanarWeb out;
    out.loops = h.loops;
    out.loops.insert(out.loops.end(), rhs.loops.begin(), rhs.loops.end());
    std::vector<int> vnew(h.vertices.size(), -1);
    for (size_t v = 0; v < h.vertices.size(); ++v)
        if (!removed_v[v]) {
            vnew[v] = int(out.vertices.size());
            out.vertices.push_back(PVertex{h.vertices[v].merge, {-1, -1, -1}});
        }
    int rbase = int(out.vertices.size());
    for (auto& v : rhs.vertices) out.vertices.push_back(PVertex{v.merge, {-1, -1, -1}});
    auto add_edge = [&](int color, PEnd t, PEnd hd) {
        int e = int(out.edges.size());
        out.edges.push_back(PEdge{color, t, hd});
        out.vertices[size_t(t.v)].port_edge[t.port] = e;
        out.vertices[size_t(hd.v)].port_edge[hd.port] = e;
    };
    for (size_t e = 0; e < h.edges.size(); ++e)
        if (used_e[e] < 0) {
            auto& ed = h.edges[e];
            add_edge(ed.color, PEnd{vnew[size_t(ed.tail.v)], ed.tail.port}, PEnd{vnew[size_t(ed.head.v)], ed.head.port});
        }
    // pieces: rhs edges, then one per touched host leg edge
    size_t nr = rhs.edges.size();
    std::vector<int> piece_of_host(h.edges.size(), -1);
    int np = int(nr);
    for (size_t e = 0; e < h.edges.size(); ++e)
        if (used_e[e] == 1) piece_of_host[e] = np++;
    std::vector<int> parent(static_cast<size_t>(np));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[size_t(x)] == x ? x : parent[size_t(x)] = find(parent[size_t(x)]); };
    std::vector<int> color(size_t(np), 0);
    for (size_t r = 0; r < nr; ++r) {
        auto& ed = rhs.edges[r];
        color[r] = ed.color;
        for (auto* end : {&ed.tail, &ed.head})
            if (end->leg >= 0) parent[size_t(find(int(r)))] = find(piece_of_host[size_t(leg_host[size_t(end->leg)])]);
    }
    struct Ends {
        std::vector<std::pair<PEnd, bool>> e;  // end, is tail
        int color = 0;
    };
    std::vector<Ends> cls(static_cast<size_t>(np));
    for (size_t r = 0; r < nr; ++r) {
        auto& ed = rhs.edges[r];
        auto& c = cls[size_t(find(int(r)))];
        c.color = ed.color;
        if (ed.tail.v >= 0) c.e.push_back({PEnd{rbase + ed.tail.v, ed.tail.port}, true});
        if (ed.head.v >= 0) c.e.push_back({PEnd{rbase + ed.head.v, ed.head.port}, false});
    }
    for (size_t e = 0; e < h.edges.size(); ++e) {
        if (used_e[e] != 1) continue;
        auto& ed = h.edges[e];
        auto& c = cls[size_t(find(piece_of_host[e]))];
        c.color = ed.color;
        if (!removed_v[size_t(ed.tail.v)]) c.e.push_back({PEnd{vnew[size_t(ed.tail.v)], ed.tail.port}, true});
        if (!removed_v[size_t(ed.head.v)]) c.e.push_back({PEnd{vnew[size_t(ed.head.v)], ed.head.port}, false});
    }
    for (int p = 0; p < np; ++p) {
        if (find(p) != p) continue;
        auto& c = cls[size_t(p)];
        if (c.e.empty()) {
            out.loops.push_back(c.color);
            continue;
        }
        if (c.e.size() != 2 || c.e[0].second == c.e[1].second) throw Error("internal: bad gluing");
        auto t = c.e[0].second ? c.e[0].first : c.e[1].first;
        auto hd = c.e[0].second ? c.e[1].first : c.e[0].first;
        add_edge(c.color, t, hd);
    }
    return out;
}

}  // namespace

bool rect1_in_range(int i, int j, int k, int l, int n) {
    return n - i - 1 >= j && j >= i && i >= k && k >= 0 && n - i - j - 1 >= l && l >= 0;
}

bool rect2_in_range(int i, int j, int k, int l, int n) {
    return n - j - 1 >= i && i >= j && j >= k && k >= 1 && n - i - j - 1 >= l && l >= 1;
}

// Outside the stated bounds the same sums still hold once terms with a color above n are
// dropped (checked exhaustively for n <= 5 by relcheck --extended).
bool rect1_extended(int i, int j, int k, int l, int n) {
    return j >= i && i >= k && k >= 0 && l >= 0 && i + l <= n && j + l <= n && j + k <= n;
}

bool rect2_extended(int i, int j, int k, int l, int n) {
    return i >= j && j >= k && k >= 0 && l >= 0 && i + l <= n && j + l <= n && i + k <= n;
}

std::vector<RelSite> find_sites(const PlanarWeb& w, Relation rel, int n) {
    std::vector<RelSite> out;
    if (rel == Relation::Circle) {
        for (size_t i = 0; i < w.loops.size(); ++i) {
            RelSite s;
            s.rel = rel;
            s.loop = int(i);
            s.params = {w.loops[i]};
            s.face_size = 1;
            out.push_back(s);
        }
        return out;
    }
    auto& sh = shapes();
    for (size_t si = 0; si < sh.size(); ++si) {
        bool square = sh[si].rel == Relation::Rect1;
        if (square ? (rel != Relation::Rect1 && rel != Relation::Rect2) : sh[si].rel != rel) continue;
        for (int var : sh[si].variants) {
            Fragment t = transform(sh[si].base, var);
            std::vector<int> vmap;
            for (size_t h0 = 0; h0 < w.vertices.size(); ++h0) {
                if (!match_at(t, w, int(h0), vmap)) continue;
                auto p = read_params(sh[si], var, w, vmap, n);
                if (!p) continue;
                if (square) {
                    if (!sh[si].rhs(*p, n)) continue;
                    if (site_relation(sh[si], *p, n) != rel) continue;
                }
                RelSite s;
                s.rel = rel;
                s.shape = int(si);
                s.variant = var;
                s.vmap = vmap;
                s.params = *p;
                s.face_size = sh[si].face_size;
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

std::vector<PlanarTerm> apply_site(const PlanarWeb& w, const RelSite& s, int n) {
    if (s.rel == Relation::Circle) {
        if (s.loop < 0 || s.loop >= int(w.loops.size())) throw Error("relation not applicable");
        PlanarWeb r = w;
        int c = r.loops[size_t(s.loop)];
        r.loops.erase(r.loops.begin() + s.loop);
        return {{qbinom(n, c), r}};
    }
    auto& sh = shapes();
    if (s.shape < 0 || s.shape >= int(sh.size())) throw Error("relation not applicable");
    auto& shape = sh[size_t(s.shape)];
    if (std::find(shape.variants.begin(), shape.variants.end(), s.variant) == shape.variants.end())
        throw Error("relation not applicable");
    Fragment t = transform(shape.base, s.variant);
    std::vector<int> vmap;
    if (s.vmap.empty() || s.vmap[0] < 0 || s.vmap[0] >= int(w.vertices.size()) || !match_at(t, w, s.vmap[0], vmap) ||
        vmap != s.vmap)
        throw Error("relation not applicable");
    auto p = read_params(shape, s.variant, w, vmap, n);
    if (!p || *p != s.params) throw Error("relation not applicable");
    auto terms = shape.rhs(*p, n);
    if (!terms || site_relation(shape, *p, n) != s.rel) throw Error("relation not applicable");
    Program lp = shape.lhs(*p, n);
    Fragment lhs = transform(fragment_from_program(lp.bottom, lp.slices, n), s.variant);
    std::vector<PlanarTerm> out;
    for (auto& rt : *terms) {
        Fragment rhs = transform(fragment_from_program(rt.prog.bottom, rt.prog.slices, n), s.variant);
        if (rhs.legs != lhs.legs) throw Error("internal: leg mismatch");
        out.push_back({rt.coeff, glue(w, lhs, vmap, rhs)});
    }
    return out;
}

std::vector<RelSite> find_sites(const SliceWeb& w, Relation rel, int n) { return find_sites(planar_from_slices(w, n), rel, n); }

WebSum apply_relation(const SliceWeb& w, const RelSite& site, Relation rel, int n) {
    if (site.rel != rel) throw Error("relation not applicable");
    PlanarWeb p = planar_from_slices(w, n);
    WebSum out;
    for (auto& t : apply_site(p, site, n)) out.add(t.coeff, to_slices(t.web));
    return out;
}

// ---------------------------------------------------------------- identities

std::vector<LocalIdentity> local_identities(int n, int max_l, bool extended) {
    std::vector<LocalIdentity> out;
    auto lbl = [](std::initializer_list<int> xs) {
        std::string s = "(";
        bool first = true;
        for (int x : xs) {
            s += (first ? "" : ",") + std::to_string(x);
            first = false;
        }
        return s + ")";
    };
    for (int c = 1; c <= n; ++c) {
        LocalIdentity id{Relation::Circle, "circle " + lbl({c}), {}, {Slice::cup(0, c, true), Slice::cap(0)}, {}};
        id.rhs.push_back({qbinom(n, c), {}});
        out.push_back(id);
    }
    for (int i = 2; i <= n; ++i)
        for (int j = 1; j < i; ++j) {
            auto l = bigon_lhs(i, j, n);
            out.push_back({Relation::Bigon, "bigon " + lbl({i, j}), l.bottom, l.slices, {{qbinom(i, j), {}}}});
        }
    for (int a = 1; a < n; ++a)
        for (int b = 1; a + b <= n; ++b) {
            auto l = dual_bigon_lhs(a, b, n);
            out.push_back({Relation::Bigon, "returning bigon " + lbl({a, b}), l.bottom, l.slices, {{qbinom(n - a, b), {}}}});
        }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; i + j <= n; ++j)
            for (int k = 1; i + j + k <= n; ++k) {
                auto a = fourid_merge(i, j, k, true, n), b = fourid_merge(i, j, k, false, n);
                out.push_back({Relation::FourId1, "merges " + lbl({i, j, k}), a.bottom, a.slices, {{LPoly(1), b.slices}}});
                SliceWeb ra{a.bottom, a.slices}, rb{b.bottom, b.slices};
                ra = reverse_orientation(ra);
                rb = reverse_orientation(rb);
                out.push_back(
                    {Relation::FourId2, "splits " + lbl({i, j, k}), ra.bottom, ra.slices, {{LPoly(1), rb.slices}}});
            }
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k)
                for (int l = 0; l <= max_l; ++l) {
                    if (extended ? rect1_extended(i, j, k, l, n) : rect1_in_range(i, j, k, l, n)) {
                        auto lhs = square_lhs(i, j, k, l, n);
                        if (!lhs.ok) continue;
                        std::string name = "rect1 " + lbl({i, j, k, l});
                        if (k == 0) name += " anchor k=0";
                        if (i == 0) name += " anchor i=0";
                        LocalIdentity id{Relation::Rect1, name, lhs.bottom, lhs.slices, {}};
                        for (auto& t : rect1_terms(i, j, k, l, n)) id.rhs.push_back({t.coeff, t.prog.slices});
                        out.push_back(id);
                    }
                    if (extended ? rect2_extended(i, j, k, l, n) : rect2_in_range(i, j, k, l, n)) {
                        auto lhs = rect2_lhs(i, j, k, l, n);
                        if (!lhs.ok) continue;
                        LocalIdentity id{Relation::Rect2, "rect2 " + lbl({i, j, k, l}), lhs.bottom, lhs.slices, {}};
                        for (auto& t : rect2_terms(i, j, k, l, n)) id.rhs.push_back({t.coeff, t.prog.slices});
                        out.push_back(id);
                    }
                }
    // i = 0 with k > 0 lies outside the ordering j >= i >= k but still holds: one term, qbinom(l, k)
    for (int j = 0; j < n; ++j)
        for (int k = 1; k <= max_l; ++k)
            for (int l = k; l <= max_l; ++l) {
                if (j + l > n || j + k > n) continue;
                auto lhs = square_lhs(0, j, k, l, n);
                if (!lhs.ok) continue;
                LocalIdentity id{Relation::Rect1, "rect1 " + lbl({0, j, k, l}) + " anchor i=0", lhs.bottom, lhs.slices,
                                 {}};
                for (auto& t : rect1_terms(0, j, k, l, n)) id.rhs.push_back({t.coeff, t.prog.slices});
                out.push_back(id);
            }
    return out;
}

// ---------------------------------------------------------------- reducer

Reducer::Value Reducer::whole(const PlanarWeb& w) {
    Value v{false, LPoly(1), false};
    for (auto& c : w.components()) {
        Value x = component(c);
        v.cyclic = v.cyclic || x.cyclic;
        if (x.stuck) {
            v.stuck = true;
            v.value = LPoly();
            return v;
        }
        v.value *= x.value;
        if (v.value.is_zero()) break;
    }
    return v;
}

Reducer::Value Reducer::try_terms(const std::vector<PlanarTerm>& terms, Relation rel, const RelSite& s) {
    Value sum{false, LPoly(), false};
    if (tracing_) {
        TraceStep t{rel, s.describe(), {}};
        for (auto& x : terms) t.coeffs.push_back(x.coeff);
        trace_.push_back(std::move(t));
    }
    for (auto& t : terms) {
        Value v = whole(t.web);
        sum.cyclic = sum.cyclic || v.cyclic;
        if (v.stuck) {
            sum.stuck = true;
            return sum;
        }
        sum.value += t.coeff * v.value;
    }
    return sum;
}

Reducer::Value Reducer::component(const PlanarWeb& c) {
    if (c.vertices.empty()) {
        LPoly v(1);
        for (int col : c.loops) {
            if (tracing_) trace_.push_back({Relation::Circle, "loop", {qbinom(n_, col)}});
            v *= qbinom(n_, col);
        }
        return {false, v, false};
    }
    std::string code = canonical_code(c);
    if (auto it = memo_.find(code); it != memo_.end()) return it->second;
    if (active_.count(code) || failed_.count(code)) return {true, LPoly(), true};
    if (++steps_ > budget_) return {true, LPoly(), true};
    active_.insert(code);
    Value result{true, LPoly(), false};
    bool done = false;
    auto attempt = [&](Relation rel, size_t max_sites) {
        auto sites = find_sites(c, rel, n_);
        if (seed_) {
            std::mt19937_64 rng(seed_ ^ fnv1a(code) ^ uint64_t(rel));
            std::shuffle(sites.begin(), sites.end(), rng);
        } else {
            std::stable_sort(sites.begin(), sites.end(),
                             [](const RelSite& a, const RelSite& b) { return a.face_size < b.face_size; });
        }
        for (size_t i = 0; i < sites.size() && i < max_sites && !done; ++i) {
            Value v = try_terms(apply_site(c, sites[i], n_), rel, sites[i]);
            result.cyclic = result.cyclic || v.cyclic;
            if (!v.stuck) {
                result = {false, v.value, result.cyclic};
                done = true;
            }
        }
    };
    attempt(Relation::Bigon, 2);
    bool swap = seed_ && ((seed_ ^ fnv1a(code)) & 1);
    if (!done) attempt(swap ? Relation::Rect2 : Relation::Rect1, 4);
    if (!done) attempt(swap ? Relation::Rect1 : Relation::Rect2, 4);
    if (!done && depth_ > 0) {
        // restructure with re-associations until some other relation applies
        std::vector<PlanarWeb> frontier{c};
        std::unordered_set<std::string> seen{code};
        for (int d = 0; d < depth_ && !done; ++d) {
            std::vector<PlanarWeb> next;
            for (auto& w : frontier) {
                for (auto rel : {Relation::FourId1, Relation::FourId2}) {
                    for (auto& s : find_sites(w, rel, n_)) {
                        auto t = apply_site(w, s, n_);
                        std::string k = canonical_code(t[0].web);
                        if (!seen.insert(k).second) continue;
                        PlanarWeb x = t[0].web;
                        bool useful = !find_sites(x, Relation::Bigon, n_).empty() ||
                                      !find_sites(x, Relation::Rect1, n_).empty() ||
                                      !find_sites(x, Relation::Rect2, n_).empty();
                        if (useful && !active_.count(k)) {
                            if (tracing_) trace_.push_back({rel, s.describe(), {LPoly(1)}});
                            Value v = component(x);
                            result.cyclic = result.cyclic || v.cyclic;
                            if (!v.stuck) {
                                result = {false, v.value, result.cyclic};
                                done = true;
                                break;
                            }
                        }
                        next.push_back(std::move(x));
                    }
                    if (done) break;
                }
                if (done) break;
            }
            frontier = std::move(next);
        }
    }
    active_.erase(code);
    if (!done && !stuck_web_) stuck_web_ = c;
    if (done || !result.cyclic)
        memo_[code] = result;
    else
        failed_.insert(code);
    return result;
}

ReduceResult Reducer::reduce(const PlanarWeb& w) {
    stuck_web_.reset();
    trace_.clear();
    failed_.clear();
    steps_ = 0;
    Value v = whole(w);
    ReduceResult r;
    r.stuck = v.stuck;
    r.value = v.value;
    r.trace = std::move(trace_);
    trace_.clear();
    if (v.stuck && stuck_web_) r.residual = to_slices(*stuck_web_);
    return r;
}

ReduceResult Reducer::reduce(const SliceWeb& w) { return reduce(planar_from_slices(w, n_)); }

ReduceResult reduce_web(const SliceWeb& w, int n) {
    Reducer r(n);
    return r.reduce(w);
}

}  // namespace webskein
