#include "webskein/compile.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace webskein {

namespace {

struct Entry {
    int edge;
    bool up;
};

struct Option {
    int t;   // first bottom port
    int nb;  // number of bottom ports
};

std::vector<Option> options(const MorseVertex& v) {
    switch (v.kind) {
        case MorseVertex::Kind::Crossing: return {{0, 2}};
        case MorseVertex::Kind::FlowMerge: return {{1, 2}, {0, 1}};
        case MorseVertex::Kind::FlowSplit: return {{0, 1}, {1, 2}};
    }
    return {};
}

int pmod(int a, int d) { return ((a % d) + d) % d; }

[[noreturn]] void fail() { throw Error("no planar embedding"); }

class Sweep {
public:
    Sweep(const MorseMap& m) : m_(m) {
        int ne = int(m.edge_color.size());
        ends_.assign(size_t(ne), {});
        for (int v = 0; v < int(m.vertices.size()); ++v) {
            auto& mv = m.vertices[v];
            if (mv.port_edge.size() != mv.port_tail.size()) throw Error("malformed vertex");
            for (int p = 0; p < int(mv.port_edge.size()); ++p) ends_[mv.port_edge[p]].push_back({v, p});
        }
        for (auto& e : ends_)
            if (e.size() != 2) throw Error("edge must have exactly two ends");
        placed_.assign(m.vertices.size(), 0);
    }

    std::vector<Slice> run() {
        for (int c : m_.loop_colors) {
            out_.push_back(Slice::cup(0, c, true));
            out_.push_back(Slice::cap(0));
        }
        for (auto& piece : pieces()) {
            st_ = State{};
            Plan first = plan(piece[0]);
            if (!first.ok) fail();
            apply(st_, first);
            placed_[piece[0]] = 1;
            size_t remaining = piece.size() - 1;
            while (remaining > 0) {
                if (!step(piece)) fail();
                --remaining;
            }
            if (!st_.F.empty()) fail();
            out_.insert(out_.end(), st_.out.begin(), st_.out.end());
        }
        return out_;
    }

private:
    struct End {
        int v, port;
    };

    int other_vertex(int edge, int v, int port) const {
        auto& e = ends_[edge];
        if (e[0].v == v && e[0].port == port) return e[1].v;
        return e[0].v;
    }

    std::vector<std::vector<int>> pieces() const {
        int nv = int(m_.vertices.size());
        std::vector<int> seen(size_t(nv), 0);
        std::vector<std::vector<int>> out;
        for (int s = 0; s < nv; ++s) {
            if (seen[s]) continue;
            std::vector<int> piece{s}, stack{s};
            seen[s] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int e : m_.vertices[v].port_edge)
                    for (auto& en : ends_[e])
                        if (!seen[en.v]) {
                            seen[en.v] = 1;
                            piece.push_back(en.v);
                            stack.push_back(en.v);
                        }
            }
            out.push_back(piece);
        }
        return out;
    }

    // is the unplaced part of the piece still connected once u is removed?
    bool remainder_connected(const std::vector<int>& piece, int u) const {
        int start = -1, count = 0;
        for (int v : piece)
            if (!placed_[v] && v != u) {
                ++count;
                if (start < 0) start = v;
            }
        if (count <= 1) return true;
        std::vector<int> seen(m_.vertices.size(), 0), stack{start};
        seen[start] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : m_.vertices[v].port_edge)
                for (auto& en : ends_[e])
                    if (!placed_[en.v] && en.v != u && !seen[en.v]) {
                        seen[en.v] = 1;
                        ++reached;
                        stack.push_back(en.v);
                    }
        }
        return reached == count;
    }

    struct State {
        std::vector<Entry> F;
        std::vector<Slice> out;

        void rotate_left_to_right(const MorseMap& m) {
            Entry x = F.front();
            for (auto& s : out) s.pos += 1;
            out.insert(out.begin(), Slice::cup(0, m.edge_color[x.edge], x.up));
            out.push_back(Slice::cap(0));
            F.erase(F.begin());
            F.push_back(x);
        }

        void rotate_right_to_left(const MorseMap& m) {
            Entry y = F.back();
            for (auto& s : out) s.pos += 1;
            out.insert(out.begin(), Slice::cup(0, m.edge_color[y.edge], !y.up));
            out.push_back(Slice::cap(int(F.size())));
            F.pop_back();
            F.insert(F.begin(), y);
        }

        void cap_pass() {
            for (int i = 0; i + 1 < int(F.size());) {
                if (F[i].edge == F[i + 1].edge) {
                    out.push_back(Slice::cap(i));
                    F.erase(F.begin() + i, F.begin() + i + 2);
                    i = std::max(0, i - 1);
                } else {
                    ++i;
                }
            }
        }
    };

    // a candidate placement: S ports of u in ccw order from s0, k of them,
    // occupying F[r .. r+k) once the frontier is rotated
    struct Plan {
        bool ok = false;
        int u = -1;
        int s0 = 0, k = 0, r = 0, rot = 0;  // rot > 0: rotate left to right; < 0: right to left
        Option opt{};
        int a = 0, cost = std::numeric_limits<int>::max();
    };

    Plan plan(int u) const {
        Plan best;
        auto& mv = m_.vertices[u];
        int d = int(mv.port_edge.size());
        int m = int(st_.F.size());
        // F index of each port connected to the placed part
        std::vector<int> fpos(size_t(d), -1);
        int k = 0;
        for (int p = 0; p < d; ++p) {
            int e = mv.port_edge[p];
            if (other_vertex(e, u, p) == u) continue;
            for (int i = 0; i < m; ++i)
                if (st_.F[i].edge == e) {
                    fpos[p] = i;
                    ++k;
                    break;
                }
        }
        if (k == 0 && m > 0) return best;
        auto partner = [&](int p) {
            int e = mv.port_edge[p];
            for (int q = 0; q < d; ++q)
                if (q != p && mv.port_edge[q] == e) return q;
            return -1;
        };
        for (int s0 = 0; s0 < d; ++s0) {
            int r = 0, rot = 0, kk = 0;
            if (k > 0) {
                if (fpos[s0] < 0) continue;
                // walk ccw from s0 until every S port is seen; loops at u may sit in between
                int seen = 0;
                bool okrun = true;
                std::vector<int> stack;
                while (seen < k && kk < d && okrun) {
                    int p = (s0 + kk) % d;
                    ++kk;
                    if (fpos[p] >= 0) {
                        if (fpos[p] != (fpos[s0] + seen) % m) okrun = false;
                        ++seen;
                        if (!stack.empty()) okrun = false;
                    } else if (partner(p) >= 0) {
                        if (!stack.empty() && stack.back() == partner(p))
                            stack.pop_back();
                        else
                            stack.push_back(p);
                    } else {
                        okrun = false;
                    }
                }
                if (!okrun || seen < k || !stack.empty()) continue;
                r = fpos[s0];
                if (r + k > m) {
                    int left = r + k - m, right = m - r;
                    rot = left <= right ? left : -right;
                }
            }
            for (auto opt : options(mv)) {
                int base = pmod(opt.t - s0, d);
                for (int a = base - 2 * d; a <= base + 2 * d; a += d) {
                    if (a < kk - d || a + opt.nb - 1 > d - 1) continue;
                    if (a > kk || a + opt.nb < 0) continue;
                    Plan c;
                    c.ok = true;
                    c.u = u;
                    c.s0 = s0;
                    c.k = kk;
                    c.r = r;
                    c.rot = rot;
                    c.opt = opt;
                    c.a = a;
                    State sim = st_;
                    apply(sim, c);
                    // an edge with both ends placed but not capped cannot be closed later
                    bool stuck = false;
                    for (size_t i = 0; i < sim.F.size() && !stuck; ++i)
                        for (size_t j = i + 1; j < sim.F.size() && !stuck; ++j) stuck = sim.F[i].edge == sim.F[j].edge;
                    if (stuck) continue;
                    c.cost = int(sim.out.size() - st_.out.size()) + int(sim.F.size());
                    if (c.cost < best.cost) best = c;
                }
            }
        }
        return best;
    }

    bool step(const std::vector<int>& piece) {
        Plan best;
        bool best_conn = false;
        for (int u : piece) {
            if (placed_[u]) continue;
            Plan p = plan(u);
            if (!p.ok) continue;
            bool conn = remainder_connected(piece, u);
            if (!best.ok || (conn && !best_conn) || (conn == best_conn && p.cost < best.cost)) {
                best = p;
                best_conn = conn;
            }
        }
        if (!best.ok) return false;
        apply(st_, best);
        placed_[best.u] = 1;
        return true;
    }

    void apply(State& st, const Plan& pl) const {
        auto& F = st.F;
        int r = pl.r;
        for (int i = 0; i < pl.rot; ++i) st.rotate_left_to_right(m_);
        for (int i = 0; i < -pl.rot; ++i) st.rotate_right_to_left(m_);
        if (pl.rot > 0) r -= pl.rot;
        if (pl.rot < 0) r = 0;
        auto& mv = m_.vertices[pl.u];
        int d = int(mv.port_edge.size());
        int k = pl.k, a = pl.a, s0 = pl.s0;
        Option opt = pl.opt;
        auto port = [&](int idx) { return pmod(s0 + idx, d); };
        auto port_up_below = [&](int p) { return !mv.port_tail[p]; };  // flow goes up into u
        {
            // loops of u lying inside the run are brought down with a cup
            std::vector<int> open;
            int pos = r;
            for (int idx = 0; idx < k; ++idx) {
                int p = port(idx);
                int e = mv.port_edge[p];
                int q = -1;
                for (int x = 0; x < d; ++x)
                    if (x != p && mv.port_edge[x] == e) q = x;
                if (q < 0) {
                    ++pos;
                } else if (!open.empty() && open.back() == q) {
                    open.pop_back();
                    ++pos;
                } else {
                    open.push_back(p);
                    bool up = port_up_below(p);
                    st.out.push_back(Slice::cup(pos, m_.edge_color[e], !up));
                    F.insert(F.begin() + pos, {{e, up}, {e, !up}});
                    ++pos;
                }
            }
        }
        int lext = std::max(0, -a), rext = std::max(0, a + opt.nb - k);
        int lshr = std::max(0, a);
        int spart_len = std::max(0, std::min(a + opt.nb, k) - std::max(a, 0));
        int P = r + lshr;
        for (int i = 0; i < lext; ++i) {
            int p = port(-1 - i);
            int e = mv.port_edge[p];
            bool up = port_up_below(p);
            st.out.push_back(Slice::cup(P + i, m_.edge_color[e], up));
            F.insert(F.begin() + P + i, {{e, !up}, {e, up}});
        }
        int Q = P + 2 * lext + spart_len;
        for (int i = 0; i < rext; ++i) {
            int p = port(k + i);
            int e = mv.port_edge[p];
            bool up = port_up_below(p);
            st.out.push_back(Slice::cup(Q + i, m_.edge_color[e], !up));
            F.insert(F.begin() + Q + i, {{e, up}, {e, !up}});
        }
        int Pb = P + lext;
        Slice s;
        auto col = [&](int idx) { return m_.edge_color[mv.port_edge[port(idx)]]; };
        switch (mv.kind) {
            case MorseVertex::Kind::Crossing: s = Slice::crossing(Pb, mv.sign); break;
            case MorseVertex::Kind::FlowMerge:
            case MorseVertex::Kind::FlowSplit:
                if (opt.nb == 2)
                    s = Slice::merge(Pb);
                else
                    s = Slice::split(Pb, col(a + 2), col(a + 1));
                break;
        }
        st.out.push_back(s);
        std::vector<Entry> tops;
        for (int idx = a + d - 1; idx >= a + opt.nb; --idx) {
            int p = port(idx);
            tops.push_back({mv.port_edge[p], bool(mv.port_tail[p])});
        }
        F.erase(F.begin() + Pb, F.begin() + Pb + opt.nb);
        F.insert(F.begin() + Pb, tops.begin(), tops.end());
        st.cap_pass();
    }

    const MorseMap& m_;
    std::vector<std::vector<End>> ends_;
    std::vector<char> placed_;
    State st_;
    std::vector<Slice> out_;
};

}  // namespace

std::vector<Slice> morse_slices(const MorseMap& m) { return Sweep(m).run(); }

MorseMap morse_map(const Diagram& d, const Coloring& mu) {
    MorseMap m;
    m.edge_color.assign(size_t(d.num_arcs()), 0);
    for (int a = 0; a < d.num_arcs(); ++a) m.edge_color[a] = mu.at(size_t(d.component_of(a)));
    for (auto& c : d.crossings()) {
        MorseVertex v;
        v.kind = MorseVertex::Kind::Crossing;
        v.sign = c.sign;
        for (auto& e : ccw_ends(c)) {
            v.port_edge.push_back(e.arc);
            v.port_tail.push_back(!e.in);
        }
        m.vertices.push_back(v);
    }
    // free loops get no vertex; renumber the remaining edges
    std::vector<int> remap(size_t(d.num_arcs()), -1);
    std::vector<int> colors;
    for (int a = 0; a < d.num_arcs(); ++a) {
        if (d.is_free_loop(a)) {
            m.loop_colors.push_back(m.edge_color[a]);
        } else {
            remap[a] = int(colors.size());
            colors.push_back(m.edge_color[a]);
        }
    }
    for (auto& v : m.vertices)
        for (auto& e : v.port_edge) e = remap[e];
    m.edge_color = colors;
    return m;
}

SliceWeb compile(const Diagram& d, const Coloring& mu, int n) {
    check_coloring(d, mu, n);
    SliceWeb w;
    w.slices = morse_slices(morse_map(d, mu));
    return w;
}

}  // namespace webskein
