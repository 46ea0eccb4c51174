#include "webskein/web.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "webskein/program.hpp"

namespace webskein {

int Slice::width_in() const {
    switch (kind) {
        case SliceKind::Cup: return 0;
        case SliceKind::Split: return 1;
        default: return 2;
    }
}

int Slice::width_out() const {
    switch (kind) {
        case SliceKind::Cap: return 0;
        case SliceKind::Merge: return 1;
        default: return 2;
    }
}

bool Slice::operator==(const Slice& o) const {
    if (kind != o.kind || pos != o.pos) return false;
    switch (kind) {
        case SliceKind::Cup: return a == o.a && ccw == o.ccw;
        case SliceKind::Split: return a == o.a && b == o.b;
        case SliceKind::Crossing: return sign == o.sign;
        default: return true;
    }
}

std::optional<std::string> apply_slice(Word& w, const Slice& s, int n) {
    int p = s.pos;
    int width = int(w.size());
    auto bad = [&](const std::string& m) { return std::optional<std::string>(m); };
    if (p < 0 || p + s.width_in() > width) return bad("slice position out of range");
    switch (s.kind) {
        case SliceKind::Cup: {
            if (s.a < 1 || s.a > n) return bad(s.a > n ? "color exceeds n" : "color must be positive");
            Strand l{s.a, !s.ccw}, r{s.a, s.ccw};
            w.insert(w.begin() + p, {l, r});
            return std::nullopt;
        }
        case SliceKind::Cap: {
            Strand l = w[p], r = w[p + 1];
            if (l.color != r.color) return bad("cap joins strands of different colors");
            if (l.up == r.up) return bad("cap joins strands of the same direction");
            w.erase(w.begin() + p, w.begin() + p + 2);
            return std::nullopt;
        }
        case SliceKind::Merge: {
            Strand l = w[p], r = w[p + 1];
            if (l.up != r.up) return bad("merge of strands with opposite directions");
            if (l.color + r.color > n) return bad("color exceeds n");
            w.erase(w.begin() + p + 1);
            w[p].color = l.color + r.color;
            return std::nullopt;
        }
        case SliceKind::Split: {
            Strand c = w[p];
            if (s.a < 1 || s.b < 1) return bad("split produces a nonpositive color");
            if (s.a + s.b != c.color) return bad("split colors do not sum to the input color");
            w[p].color = s.a;
            w.insert(w.begin() + p + 1, Strand{s.b, c.up});
            return std::nullopt;
        }
        case SliceKind::Crossing: {
            if (!w[p].up || !w[p + 1].up) return bad("crossing strands must both point up");
            if (s.sign != 1 && s.sign != -1) return bad("crossing sign must be +1 or -1");
            std::swap(w[p], w[p + 1]);
            return std::nullopt;
        }
    }
    return bad("unknown slice");
}

Word top_word(const SliceWeb& w, int n) {
    Word x = w.bottom;
    for (auto& s : w.slices)
        if (auto e = apply_slice(x, s, n)) throw Error(*e);
    return x;
}

std::optional<std::string> validate(const SliceWeb& w, int n, bool require_closed, bool allow_crossings) {
    Word x = w.bottom;
    for (auto& st : x) {
        if (st.color < 1) return "color must be positive";
        if (st.color > n) return "color exceeds n";
    }
    for (size_t i = 0; i < w.slices.size(); ++i) {
        if (!allow_crossings && w.slices[i].kind == SliceKind::Crossing)
            return "slice " + std::to_string(i) + ": crossing in a web";
        if (auto e = apply_slice(x, w.slices[i], n)) return "slice " + std::to_string(i) + ": " + *e;
    }
    if (require_closed && (!w.bottom.empty() || !x.empty())) return "web is not closed";
    return std::nullopt;
}

bool has_crossings(const SliceWeb& w) {
    for (auto& s : w.slices)
        if (s.kind == SliceKind::Crossing) return true;
    return false;
}

namespace {

// Given s1 followed by s2, returns (s2', s1') with s2' first when they act on disjoint strands.
bool commute(const Slice& s1, const Slice& s2, Slice& s2p, Slice& s1p) {
    int p1 = s1.pos, o1 = s1.width_out(), i1 = s1.width_in();
    int p2 = s2.pos, i2 = s2.width_in(), o2 = s2.width_out();
    if (p2 + i2 <= p1) {
        s2p = s2;
        s1p = s1;
        s1p.pos = p1 + o2 - i2;
        return true;
    }
    if (p2 >= p1 + o1) {
        s2p = s2;
        s2p.pos = p2 - o1 + i1;
        s1p = s1;
        return true;
    }
    return false;
}

}  // namespace

SliceWeb normal_form(const SliceWeb& w) {
    std::vector<Slice> rest = w.slices, out;
    out.reserve(rest.size());
    while (!rest.empty()) {
        int best = -1;
        Slice best_front;
        for (int t = 0; t < int(rest.size()); ++t) {
            Slice s = rest[t];
            bool ok = true;
            for (int u = t - 1; u >= 0 && ok; --u) {
                Slice s2p, s1p;
                if (!commute(rest[u], s, s2p, s1p))
                    ok = false;
                else
                    s = s2p;
            }
            if (!ok) continue;
            bool better = best < 0 || s.pos < best_front.pos ||
                          (s.pos == best_front.pos &&
                           (s.width_in() < best_front.width_in() ||
                            (s.width_in() == best_front.width_in())));
            if (better) {
                best = t;
                best_front = s;
            }
        }
        // bubble rest[best] to the front, adjusting the slices it passes
        Slice s = rest[best];
        for (int u = best - 1; u >= 0; --u) {
            Slice s2p, s1p;
            commute(rest[u], s, s2p, s1p);
            rest[u] = s1p;
            s = s2p;
        }
        rest.erase(rest.begin() + best);
        out.push_back(s);
    }
    SliceWeb r;
    r.bottom = w.bottom;
    r.slices = std::move(out);
    return r;
}

std::string serialize(const SliceWeb& w) {
    std::string s;
    s.reserve(w.slices.size() * 6 + w.bottom.size() * 2);
    for (auto& b : w.bottom) {
        s += char('a' + b.color);
        s += b.up ? '^' : 'v';
    }
    s += '|';
    for (auto& x : w.slices) {
        switch (x.kind) {
            case SliceKind::Cup: s += x.ccw ? 'U' : 'u'; s += char('0' + x.a); break;
            case SliceKind::Cap: s += 'n'; break;
            case SliceKind::Merge: s += 'm'; break;
            case SliceKind::Split: s += 's'; s += char('0' + x.a); s += char('0' + x.b); break;
            case SliceKind::Crossing: s += x.sign > 0 ? 'X' : 'x'; break;
        }
        s += std::to_string(x.pos);
        s += ';';
    }
    return s;
}

nlohmann::json web_to_json(const SliceWeb& w) {
    nlohmann::json j;
    if (!w.bottom.empty()) {
        j["bottom"] = nlohmann::json::array();
        for (auto& b : w.bottom) j["bottom"].push_back({{"color", b.color}, {"dir", b.up ? "up" : "down"}});
    }
    j["slices"] = nlohmann::json::array();
    Word x = w.bottom;
    for (auto& s : w.slices) {
        nlohmann::json e;
        e["pos"] = s.pos;
        switch (s.kind) {
            case SliceKind::Cup:
                e["kind"] = "cup";
                e["color"] = s.a;
                e["turn"] = s.ccw ? "ccw" : "cw";
                break;
            case SliceKind::Cap:
                e["kind"] = "cap";
                if (s.pos + 1 < int(x.size())) {
                    e["color"] = x[s.pos].color;
                    e["turn"] = x[s.pos].up ? "cw" : "ccw";
                }
                break;
            case SliceKind::Merge:
                e["kind"] = "merge";
                if (s.pos + 1 < int(x.size())) e["in"] = {x[s.pos].color, x[s.pos + 1].color};
                break;
            case SliceKind::Split:
                e["kind"] = "split";
                e["out"] = {s.a, s.b};
                break;
            case SliceKind::Crossing:
                e["kind"] = "crossing";
                e["sign"] = s.sign;
                break;
        }
        apply_slice(x, s, 1 << 20);
        j["slices"].push_back(e);
    }
    return j;
}

SliceWeb web_from_json(const nlohmann::json& j) {
    SliceWeb w;
    if (j.contains("bottom"))
        for (auto& b : j.at("bottom")) {
            std::string d = b.value("dir", "up");
            if (d != "up" && d != "down") throw Error("strand dir must be up or down");
            w.bottom.push_back({b.at("color").get<int>(), d == "up"});
        }
    if (!j.contains("slices") || !j.at("slices").is_array()) throw Error("web JSON needs a slices array");
    Word x = w.bottom;
    for (auto& e : j.at("slices")) {
        std::string kind = e.at("kind").get<std::string>();
        int pos = e.at("pos").get<int>();
        Slice s;
        if (kind == "cup") {
            std::string turn = e.value("turn", "ccw");
            if (turn != "ccw" && turn != "cw") throw Error("turn must be ccw or cw");
            s = Slice::cup(pos, e.at("color").get<int>(), turn == "ccw");
        } else if (kind == "cap") {
            s = Slice::cap(pos);
            if (e.contains("color") && pos >= 0 && pos < int(x.size()) && x[pos].color != e.at("color").get<int>())
                throw Error("cap color disagrees with the strand word");
        } else if (kind == "merge") {
            s = Slice::merge(pos);
            if (e.contains("in")) {
                auto in = e.at("in").get<std::vector<int>>();
                if (in.size() != 2 || pos < 0 || pos + 1 >= int(x.size()) || x[pos].color != in[0] ||
                    x[pos + 1].color != in[1])
                    throw Error("merge inputs disagree with the strand word");
            }
        } else if (kind == "split") {
            auto out = e.at("out").get<std::vector<int>>();
            if (out.size() != 2) throw Error("split needs out: [i, j]");
            s = Slice::split(pos, out[0], out[1]);
        } else if (kind == "crossing") {
            s = Slice::crossing(pos, e.at("sign").get<int>());
        } else {
            throw Error("unknown slice kind: " + kind);
        }
        if (auto err = apply_slice(x, s, 1 << 20)) throw Error(*err);
        w.slices.push_back(s);
    }
    return w;
}

namespace {

struct WidthTrace {
    std::vector<int> before;  // word width before each slice
};

WidthTrace widths(const SliceWeb& w, int n) {
    WidthTrace t;
    Word x = w.bottom;
    for (auto& s : w.slices) {
        t.before.push_back(int(x.size()));
        if (auto e = apply_slice(x, s, n)) throw Error(*e);
    }
    return t;
}

}  // namespace

SliceWeb reflect(const SliceWeb& w, int n) {
    auto t = widths(w, n);
    SliceWeb r;
    r.bottom.assign(w.bottom.rbegin(), w.bottom.rend());
    for (size_t i = 0; i < w.slices.size(); ++i) {
        Slice s = w.slices[i];
        s.pos = t.before[i] - s.pos - s.width_in();
        switch (s.kind) {
            case SliceKind::Cup: s.ccw = !s.ccw; break;
            case SliceKind::Split: std::swap(s.a, s.b); break;
            case SliceKind::Crossing: s.sign = -s.sign; break;
            default: break;
        }
        r.slices.push_back(s);
    }
    return r;
}

SliceWeb reverse_orientation(const SliceWeb& w) {
    SliceWeb r = w;
    for (auto& b : r.bottom) b.up = !b.up;
    for (auto& s : r.slices) {
        if (s.kind == SliceKind::Crossing) throw Error("cannot reverse a sliced crossing");
        if (s.kind == SliceKind::Cup) s.ccw = !s.ccw;
    }
    return r;
}

SliceWeb compose(const SliceWeb& a, const SliceWeb& b, int n) {
    if (top_word(a, n) != b.bottom) throw Error("boundary mismatch in composition");
    SliceWeb r = a;
    r.slices.insert(r.slices.end(), b.slices.begin(), b.slices.end());
    return r;
}

SliceWeb juxtapose(const SliceWeb& a, const SliceWeb& b, int n) {
    SliceWeb r = a;
    r.bottom.insert(r.bottom.end(), b.bottom.begin(), b.bottom.end());
    int off = int(top_word(a, n).size());
    for (auto s : b.slices) {
        s.pos += off;
        r.slices.push_back(s);
    }
    return r;
}

void WebSum::add(const LPoly& c, const SliceWeb& w) {
    if (c.is_zero()) return;
    SliceWeb nf = normal_form(w);
    std::string key = serialize(nf);
    for (size_t i = 0; i < keys_.size(); ++i) {
        if (keys_[i] != key) continue;
        terms_[i].coeff += c;
        if (terms_[i].coeff.is_zero()) {
            terms_.erase(terms_.begin() + long(i));
            keys_.erase(keys_.begin() + long(i));
        }
        return;
    }
    terms_.push_back({c, std::move(nf)});
    keys_.push_back(std::move(key));
}

std::vector<LocalTerm> crossing_expansion(int j, int i, int sign, int n) {
    std::vector<LocalTerm> out;
    auto sgn = [](int e) { return (e % 2 == 0) ? 1 : -1; };
    if (j >= i) {
        for (int k = 0; k <= i; ++k) {
            ProgramBuilder pb({{j, true}, {i, true}}, n);
            pb.split(1, k, i - k);
            pb.merge(0);
            pb.split(0, i, j + k - i);
            pb.merge(1);
            if (!pb.ok()) continue;
            LPoly c = LPoly::monomial(sign * (i - k), sgn(k + (j + 1) * i));
            out.push_back({c, pb.slices()});
        }
    } else {
        for (int k = 0; k <= j; ++k) {
            ProgramBuilder pb({{j, true}, {i, true}}, n);
            pb.split(0, j - k, k);
            pb.merge(1);
            pb.split(1, i + k - j, j);
            pb.merge(0);
            if (!pb.ok()) continue;
            LPoly c = LPoly::monomial(sign * (j - k), sgn(k + (i + 1) * j));
            out.push_back({c, pb.slices()});
        }
    }
    return out;
}

WebSum expand_crossings(const SliceWeb& w, int n) {
    struct Partial {
        LPoly coeff;
        std::vector<Slice> slices;
    };
    std::vector<Partial> parts{{LPoly(1), {}}};
    Word x = w.bottom;
    for (auto& s : w.slices) {
        if (s.kind != SliceKind::Crossing) {
            for (auto& p : parts) p.slices.push_back(s);
        } else {
            int j = x[s.pos].color, i = x[s.pos + 1].color;
            auto local = crossing_expansion(j, i, s.sign, n);
            std::map<std::string, size_t> index;
            std::vector<Partial> next;
            for (auto& p : parts)
                for (auto& lt : local) {
                    Partial q{p.coeff * lt.coeff, p.slices};
                    for (auto t : lt.slices) {
                        t.pos += s.pos;
                        q.slices.push_back(t);
                    }
                    std::string key = serialize(SliceWeb{w.bottom, q.slices});
                    auto it = index.find(key);
                    if (it == index.end()) {
                        index.emplace(key, next.size());
                        next.push_back(std::move(q));
                    } else {
                        next[it->second].coeff += q.coeff;
                    }
                }
            parts.clear();
            for (auto& p : next)
                if (!p.coeff.is_zero()) parts.push_back(std::move(p));
        }
        if (auto e = apply_slice(x, s, n)) throw Error(*e);
    }
    WebSum sum;
    for (auto& p : parts) sum.add(p.coeff, SliceWeb{w.bottom, p.slices});
    return sum;
}

}  // namespace webskein
