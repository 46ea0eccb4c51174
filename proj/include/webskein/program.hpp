#pragma once

#include <vector>

#include "webskein/web.hpp"

namespace webskein {

// Builds slice programs from local operations where strands of color 0 are allowed
// as placeholders. Zero strands produce no slices; positions are converted to real ones.
class ProgramBuilder {
public:
    ProgramBuilder(Word bottom, int n) : w_(std::move(bottom)), n_(n) {
        for (auto& s : w_)
            if (s.color < 0 || s.color > n_) ok_ = false;
    }

    void split(int x, int a, int b) {
        if (!ok_) return;
        if (a < 0 || b < 0 || a > n_ || b > n_ || a + b != w_[x].color) {
            ok_ = false;
            return;
        }
        Strand s = w_[x];
        if (a > 0 && b > 0) out_.push_back(Slice::split(real(x), a, b));
        w_[x].color = a;
        w_.insert(w_.begin() + x + 1, Strand{b, s.up});
    }

    void merge(int x) {
        if (!ok_) return;
        Strand l = w_[x], r = w_[x + 1];
        int c = l.color + r.color;
        if (c > n_ || l.up != r.up) {
            ok_ = false;
            return;
        }
        if (l.color > 0 && r.color > 0) out_.push_back(Slice::merge(real(x)));
        w_[x].color = c;
        w_.erase(w_.begin() + x + 1);
    }

    void cup(int x, int color, bool ccw) {
        if (!ok_) return;
        if (color < 0 || color > n_) {
            ok_ = false;
            return;
        }
        if (color > 0) out_.push_back(Slice::cup(real(x), color, ccw));
        w_.insert(w_.begin() + x, {Strand{color, !ccw}, Strand{color, ccw}});
    }

    void cap(int x) {
        if (!ok_) return;
        if (w_[x].color != w_[x + 1].color || w_[x].up == w_[x + 1].up) {
            ok_ = false;
            return;
        }
        if (w_[x].color > 0) out_.push_back(Slice::cap(real(x)));
        w_.erase(w_.begin() + x, w_.begin() + x + 2);
    }

    bool ok() const { return ok_; }
    const std::vector<Slice>& slices() const { return out_; }
    const Word& word() const { return w_; }
    Word real_word() const {
        Word r;
        for (auto& s : w_)
            if (s.color > 0) r.push_back(s);
        return r;
    }

private:
    int real(int x) const {
        int r = 0;
        for (int t = 0; t < x; ++t)
            if (w_[t].color > 0) ++r;
        return r;
    }

    Word w_;
    int n_;
    bool ok_ = true;
    std::vector<Slice> out_;
};

}  // namespace webskein
