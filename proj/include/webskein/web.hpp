#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "webskein/diagram.hpp"
#include "webskein/lpoly.hpp"

namespace webskein {

struct Strand {
    int color = 1;
    bool up = true;
    bool operator==(const Strand&) const = default;
};

enum class SliceKind { Cup, Cap, Merge, Split, Crossing };

// One elementary piece acting on the strand word at position pos.
//  Cup: creates two strands of color a at pos, pos+1; ccw when the left strand points down.
//  Cap: joins the strands at pos, pos+1.
//  Merge: two adjacent same-direction strands become one of the summed color.
//  Split: the strand at pos becomes two strands colored (a, b) from left to right.
//  Crossing: two upward strands at pos, pos+1 cross; sign +1 means the over strand runs
//  from lower left to upper right.
struct Slice {
    SliceKind kind = SliceKind::Cup;
    int pos = 0;
    int a = 0, b = 0;
    bool ccw = false;
    int sign = 0;

    static Slice cup(int pos, int color, bool ccw) { return {SliceKind::Cup, pos, color, 0, ccw, 0}; }
    static Slice cap(int pos) { return {SliceKind::Cap, pos, 0, 0, false, 0}; }
    static Slice merge(int pos) { return {SliceKind::Merge, pos, 0, 0, false, 0}; }
    static Slice split(int pos, int a, int b) { return {SliceKind::Split, pos, a, b, false, 0}; }
    static Slice crossing(int pos, int sign) { return {SliceKind::Crossing, pos, 0, 0, false, sign}; }

    int width_in() const;
    int width_out() const;
    bool operator==(const Slice& o) const;
};

using Word = std::vector<Strand>;

// Sliced web; bottom/top are empty for closed webs.
struct SliceWeb {
    Word bottom;
    std::vector<Slice> slices;

    bool operator==(const SliceWeb& o) const { return bottom == o.bottom && slices == o.slices; }
};

// Applies one slice to a word; returns an error message on violation.
std::optional<std::string> apply_slice(Word& w, const Slice& s, int n);
Word top_word(const SliceWeb& w, int n);
// Checks every invariant, color bounds and (when require_closed) empty boundary words.
std::optional<std::string> validate(const SliceWeb& w, int n, bool require_closed = true, bool allow_crossings = false);
bool has_crossings(const SliceWeb& w);

// Normal order: far-apart slices are commuted so that the leftmost available slice comes first.
SliceWeb normal_form(const SliceWeb& w);
std::string serialize(const SliceWeb& w);

nlohmann::json web_to_json(const SliceWeb& w);
SliceWeb web_from_json(const nlohmann::json& j);

// Mirror image in a vertical line, and global orientation reversal.
SliceWeb reflect(const SliceWeb& w, int n);
SliceWeb reverse_orientation(const SliceWeb& w);
// Stack b on top of a (a's top word must equal b's bottom word).
SliceWeb compose(const SliceWeb& a, const SliceWeb& b, int n);
// Place b to the right of a.
SliceWeb juxtapose(const SliceWeb& a, const SliceWeb& b, int n);

struct WebTerm {
    LPoly coeff;
    SliceWeb web;
};

// Formal combination; identical webs (after normal_form) are merged and zero terms dropped.
class WebSum {
public:
    void add(const LPoly& c, const SliceWeb& w);
    const std::vector<WebTerm>& terms() const& { return terms_; }
    std::vector<WebTerm> terms() && { return std::move(terms_); }
    size_t size() const { return terms_.size(); }

private:
    std::vector<WebTerm> terms_;
    std::vector<std::string> keys_;
};

// Local expansion of one crossing on colors (bottom-left j, bottom-right i):
// coefficient and the slice program acting on the two strands (zero-color strands removed).
struct LocalTerm {
    LPoly coeff;
    std::vector<Slice> slices;
};
std::vector<LocalTerm> crossing_expansion(int j, int i, int sign, int n);

WebSum expand_crossings(const SliceWeb& w, int n);

}  // namespace webskein
