#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace webskein {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Crossing {
    int sign = 1;
    int over_in = -1, over_out = -1;
    int under_in = -1, under_out = -1;

    bool operator==(const Crossing&) const = default;
    bool operator<(const Crossing& o) const { return over_in < o.over_in; }
};

// One end of a crossing: the arc attached there and whether the arc flows in.
struct CrossingEnd {
    int arc;
    bool in;
    bool over;
};

// The four ends of a crossing in counterclockwise order. For sign +1 the order is
// (over_in, under_in, over_out, under_out); for -1 it is (under_in, over_in, under_out, over_out).
std::array<CrossingEnd, 4> ccw_ends(const Crossing& c);

struct BraidWord {
    int strands = 0;
    std::vector<int> word;
    bool operator==(const BraidWord&) const = default;
};

// Oriented link diagram. Arcs are 0..num_arcs()-1 in canonical order: components are
// listed by least arc and each component's arcs are consecutive along its orientation.
// Arcs that meet no crossing are free loops, one per component.
class Diagram {
public:
    Diagram() = default;

    // Validates the incidence data and canonicalizes. old_to_new, if given, receives
    // the relabeling of the input arc ids.
    static Diagram make(std::vector<Crossing> crossings, int num_arcs, std::vector<int>* old_to_new = nullptr);

    const std::vector<Crossing>& crossings() const { return crossings_; }
    int num_arcs() const { return num_arcs_; }
    int num_crossings() const { return int(crossings_.size()); }
    int num_components() const { return int(components_.size()); }
    const std::vector<std::vector<int>>& components() const { return components_; }
    int component_of(int arc) const { return arc_component_[arc]; }
    // crossing index and over flag where the arc ends / starts; -1 for free loops
    int head_crossing(int arc) const { return head_[arc]; }
    int tail_crossing(int arc) const { return tail_[arc]; }
    bool head_is_over(int arc) const { return head_over_[arc]; }
    bool tail_is_over(int arc) const { return tail_over_[arc]; }
    int next_arc(int arc) const;
    bool is_free_loop(int arc) const { return head_[arc] < 0; }

    const std::optional<BraidWord>& braid_hint() const { return braid_; }
    void set_braid_hint(std::optional<BraidWord> b) { braid_ = std::move(b); }

    bool operator==(const Diagram& o) const {
        return num_arcs_ == o.num_arcs_ && crossings_ == o.crossings_;
    }

private:
    std::vector<Crossing> crossings_;
    int num_arcs_ = 0;
    std::vector<std::vector<int>> components_;
    std::vector<int> arc_component_, head_, tail_;
    std::vector<char> head_over_, tail_over_;
    std::optional<BraidWord> braid_;
};

// color per component index
using Coloring = std::vector<int>;

Coloring uniform_coloring(const Diagram& d, int color);
void check_coloring(const Diagram& d, const Coloring& mu, int n);

// PD text `X[a,b,c,d], ...` (first entry the incoming under arc, listed counterclockwise),
// or the JSON diagram schema when the text starts with '{'.
Diagram parse_pd(const std::string& text, Coloring* mu = nullptr);
Diagram diagram_from_json(const nlohmann::json& j, Coloring* mu = nullptr);
nlohmann::json diagram_to_json(const Diagram& d, const Coloring* mu = nullptr);
std::string to_pd(const Diagram& d);

Diagram from_braid(const std::vector<int>& word, int strands);
std::vector<int> parse_braid_word(const std::string& text);

Diagram mirror(const Diagram& d);
int writhe(const Diagram& d);
int colored_writhe(const Diagram& d, const Coloring& mu, int i);

// Braid-like tangle: strands all oriented upward, crossings given by a braid word,
// colors given at the bottom endpoints.
struct Tangle {
    int strands = 0;
    std::vector<int> word;
    std::vector<int> colors;
};

Tangle parse_tangle(const std::string& text, int strands, const std::vector<int>& colors);
// permutation of endpoints: bottom position -> top position
std::vector<int> tangle_permutation(const Tangle& t);
bool self_composable(const Tangle& t);

struct ColoredDiagram {
    Diagram diagram;
    Coloring coloring;
};

ColoredDiagram closure(const Tangle& t);
ColoredDiagram periodic_cover(const Tangle& t, int p);
// The order-p rotation of a periodic cover, as a permutation of crossings and arcs.
struct Symmetry {
    std::vector<int> crossing_perm;
    std::vector<int> arc_perm;
};
Symmetry cover_rotation(const Tangle& t, int p);
bool is_automorphism(const Diagram& d, const Symmetry& s);

// Faces of the planar map of the crossings. A dart is an arc traversed with the face
// on its left; forward means along the arc's orientation.
struct Dart {
    int arc;
    bool forward;
    bool operator==(const Dart&) const = default;
};
struct DiagramFace {
    std::vector<Dart> darts;
};
// throws Error("no planar embedding") if the Euler check fails on some piece
std::vector<DiagramFace> diagram_faces(const Diagram& d);
bool is_planar(const Diagram& d);
// connected pieces (through crossings); free loops are their own pieces
std::vector<std::vector<int>> diagram_pieces(const Diagram& d);

enum class Move { R1Plus, R1Minus, R2, R3, R1Remove, R2Remove };
std::string move_name(Move m);

struct Site {
    int arc = -1;
    bool first_over = true;
    int face = -1;
    int i = 0, j = 0;
    bool a_over = true;
    int crossing = -1;
    std::string describe() const;
};

std::vector<Site> enumerate_sites(const Diagram& d, Move m);
// origin, if given, maps each arc of the result to an arc of d on the same component
Diagram apply_reidemeister(const Diagram& d, Move m, const Site& s, std::vector<int>* origin = nullptr);
Coloring transport_coloring(const Diagram& from, const Coloring& mu, const Diagram& to, const std::vector<int>& origin);

// Remove crossings by smoothing each strand straight through (over_in joins over_out,
// under_in joins under_out). Used by the inverse moves and the skein oracle.
Diagram remove_crossings(const Diagram& d, const std::vector<int>& which, std::vector<int>* origin = nullptr);
// Oriented smoothing L_0 at a crossing.
Diagram smooth_crossing(const Diagram& d, int crossing, std::vector<int>* origin = nullptr);
Diagram switch_crossing(const Diagram& d, int crossing);

bool isomorphic(const Diagram& a, const Diagram& b);
Diagram disjoint_union(const Diagram& a, const Diagram& b);

}  // namespace webskein
