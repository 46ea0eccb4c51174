#pragma once

#include <vector>

#include "webskein/diagram.hpp"
#include "webskein/web.hpp"

namespace webskein {

// Abstract plane map of crossings and trivalent vertices, with ports listed counterclockwise.
//  Crossing ports follow ccw_ends().
//  FlowMerge ports: (out, inL, inR).  FlowSplit ports: (in, outR, outL).
struct MorseVertex {
    enum class Kind { Crossing, FlowMerge, FlowSplit };
    Kind kind = Kind::Crossing;
    int sign = 1;
    std::vector<int> port_edge;
    std::vector<char> port_tail;  // the edge leaves the vertex at this port
};

struct MorseMap {
    std::vector<MorseVertex> vertices;
    std::vector<int> edge_color;
    std::vector<int> loop_colors;  // closed edges without vertices
};

// Sweeps the map bottom to top and returns a slice presentation.
// Throws Error("no planar embedding") when the rotation system is not planar.
std::vector<Slice> morse_slices(const MorseMap& m);

MorseMap morse_map(const Diagram& d, const Coloring& mu);
SliceWeb compile(const Diagram& d, const Coloring& mu, int n);

}  // namespace webskein
