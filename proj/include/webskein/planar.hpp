#pragma once

#include <string>
#include <vector>

#include "webskein/compile.hpp"
#include "webskein/web.hpp"

namespace webskein {

// Closed web as a plane map. Vertex ports are listed counterclockwise:
//  merge: (out, inL, inR)   split: (in, outR, outL)
struct PVertex {
    bool merge = true;
    int port_edge[3] = {-1, -1, -1};
};

struct PEnd {
    int v = -1, port = -1;
};

struct PEdge {
    int color = 0;
    PEnd tail, head;
};

struct PlanarWeb {
    std::vector<PVertex> vertices;
    std::vector<PEdge> edges;
    std::vector<int> loops;  // colors of vertex-free circles

    bool port_is_tail(int v, int port) const;
    int num_components() const;
    // splits into connected pieces (each loop is its own piece)
    std::vector<PlanarWeb> components() const;
    // throws Error on inconsistent incidence data
    void check(int n) const;
};

PlanarWeb planar_from_slices(const SliceWeb& w, int n);
MorseMap morse_map(const PlanarWeb& p);
SliceWeb to_slices(const PlanarWeb& p);

struct FaceDart {
    int edge;
    bool forward;
};

struct Face {
    std::vector<FaceDart> darts;
    std::vector<int> colors;
    std::vector<char> signs;  // sign type of each vertex met, '+' for splits and '-' for merges
    int size() const { return int(darts.size()); }
    // alternating sign types (loop faces have none and count as invalid)
    bool valid_sign_type() const;
};

// Faces of each connected component on its own sphere; a loop has two faces of size 1.
// Throws Error("no planar embedding") if the Euler check fails.
std::vector<Face> faces(const PlanarWeb& p);
std::vector<Face> faces(const SliceWeb& w, int n);

// Code that is equal for isomorphic connected maps (orientation preserving).
std::string canonical_code(const PlanarWeb& connected);
// Code of a whole web: sorted component codes.
std::string web_code(const PlanarWeb& p);

}  // namespace webskein
