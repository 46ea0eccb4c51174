#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "webskein/lpoly.hpp"
#include "webskein/planar.hpp"
#include "webskein/web.hpp"

namespace webskein {

enum class Relation { Circle, Bigon, FourId1, FourId2, Rect1, Rect2, Curl };
std::string relation_name(Relation r);
std::optional<Relation> relation_from_name(const std::string& s);

// A web fragment with open legs. Bottom strands are legs 0..b-1 (left to right),
// top strands follow (left to right).
struct FragEnd {
    int v = -1, port = -1, leg = -1;
};
struct FragEdge {
    int color = 0;
    FragEnd tail, head;
};
struct Fragment {
    std::vector<PVertex> vertices;
    std::vector<FragEdge> edges;
    std::vector<int> loops;
    int legs = 0;
};

// Zero-colored strands in the program are dropped. Throws Error if the program is invalid.
Fragment fragment_from_program(const Word& bottom, const std::vector<Slice>& slices, int n);
Fragment mirror(const Fragment& f);
Fragment reversed(const Fragment& f);

// One left-hand side occurrence. vmap sends fragment vertices to host vertices.
struct RelSite {
    Relation rel = Relation::Circle;
    int shape = 0;    // which pattern (internal numbering)
    int variant = 0;  // bit 0 mirror, bit 1 orientation reversal
    std::vector<int> vmap;
    int loop = -1;  // Circle only
    std::vector<int> params;
    int face_size = 0;
    std::string describe() const;
};

struct PlanarTerm {
    LPoly coeff;
    PlanarWeb web;
};

std::vector<RelSite> find_sites(const PlanarWeb& w, Relation rel, int n);
// Throws Error("relation not applicable") if the site does not match.
std::vector<PlanarTerm> apply_site(const PlanarWeb& w, const RelSite& s, int n);

// Sites refer to planar_from_slices(w, n).
std::vector<RelSite> find_sites(const SliceWeb& w, Relation rel, int n);
WebSum apply_relation(const SliceWeb& w, const RelSite& site, Relation rel, int n);

// Stated parameter bounds of the square relations, and the wider ranges the rewriter uses.
bool rect1_in_range(int i, int j, int k, int l, int n);
bool rect2_in_range(int i, int j, int k, int l, int n);
bool rect1_extended(int i, int j, int k, int l, int n);
bool rect2_extended(int i, int j, int k, int l, int n);

// Closed-form local identities, as slice programs on a common boundary, for relcheck.
struct LocalIdentity {
    Relation rel;
    std::string label;
    Word bottom;
    std::vector<Slice> lhs;
    std::vector<std::pair<LPoly, std::vector<Slice>>> rhs;
};
std::vector<LocalIdentity> local_identities(int n, int max_l, bool extended = false);

struct TraceStep {
    Relation rel;
    std::string site;
    std::vector<LPoly> coeffs;
};

struct ReduceResult {
    bool stuck = false;
    LPoly value;
    SliceWeb residual;  // irreducible piece when stuck
    std::vector<TraceStep> trace;
};

class Reducer {
public:
    explicit Reducer(int n, int fourid_depth = 3) : n_(n), depth_(fourid_depth) {}
    ReduceResult reduce(const SliceWeb& w);
    ReduceResult reduce(const PlanarWeb& w);
    size_t memo_size() const { return memo_.size(); }
    // limit on fresh component visits per reduce() call; past it everything is stuck
    void set_budget(size_t steps) { budget_ = steps; }
    // trace collection costs memory on large sums
    void set_tracing(bool on) { tracing_ = on; }
    // nonzero seed: shuffle site order and the Rect1/Rect2 priority (a different strategy)
    void set_seed(uint64_t seed) {
        seed_ = seed;
        memo_.clear();
    }

private:
    struct Value {
        bool stuck = false;
        LPoly value;
        bool cyclic = false;
    };
    Value component(const PlanarWeb& c);
    Value whole(const PlanarWeb& w);
    Value try_terms(const std::vector<PlanarTerm>& terms, Relation rel, const RelSite& s);

    int n_;
    int depth_;
    bool tracing_ = false;
    uint64_t seed_ = 0;
    std::unordered_map<std::string, Value> memo_;
    std::unordered_set<std::string> active_;
    // stuck only relative to the stack at the time; forgotten after each reduce() call
    std::unordered_set<std::string> failed_;
    size_t steps_ = 0;
    size_t budget_ = 50000;
    std::optional<PlanarWeb> stuck_web_;
    std::vector<TraceStep> trace_;
};

ReduceResult reduce_web(const SliceWeb& w, int n);

}  // namespace webskein
