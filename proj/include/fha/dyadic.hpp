#pragma once

#include <vector>

#include <json.hpp>

#include "fha/space.hpp"

namespace fha {

/// One Christ cube. Cubes are identified by (level, id); parent/children are
/// indices into the adjacent levels of the owning tree.
struct Cube {
    int level = 0;
    int id = 0;
    int center = 0;
    std::vector<int> members; // sorted point indices
    int parent = -1;          // id at level-1, -1 at the top
    std::vector<int> children;

    double sidelength() const { return std::exp2(-level); }
};

/// Christ dyadic hierarchy built by a deterministic greedy-net construction.
/// Families are exact partitions at every level; kappa0 and a0_achieved are
/// measured from the result, not assumed.
class DyadicTree {
public:
    DyadicTree(const Space* space, int level_min, int level_max,
               std::vector<std::vector<Cube>> levels);

    int level_min() const { return level_min_; }
    int level_max() const { return level_max_; }
    const Space& space() const { return *space_; }
    double kappa0() const { return kappa0_; }
    double a0_achieved() const { return a0_achieved_; }

    const std::vector<Cube>& cubes_at_level(int nu) const;
    const Cube& parent_of(const Cube& q) const;
    double cube_measure(const Cube& q) const;
    /// True when q is equal to or a descendant of candidate ancestor a.
    bool is_descendant(const Cube& q, const Cube& a) const;

    nlohmann::json to_json() const;

private:
    const Space* space_;
    int level_min_, level_max_;
    std::vector<std::vector<Cube>> levels_; // levels_[k - level_min_]
    double kappa0_ = 0.0;
    double a0_achieved_ = 0.0;

    void measure_constants();
};

/// Builds the hierarchy from nested greedy maximal 2^{-k}-separated nets
/// (lowest index first); each child cube attaches whole to the net center
/// nearest its own center. Requires 2^{-level_min} >= diam so the top level
/// is a single cube.
DyadicTree christ_decomposition(const Space& s, int level_min, int level_max);

} // namespace fha
