#ifndef RMPLATE_TOPOLOGY_HPP
#define RMPLATE_TOPOLOGY_HPP

#include <vector>

#include "rmplate/mesh.hpp"

namespace rmplate {

/// Boundary loop and component bookkeeping for a tagged mesh.
///
/// Loop 0 is the outer boundary; loops 1..H are holes ordered by the
/// lexicographically smallest vertex coordinate on each loop, which keeps the
/// numbering stable under refinement. Loop traversal below is stored
/// counterclockwise for every loop (outer and holes alike).
struct BoundaryTopology {
    struct Loop {
        std::vector<int> vertices;         // CCW cycle
        std::vector<int> bedge_indices;    // boundary edge per cycle step
        std::vector<int> bedge_sign;       // +1 if induced order matches CCW walk
        bool has_free = false;
        bool is_outer = false;
    };

    std::vector<Loop> loops;
    int n_cs = 0;                 // connected components of Gamma_c U Gamma_s
    int n_f = 0;                  // connected components of Gamma_f
    std::vector<int> index_set;           // loops carrying at least one Free edge
    std::vector<int> reduced_index_set;   // index_set minus its minimum
    /// cs-component id per boundary edge (-1 for Free edges); ids are assigned
    /// in loop-traversal order, so they are deterministic for a given mesh.
    std::vector<int> cs_component_of_bedge;

    int num_holes() const { return static_cast<int>(loops.size()) - 1; }
};

BoundaryTopology boundary_topology(const Mesh& m);

}  // namespace rmplate

#endif
