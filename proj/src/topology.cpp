#include "rmplate/topology.hpp"

#include <algorithm>
#include <map>

namespace rmplate {

BoundaryTopology boundary_topology(const Mesh& m) {
    const auto& bedges = m.boundary_edges();
    BoundaryTopology topo;
    topo.loops.resize(m.num_loops());
    topo.cs_component_of_bedge.assign(bedges.size(), -1);

    // rebuild induced-order cycles per loop
    std::map<int, int> bedge_at_vertex;  // induced start vertex -> boundary edge
    for (int i = 0; i < static_cast<int>(bedges.size()); ++i) bedge_at_vertex[bedges[i].a] = i;

    std::vector<char> seen(bedges.size(), 0);
    for (int start = 0; start < static_cast<int>(bedges.size()); ++start) {
        if (seen[start]) continue;
        int li = bedges[start].loop;
        auto& loop = topo.loops[li];
        loop.is_outer = (li == 0);
        int i = start;
        do {
            seen[i] = 1;
            loop.vertices.push_back(bedges[i].a);
            loop.bedge_indices.push_back(i);
            loop.has_free |= bedges[i].tag == BoundaryTag::Free;
            i = bedge_at_vertex.at(bedges[i].b);
        } while (i != start);
        // induced orientation is CCW on the outer loop and CW on holes;
        // store every loop CCW
        if (!loop.is_outer) {
            std::reverse(loop.vertices.begin(), loop.vertices.end());
            std::reverse(loop.bedge_indices.begin(), loop.bedge_indices.end());
            std::rotate(loop.vertices.begin(), loop.vertices.end() - 1, loop.vertices.end());
        }
        loop.bedge_sign.resize(loop.bedge_indices.size());
        for (size_t s = 0; s < loop.bedge_indices.size(); ++s) {
            const auto& be = bedges[loop.bedge_indices[s]];
            // CCW walk step s goes vertices[s] -> vertices[s+1]
            int from = loop.vertices[s];
            loop.bedge_sign[s] = (be.a == from) ? +1 : -1;
        }
    }

    // connected components of Gamma_cs and Gamma_f as maximal runs along loops
    auto count_components = [&](bool want_free, std::vector<int>* comp_of) {
        int n = 0;
        for (auto& loop : topo.loops) {
            const int len = static_cast<int>(loop.bedge_indices.size());
            auto in_set = [&](int s) {
                bool is_free = bedges[loop.bedge_indices[s]].tag == BoundaryTag::Free;
                return is_free == want_free;
            };
            int first_out = -1;
            for (int s = 0; s < len; ++s)
                if (!in_set(s)) { first_out = s; break; }
            if (first_out < 0) {
                // whole loop is one component
                if (in_set(0)) {
                    if (comp_of)
                        for (int s = 0; s < len; ++s) (*comp_of)[loop.bedge_indices[s]] = n;
                    ++n;
                }
                continue;
            }
            // scan once around starting just after an excluded edge
            bool in_run = false;
            for (int k = 1; k <= len; ++k) {
                int s = (first_out + k) % len;
                if (in_set(s)) {
                    if (!in_run) { in_run = true; ++n; }
                    if (comp_of) (*comp_of)[loop.bedge_indices[s]] = n - 1;
                } else {
                    in_run = false;
                }
            }
        }
        return n;
    };

    topo.n_cs = count_components(false, &topo.cs_component_of_bedge);
    topo.n_f = count_components(true, nullptr);

    for (int li = 0; li < static_cast<int>(topo.loops.size()); ++li)
        if (topo.loops[li].has_free) topo.index_set.push_back(li);
    if (!topo.index_set.empty())
        topo.reduced_index_set.assign(topo.index_set.begin() + 1, topo.index_set.end());

    return topo;
}

}  // namespace rmplate
