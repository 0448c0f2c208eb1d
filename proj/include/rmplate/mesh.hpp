#ifndef RMPLATE_MESH_HPP
#define RMPLATE_MESH_HPP

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rmplate {

using Vec2 = Eigen::Vector2d;

enum class BoundaryTag { Clamped, SimplySupported, Free };

/// Thrown by the mesh parser and validator; the message names the offending entity.
struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conforming triangulation of a polygonal domain with holes.
///
/// Vertices are identified by index, triangles are CCW, and every unique edge
/// carries a global orientation from its lower vertex index to its higher one.
/// Instances are immutable after construction; refinement returns a new mesh.
class Mesh {
public:
    struct BoundaryEdge {
        int a, b;         // endpoints in induced (triangle-CCW) order
        BoundaryTag tag;
        int edge;         // index into edges()
        int loop;         // boundary loop index, 0 = outer
    };

    /// Parse the plate-mesh v1 text format and validate all invariants.
    static Mesh parse(const std::string& text);

    const std::vector<Vec2>& vertices() const { return verts_; }
    const std::vector<std::array<int, 3>>& triangles() const { return tris_; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return bedges_; }

    int num_vertices() const { return static_cast<int>(verts_.size()); }
    int num_triangles() const { return static_cast<int>(tris_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    /// Edges of triangle k, local order (v0v1, v1v2, v2v0).
    const std::array<int, 3>& tri_edges(int k) const { return tri_edges_[k]; }
    /// Triangles adjacent to an edge; second entry is -1 on the boundary.
    const std::array<int, 2>& edge_tris(int e) const { return edge_tris_[e]; }
    /// Index into boundary_edges() or -1 for interior edges.
    int boundary_edge_index(int e) const { return bedge_of_edge_[e]; }
    bool edge_on_boundary(int e) const { return bedge_of_edge_[e] >= 0; }

    Vec2 vertex(int v) const { return verts_[v]; }
    double edge_length(int e) const { return (verts_[edges_[e][1]] - verts_[edges_[e][0]]).norm(); }
    /// Unit tangent along the global edge orientation (lower to higher index).
    Vec2 edge_tangent(int e) const { return (verts_[edges_[e][1]] - verts_[edges_[e][0]]).normalized(); }

    double tri_area(int k) const;
    double tri_diameter(int k) const;
    Vec2 tri_centroid(int k) const;
    /// Total mesh area (sum of signed triangle areas).
    double area() const;
    /// Maximum element diameter h.
    double max_diameter() const;

    int num_loops() const { return num_loops_; }

    /// Uniform refinement: every triangle split into four congruent children.
    Mesh refined() const;
    /// Alfeld split: every triangle split into three at its barycenter.
    Mesh alfeld_split() const;

    /// Serialize back to the plate-mesh v1 format.
    std::string to_text() const;

private:
    Mesh() = default;
    void build_topology();   // edge tables, adjacency, loop walk, validation

    std::vector<Vec2> verts_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<BoundaryEdge> bedges_;

    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> tri_edges_;
    std::vector<std::array<int, 2>> edge_tris_;
    std::vector<int> bedge_of_edge_;
    int num_loops_ = 0;
};

Mesh load_mesh_file(const std::string& path);
void write_mesh_file(const Mesh& m, const std::string& path);

}  // namespace rmplate

#endif
