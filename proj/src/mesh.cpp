#include "rmplate/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace rmplate {

namespace {

BoundaryTag parse_tag(const std::string& s, int line_no) {
    if (s == "c") return BoundaryTag::Clamped;
    if (s == "s") return BoundaryTag::SimplySupported;
    if (s == "f") return BoundaryTag::Free;
    throw MeshError("line " + std::to_string(line_no) + ": unknown boundary tag '" + s + "'");
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

}  // namespace

double Mesh::tri_area(int k) const {
    const auto& t = tris_[k];
    return signed_area(verts_[t[0]], verts_[t[1]], verts_[t[2]]);
}

double Mesh::tri_diameter(int k) const {
    const auto& t = tris_[k];
    double d01 = (verts_[t[0]] - verts_[t[1]]).norm();
    double d12 = (verts_[t[1]] - verts_[t[2]]).norm();
    double d20 = (verts_[t[2]] - verts_[t[0]]).norm();
    return std::max({d01, d12, d20});
}

Vec2 Mesh::tri_centroid(int k) const {
    const auto& t = tris_[k];
    return (verts_[t[0]] + verts_[t[1]] + verts_[t[2]]) / 3.0;
}

double Mesh::area() const {
    double a = 0.0;
    for (int k = 0; k < num_triangles(); ++k) a += tri_area(k);
    return a;
}

double Mesh::max_diameter() const {
    double h = 0.0;
    for (int k = 0; k < num_triangles(); ++k) h = std::max(h, tri_diameter(k));
    return h;
}

Mesh Mesh::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
        }
        throw MeshError("unexpected end of file at line " + std::to_string(line_no));
    };

    std::string header = next_line();
    if (header.rfind("plate-mesh v1", 0) != 0)
        throw MeshError("line 1: expected 'plate-mesh v1' header, got '" + header + "'");

    int nv = 0, nt = 0, nb = 0;
    {
        std::istringstream ls(next_line());
        if (!(ls >> nv >> nt >> nb) || nv < 3 || nt < 1 || nb < 3)
            throw MeshError("line " + std::to_string(line_no) + ": bad count line");
    }

    Mesh m;
    m.verts_.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        std::istringstream ls(next_line());
        double x, y;
        if (!(ls >> x >> y))
            throw MeshError("line " + std::to_string(line_no) + ": malformed vertex " + std::to_string(i));
        m.verts_.push_back(Vec2(x, y));
    }
    m.tris_.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        std::istringstream ls(next_line());
        int a, b, c;
        if (!(ls >> a >> b >> c))
            throw MeshError("line " + std::to_string(line_no) + ": malformed triangle " + std::to_string(i));
        for (int v : {a, b, c})
            if (v < 0 || v >= nv)
                throw MeshError("triangle " + std::to_string(i) + ": vertex index " + std::to_string(v) +
                                " out of range");
        m.tris_.push_back({a, b, c});
    }
    m.bedges_.reserve(nb);
    for (int i = 0; i < nb; ++i) {
        std::istringstream ls(next_line());
        int a, b;
        std::string tag;
        if (!(ls >> a >> b >> tag))
            throw MeshError("line " + std::to_string(line_no) + ": malformed boundary edge " + std::to_string(i));
        if (a < 0 || a >= nv || b < 0 || b >= nv || a == b)
            throw MeshError("boundary edge " + std::to_string(i) + ": bad endpoints (" + std::to_string(a) +
                            "," + std::to_string(b) + ")");
        m.bedges_.push_back({a, b, parse_tag(tag, line_no), -1, -1});
    }

    m.build_topology();
    return m;
}

void Mesh::build_topology() {
    const int nv = num_vertices();
    const int nt = num_triangles();

    for (int k = 0; k < nt; ++k) {
        if (tri_area(k) <= 0.0)
            throw MeshError("triangle " + std::to_string(k) + " is not counterclockwise (signed area " +
                            std::to_string(tri_area(k)) + ")");
    }

    // global edge table, oriented low index -> high index
    std::map<std::pair<int, int>, int> edge_id;
    edges_.clear();
    tri_edges_.assign(nt, {-1, -1, -1});
    for (int k = 0; k < nt; ++k) {
        for (int j = 0; j < 3; ++j) {
            int a = tris_[k][j], b = tris_[k][(j + 1) % 3];
            auto key = std::minmax(a, b);
            auto it = edge_id.find(key);
            int e;
            if (it == edge_id.end()) {
                e = static_cast<int>(edges_.size());
                edge_id.emplace(key, e);
                edges_.push_back({key.first, key.second});
            } else {
                e = it->second;
            }
            tri_edges_[k][j] = e;
        }
    }

    edge_tris_.assign(edges_.size(), {-1, -1});
    for (int k = 0; k < nt; ++k) {
        for (int e : tri_edges_[k]) {
            if (edge_tris_[e][0] < 0) {
                edge_tris_[e][0] = k;
            } else if (edge_tris_[e][1] < 0) {
                edge_tris_[e][1] = k;
            } else {
                throw MeshError("edge (" + std::to_string(edges_[e][0]) + "," + std::to_string(edges_[e][1]) +
                                ") belongs to more than two triangles");
            }
        }
    }

    // boundary edges: tag list must cover the topological boundary exactly
    bedge_of_edge_.assign(edges_.size(), -1);
    for (int i = 0; i < static_cast<int>(bedges_.size()); ++i) {
        auto key = std::minmax(bedges_[i].a, bedges_[i].b);
        auto it = edge_id.find(key);
        if (it == edge_id.end())
            throw MeshError("boundary edge (" + std::to_string(bedges_[i].a) + "," +
                            std::to_string(bedges_[i].b) + ") is not an edge of any triangle");
        int e = it->second;
        if (edge_tris_[e][1] >= 0)
            throw MeshError("boundary edge (" + std::to_string(bedges_[i].a) + "," +
                            std::to_string(bedges_[i].b) + ") is an interior edge");
        if (bedge_of_edge_[e] >= 0)
            throw MeshError("boundary edge (" + std::to_string(bedges_[i].a) + "," +
                            std::to_string(bedges_[i].b) + ") tagged twice");
        bedge_of_edge_[e] = i;
        bedges_[i].edge = e;
        // induced orientation from the owning CCW triangle
        int k = edge_tris_[e][0];
        for (int j = 0; j < 3; ++j) {
            int a = tris_[k][j], b = tris_[k][(j + 1) % 3];
            if (std::minmax(a, b) == key) {
                bedges_[i].a = a;
                bedges_[i].b = b;
                break;
            }
        }
    }
    for (int e = 0; e < num_edges(); ++e) {
        if (edge_tris_[e][1] < 0 && bedge_of_edge_[e] < 0)
            throw MeshError("untagged boundary edge (" + std::to_string(edges_[e][0]) + "," +
                            std::to_string(edges_[e][1]) + ")");
    }

    // walk boundary loops along the induced orientation
    std::vector<int> bedge_at_vertex(nv, -1);
    for (int i = 0; i < static_cast<int>(bedges_.size()); ++i) {
        if (bedge_at_vertex[bedges_[i].a] >= 0)
            throw MeshError("boundary vertex " + std::to_string(bedges_[i].a) +
                            " has more than one outgoing boundary edge");
        bedge_at_vertex[bedges_[i].a] = i;
    }
    std::vector<int> loop_of(bedges_.size(), -1);
    struct LoopInfo {
        std::vector<int> bedges;
        double signed_area = 0.0;
        Vec2 lexmin;
    };
    std::vector<LoopInfo> loop_infos;
    for (int start = 0; start < static_cast<int>(bedges_.size()); ++start) {
        if (loop_of[start] >= 0) continue;
        LoopInfo info;
        int i = start;
        do {
            if (loop_of[i] >= 0)
                throw MeshError("boundary loop through edge (" + std::to_string(bedges_[i].a) + "," +
                                std::to_string(bedges_[i].b) + ") re-enters another loop");
            loop_of[i] = static_cast<int>(loop_infos.size());
            info.bedges.push_back(i);
            const Vec2& pa = verts_[bedges_[i].a];
            const Vec2& pb = verts_[bedges_[i].b];
            info.signed_area += 0.5 * (pa.x() * pb.y() - pb.x() * pa.y());
            int next = bedge_at_vertex[bedges_[i].b];
            if (next < 0)
                throw MeshError("boundary loop open at vertex " + std::to_string(bedges_[i].b));
            i = next;
        } while (i != start);
        info.lexmin = verts_[bedges_[info.bedges.front()].a];
        for (int be : info.bedges) {
            const Vec2& p = verts_[bedges_[be].a];
            if (p.x() < info.lexmin.x() || (p.x() == info.lexmin.x() && p.y() < info.lexmin.y()))
                info.lexmin = p;
        }
        loop_infos.push_back(std::move(info));
    }

    int outer = -1;
    for (int l = 0; l < static_cast<int>(loop_infos.size()); ++l) {
        if (loop_infos[l].signed_area > 0.0) {
            if (outer >= 0) throw MeshError("more than one outer boundary loop");
            outer = l;
        }
    }
    if (outer < 0) throw MeshError("no counterclockwise outer boundary loop");

    // loop 0 = outer; holes ordered by lexicographically smallest vertex
    std::vector<int> order;
    for (int l = 0; l < static_cast<int>(loop_infos.size()); ++l)
        if (l != outer) order.push_back(l);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Vec2& pa = loop_infos[a].lexmin;
        const Vec2& pb = loop_infos[b].lexmin;
        return pa.x() != pb.x() ? pa.x() < pb.x() : pa.y() < pb.y();
    });
    std::vector<int> new_index(loop_infos.size());
    new_index[outer] = 0;
    for (int h = 0; h < static_cast<int>(order.size()); ++h) new_index[order[h]] = h + 1;
    for (int i = 0; i < static_cast<int>(bedges_.size()); ++i) bedges_[i].loop = new_index[loop_of[i]];
    num_loops_ = static_cast<int>(loop_infos.size());

    bool any_cs = false;
    for (const auto& be : bedges_) any_cs |= be.tag != BoundaryTag::Free;
    if (!any_cs) throw MeshError("no clamped or simply-supported boundary edge (Gamma_c U Gamma_s empty)");
}

Mesh Mesh::refined() const {
    Mesh m;
    m.verts_ = verts_;
    m.verts_.reserve(verts_.size() + edges_.size());
    const int nv = num_vertices();
    for (const auto& e : edges_) m.verts_.push_back(0.5 * (verts_[e[0]] + verts_[e[1]]));
    auto mid = [&](int e) { return nv + e; };

    m.tris_.reserve(4 * tris_.size());
    for (int k = 0; k < num_triangles(); ++k) {
        int a = tris_[k][0], b = tris_[k][1], c = tris_[k][2];
        int ab = mid(tri_edges_[k][0]), bc = mid(tri_edges_[k][1]), ca = mid(tri_edges_[k][2]);
        m.tris_.push_back({a, ab, ca});
        m.tris_.push_back({ab, b, bc});
        m.tris_.push_back({ca, bc, c});
        m.tris_.push_back({ab, bc, ca});
    }

    m.bedges_.reserve(2 * bedges_.size());
    for (const auto& be : bedges_) {
        int mm = mid(be.edge);
        m.bedges_.push_back({be.a, mm, be.tag, -1, -1});
        m.bedges_.push_back({mm, be.b, be.tag, -1, -1});
    }
    m.build_topology();
    return m;
}

Mesh Mesh::alfeld_split() const {
    Mesh m;
    m.verts_ = verts_;
    m.verts_.reserve(verts_.size() + tris_.size());
    for (int k = 0; k < num_triangles(); ++k) m.verts_.push_back(tri_centroid(k));

    const int nv = num_vertices();
    m.tris_.reserve(3 * tris_.size());
    for (int k = 0; k < num_triangles(); ++k) {
        int a = tris_[k][0], b = tris_[k][1], c = tris_[k][2];
        int z = nv + k;
        m.tris_.push_back({a, b, z});
        m.tris_.push_back({b, c, z});
        m.tris_.push_back({c, a, z});
    }
    m.bedges_ = bedges_;
    for (auto& be : m.bedges_) {
        be.edge = -1;
        be.loop = -1;
    }
    m.build_topology();
    return m;
}

std::string Mesh::to_text() const {
    std::ostringstream out;
    out << "plate-mesh v1\n";
    out << num_vertices() << ' ' << num_triangles() << ' ' << bedges_.size() << '\n';
    char buf[64];
    for (const auto& v : verts_) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x(), v.y());
        out << buf;
    }
    for (const auto& t : tris_) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& be : bedges_) {
        char tag = be.tag == BoundaryTag::Clamped ? 'c' : be.tag == BoundaryTag::SimplySupported ? 's' : 'f';
        out << be.a << ' ' << be.b << ' ' << tag << '\n';
    }
    return out.str();
}

Mesh load_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return Mesh::parse(ss.str());
}

void write_mesh_file(const Mesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file '" + path + "'");
    out << m.to_text();
}

}  // namespace rmplate
