#include "rmplate/space.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "rmplate/quadrature.hpp"

namespace rmplate {

namespace {

// ---------------------------------------------------------------------------
// monomial utilities

std::vector<std::array<int, 2>> monomials_up_to(int p) {
    std::vector<std::array<int, 2>> e;
    for (int d = 0; d <= p; ++d)
        for (int a = d; a >= 0; --a) e.push_back({a, d - a});
    return e;
}

std::vector<std::array<int, 2>> monomials_homogeneous(int p) {
    std::vector<std::array<int, 2>> e;
    for (int a = p; a >= 0; --a) e.push_back({a, p - a});
    return e;
}

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

inline double mono_val(const std::array<int, 2>& e, const Vec2& x) {
    return ipow(x.x(), e[0]) * ipow(x.y(), e[1]);
}

inline Vec2 mono_grad(const std::array<int, 2>& e, const Vec2& x) {
    double gx = e[0] > 0 ? e[0] * ipow(x.x(), e[0] - 1) * ipow(x.y(), e[1]) : 0.0;
    double gy = e[1] > 0 ? e[1] * ipow(x.x(), e[0]) * ipow(x.y(), e[1] - 1) : 0.0;
    return Vec2(gx, gy);
}

// ---------------------------------------------------------------------------
// Lagrange reference element (equispaced lattice nodes)

struct LagrangeRef {
    int p = 0;
    std::vector<Vec2> nodes;                 // vertex, edge, interior slots
    std::vector<std::array<int, 2>> expo;
    Eigen::MatrixXd coeff;                   // n x n, nodal basis over monomials
    int n_interior = 0;

    int n_nodes() const { return static_cast<int>(nodes.size()); }

    static const LagrangeRef& get(int p);
};

const LagrangeRef& LagrangeRef::get(int p) {
    static std::map<int, LagrangeRef> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;

    LagrangeRef r;
    r.p = p;
    const Vec2 R[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    for (int v = 0; v < 3; ++v) r.nodes.push_back(R[v]);
    for (int e = 0; e < 3; ++e) {
        Vec2 a = R[e], b = R[(e + 1) % 3];
        for (int i = 1; i < p; ++i) r.nodes.push_back(a + (double(i) / p) * (b - a));
    }
    for (int i = 1; i < p; ++i)
        for (int j = 1; i + j < p; ++j) {
            r.nodes.push_back(Vec2(double(i) / p, double(j) / p));
            ++r.n_interior;
        }

    r.expo = monomials_up_to(p);
    const int n = r.n_nodes();
    Eigen::MatrixXd V(n, n);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) V(i, m) = mono_val(r.expo[m], r.nodes[i]);
    r.coeff = V.fullPivLu().inverse();

    return cache.emplace(p, std::move(r)).first->second;
}

void lagrange_eval(const LagrangeRef& ref, const Vec2& x, Eigen::VectorXd& vals, Eigen::MatrixXd& grads) {
    const int n = ref.n_nodes();
    Eigen::VectorXd mv(n);
    Eigen::MatrixXd mg(n, 2);
    for (int m = 0; m < n; ++m) {
        mv(m) = mono_val(ref.expo[m], x);
        mg.row(m) = mono_grad(ref.expo[m], x).transpose();
    }
    vals = ref.coeff.transpose() * mv;
    grads = ref.coeff.transpose() * mg;
}

// reference bubble b = (1-x-y) x y and its gradient
inline double bubble_val(const Vec2& x) { return (1.0 - x.x() - x.y()) * x.x() * x.y(); }
inline Vec2 bubble_grad(const Vec2& x) {
    double l0 = 1.0 - x.x() - x.y();
    return Vec2(x.y() * (l0 - x.x()), x.x() * (l0 - x.y()));
}

// ---------------------------------------------------------------------------
// modal bases for the H(rot) families (physical frame, centroid-scaled)

struct HrotModal {
    // component-times-monomial entries followed by x-perp entries
    std::vector<std::array<int, 2>> comp_expo;   // shared for both components
    std::vector<std::array<int, 2>> perp_expo;   // x^perp q entries
    int size() const { return 2 * static_cast<int>(comp_expo.size()) + static_cast<int>(perp_expo.size()); }
};

HrotModal hrot_modal(Family f) {
    HrotModal m;
    if (f.kind == FamilyKind::RaviartThomas) {
        m.comp_expo = monomials_up_to(f.degree - 1);
        m.perp_expo = monomials_homogeneous(f.degree - 1);
    } else {
        m.comp_expo = monomials_up_to(f.degree);
    }
    return m;
}

// value (2 rows) and rot (1 row) of every modal function at a physical point
void hrot_modal_eval(const HrotModal& m, const Vec2& centroid, double h, const Vec2& x,
                     Eigen::MatrixXd& vals, Eigen::VectorXd& rots) {
    const Vec2 xt = (x - centroid) / h;
    const int nc = static_cast<int>(m.comp_expo.size());
    const int np = static_cast<int>(m.perp_expo.size());
    vals.resize(2 * nc + np, 2);
    rots.resize(2 * nc + np);
    for (int i = 0; i < nc; ++i) {
        double v = mono_val(m.comp_expo[i], xt);
        Vec2 g = mono_grad(m.comp_expo[i], xt) / h;
        vals.row(i) = Eigen::RowVector2d(v, 0.0);
        rots(i) = -g.y();                       // rot (v, 0) = -dv/dy
        vals.row(nc + i) = Eigen::RowVector2d(0.0, v);
        rots(nc + i) = g.x();                   // rot (0, v) = dv/dx
    }
    for (int i = 0; i < np; ++i) {
        double v = mono_val(m.perp_expo[i], xt);
        Vec2 g = mono_grad(m.perp_expo[i], xt);
        vals.row(2 * nc + i) = Eigen::RowVector2d(-xt.y() * v, xt.x() * v);
        rots(2 * nc + i) = (2.0 * v + xt.x() * g.x() + xt.y() * g.y()) / h;
    }
}

struct HrotLayout {
    int n_edge = 0;      // tangential moments per edge
    int n_interior = 0;  // interior moments per element
};

HrotLayout hrot_layout(Family f) {
    int p = f.degree;
    if (f.kind == FamilyKind::RaviartThomas) return {p, p * (p - 1)};
    return {p + 1, (p - 1) * (p + 1)};
}

// interior moment weight functions: e_comp * monomial (and x-perp block for BDM)
struct InteriorMoments {
    std::vector<std::array<int, 2>> comp_expo;
    std::vector<std::array<int, 2>> perp_expo;
};

InteriorMoments hrot_interior_moments(Family f) {
    InteriorMoments im;
    int p = f.degree;
    if (p >= 2) im.comp_expo = monomials_up_to(p - 2);
    if (f.kind == FamilyKind::BrezziDouglasMarini && p >= 2)
        im.perp_expo = monomials_homogeneous(p - 2);
    return im;
}

}  // namespace

Eigen::VectorXd legendre_all(int max_degree, double x) {
    Eigen::VectorXd L(max_degree + 1);
    L(0) = 1.0;
    if (max_degree >= 1) L(1) = x;
    for (int k = 2; k <= max_degree; ++k)
        L(k) = ((2 * k - 1) * x * L(k - 1) - (k - 1) * L(k - 2)) / k;
    return L;
}

// ---------------------------------------------------------------------------
// FESpace

FESpace::FESpace(std::shared_ptr<const Mesh> mesh, Family family, SpaceBC bc)
    : mesh_(std::move(mesh)), family_(family), bc_(bc) {
    switch (bc_) {
        case SpaceBC::H1Gamma:
        case SpaceBC::TiedCs:
            if (family_.kind != FamilyKind::LagrangeScalar)
                throw std::invalid_argument("scalar H^1 constraints require a Lagrange scalar family");
            break;
        case SpaceBC::ThetaGamma:
            if (family_.kind != FamilyKind::LagrangeVector && family_.kind != FamilyKind::BubbleVector)
                throw std::invalid_argument("Theta_Gamma constraints require an H^1 vector family");
            break;
        case SpaceBC::HrotGamma:
            if (!family_.hrot_conforming())
                throw std::invalid_argument("H_Gamma(rot) constraints require an H(rot) family");
            break;
        case SpaceBC::L2Gamma:
            if (family_.kind != FamilyKind::DGScalar)
                throw std::invalid_argument("L^2_Gamma constraints require the DG family");
            break;
        case SpaceBC::None:
            break;
    }
    build_dof_map();
    if (family_.hrot_conforming()) build_hrot_coefficients();
    build_constraints();
}

int FESpace::full_dim_formula(const Mesh& m, Family f) {
    const int V = m.num_vertices(), E = m.num_edges(), T = m.num_triangles();
    const int p = f.degree;
    switch (f.kind) {
        case FamilyKind::LagrangeScalar:
            return V + (p - 1) * E + (p - 1) * (p - 2) / 2 * T;
        case FamilyKind::LagrangeVector:
            return 2 * (V + (p - 1) * E + (p - 1) * (p - 2) / 2 * T);
        case FamilyKind::BubbleVector:
            return 2 * (V + (p - 1) * E + (p - 1) * (p - 2) / 2 * T) + 2 * (p - 1) * T;
        case FamilyKind::RaviartThomas:
            return p * E + p * (p - 1) * T;
        case FamilyKind::BrezziDouglasMarini:
            return (p + 1) * E + (p * p - 1) * T;
        case FamilyKind::DGScalar:
            return (p + 1) * (p + 2) / 2 * T;
    }
    return 0;
}

void FESpace::build_dof_map() {
    const Mesh& m = *mesh_;
    const int V = m.num_vertices(), E = m.num_edges(), T = m.num_triangles();
    const int p = family_.degree;
    n_full_ = full_dim_formula(m, family_);
    cell_dofs_.assign(T, {});

    auto scalar_cell_nodes = [&](int k) {
        // global node ids in LagrangeRef slot order
        const auto& tri = m.triangles()[k];
        const int n_int = (p - 1) * (p - 2) / 2;
        std::vector<int> nodes;
        nodes.reserve(3 + 3 * (p - 1) + n_int);
        for (int v = 0; v < 3; ++v) nodes.push_back(tri[v]);
        for (int j = 0; j < 3; ++j) {
            int a = tri[j], b = tri[(j + 1) % 3];
            int e = m.tri_edges(k)[j];
            for (int i = 1; i < p; ++i) {
                int slot = (a < b) ? (i - 1) : (p - 1 - i);
                nodes.push_back(V + e * (p - 1) + slot);
            }
        }
        for (int i = 0; i < n_int; ++i) nodes.push_back(V + E * (p - 1) + k * n_int + i);
        return nodes;
    };

    switch (family_.kind) {
        case FamilyKind::LagrangeScalar: {
            n_local_ = (p + 1) * (p + 2) / 2;
            for (int k = 0; k < T; ++k) cell_dofs_[k] = scalar_cell_nodes(k);
            break;
        }
        case FamilyKind::LagrangeVector:
        case FamilyKind::BubbleVector: {
            const int n_nodes = V + (p - 1) * E + (p - 1) * (p - 2) / 2 * T;
            const int nb = family_.kind == FamilyKind::BubbleVector ? p - 1 : 0;
            n_local_ = (p + 1) * (p + 2) + 2 * nb;
            for (int k = 0; k < T; ++k) {
                auto nodes = scalar_cell_nodes(k);
                auto& dofs = cell_dofs_[k];
                dofs.reserve(n_local_);
                for (int n : nodes) {
                    dofs.push_back(2 * n);
                    dofs.push_back(2 * n + 1);
                }
                for (int i = 0; i < nb; ++i) {
                    dofs.push_back(2 * n_nodes + k * 2 * nb + 2 * i);
                    dofs.push_back(2 * n_nodes + k * 2 * nb + 2 * i + 1);
                }
            }
            break;
        }
        case FamilyKind::RaviartThomas:
        case FamilyKind::BrezziDouglasMarini: {
            auto lay = hrot_layout(family_);
            n_local_ = 3 * lay.n_edge + lay.n_interior;
            for (int k = 0; k < T; ++k) {
                auto& dofs = cell_dofs_[k];
                dofs.reserve(n_local_);
                for (int j = 0; j < 3; ++j) {
                    int e = m.tri_edges(k)[j];
                    for (int l = 0; l < lay.n_edge; ++l) dofs.push_back(e * lay.n_edge + l);
                }
                for (int i = 0; i < lay.n_interior; ++i)
                    dofs.push_back(E * lay.n_edge + k * lay.n_interior + i);
            }
            break;
        }
        case FamilyKind::DGScalar: {
            n_local_ = (p + 1) * (p + 2) / 2;
            for (int k = 0; k < T; ++k) {
                auto& dofs = cell_dofs_[k];
                for (int i = 0; i < n_local_; ++i) dofs.push_back(k * n_local_ + i);
            }
            break;
        }
    }
}

void FESpace::build_hrot_coefficients() {
    const Mesh& m = *mesh_;
    const HrotModal modal = hrot_modal(family_);
    const HrotLayout lay = hrot_layout(family_);
    const InteriorMoments im = hrot_interior_moments(family_);
    const int p = family_.degree;
    const int n = n_local_;

    const GaussRule& edge_rule = GaussRule::for_degree(2 * p + 3);
    const QuadratureRule& tri_rule = QuadratureRule::triangle(2 * p + 2);

    hrot_coeffs_.resize(m.num_triangles());
    Eigen::MatrixXd mv;
    Eigen::VectorXd mr;
    for (int k = 0; k < m.num_triangles(); ++k) {
        const Vec2 c = m.tri_centroid(k);
        const double h = m.tri_diameter(k);
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);  // dof x modal
        int row = 0;
        for (int j = 0; j < 3; ++j) {
            const int e = m.tri_edges(k)[j];
            const Vec2 pa = m.vertex(m.edges()[e][0]);
            const Vec2 pb = m.vertex(m.edges()[e][1]);
            const Vec2 t = (pb - pa).normalized();
            for (size_t q = 0; q < edge_rule.points.size(); ++q) {
                const double s = edge_rule.points[q];
                const Vec2 x = 0.5 * (pa + pb) + 0.5 * s * (pb - pa);
                hrot_modal_eval(modal, c, h, x, mv, mr);
                const Eigen::VectorXd tangential = mv * t;  // n_modal
                const Eigen::VectorXd L = legendre_all(lay.n_edge - 1, s);
                for (int l = 0; l < lay.n_edge; ++l)
                    D.row(row + l) += 0.5 * edge_rule.weights[q] * L(l) * tangential.transpose();
            }
            row += lay.n_edge;
        }
        const auto& tri = m.triangles()[k];
        const Vec2 v0 = m.vertex(tri[0]);
        Eigen::Matrix2d J;
        J.col(0) = m.vertex(tri[1]) - v0;
        J.col(1) = m.vertex(tri[2]) - v0;
        const double detJ = J.determinant();
        const int n_comp_mom = static_cast<int>(im.comp_expo.size());
        for (size_t q = 0; q < tri_rule.points.size(); ++q) {
            const Vec2 x = v0 + J * tri_rule.points[q];
            const Vec2 xt = (x - c) / h;
            const double w = tri_rule.weights[q] * detJ / m.tri_area(k);  // 1/|K| normalization
            hrot_modal_eval(modal, c, h, x, mv, mr);
            for (int i = 0; i < n_comp_mom; ++i) {
                const double mval = mono_val(im.comp_expo[i], xt);
                D.row(row + i) += w * mval * mv.col(0).transpose();
                D.row(row + n_comp_mom + i) += w * mval * mv.col(1).transpose();
            }
            for (int i = 0; i < static_cast<int>(im.perp_expo.size()); ++i) {
                const double mval = mono_val(im.perp_expo[i], xt);
                const Vec2 eta(-xt.y() * mval, xt.x() * mval);
                D.row(row + 2 * n_comp_mom + i) += w * (mv * eta).transpose();
            }
        }
        hrot_coeffs_[k] = D.fullPivLu().inverse();  // modal x dof
    }
}

void FESpace::eval_basis(int k, const Vec2& ref, BasisValues& out) const {
    const Mesh& m = *mesh_;
    const auto& tri = m.triangles()[k];
    const Vec2 v0 = m.vertex(tri[0]);
    Eigen::Matrix2d J;
    J.col(0) = m.vertex(tri[1]) - v0;
    J.col(1) = m.vertex(tri[2]) - v0;
    const Eigen::Matrix2d Jit = J.inverse().transpose();

    switch (family_.kind) {
        case FamilyKind::LagrangeScalar:
        case FamilyKind::DGScalar: {
            const LagrangeRef& lref = LagrangeRef::get(family_.degree);
            Eigen::VectorXd vals;
            Eigen::MatrixXd grads;
            lagrange_eval(lref, ref, vals, grads);
            out.values = vals;
            out.derivs = grads * Jit.transpose();  // physical gradients
            break;
        }
        case FamilyKind::LagrangeVector:
        case FamilyKind::BubbleVector: {
            const LagrangeRef& lref = LagrangeRef::get(family_.degree);
            Eigen::VectorXd vals;
            Eigen::MatrixXd grads;
            lagrange_eval(lref, ref, vals, grads);
            const int nn = lref.n_nodes();
            const int nb = family_.kind == FamilyKind::BubbleVector ? family_.degree - 1 : 0;
            out.values.setZero(n_local_, 2);
            out.derivs.setZero(n_local_, 4);
            for (int i = 0; i < nn; ++i) {
                const Vec2 g = Jit * grads.row(i).transpose();
                out.values(2 * i, 0) = vals(i);
                out.values(2 * i + 1, 1) = vals(i);
                out.derivs(2 * i, 0) = g.x();
                out.derivs(2 * i, 1) = g.y();
                out.derivs(2 * i + 1, 2) = g.x();
                out.derivs(2 * i + 1, 3) = g.y();
            }
            if (nb > 0) {
                const double b = bubble_val(ref);
                const Vec2 gb = bubble_grad(ref);
                const auto homog = monomials_homogeneous(family_.degree - 2);
                for (int i = 0; i < nb; ++i) {
                    const double mval = mono_val(homog[i], ref);
                    const Vec2 gm = mono_grad(homog[i], ref);
                    const double v = b * mval;
                    const Vec2 g = Jit * (gb * mval + b * gm);
                    const int r = 2 * nn + 2 * i;
                    out.values(r, 0) = v;
                    out.values(r + 1, 1) = v;
                    out.derivs(r, 0) = g.x();
                    out.derivs(r, 1) = g.y();
                    out.derivs(r + 1, 2) = g.x();
                    out.derivs(r + 1, 3) = g.y();
                }
            }
            break;
        }
        case FamilyKind::RaviartThomas:
        case FamilyKind::BrezziDouglasMarini: {
            const HrotModal modal = hrot_modal(family_);
            Eigen::MatrixXd mv;
            Eigen::VectorXd mr;
            const Vec2 x = v0 + J * ref;
            hrot_modal_eval(modal, m.tri_centroid(k), m.tri_diameter(k), x, mv, mr);
            const Eigen::MatrixXd& C = hrot_coeffs_[k];  // modal x dof
            out.values = C.transpose() * mv;             // n_local x 2
            out.derivs = C.transpose() * mr;             // n_local x 1
            break;
        }
    }
}

namespace {

struct NodeConstraint {
    bool clamped = false;
    std::vector<Vec2> s_tangents;
};

}  // namespace

void FESpace::build_constraints() {
    const Mesh& m = *mesh_;
    const int p = family_.degree;
    const int V = m.num_vertices(), E = m.num_edges();

    std::vector<Eigen::Triplet<double>> trip;
    int n_free = 0;
    auto push_unit = [&](int full_dof) {
        trip.emplace_back(full_dof, n_free, 1.0);
        ++n_free;
    };

    auto nodes_of_bedge = [&](const Mesh::BoundaryEdge& be) {
        std::vector<int> nodes = {be.a, be.b};
        for (int i = 0; i < p - 1; ++i) nodes.push_back(V + be.edge * (p - 1) + i);
        return nodes;
    };

    switch (bc_) {
        case SpaceBC::None: {
            Z_.resize(n_full_, n_full_);
            Z_.setIdentity();
            zt_z_inv_diag_ = Eigen::VectorXd::Ones(n_full_);
            return;
        }
        case SpaceBC::H1Gamma: {
            std::vector<char> fixed(n_full_, 0);
            for (const auto& be : m.boundary_edges()) {
                if (be.tag == BoundaryTag::Free) continue;
                for (int n : nodes_of_bedge(be)) fixed[n] = 1;
            }
            for (int d = 0; d < n_full_; ++d)
                if (!fixed[d]) push_unit(d);
            break;
        }
        case SpaceBC::ThetaGamma: {
            const int n_nodes = V + (p - 1) * E + (p - 1) * (p - 2) / 2 * m.num_triangles();
            std::map<int, NodeConstraint> bc_nodes;
            for (const auto& be : m.boundary_edges()) {
                if (be.tag == BoundaryTag::Free) continue;
                const Vec2 t = m.edge_tangent(be.edge);
                for (int n : nodes_of_bedge(be)) {
                    auto& nc = bc_nodes[n];
                    if (be.tag == BoundaryTag::Clamped)
                        nc.clamped = true;
                    else
                        nc.s_tangents.push_back(t);
                }
            }
            for (int node = 0; node < n_nodes; ++node) {
                auto it = bc_nodes.find(node);
                if (it == bc_nodes.end()) {
                    push_unit(2 * node);
                    push_unit(2 * node + 1);
                    continue;
                }
                const auto& nc = it->second;
                if (nc.clamped) continue;  // both components zero
                // distinct tangential constraints at this node
                bool independent_pair = false;
                const Vec2 t0 = nc.s_tangents.front();
                for (const Vec2& t : nc.s_tangents)
                    if (std::abs(t0.x() * t.y() - t0.y() * t.x()) > 1e-12) independent_pair = true;
                if (independent_pair) continue;  // two directions pin the node
                const Vec2 n(-t0.y(), t0.x());   // free motion along the edge normal
                trip.emplace_back(2 * node, n_free, n.x());
                trip.emplace_back(2 * node + 1, n_free, n.y());
                ++n_free;
            }
            const int first_extra = 2 * n_nodes;
            for (int d = first_extra; d < n_full_; ++d) push_unit(d);  // bubbles
            break;
        }
        case SpaceBC::HrotGamma: {
            const HrotLayout lay = hrot_layout(family_);
            std::vector<char> fixed(n_full_, 0);
            for (const auto& be : m.boundary_edges()) {
                if (be.tag == BoundaryTag::Free) continue;
                for (int l = 0; l < lay.n_edge; ++l) fixed[be.edge * lay.n_edge + l] = 1;
            }
            for (int d = 0; d < n_full_; ++d)
                if (!fixed[d]) push_unit(d);
            break;
        }
        case SpaceBC::L2Gamma: {
            Z_.resize(n_full_, n_full_);
            Z_.setIdentity();
            zt_z_inv_diag_ = Eigen::VectorXd::Ones(n_full_);
            bool any_free = false;
            for (const auto& be : m.boundary_edges()) any_free |= be.tag == BoundaryTag::Free;
            mean_constrained_ = !any_free;
            if (mean_constrained_) {
                mean_vec_ = Eigen::VectorXd::Zero(n_full_);
                const QuadratureRule& rule = QuadratureRule::triangle(p);
                BasisValues bv;
                for (int k = 0; k < m.num_triangles(); ++k) {
                    const double scale = 2.0 * m.tri_area(k);
                    for (int q = 0; q < rule.size(); ++q) {
                        eval_basis(k, rule.points[q], bv);
                        const auto& dofs = cell_dofs_[k];
                        for (int i = 0; i < n_local_; ++i)
                            mean_vec_(dofs[i]) += rule.weights[q] * scale * bv.values(i, 0);
                    }
                }
            }
            return;
        }
        case SpaceBC::TiedCs: {
            const BoundaryTopology topo = boundary_topology(m);
            // node -> cs component (nodes on Gamma_cs closure)
            std::map<int, int> comp_of_node;
            for (int i = 0; i < static_cast<int>(m.boundary_edges().size()); ++i) {
                const auto& be = m.boundary_edges()[i];
                if (be.tag == BoundaryTag::Free) continue;
                const int comp = topo.cs_component_of_bedge[i];
                for (int n : nodes_of_bedge(be)) comp_of_node[n] = comp;
            }
            std::vector<int> tied_col(topo.n_cs, -1);
            for (int d = 0; d < n_full_; ++d) {
                auto it = comp_of_node.find(d);
                if (it == comp_of_node.end()) {
                    push_unit(d);
                    continue;
                }
                const int comp = it->second;
                if (comp == 0) continue;  // pinned component
                if (tied_col[comp] < 0) tied_col[comp] = n_free++;
                trip.emplace_back(d, tied_col[comp], 1.0);
            }
            break;
        }
    }

    Z_.resize(n_full_, n_free);
    Z_.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n_free);
    for (const auto& t : trip) diag(t.col()) += t.value() * t.value();
    zt_z_inv_diag_ = diag.cwiseInverse();
}

Eigen::VectorXd FESpace::to_free(const Eigen::VectorXd& full) const {
    return zt_z_inv_diag_.asDiagonal() * (Z_.transpose() * full);
}

std::vector<int> FESpace::edge_dofs(int edge) const {
    if (!family_.hrot_conforming()) return {};
    const HrotLayout lay = hrot_layout(family_);
    std::vector<int> d(lay.n_edge);
    for (int l = 0; l < lay.n_edge; ++l) d[l] = edge * lay.n_edge + l;
    return d;
}

std::vector<int> FESpace::interior_dofs(int k) const {
    const Mesh& m = *mesh_;
    const int p = family_.degree;
    const int V = m.num_vertices(), E = m.num_edges();
    std::vector<int> out;
    switch (family_.kind) {
        case FamilyKind::LagrangeScalar: {
            const int n_int = (p - 1) * (p - 2) / 2;
            for (int i = 0; i < n_int; ++i) out.push_back(V + E * (p - 1) + k * n_int + i);
            break;
        }
        case FamilyKind::LagrangeVector:
        case FamilyKind::BubbleVector: {
            const int n_int = (p - 1) * (p - 2) / 2;
            const int n_nodes = V + (p - 1) * E + n_int * m.num_triangles();
            for (int i = 0; i < n_int; ++i) {
                out.push_back(2 * (V + E * (p - 1) + k * n_int + i));
                out.push_back(2 * (V + E * (p - 1) + k * n_int + i) + 1);
            }
            if (family_.kind == FamilyKind::BubbleVector)
                for (int i = 0; i < 2 * (p - 1); ++i) out.push_back(2 * n_nodes + k * 2 * (p - 1) + i);
            break;
        }
        case FamilyKind::RaviartThomas:
        case FamilyKind::BrezziDouglasMarini: {
            const HrotLayout lay = hrot_layout(family_);
            for (int i = 0; i < lay.n_interior; ++i) out.push_back(E * lay.n_edge + k * lay.n_interior + i);
            break;
        }
        case FamilyKind::DGScalar: {
            for (int d : cell_dofs_[k]) out.push_back(d);
            break;
        }
    }
    return out;
}

FESpace FESpace::with_dropped_interior_dof() const {
    auto ids = interior_dofs(0);
    if (ids.empty()) throw std::logic_error("space has no interior dofs on element 0");
    const int drop_full = ids.front();

    FESpace copy = *this;
    // locate the free column supported on the dropped full dof
    int drop_col = -1;
    for (int c = 0; c < copy.Z_.outerSize() && drop_col < 0; ++c)
        for (SpMat::InnerIterator it(copy.Z_, c); it; ++it)
            if (it.row() == drop_full) {
                drop_col = c;
                break;
            }
    if (drop_col < 0) throw std::logic_error("interior dof is already constrained");

    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < copy.Z_.outerSize(); ++c) {
        if (c == drop_col) continue;
        const int nc = c < drop_col ? c : c - 1;
        for (SpMat::InnerIterator it(copy.Z_, c); it; ++it) trip.emplace_back(it.row(), nc, it.value());
    }
    SpMat Z(copy.n_full_, copy.Z_.cols() - 1);
    Z.setFromTriplets(trip.begin(), trip.end());
    copy.Z_ = std::move(Z);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(copy.Z_.cols());
    for (int c = 0; c < copy.Z_.outerSize(); ++c)
        for (SpMat::InnerIterator it(copy.Z_, c); it; ++it) diag(c) += it.value() * it.value();
    copy.zt_z_inv_diag_ = diag.cwiseInverse();
    return copy;
}

// ---------------------------------------------------------------------------
// canonical H(rot) dof evaluation

HrotDofs::HrotDofs(const FESpace& space) : space_(space) {
    if (!space.family().hrot_conforming())
        throw std::invalid_argument("HrotDofs requires an H(rot) space");
    const HrotLayout lay = hrot_layout(space.family());
    n_edge_ = lay.n_edge;
    n_interior_ = lay.n_interior;
}

Eigen::VectorXd HrotDofs::apply(const FieldFn& field) const {
    const Mesh& m = space_.mesh();
    const Family fam = space_.family();
    const int p = fam.degree;
    Eigen::VectorXd dofs = Eigen::VectorXd::Zero(space_.n_full());

    const GaussRule& edge_rule = GaussRule::for_degree(2 * p + 11);
    for (int e = 0; e < m.num_edges(); ++e) {
        const int elem = m.edge_tris(e)[0];
        const Vec2 pa = m.vertex(m.edges()[e][0]);
        const Vec2 pb = m.vertex(m.edges()[e][1]);
        const Vec2 t = (pb - pa).normalized();
        for (size_t q = 0; q < edge_rule.points.size(); ++q) {
            const double s = edge_rule.points[q];
            const Vec2 x = 0.5 * (pa + pb) + 0.5 * s * (pb - pa);
            const double tv = t.dot(field(elem, x));
            const Eigen::VectorXd L = legendre_all(n_edge_ - 1, s);
            for (int l = 0; l < n_edge_; ++l) dofs(e * n_edge_ + l) += 0.5 * edge_rule.weights[q] * L(l) * tv;
        }
    }

    if (n_interior_ > 0) {
        const InteriorMoments im = hrot_interior_moments(fam);
        const int n_comp_mom = static_cast<int>(im.comp_expo.size());
        const QuadratureRule& rule = QuadratureRule::triangle(2 * p + 8);
        for (int k = 0; k < m.num_triangles(); ++k) {
            const auto& tri = m.triangles()[k];
            const Vec2 v0 = m.vertex(tri[0]);
            Eigen::Matrix2d J;
            J.col(0) = m.vertex(tri[1]) - v0;
            J.col(1) = m.vertex(tri[2]) - v0;
            const double detJ = J.determinant();
            const Vec2 c = m.tri_centroid(k);
            const double h = m.tri_diameter(k);
            const int base = m.num_edges() * n_edge_ + k * n_interior_;
            for (int q = 0; q < rule.size(); ++q) {
                const Vec2 x = v0 + J * rule.points[q];
                const Vec2 xt = (x - c) / h;
                const double w = rule.weights[q] * detJ / m.tri_area(k);
                const Vec2 v = field(k, x);
                for (int i = 0; i < n_comp_mom; ++i) {
                    const double mval = mono_val(im.comp_expo[i], xt);
                    dofs(base + i) += w * mval * v.x();
                    dofs(base + n_comp_mom + i) += w * mval * v.y();
                }
                for (int i = 0; i < static_cast<int>(im.perp_expo.size()); ++i) {
                    const double mval = mono_val(im.perp_expo[i], xt);
                    dofs(base + 2 * n_comp_mom + i) += w * mval * Vec2(-xt.y(), xt.x()).dot(v);
                }
            }
        }
    }
    return dofs;
}

}  // namespace rmplate
