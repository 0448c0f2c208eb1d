#include "rmplate/field.hpp"

#include "rmplate/quadrature.hpp"

namespace rmplate {

DiscreteField::DiscreteField(std::shared_ptr<const FESpace> space, Eigen::VectorXd free_coeffs)
    : space_(std::move(space)), free_(std::move(free_coeffs)) {
    if (free_.size() != space_->n_free())
        throw std::invalid_argument("DiscreteField: coefficient size does not match space");
    full_ = space_->to_full(free_);
}

DiscreteField DiscreteField::zero(std::shared_ptr<const FESpace> space) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(space->n_free());
    return DiscreteField(std::move(space), std::move(c));
}

void DiscreteField::sync() { full_ = space_->to_full(free_); }

FieldValue DiscreteField::eval_ref(int elem, const Vec2& ref) const {
    BasisValues bv;
    space_->eval_basis(elem, ref, bv);
    const auto& dofs = space_->cell_dofs(elem);
    FieldValue out;
    const int n = space_->n_local();
    switch (space_->family().kind) {
        case FamilyKind::LagrangeScalar:
        case FamilyKind::DGScalar:
            for (int i = 0; i < n; ++i) {
                const double c = full_(dofs[i]);
                out.value.x() += c * bv.values(i, 0);
                out.grad += c * bv.derivs.row(i).transpose();
            }
            break;
        case FamilyKind::LagrangeVector:
        case FamilyKind::BubbleVector:
            for (int i = 0; i < n; ++i) {
                const double c = full_(dofs[i]);
                out.value += c * bv.values.row(i).transpose();
                out.jac(0, 0) += c * bv.derivs(i, 0);
                out.jac(0, 1) += c * bv.derivs(i, 1);
                out.jac(1, 0) += c * bv.derivs(i, 2);
                out.jac(1, 1) += c * bv.derivs(i, 3);
            }
            break;
        case FamilyKind::RaviartThomas:
        case FamilyKind::BrezziDouglasMarini:
            for (int i = 0; i < n; ++i) {
                const double c = full_(dofs[i]);
                out.value += c * bv.values.row(i).transpose();
                out.rot += c * bv.derivs(i, 0);
            }
            break;
    }
    return out;
}

namespace {

// global node positions for the Lagrange lattice numbering
std::vector<Vec2> lagrange_node_positions(const Mesh& m, int p) {
    const int V = m.num_vertices(), E = m.num_edges(), T = m.num_triangles();
    const int n_int = (p - 1) * (p - 2) / 2;
    std::vector<Vec2> pos(V + (p - 1) * E + n_int * T);
    for (int v = 0; v < V; ++v) pos[v] = m.vertex(v);
    for (int e = 0; e < E; ++e) {
        const Vec2 a = m.vertex(m.edges()[e][0]);
        const Vec2 b = m.vertex(m.edges()[e][1]);
        for (int s = 0; s < p - 1; ++s) pos[V + e * (p - 1) + s] = a + (double(s + 1) / p) * (b - a);
    }
    if (n_int > 0) {
        for (int k = 0; k < T; ++k) {
            const auto& tri = m.triangles()[k];
            const Vec2 v0 = m.vertex(tri[0]);
            Eigen::Matrix2d J;
            J.col(0) = m.vertex(tri[1]) - v0;
            J.col(1) = m.vertex(tri[2]) - v0;
            int i = 0;
            for (int a = 1; a < p; ++a)
                for (int b = 1; a + b < p; ++b)
                    pos[V + E * (p - 1) + k * n_int + i++] = v0 + J * Vec2(double(a) / p, double(b) / p);
        }
    }
    return pos;
}

}  // namespace

DiscreteField interpolate(std::shared_ptr<const FESpace> space, const ScalarFn& g) {
    const Mesh& m = space->mesh();
    const Family fam = space->family();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(space->n_full());

    if (fam.kind == FamilyKind::LagrangeScalar) {
        auto pos = lagrange_node_positions(m, fam.degree);
        for (size_t n = 0; n < pos.size(); ++n) full(n) = g(pos[n]);
    } else if (fam.kind == FamilyKind::DGScalar) {
        const int p = fam.degree;
        const int nloc = (p + 1) * (p + 2) / 2;
        for (int k = 0; k < m.num_triangles(); ++k) {
            const auto& tri = m.triangles()[k];
            const Vec2 v0 = m.vertex(tri[0]);
            Eigen::Matrix2d J;
            J.col(0) = m.vertex(tri[1]) - v0;
            J.col(1) = m.vertex(tri[2]) - v0;
            // lattice in LagrangeRef slot order
            std::vector<Vec2> ref_nodes;
            const Vec2 R[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
            for (int v = 0; v < 3; ++v) ref_nodes.push_back(R[v]);
            for (int e = 0; e < 3; ++e)
                for (int i = 1; i < p; ++i)
                    ref_nodes.push_back(R[e] + (double(i) / p) * (R[(e + 1) % 3] - R[e]));
            for (int a = 1; a < p; ++a)
                for (int b = 1; a + b < p; ++b) ref_nodes.push_back(Vec2(double(a) / p, double(b) / p));
            for (int i = 0; i < nloc; ++i) full(space->cell_dofs(k)[i]) = g(v0 + J * ref_nodes[i]);
        }
    } else {
        throw std::invalid_argument("scalar interpolation requires a scalar family");
    }
    return DiscreteField(space, space->to_free(full));
}

DiscreteField interpolate(std::shared_ptr<const FESpace> space, const VectorFn& g) {
    const Mesh& m = space->mesh();
    const Family fam = space->family();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(space->n_full());

    if (fam.kind == FamilyKind::LagrangeVector || fam.kind == FamilyKind::BubbleVector) {
        auto pos = lagrange_node_positions(m, fam.degree);
        for (size_t n = 0; n < pos.size(); ++n) {
            const Vec2 v = g(pos[n]);
            full(2 * n) = v.x();
            full(2 * n + 1) = v.y();
        }
        // bubble coefficients stay zero
    } else if (fam.hrot_conforming()) {
        HrotDofs dofs(*space);
        full = dofs.apply([&](int, const Vec2& x) { return g(x); });
    } else {
        throw std::invalid_argument("vector interpolation requires a vector family");
    }
    return DiscreteField(space, space->to_free(full));
}

double integrate(const Mesh& m, int quad_degree,
                 const std::function<double(int elem, const Vec2& x)>& integrand) {
    const QuadratureRule& rule = QuadratureRule::triangle(quad_degree);
    double sum = 0.0;
    for (int k = 0; k < m.num_triangles(); ++k) {
        const auto& tri = m.triangles()[k];
        const Vec2 v0 = m.vertex(tri[0]);
        Eigen::Matrix2d J;
        J.col(0) = m.vertex(tri[1]) - v0;
        J.col(1) = m.vertex(tri[2]) - v0;
        const double detJ = J.determinant();
        double local = 0.0;
        for (int q = 0; q < rule.size(); ++q) local += rule.weights[q] * integrand(k, v0 + J * rule.points[q]);
        sum += detJ * local;
    }
    return sum;
}

}  // namespace rmplate
