#ifndef RMPLATE_SPACE_HPP
#define RMPLATE_SPACE_HPP

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rmplate/family.hpp"
#include "rmplate/mesh.hpp"
#include "rmplate/topology.hpp"

namespace rmplate {

using SpMat = Eigen::SparseMatrix<double>;

/// Which essential constraints to impose when building a space.
enum class SpaceBC {
    None,        // unconstrained
    H1Gamma,     // scalar, zero on Gamma_c U Gamma_s
    ThetaGamma,  // vector, zero on Gamma_c, tangential zero on Gamma_s
    HrotGamma,   // H(rot), zero tangential trace on Gamma_c U Gamma_s
    L2Gamma,     // mean-zero iff the mesh has no free boundary
    TiedCs,      // scalar, zero on cs-component 0, one shared constant per
                 // further cs-component (the space W^h cap W_Gamma)
};

/// Values of all local basis functions of one element at one reference point.
///
/// `values` is n_loc x n_comp. The derivative layout depends on the family:
/// scalar families store the physical gradient (n_loc x 2), H^1 vector
/// families the full Jacobian (n_loc x 4, rows [dux/dx dux/dy duy/dx duy/dy]),
/// and H(rot) families the scalar rot (n_loc x 1).
struct BasisValues {
    Eigen::MatrixXd values;
    Eigen::MatrixXd derivs;
};

/// A global finite element space with its degree-of-freedom maps and the
/// constraint matrix Z mapping free coefficients to full coefficients.
///
/// All constrained subspaces are represented as x_full = Z x_free with
/// Z^T Z diagonal, which keeps interpolation and matrix reduction uniform
/// across plain eliminations, rotated (tangential-frame) dofs, and tied
/// component constants.
class FESpace {
public:
    FESpace(std::shared_ptr<const Mesh> mesh, Family family, SpaceBC bc);

    const Mesh& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
    Family family() const { return family_; }
    SpaceBC bc() const { return bc_; }

    int n_full() const { return n_full_; }
    int n_free() const { return static_cast<int>(Z_.cols()); }
    int n_comp() const { return family_.scalar_valued() ? 1 : 2; }

    const std::vector<int>& cell_dofs(int k) const { return cell_dofs_[k]; }
    int n_local() const { return n_local_; }

    const SpMat& Z() const { return Z_; }
    /// Lift free coefficients to the full dof vector.
    Eigen::VectorXd to_full(const Eigen::VectorXd& free) const { return Z_ * free; }
    /// Least-squares restriction of full coefficients onto the constrained
    /// space (exact inverse of to_full on its range).
    Eigen::VectorXd to_free(const Eigen::VectorXd& full) const;
    SpMat reduce_matrix(const SpMat& full) const { return Z_.transpose() * full * Z_; }
    Eigen::VectorXd reduce_vector(const Eigen::VectorXd& full) const { return Z_.transpose() * full; }

    /// True when an L2Gamma space carries the zero-mean side constraint.
    bool mean_constrained() const { return mean_constrained_; }
    /// Integral of every (full) basis function; empty unless mean_constrained.
    const Eigen::VectorXd& mean_vector() const { return mean_vec_; }

    /// Effective dimension: free dofs minus the mean constraint if active.
    int dim() const { return n_free() - (mean_constrained_ ? 1 : 0); }

    void eval_basis(int k, const Vec2& ref, BasisValues& out) const;

    /// Full-dof indices of the tangential-moment dofs on a global edge
    /// (H(rot) families only; empty for other families or interior-only dofs).
    std::vector<int> edge_dofs(int edge) const;
    /// Full-dof indices that are interior to element k (not shared).
    std::vector<int> interior_dofs(int k) const;

    /// Test hook: returns a copy of this space with one interior free dof
    /// removed from element 0 (used as a diagnostics negative control).
    FESpace with_dropped_interior_dof() const;

    /// Expected full dimension from the closed-form family count.
    static int full_dim_formula(const Mesh& m, Family f);

private:
    void build_dof_map();
    void build_constraints();
    void build_hrot_coefficients();

    std::shared_ptr<const Mesh> mesh_;
    Family family_;
    SpaceBC bc_;

    int n_full_ = 0;
    int n_local_ = 0;
    std::vector<std::vector<int>> cell_dofs_;
    SpMat Z_;
    Eigen::VectorXd zt_z_inv_diag_;
    bool mean_constrained_ = false;
    Eigen::VectorXd mean_vec_;

    // per-element nodal-basis coefficients over the local modal basis
    // (H(rot) families only)
    std::vector<Eigen::MatrixXd> hrot_coeffs_;

    friend class HrotDofs;
};

/// Evaluation of the canonical dof functionals of an H(rot) space applied to
/// an arbitrary vector field given by a per-point callback. Used for both
/// canonical interpolation and the reduction operators.
class HrotDofs {
public:
    /// field(elem, physical point) -> vector value; elem is a hint for
    /// discrete fields and is always an element adjacent to the point.
    using FieldFn = std::function<Vec2(int elem, const Vec2&)>;

    explicit HrotDofs(const FESpace& space);

    /// All full dofs of the target space applied to the field.
    Eigen::VectorXd apply(const FieldFn& field) const;

    int edge_moments_per_edge() const { return n_edge_; }

private:
    const FESpace& space_;
    int n_edge_ = 0;
    int n_interior_ = 0;
};

Eigen::VectorXd legendre_all(int max_degree, double x);

}  // namespace rmplate

#endif
