#ifndef RMPLATE_FIELD_HPP
#define RMPLATE_FIELD_HPP

#include <functional>
#include <memory>

#include <Eigen/Core>

#include "rmplate/space.hpp"

namespace rmplate {

/// Value and derivative of a discrete field at a point. The derivative slot
/// follows the family convention of BasisValues.
struct FieldValue {
    Eigen::Vector2d value = Eigen::Vector2d::Zero();   // [v, 0] for scalars
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();    // scalar families
    Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();     // H^1 vector families
    double rot = 0.0;                                  // H(rot) families
};

/// Coefficient vector bound to a finite element space.
class DiscreteField {
public:
    DiscreteField() = default;
    DiscreteField(std::shared_ptr<const FESpace> space, Eigen::VectorXd free_coeffs);

    static DiscreteField zero(std::shared_ptr<const FESpace> space);

    const FESpace& space() const { return *space_; }
    std::shared_ptr<const FESpace> space_ptr() const { return space_; }
    const Eigen::VectorXd& coeffs() const { return free_; }
    Eigen::VectorXd& coeffs() { return free_; }
    const Eigen::VectorXd& full_coeffs() const { return full_; }
    /// Re-derive the cached full coefficients after editing coeffs().
    void sync();

    FieldValue eval_ref(int elem, const Vec2& ref) const;
    /// Barycentric evaluation (lambda_1, lambda_2 as reference coordinates).
    FieldValue eval_bary(int elem, double l0, double l1, double l2) const {
        (void)l0;
        return eval_ref(elem, Vec2(l1, l2));
    }

private:
    std::shared_ptr<const FESpace> space_;
    Eigen::VectorXd free_;
    Eigen::VectorXd full_;
};

using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;

/// Nodal interpolation for Lagrange/DG families, canonical dof interpolation
/// for H(rot) families; the bubble part of enriched spaces is set to zero.
DiscreteField interpolate(std::shared_ptr<const FESpace> space, const ScalarFn& g);
DiscreteField interpolate(std::shared_ptr<const FESpace> space, const VectorFn& g);

/// Quadrature of a pointwise integrand over the whole mesh.
double integrate(const Mesh& m, int quad_degree,
                 const std::function<double(int elem, const Vec2& x)>& integrand);

}  // namespace rmplate

#endif
