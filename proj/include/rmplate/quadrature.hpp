#ifndef RMPLATE_QUADRATURE_HPP
#define RMPLATE_QUADRATURE_HPP

#include <vector>

#include <Eigen/Core>

namespace rmplate {

/// Quadrature on the reference triangle {x, y >= 0, x + y <= 1}.
///
/// Rules are collapsed Gauss-Legendre products: positive weights, exact for
/// all polynomials up to the requested degree, weights summing to 1/2.
struct QuadratureRule {
    std::vector<Eigen::Vector2d> points;  // reference coordinates
    std::vector<double> weights;
    int degree = 0;

    int size() const { return static_cast<int>(points.size()); }

    /// Cached rule of exactness >= degree.
    static const QuadratureRule& triangle(int degree);
};

/// Gauss-Legendre nodes and weights on [-1, 1], exact to degree 2n-1.
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;

    static const GaussRule& interval(int n);
    /// Smallest rule exact for polynomials of the given degree.
    static const GaussRule& for_degree(int degree);
};

}  // namespace rmplate

#endif
