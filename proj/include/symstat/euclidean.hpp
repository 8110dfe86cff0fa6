#pragma once

#include "symstat/manifold.hpp"

namespace symstat {

// Validated symmetric positive-definite Gram matrix G defining the inner
// product <x, y> = x' G y on R^k, together with its lower Cholesky factor.
struct InnerProductGram {
    Eigen::MatrixXd G;
    Eigen::MatrixXd chol_lower;

    static InnerProductGram identity(int k);
    static InnerProductGram from_matrix(const Eigen::MatrixXd& G);
};

// R^k with an arbitrary inner product. Distances go through the stored
// Cholesky factor of the Gram matrix.
class EuclideanSpace : public Manifold {
public:
    static std::shared_ptr<const EuclideanSpace> make(int k);
    static std::shared_ptr<const EuclideanSpace> make(int k, const Eigen::MatrixXd& gram);

    Point point(const Eigen::VectorXd& coords) const;

    double distance(const Point& x, const Point& y) const override;
    Point exp(const Point& base, const TangentVector& v) const override;
    TangentVector log(const Point& base, const Point& y) const override;
    double inner(const TangentVector& u, const TangentVector& v) const override;
    Point project(const Point& x) const override;
    void validate_point(const Point& x) const override;
    Point origin() const override;
    TangentVector tangent_from_coeffs(const Point& base,
                                      const Eigen::VectorXd& coeffs) const override;
    Eigen::VectorXd coeffs_from_tangent(const TangentVector& v) const override;

    const Eigen::MatrixXd& gram() const { return gram_.G; }

private:
    EuclideanSpace(int k, InnerProductGram gram);

    InnerProductGram gram_;
    Eigen::MatrixXd basis_;  // columns orthonormal under G: L^{-T}
};

}  // namespace symstat
