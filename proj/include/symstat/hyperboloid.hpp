#pragma once

#include "symstat/manifold.hpp"

namespace symstat {

// Hyperbolic space H^k in the hyperboloid (Minkowski) model: the upper
// sheet <x, x>_M = -1, x0 > 0, where <x, y>_M = -x0 y0 + sum_i xi yi.
// Distance is acosh(-<x, y>_M) with the argument clamped to >= 1 and a
// series evaluation when the argument is within 1e-8 of 1, where acosh is
// ill-conditioned. Points whose distance from the vertex exceeds roughly
// 7e2 are not representable in double coordinates; operations that would
// produce them throw std::overflow_error.
class HyperboloidSpace : public Manifold {
public:
    static std::shared_ptr<const HyperboloidSpace> make(int k);

    Point point(const Eigen::VectorXd& minkowski_coords) const;

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

    static double minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

private:
    explicit HyperboloidSpace(int k);

    // Columns form an orthonormal basis of the tangent space at base.
    Eigen::MatrixXd tangent_basis(const Point& base) const;
};

}  // namespace symstat
