#pragma once

#include "symstat/manifold.hpp"

namespace symstat {

// Product of manifolds. Coordinates are the concatenation of the factor
// coordinates; the squared distance is the sum of factor squared distances
// and exp/log/inner act componentwise.
class ProductSpace : public Manifold {
public:
    static std::shared_ptr<const ProductSpace> make(std::vector<ManifoldPtr> factors);

    std::size_t factor_count() const { return factors_.size(); }
    const ManifoldPtr& factor(std::size_t i) const { return factors_.at(i); }

    Point make_point(const std::vector<Point>& components) const;
    Point factor_point(const Point& p, std::size_t i) const;

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

private:
    explicit ProductSpace(std::vector<ManifoldPtr> factors);

    Eigen::VectorXd slice(const Eigen::VectorXd& coords, std::size_t i) const;

    std::vector<ManifoldPtr> factors_;
    std::vector<int> offsets_;  // coordinate offset per factor
    std::vector<int> widths_;   // coordinate width per factor
    std::vector<int> coeff_offsets_;
    int total_width_ = 0;
};

}  // namespace symstat
