#pragma once

#include "symstat/manifold.hpp"

namespace symstat {

// Symmetric positive-definite k-by-k matrices under the affine-invariant
// metric <U, V>_A = tr(A^-1 U A^-1 V). Points and tangents are stored as
// column-major flattened k*k matrices; tangents are symmetric. All matrix
// functions (log, exp, inverse square root) go through the symmetric
// eigendecomposition of the symmetrized input.
class SpdSpace : public Manifold {
public:
    static std::shared_ptr<const SpdSpace> make(int k);

    Point point(const Eigen::MatrixXd& m) const;
    Eigen::MatrixXd matrix(const Point& p) const;
    Eigen::MatrixXd matrix(const TangentVector& v) const;
    TangentVector tangent(const Point& base, const Eigen::MatrixXd& sym) const;

    int matrix_size() const { return k_; }

    double distance(const Point& x, const Point& y) const override;
    Point exp(const Point& base, const TangentVector& v) const override;
    TangentVector log(const Point& base, const Point& y) const override;
    void log_batch(const Point& base, const std::vector<Point>& pts,
                   std::vector<TangentVector>& out) const override;
    double inner(const TangentVector& u, const TangentVector& v) const override;
    Point project(const Point& x) const override;
    void validate_point(const Point& x) const override;
    Point origin() const override;
    TangentVector tangent_from_coeffs(const Point& base,
                                      const Eigen::VectorXd& coeffs) const override;
    Eigen::VectorXd coeffs_from_tangent(const TangentVector& v) const override;

private:
    explicit SpdSpace(int k);

    struct BaseFactors {
        Eigen::MatrixXd sqrt;      // A^{1/2}
        Eigen::MatrixXd inv_sqrt;  // A^{-1/2}
    };
    BaseFactors factor_base(const Point& base, const char* op) const;

    int k_;
};

// Isometric vectorization of a symmetric matrix: row-major upper triangle
// with off-diagonal entries scaled by sqrt(2), so the Euclidean norm of the
// vector equals the Frobenius norm of the matrix. Throws on non-symmetric
// input.
Eigen::VectorXd spd_vec(const Eigen::MatrixXd& sym);
Eigen::MatrixXd spd_unvec(const Eigen::VectorXd& v);

}  // namespace symstat
