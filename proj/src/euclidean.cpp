#include "symstat/euclidean.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <cstdio>
#include <cstring>

namespace symstat {

namespace {

std::string make_tag(int k, const Eigen::MatrixXd& G) {
    if (G.isIdentity(0.0)) return "euclidean(k=" + std::to_string(k) + ")";
    // Gram entries participate in the tag so differently-metrized copies of
    // R^k do not interoperate by accident.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mixin = [&h](double x) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) mixin(G(i, j));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return "euclidean(k=" + std::to_string(k) + ",gram=" + buf + ")";
}

}  // namespace

InnerProductGram InnerProductGram::identity(int k) {
    InnerProductGram g;
    g.G = Eigen::MatrixXd::Identity(k, k);
    g.chol_lower = g.G;
    return g;
}

InnerProductGram InnerProductGram::from_matrix(const Eigen::MatrixXd& G) {
    if (G.rows() != G.cols() || G.rows() < 1) {
        throw std::invalid_argument("gram matrix must be square and nonempty");
    }
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + G.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("gram matrix must be symmetric");
    }
    Eigen::MatrixXd S = 0.5 * (G + G.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("gram matrix must be positive definite");
    }
    InnerProductGram g;
    g.G = S;
    g.chol_lower = llt.matrixL();
    return g;
}

EuclideanSpace::EuclideanSpace(int k, InnerProductGram gram)
    : Manifold(make_tag(k, gram.G), k), gram_(std::move(gram)) {
    basis_ = gram_.chol_lower.transpose()
                 .triangularView<Eigen::Upper>()
                 .solve(Eigen::MatrixXd::Identity(k, k));
}

std::shared_ptr<const EuclideanSpace> EuclideanSpace::make(int k) {
    if (k < 1) throw std::invalid_argument("euclidean: k must be at least 1");
    return std::shared_ptr<const EuclideanSpace>(
        new EuclideanSpace(k, InnerProductGram::identity(k)));
}

std::shared_ptr<const EuclideanSpace> EuclideanSpace::make(int k, const Eigen::MatrixXd& gram) {
    if (k < 1) throw std::invalid_argument("euclidean: k must be at least 1");
    if (gram.rows() != k) throw std::invalid_argument("euclidean: gram size does not match k");
    return std::shared_ptr<const EuclideanSpace>(
        new EuclideanSpace(k, InnerProductGram::from_matrix(gram)));
}

Point EuclideanSpace::point(const Eigen::VectorXd& coords) const {
    Point p{shared_from_this(), coords};
    validate_point(p);
    return p;
}

double EuclideanSpace::distance(const Point& x, const Point& y) const {
    require_point(x, "distance");
    require_point(y, "distance");
    return (gram_.chol_lower.transpose() * (x.coords - y.coords)).norm();
}

Point EuclideanSpace::exp(const Point& base, const TangentVector& v) const {
    require_tangent(v, base, "exp");
    return project(Point{shared_from_this(), base.coords + v.vec});
}

TangentVector EuclideanSpace::log(const Point& base, const Point& y) const {
    require_point(base, "log");
    require_point(y, "log");
    return TangentVector{base, y.coords - base.coords};
}

double EuclideanSpace::inner(const TangentVector& u, const TangentVector& v) const {
    require_tangent(u, v.base, "inner");
    return u.vec.dot(gram_.G * v.vec);
}

Point EuclideanSpace::project(const Point& x) const {
    require_point(x, "project");
    require_finite(x.coords, "euclidean point");
    return x;
}

void EuclideanSpace::validate_point(const Point& x) const {
    require_point(x, "validate");
    if (x.coords.size() != dimension()) {
        throw std::invalid_argument("euclidean point has wrong length");
    }
    if (!x.coords.allFinite()) {
        throw std::invalid_argument("euclidean point must have finite entries");
    }
}

Point EuclideanSpace::origin() const {
    return Point{shared_from_this(), Eigen::VectorXd::Zero(dimension())};
}

TangentVector EuclideanSpace::tangent_from_coeffs(const Point& base,
                                                  const Eigen::VectorXd& coeffs) const {
    require_point(base, "tangent_from_coeffs");
    if (coeffs.size() != dimension()) {
        throw std::invalid_argument("coefficient vector has wrong length");
    }
    return TangentVector{base, basis_ * coeffs};
}

Eigen::VectorXd EuclideanSpace::coeffs_from_tangent(const TangentVector& v) const {
    require_point(v.base, "coeffs_from_tangent");
    return gram_.chol_lower.transpose() * v.vec;
}

}  // namespace symstat
