#include "symstat/hyperboloid.hpp"

#include <cmath>

namespace symstat {

namespace {

constexpr double kSeriesCut = 1e-8;  // acosh argument within this of 1

// sinh(t)/t without the 0/0 at the origin.
double sinhc(double t) {
    if (std::abs(t) < 1e-6) {
        double t2 = t * t;
        return 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
    }
    return std::sinh(t) / t;
}

}  // namespace

HyperboloidSpace::HyperboloidSpace(int k)
    : Manifold("hyperboloid(k=" + std::to_string(k) + ")", k) {}

std::shared_ptr<const HyperboloidSpace> HyperboloidSpace::make(int k) {
    if (k < 1) throw std::invalid_argument("hyperboloid: k must be at least 1");
    return std::shared_ptr<const HyperboloidSpace>(new HyperboloidSpace(k));
}

double HyperboloidSpace::minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

Point HyperboloidSpace::point(const Eigen::VectorXd& coords) const {
    Point raw{shared_from_this(), coords};
    validate_point(raw);
    return project(raw);
}

double HyperboloidSpace::distance(const Point& x, const Point& y) const {
    require_point(x, "distance");
    require_point(y, "distance");
    double c = -minkowski_dot(x.coords, y.coords);
    if (c < 1.0 + kSeriesCut) {
        // Near-coincident points: -<x,y> - 1 = <x-y, x-y>_M / 2 avoids the
        // cancellation in forming c - 1 directly.
        Eigen::VectorXd diff = x.coords - y.coords;
        double s = std::max(0.5 * minkowski_dot(diff, diff), 0.0);
        return std::sqrt(2.0 * s) * (1.0 - s / 12.0 + 3.0 * s * s / 160.0);
    }
    return std::acosh(c);
}

Point HyperboloidSpace::exp(const Point& base, const TangentVector& v) const {
    require_tangent(v, base, "exp");
    double t = std::sqrt(std::max(minkowski_dot(v.vec, v.vec), 0.0));
    if (t == 0.0) return base;
    Eigen::VectorXd out = std::cosh(t) * base.coords + sinhc(t) * v.vec;
    return project(Point{shared_from_this(), out});
}

TangentVector HyperboloidSpace::log(const Point& base, const Point& y) const {
    require_point(base, "log");
    require_point(y, "log");
    double theta = distance(base, y);
    if (theta < 1e-14) {
        return TangentVector{base, Eigen::VectorXd::Zero(base.coords.size())};
    }
    double sh = std::sinh(theta);
    if (!std::isfinite(sh)) {
        throw std::overflow_error("hyperboloid log exceeds the representable range");
    }
    Eigen::VectorXd w = y.coords + minkowski_dot(base.coords, y.coords) * base.coords;
    // |w|_M = sinh(theta); rescale so the result has norm theta.
    TangentVector out{base, (theta / sh) * w};
    require_finite(out.vec, "hyperboloid log");
    return out;
}

double HyperboloidSpace::inner(const TangentVector& u, const TangentVector& v) const {
    require_tangent(u, v.base, "inner");
    return minkowski_dot(u.vec, v.vec);
}

Point HyperboloidSpace::project(const Point& x) const {
    require_point(x, "project");
    require_finite(x.coords, "hyperboloid point");
    // Reset the timelike coordinate from the spatial part. Unlike dividing
    // by the measured Minkowski norm, this enforces the sheet constraint
    // without injecting a coherent rescaling, whose measurement is noise
    // dominated once cosh^2(r) * eps is comparable to the tolerance.
    Eigen::VectorXd out = x.coords;
    out(0) = std::sqrt(1.0 + out.tail(out.size() - 1).squaredNorm());
    require_finite(out, "hyperboloid point");
    return Point{shared_from_this(), out};
}

void HyperboloidSpace::validate_point(const Point& x) const {
    require_point(x, "validate");
    if (x.coords.size() != dimension() + 1) {
        throw std::invalid_argument("hyperboloid point has wrong length");
    }
    if (!x.coords.allFinite()) {
        throw std::invalid_argument("hyperboloid point must have finite entries");
    }
    if (x.coords(0) <= 0.0) {
        throw std::invalid_argument("hyperboloid point must lie on the upper sheet");
    }
    double q = minkowski_dot(x.coords, x.coords);
    if (std::abs(q + 1.0) > 1e-9 * std::max(1.0, x.coords(0) * x.coords(0))) {
        throw std::invalid_argument("hyperboloid point violates the unit Minkowski norm");
    }
}

Point HyperboloidSpace::origin() const {
    Eigen::VectorXd o = Eigen::VectorXd::Zero(dimension() + 1);
    o(0) = 1.0;
    return Point{shared_from_this(), o};
}

Eigen::MatrixXd HyperboloidSpace::tangent_basis(const Point& base) const {
    int k = dimension();
    Eigen::MatrixXd basis(k + 1, k);
    int found = 0;
    // Project the ambient basis onto the tangent space and orthonormalize
    // under the (positive definite there) Minkowski form; one projection is
    // always dependent and gets dropped.
    for (int i = 0; i <= k && found < k; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(k + 1);
        e(i) = 1.0;
        Eigen::VectorXd v = e + minkowski_dot(base.coords, e) * base.coords;
        for (int j = 0; j < found; ++j) {
            v -= minkowski_dot(basis.col(j), v) * basis.col(j);
        }
        double n2 = minkowski_dot(v, v);
        if (n2 > 1e-12) {
            basis.col(found++) = v / std::sqrt(n2);
        }
    }
    if (found != k) {
        throw std::runtime_error("hyperboloid tangent basis construction failed");
    }
    return basis;
}

TangentVector HyperboloidSpace::tangent_from_coeffs(const Point& base,
                                                    const Eigen::VectorXd& coeffs) const {
    require_point(base, "tangent_from_coeffs");
    if (coeffs.size() != dimension()) {
        throw std::invalid_argument("coefficient vector has wrong length");
    }
    return TangentVector{base, tangent_basis(base) * coeffs};
}

Eigen::VectorXd HyperboloidSpace::coeffs_from_tangent(const TangentVector& v) const {
    require_point(v.base, "coeffs_from_tangent");
    Eigen::MatrixXd B = tangent_basis(v.base);
    Eigen::VectorXd c(dimension());
    for (int j = 0; j < dimension(); ++j) c(j) = minkowski_dot(B.col(j), v.vec);
    return c;
}

}  // namespace symstat
