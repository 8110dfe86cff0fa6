#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace symstat {

class Manifold;

// A point on a manifold. `coords` is the space-specific representation:
// a length-k vector for Euclidean space, a length-(k+1) Minkowski vector on
// the upper hyperboloid sheet, a flattened k-by-k symmetric positive-definite
// matrix for the SPD space, and the concatenation of factor coordinates for
// product spaces.
struct Point {
    std::shared_ptr<const Manifold> space;
    Eigen::VectorXd coords;
};

// A tangent vector anchored at `base`, stored in the same layout as the
// owning space's ambient coordinates.
struct TangentVector {
    Point base;
    Eigen::VectorXd vec;
};

// Interface implemented by every space: distance, exponential and
// logarithmic maps, the Riemannian inner product, and the constraint
// projection. All implementations are immutable after construction and
// every operation is a pure function of its inputs, so spaces, points and
// tangent vectors can be shared freely across threads.
class Manifold : public std::enable_shared_from_this<Manifold> {
public:
    virtual ~Manifold() = default;

    // Unique identifier of the space (family plus parameters). Two
    // separately constructed spaces with equal tags are interoperable.
    const std::string& tag() const { return tag_; }

    // Intrinsic dimension k: the length of tangent coefficient vectors.
    int dimension() const { return dim_; }

    virtual double distance(const Point& x, const Point& y) const = 0;
    virtual Point exp(const Point& base, const TangentVector& v) const = 0;
    virtual TangentVector log(const Point& base, const Point& y) const = 0;
    virtual double inner(const TangentVector& u, const TangentVector& v) const = 0;

    // Batched log map at a common base. The default loops; spaces with a
    // reusable base factorization override it.
    virtual void log_batch(const Point& base, const std::vector<Point>& pts,
                           std::vector<TangentVector>& out) const;

    // Point on the geodesic from x (t=0) to y (t=1). Only t in [0, 1] is
    // supported; no caller needs the extension.
    Point geodesic(const Point& x, const Point& y, double t) const;

    // Re-projection onto the constraint set (hyperboloid normalization,
    // SPD symmetrization). Throws std::overflow_error if the coordinates
    // are not finite.
    virtual Point project(const Point& x) const = 0;

    // Throws std::invalid_argument when x violates the space's invariants.
    virtual void validate_point(const Point& x) const = 0;

    // Canonical base point: 0, (1,0,...,0), or the identity matrix.
    virtual Point origin() const = 0;

    // Tangent vector at `base` with the given coefficients in an
    // orthonormal basis of the tangent space, and its inverse. The
    // Euclidean norm of the coefficients equals the Riemannian norm.
    virtual TangentVector tangent_from_coeffs(const Point& base,
                                              const Eigen::VectorXd& coeffs) const = 0;
    virtual Eigen::VectorXd coeffs_from_tangent(const TangentVector& v) const = 0;

    // inner(v, v) can round to a tiny negative for near-zero vectors.
    double norm(const TangentVector& v) const { return std::sqrt(std::max(inner(v, v), 0.0)); }

    TangentVector zero_tangent(const Point& base) const {
        return TangentVector{base, Eigen::VectorXd::Zero(base.coords.size())};
    }

    TangentVector scaled(const TangentVector& v, double s) const {
        return TangentVector{v.base, s * v.vec};
    }

    void require_point(const Point& x, const char* op) const;
    void require_tangent(const TangentVector& v, const Point& base, const char* op) const;

protected:
    Manifold(std::string tag, int dim) : tag_(std::move(tag)), dim_(dim) {}

    static void require_finite(const Eigen::VectorXd& v, const char* what);

private:
    std::string tag_;
    int dim_;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

inline void Manifold::require_point(const Point& x, const char* op) const {
    if (!x.space || x.space->tag() != tag_) {
        throw std::domain_error(std::string(op) + ": point belongs to '" +
                                (x.space ? x.space->tag() : std::string("<none>")) +
                                "', expected '" + tag_ + "'");
    }
}

inline void Manifold::require_tangent(const TangentVector& v, const Point& base,
                                      const char* op) const {
    require_point(v.base, op);
    require_point(base, op);
    double scale = 1.0 + base.coords.cwiseAbs().maxCoeff();
    if ((v.base.coords - base.coords).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::domain_error(std::string(op) + ": tangent vector anchored at a different point");
    }
}

inline void Manifold::require_finite(const Eigen::VectorXd& v, const char* what) {
    if (!v.allFinite()) {
        throw std::overflow_error(std::string(what) +
                                  ": coordinates exceed the representable range");
    }
}

inline void Manifold::log_batch(const Point& base, const std::vector<Point>& pts,
                                std::vector<TangentVector>& out) const {
    out.clear();
    out.reserve(pts.size());
    for (const Point& p : pts) out.push_back(log(base, p));
}

inline Point Manifold::geodesic(const Point& x, const Point& y, double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::domain_error("geodesic: t must lie in [0, 1]");
    }
    if (t == 0.0) return x;
    if (t == 1.0) return y;
    return exp(x, scaled(log(x, y), t));
}

}  // namespace symstat
