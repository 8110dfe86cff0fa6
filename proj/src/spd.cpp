#include "symstat/spd.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace symstat {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

// f applied to the eigenvalues of a symmetric matrix.
template <typename F>
Eigen::MatrixXd sym_matrix_function(const Eigen::MatrixXd& m, F f, const char* op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    if (m.rows() <= 3) {
        eig.computeDirect(m);
    } else {
        eig.compute(m);
    }
    if (eig.info() != Eigen::Success) {
        throw std::invalid_argument(std::string(op) + ": eigendecomposition failed");
    }
    Eigen::VectorXd d = eig.eigenvalues();
    for (int i = 0; i < d.size(); ++i) {
        d(i) = f(d(i), op);
    }
    return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

double checked_log(double x, const char* op) {
    if (!(x > 0.0)) {
        throw std::invalid_argument(std::string(op) + ": matrix is not positive definite");
    }
    return std::log(x);
}

double checked_inv_sqrt(double x, const char* op) {
    if (!(x > 0.0)) {
        throw std::invalid_argument(std::string(op) + ": matrix is not positive definite");
    }
    return 1.0 / std::sqrt(x);
}

double checked_sqrt(double x, const char* op) {
    if (!(x > 0.0)) {
        throw std::invalid_argument(std::string(op) + ": matrix is not positive definite");
    }
    return std::sqrt(x);
}

double plain_exp(double x, const char*) { return std::exp(x); }

}  // namespace

Eigen::VectorXd spd_vec(const Eigen::MatrixXd& sym) {
    const int k = static_cast<int>(sym.rows());
    if (sym.cols() != k) throw std::invalid_argument("spd_vec: matrix must be square");
    if ((sym - sym.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + sym.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("spd_vec: matrix must be symmetric");
    }
    Eigen::VectorXd out(k * (k + 1) / 2);
    const double r2 = std::sqrt(2.0);
    int idx = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            out(idx++) = (i == j) ? sym(i, j) : r2 * sym(i, j);
        }
    }
    return out;
}

Eigen::MatrixXd spd_unvec(const Eigen::VectorXd& v) {
    // Solve k(k+1)/2 = len for k.
    const int len = static_cast<int>(v.size());
    const int k = static_cast<int>(std::lround((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0));
    if (k * (k + 1) / 2 != len) {
        throw std::invalid_argument("spd_unvec: length is not triangular");
    }
    Eigen::MatrixXd out(k, k);
    const double inv_r2 = 1.0 / std::sqrt(2.0);
    int idx = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            double x = v(idx++);
            if (i == j) {
                out(i, j) = x;
            } else {
                out(i, j) = out(j, i) = inv_r2 * x;
            }
        }
    }
    return out;
}

SpdSpace::SpdSpace(int k)
    : Manifold("spd(k=" + std::to_string(k) + ")", k * (k + 1) / 2), k_(k) {}

std::shared_ptr<const SpdSpace> SpdSpace::make(int k) {
    if (k < 1) throw std::invalid_argument("spd: k must be at least 1");
    return std::shared_ptr<const SpdSpace>(new SpdSpace(k));
}

Point SpdSpace::point(const Eigen::MatrixXd& m) const {
    if (m.rows() != k_ || m.cols() != k_) {
        throw std::invalid_argument("spd point has wrong shape");
    }
    Point p{shared_from_this(), Eigen::Map<const Eigen::VectorXd>(m.data(), k_ * k_)};
    validate_point(p);
    return project(p);
}

Eigen::MatrixXd SpdSpace::matrix(const Point& p) const {
    require_point(p, "matrix");
    return Eigen::Map<const Eigen::MatrixXd>(p.coords.data(), k_, k_);
}

Eigen::MatrixXd SpdSpace::matrix(const TangentVector& v) const {
    require_point(v.base, "matrix");
    return Eigen::Map<const Eigen::MatrixXd>(v.vec.data(), k_, k_);
}

TangentVector SpdSpace::tangent(const Point& base, const Eigen::MatrixXd& sym) const {
    require_point(base, "tangent");
    if (sym.rows() != k_ || sym.cols() != k_) {
        throw std::invalid_argument("spd tangent has wrong shape");
    }
    if ((sym - sym.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + sym.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("spd tangent must be symmetric");
    }
    Eigen::MatrixXd s = symmetrized(sym);
    return TangentVector{base, Eigen::Map<const Eigen::VectorXd>(s.data(), k_ * k_)};
}

SpdSpace::BaseFactors SpdSpace::factor_base(const Point& base, const char* op) const {
    Eigen::MatrixXd a = symmetrized(matrix(base));
    BaseFactors f;
    f.sqrt = sym_matrix_function(a, checked_sqrt, op);
    f.inv_sqrt = sym_matrix_function(a, checked_inv_sqrt, op);
    return f;
}

double SpdSpace::distance(const Point& x, const Point& y) const {
    require_point(x, "distance");
    require_point(y, "distance");
    BaseFactors f = factor_base(x, "distance");
    Eigen::MatrixXd rel = symmetrized(f.inv_sqrt * matrix(y) * f.inv_sqrt);
    Eigen::MatrixXd lg = sym_matrix_function(rel, checked_log, "distance");
    return lg.norm();
}

Point SpdSpace::exp(const Point& base, const TangentVector& v) const {
    require_tangent(v, base, "exp");
    BaseFactors f = factor_base(base, "exp");
    Eigen::MatrixXd w = symmetrized(f.inv_sqrt * matrix(v) * f.inv_sqrt);
    Eigen::MatrixXd e = sym_matrix_function(w, plain_exp, "exp");
    Eigen::MatrixXd out = f.sqrt * e * f.sqrt;
    return project(Point{shared_from_this(), Eigen::Map<Eigen::VectorXd>(out.data(), k_ * k_)});
}

TangentVector SpdSpace::log(const Point& base, const Point& y) const {
    require_point(base, "log");
    require_point(y, "log");
    BaseFactors f = factor_base(base, "log");
    Eigen::MatrixXd rel = symmetrized(f.inv_sqrt * matrix(y) * f.inv_sqrt);
    Eigen::MatrixXd lg = sym_matrix_function(rel, checked_log, "log");
    Eigen::MatrixXd out = f.sqrt * lg * f.sqrt;
    return tangent(base, out);
}

void SpdSpace::log_batch(const Point& base, const std::vector<Point>& pts,
                         std::vector<TangentVector>& out) const {
    require_point(base, "log");
    BaseFactors f = factor_base(base, "log");
    out.clear();
    out.reserve(pts.size());
    for (const Point& p : pts) {
        require_point(p, "log");
        Eigen::MatrixXd rel = symmetrized(f.inv_sqrt * matrix(p) * f.inv_sqrt);
        Eigen::MatrixXd lg = sym_matrix_function(rel, checked_log, "log");
        Eigen::MatrixXd t = symmetrized(f.sqrt * lg * f.sqrt);
        out.push_back(TangentVector{base, Eigen::Map<Eigen::VectorXd>(t.data(), k_ * k_)});
    }
}

double SpdSpace::inner(const TangentVector& u, const TangentVector& v) const {
    require_tangent(u, v.base, "inner");
    BaseFactors f = factor_base(u.base, "inner");
    Eigen::MatrixXd a = f.inv_sqrt * matrix(u) * f.inv_sqrt;
    Eigen::MatrixXd b = f.inv_sqrt * matrix(v) * f.inv_sqrt;
    return (a.transpose() * b).trace();
}

Point SpdSpace::project(const Point& x) const {
    require_point(x, "project");
    require_finite(x.coords, "spd point");
    Eigen::MatrixXd s = symmetrized(Eigen::Map<const Eigen::MatrixXd>(x.coords.data(), k_, k_));
    return Point{shared_from_this(), Eigen::Map<Eigen::VectorXd>(s.data(), k_ * k_)};
}

void SpdSpace::validate_point(const Point& x) const {
    require_point(x, "validate");
    if (x.coords.size() != k_ * k_) {
        throw std::invalid_argument("spd point has wrong length");
    }
    if (!x.coords.allFinite()) {
        throw std::invalid_argument("spd point must have finite entries");
    }
    Eigen::MatrixXd m = matrix(x);
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("spd point must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(m),
                                                       Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw std::invalid_argument("spd point must be positive definite");
    }
}

Point SpdSpace::origin() const {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(k_, k_);
    return Point{shared_from_this(), Eigen::Map<Eigen::VectorXd>(id.data(), k_ * k_)};
}

TangentVector SpdSpace::tangent_from_coeffs(const Point& base,
                                            const Eigen::VectorXd& coeffs) const {
    require_point(base, "tangent_from_coeffs");
    if (coeffs.size() != dimension()) {
        throw std::invalid_argument("coefficient vector has wrong length");
    }
    BaseFactors f = factor_base(base, "tangent_from_coeffs");
    Eigen::MatrixXd s = spd_unvec(coeffs);
    Eigen::MatrixXd t = symmetrized(f.sqrt * s * f.sqrt);
    return TangentVector{base, Eigen::Map<Eigen::VectorXd>(t.data(), k_ * k_)};
}

Eigen::VectorXd SpdSpace::coeffs_from_tangent(const TangentVector& v) const {
    require_point(v.base, "coeffs_from_tangent");
    BaseFactors f = factor_base(v.base, "coeffs_from_tangent");
    return spd_vec(symmetrized(f.inv_sqrt * matrix(v) * f.inv_sqrt));
}

}  // namespace symstat
