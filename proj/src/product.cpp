#include "symstat/product.hpp"

#include <cmath>
#include <numeric>

namespace symstat {

namespace {

std::string make_tag(const std::vector<ManifoldPtr>& factors) {
    std::string tag = "product(";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i > 0) tag += ",";
        tag += factors[i]->tag();
    }
    return tag + ")";
}

int total_dimension(const std::vector<ManifoldPtr>& factors) {
    int d = 0;
    for (const auto& f : factors) d += f->dimension();
    return d;
}

}  // namespace

ProductSpace::ProductSpace(std::vector<ManifoldPtr> factors)
    : Manifold(make_tag(factors), total_dimension(factors)), factors_(std::move(factors)) {
    int coeff_off = 0;
    for (const auto& f : factors_) {
        int w = static_cast<int>(f->origin().coords.size());
        offsets_.push_back(total_width_);
        widths_.push_back(w);
        coeff_offsets_.push_back(coeff_off);
        total_width_ += w;
        coeff_off += f->dimension();
    }
}

std::shared_ptr<const ProductSpace> ProductSpace::make(std::vector<ManifoldPtr> factors) {
    if (factors.empty()) {
        throw std::domain_error("product space needs at least one factor");
    }
    for (const auto& f : factors) {
        if (!f) throw std::invalid_argument("product space factor is null");
    }
    return std::shared_ptr<const ProductSpace>(new ProductSpace(std::move(factors)));
}

Eigen::VectorXd ProductSpace::slice(const Eigen::VectorXd& coords, std::size_t i) const {
    return coords.segment(offsets_[i], widths_[i]);
}

Point ProductSpace::make_point(const std::vector<Point>& components) const {
    if (components.size() != factors_.size()) {
        throw std::invalid_argument("product point needs one component per factor");
    }
    Eigen::VectorXd coords(total_width_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        factors_[i]->require_point(components[i], "make_point");
        coords.segment(offsets_[i], widths_[i]) = components[i].coords;
    }
    Point p{shared_from_this(), std::move(coords)};
    validate_point(p);
    return p;
}

Point ProductSpace::factor_point(const Point& p, std::size_t i) const {
    require_point(p, "factor_point");
    return Point{factors_.at(i), slice(p.coords, i)};
}

double ProductSpace::distance(const Point& x, const Point& y) const {
    require_point(x, "distance");
    require_point(y, "distance");
    double sq = 0.0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        double d = factors_[i]->distance(factor_point(x, i), factor_point(y, i));
        sq += d * d;
    }
    return std::sqrt(sq);
}

Point ProductSpace::exp(const Point& base, const TangentVector& v) const {
    require_tangent(v, base, "exp");
    Eigen::VectorXd out(total_width_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        Point b = factor_point(base, i);
        TangentVector vi{b, slice(v.vec, i)};
        out.segment(offsets_[i], widths_[i]) = factors_[i]->exp(b, vi).coords;
    }
    return Point{shared_from_this(), std::move(out)};
}

TangentVector ProductSpace::log(const Point& base, const Point& y) const {
    require_point(base, "log");
    require_point(y, "log");
    Eigen::VectorXd out(total_width_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        out.segment(offsets_[i], widths_[i]) =
            factors_[i]->log(factor_point(base, i), factor_point(y, i)).vec;
    }
    return TangentVector{base, std::move(out)};
}

double ProductSpace::inner(const TangentVector& u, const TangentVector& v) const {
    require_tangent(u, v.base, "inner");
    double acc = 0.0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        Point b = factor_point(u.base, i);
        acc += factors_[i]->inner(TangentVector{b, slice(u.vec, i)},
                                  TangentVector{b, slice(v.vec, i)});
    }
    return acc;
}

Point ProductSpace::project(const Point& x) const {
    require_point(x, "project");
    Eigen::VectorXd out(total_width_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        out.segment(offsets_[i], widths_[i]) = factors_[i]->project(factor_point(x, i)).coords;
    }
    return Point{shared_from_this(), std::move(out)};
}

void ProductSpace::validate_point(const Point& x) const {
    require_point(x, "validate");
    if (x.coords.size() != total_width_) {
        throw std::invalid_argument("product point has wrong length");
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        factors_[i]->validate_point(factor_point(x, i));
    }
}

Point ProductSpace::origin() const {
    Eigen::VectorXd out(total_width_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        out.segment(offsets_[i], widths_[i]) = factors_[i]->origin().coords;
    }
    return Point{shared_from_this(), std::move(out)};
}

TangentVector ProductSpace::tangent_from_coeffs(const Point& base,
                                                const Eigen::VectorXd& coeffs) const {
    require_point(base, "tangent_from_coeffs");
    if (coeffs.size() != dimension()) {
        throw std::invalid_argument("coefficient vector has wrong length");
    }
    Eigen::VectorXd out(total_width_);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        Point b = factor_point(base, i);
        Eigen::VectorXd ci = coeffs.segment(coeff_offsets_[i], factors_[i]->dimension());
        out.segment(offsets_[i], widths_[i]) = factors_[i]->tangent_from_coeffs(b, ci).vec;
    }
    return TangentVector{base, std::move(out)};
}

Eigen::VectorXd ProductSpace::coeffs_from_tangent(const TangentVector& v) const {
    require_point(v.base, "coeffs_from_tangent");
    Eigen::VectorXd out(dimension());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        Point b = factor_point(v.base, i);
        out.segment(coeff_offsets_[i], factors_[i]->dimension()) =
            factors_[i]->coeffs_from_tangent(TangentVector{b, slice(v.vec, i)});
    }
    return out;
}

}  // namespace symstat
