#include "symstat/symmetry.hpp"

#include <algorithm>
#include <limits>

namespace symstat {

GeodesicSymmetry::GeodesicSymmetry(ManifoldPtr space, Point center)
    : space_(std::move(space)), center_(std::move(center)) {
    if (!space_) throw std::invalid_argument("geodesic symmetry needs a space");
    space_->require_point(center_, "geodesic_symmetry");
}

Point GeodesicSymmetry::operator()(const Point& x) const {
    space_->require_point(x, "apply_symmetry");
    TangentVector v = space_->log(center_, x);
    return space_->exp(center_, space_->scaled(v, -1.0));
}

Transvection::Transvection(ManifoldPtr space, Point mu1, Point mu2, Order order)
    : first_(space, order == Order::second_after_first ? std::move(mu1) : mu2),
      second_(space, order == Order::second_after_first ? std::move(mu2) : std::move(mu1)),
      length_(2.0 * space->distance(first_.center(), second_.center())) {}

Point Transvection::operator()(const Point& x) const {
    return second_(first_(x));
}

Point Transvection::apply(const Point& x, unsigned m) const {
    Point out = x;
    for (unsigned i = 0; i < m; ++i) out = (*this)(out);
    return out;
}

DisplacementReport displacement_bound_check(const ManifoldPtr& space, const Point& mu1,
                                            const Point& mu2,
                                            const std::vector<Point>& sample_points,
                                            unsigned m_max) {
    if (!space) throw std::invalid_argument("displacement check needs a space");
    if (sample_points.empty()) {
        throw std::invalid_argument("displacement check needs sample points");
    }
    const double sep = space->distance(mu1, mu2);
    if (sep <= 1e-8) {
        throw std::invalid_argument(
            "displacement check is vacuous for coincident centers (length 0)");
    }
    constexpr double kTol = 1e-6;

    Transvection t(space, mu1, mu2);
    DisplacementReport report;
    report.pass = true;
    std::vector<Point> current = sample_points;
    for (unsigned m = 1; m <= m_max; ++m) {
        double min_disp = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < current.size(); ++i) {
            current[i] = t(current[i]);
            min_disp = std::min(min_disp, space->distance(sample_points[i], current[i]));
        }
        DisplacementRow row;
        row.m = m;
        row.min_displacement = min_disp;
        row.bound = static_cast<double>(m) * t.length();
        row.pass = min_disp >= row.bound - kTol;
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace symstat
