#pragma once

#include "symstat/manifold.hpp"

namespace symstat {

// Geodesic symmetry about a center: x -> Exp_c(-Log_c(x)). An involutive
// isometry that fixes the center and reverses geodesics through it.
class GeodesicSymmetry {
public:
    GeodesicSymmetry(ManifoldPtr space, Point center);

    Point operator()(const Point& x) const;

    const Point& center() const { return center_; }
    const ManifoldPtr& space() const { return space_; }

private:
    ManifoldPtr space_;
    Point center_;
};

// Composition of two geodesic symmetries: a translation-like isometry of
// length 2 d(mu1, mu2) along the geodesic through the centers. The order
// flag selects which symmetry is applied first.
class Transvection {
public:
    enum class Order {
        second_after_first,  // s_{mu2} o s_{mu1}
        first_after_second,  // s_{mu1} o s_{mu2}
    };

    Transvection(ManifoldPtr space, Point mu1, Point mu2,
                 Order order = Order::second_after_first);

    Point operator()(const Point& x) const;
    Point apply(const Point& x, unsigned m) const;  // m-fold application

    double length() const { return length_; }

private:
    GeodesicSymmetry first_;
    GeodesicSymmetry second_;
    double length_;
};

struct DisplacementRow {
    unsigned m = 0;
    double min_displacement = 0.0;
    double bound = 0.0;  // 2 m d(mu1, mu2)
    bool pass = false;
};

struct DisplacementReport {
    std::vector<DisplacementRow> rows;
    bool pass = false;
};

// Checks d(x, T^m x) >= 2 m d(mu1, mu2) - 1e-6 for every sample point and
// every 1 <= m <= m_max. The tolerance is looser than the round-trip
// tolerances because each row accumulates 2m+1 exp/log evaluations.
// Throws std::invalid_argument when the centers coincide (the bound is
// vacuous at length zero).
DisplacementReport displacement_bound_check(const ManifoldPtr& space, const Point& mu1,
                                            const Point& mu2,
                                            const std::vector<Point>& sample_points,
                                            unsigned m_max);

}  // namespace symstat
