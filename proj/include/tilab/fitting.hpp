#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tilab/errors.hpp"

namespace tilab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw SizeMismatch("linear_fit: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// Fit ln(v) = a + b t over the window [t0, t1]; returns b and r2.
inline LinearFit log_linear_slope(const std::vector<double>& t, const std::vector<double>& v,
                                  double t0, double t1) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 - 1e-12 || t[i] > t1 + 1e-12) continue;
        if (!(v[i] > 0.0)) continue;
        xs.push_back(t[i]);
        ys.push_back(std::log(v[i]));
    }
    return linear_fit(xs, ys);
}

} // namespace tilab
