#include "devpatch/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace devpatch {

MonotoneCubic MonotoneCubic::fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("interpolant needs >= 2 samples of equal length");
    for (size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("interpolation abscissae must be strictly increasing");

    MonotoneCubic f;
    f.x_.assign(x.begin(), x.end());
    f.y_.assign(y.begin(), y.end());
    const size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }

    f.slope_.resize(n);
    if (n == 2) {
        f.slope_[0] = f.slope_[1] = delta[0];
        return f;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            f.slope_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            f.slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // one-sided three-point end slopes, clipped to preserve shape
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0)
            m = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0))
            m = 3.0 * d0;
        return m;
    };
    f.slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    f.slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return f;
}

int MonotoneCubic::segment(double t) const {
    if (t <= x_.front()) return 0;
    if (t >= x_.back()) return static_cast<int>(x_.size()) - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return static_cast<int>(it - x_.begin()) - 1;
}

double MonotoneCubic::value(double t) const {
    const int i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * y_[i] + h * h10 * slope_[i] + h01 * y_[i + 1] + h * h11 * slope_[i + 1];
}

double MonotoneCubic::deriv(double t) const {
    const int i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double d00 = 6.0 * s * (s - 1.0);
    const double d10 = (1.0 - s) * (1.0 - 3.0 * s);
    const double d01 = -d00;
    const double d11 = s * (3.0 * s - 2.0);
    return (d00 * y_[i] / h + d10 * slope_[i] + d01 * y_[i + 1] / h + d11 * slope_[i + 1]);
}

double MonotoneCubic::deriv2(double t) const {
    const int i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double e00 = (12.0 * s - 6.0) / (h * h);
    const double e10 = (6.0 * s - 4.0) / h;
    const double e01 = -e00;
    const double e11 = (6.0 * s - 2.0) / h;
    return e00 * y_[i] + e10 * slope_[i] + e01 * y_[i + 1] + e11 * slope_[i + 1];
}

}  // namespace devpatch
