#pragma once
// Shape-preserving (Fritsch-Carlson) piecewise-cubic Hermite interpolation.
// Passes through the data exactly and is monotone wherever the data is.

#include <span>
#include <vector>

namespace devpatch {

class MonotoneCubic {
public:
    // x strictly increasing, same length as y, at least 2 samples.
    static MonotoneCubic fit(std::span<const double> x, std::span<const double> y);

    double value(double t) const;
    double deriv(double t) const;
    double deriv2(double t) const;  // discontinuous at the nodes

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& nodes() const { return x_; }

private:
    int segment(double t) const;  // end segments extend polynomially

    std::vector<double> x_, y_, slope_;
};

}  // namespace devpatch
