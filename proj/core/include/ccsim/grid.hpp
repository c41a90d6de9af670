#pragma once

#include <stdexcept>
#include <vector>

namespace ccsim {

/// Uniform sample grid on [0, L] with x[0] = 0 and x[n-1] = L.
struct Grid1D {
    int n = 0;
    double length = 0.0;

    static Grid1D uniform(int n, double length) {
        if (n < 2) throw std::invalid_argument("Grid1D: need at least 2 nodes");
        if (!(length > 0.0)) throw std::invalid_argument("Grid1D: length must be positive");
        return Grid1D{n, length};
    }

    double h() const { return length / (n - 1); }

    double x(int i) const { return i == n - 1 ? length : length * i / (n - 1); }

    std::vector<double> nodes() const {
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = x(i);
        return xs;
    }

    bool operator==(const Grid1D&) const = default;
};

} // namespace ccsim
