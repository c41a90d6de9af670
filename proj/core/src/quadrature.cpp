#include "ccsim/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ccsim {

double stable_sum(std::span<const double> v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

double integrate_uniform(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) throw std::invalid_argument("integrate_uniform: need at least 2 samples");
    const std::size_t m = n - 1; // interval count
    if (m == 1) return 0.5 * h * (f[0] + f[1]);
    if (m == 3) return 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);

    std::size_t simpson_end = m; // index of last node covered by Simpson
    double tail = 0.0;
    if (m % 2 != 0) {
        simpson_end = m - 3;
        tail = 3.0 * h / 8.0 *
               (f[m - 3] + 3.0 * f[m - 2] + 3.0 * f[m - 1] + f[m]);
    }
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < simpson_end; i += 2) odd += f[i];
    for (std::size_t i = 2; i < simpson_end; i += 2) even += f[i];
    double simpson = h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[simpson_end]);
    return simpson + tail;
}

} // namespace ccsim
