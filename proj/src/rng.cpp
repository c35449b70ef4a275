#include "switchsim/rng.hpp"

#include <cmath>

namespace switchsim {

double CounterRng::exponential(double rate) {
    if (!(rate > 0)) throw std::domain_error("CounterRng::exponential: rate must be > 0");
    return -std::log1p(-uniform()) / rate;
}

double CounterRng::normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

int CounterRng::poisson(double mean) {
    if (mean < 0) throw std::domain_error("CounterRng::poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean > 60.0)
        throw std::domain_error("CounterRng::poisson: product method not suitable for mean > 60");
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = uniform();
    while (prod > limit) {
        ++k;
        prod *= uniform();
    }
    return k;
}

int CounterRng::binomial(int n, double p) {
    if (n < 0) throw std::domain_error("CounterRng::binomial: n must be >= 0");
    if (p < 0 || p > 1) throw std::domain_error("CounterRng::binomial: p must be in [0,1]");
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (uniform() < p) ++k;
    return k;
}

} // namespace switchsim
