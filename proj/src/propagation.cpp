#include "switchsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace switchsim {

double BinDistribution::total() const {
    return std::accumulate(probs.begin(), probs.end(), 0.0);
}

double BinDistribution::mean() const {
    double m = 0.0;
    for (std::size_t n = 1; n < probs.size(); ++n) m += static_cast<double>(n) * probs[n];
    return m;
}

BinDistribution BinDistribution::poisson(double mu, int nmax) {
    if (mu < 0) throw std::domain_error("BinDistribution::poisson: mu must be >= 0");
    if (nmax < 0) nmax = std::max(20, static_cast<int>(std::ceil(mu + 8.0 * std::sqrt(mu))));
    if (nmax < 2) throw std::domain_error("BinDistribution: nmax must be >= 2");
    BinDistribution d;
    d.probs.resize(nmax + 1);
    double p = std::exp(-mu);
    double sum = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        d.probs[n] = p;
        sum += p;
        p *= mu / (n + 1);
    }
    d.trunc_error = 1.0 - sum;
    return d;
}

BinDistribution BinDistribution::delta(int n, int nmax) {
    if (n < 0) throw std::domain_error("BinDistribution::delta: n must be >= 0");
    if (nmax < 0) nmax = std::max(20, n + 2);
    if (nmax < std::max(2, n)) throw std::domain_error("BinDistribution: nmax too small");
    BinDistribution d;
    d.probs.assign(nmax + 1, 0.0);
    d.probs[n] = 1.0;
    return d;
}

double MediumParams::t0() const {
    return std::exp(-alpha1 * length);
}

void MediumParams::validate() const {
    if (!(alpha > alpha1 && alpha1 >= 0))
        throw std::domain_error("MediumParams: need alpha > alpha1 >= 0");
    if (!(length >= pulse_length && pulse_length > 0))
        throw std::domain_error("MediumParams: need length >= pulse_length > 0");
}

MediumParams MediumParams::from_depths(double od, double od_eit, double length) {
    MediumParams m;
    m.length = length;
    m.pulse_length = length;
    m.alpha = od / length;
    m.alpha1 = od_eit / length;
    m.validate();
    return m;
}

namespace {

// master-equation right-hand side; total derivative sums to zero exactly
void rhs(const MediumParams& m, const std::vector<double>& p, std::vector<double>& dp) {
    const int nmax = static_cast<int>(p.size()) - 1;
    dp[0] = m.alpha1 * p[1];
    dp[1] = -m.alpha1 * p[1] + 2.0 * m.alpha * p[2];
    for (int n = 2; n <= nmax; ++n) {
        const double in = (n < nmax) ? (n + 1) * p[n + 1] : 0.0;
        dp[n] = m.alpha * (-n * p[n] + in);
    }
}

// Cash-Karp embedded RK4(5) tableau
constexpr double kA2 = 1.0 / 5.0;
constexpr double kA3 = 3.0 / 10.0, kB31 = 3.0 / 40.0, kB32 = 9.0 / 40.0;
constexpr double kA4 = 3.0 / 5.0, kB41 = 3.0 / 10.0, kB42 = -9.0 / 10.0, kB43 = 6.0 / 5.0;
constexpr double kA5 = 1.0, kB51 = -11.0 / 54.0, kB52 = 5.0 / 2.0, kB53 = -70.0 / 27.0,
                 kB54 = 35.0 / 27.0;
constexpr double kA6 = 7.0 / 8.0, kB61 = 1631.0 / 55296.0, kB62 = 175.0 / 512.0,
                 kB63 = 575.0 / 13824.0, kB64 = 44275.0 / 110592.0, kB65 = 253.0 / 4096.0;
constexpr double kC1 = 37.0 / 378.0, kC3 = 250.0 / 621.0, kC4 = 125.0 / 594.0,
                 kC6 = 512.0 / 1771.0;
constexpr double kD1 = kC1 - 2825.0 / 27648.0, kD3 = kC3 - 18575.0 / 48384.0,
                 kD4 = kC4 - 13525.0 / 55296.0, kD5 = -277.0 / 14336.0, kD6 = kC6 - 0.25;

} // namespace

BinDistribution evolve_bin(const BinDistribution& init, const MediumParams& m, double z,
                           double max_step) {
    m.validate();
    if (z < 0 || z > m.length + 1e-12 * m.length)
        throw std::domain_error("evolve_bin: z must lie in [0, L]");
    if (init.nmax() < 2)
        throw std::domain_error("evolve_bin: distribution needs nmax >= 2");
    BinDistribution out = init;
    if (z == 0.0) return out;

    const double rtol = 1e-10, atol = 1e-13;
    const double hmax = (max_step > 0) ? std::min(max_step, z) : z / 16.0;
    const double hmin = z * 1e-13;
    const double total0 = out.total();

    std::vector<double>& p = out.probs;
    const std::size_t n = p.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n), pnew(n);

    double x = 0.0;
    double h = hmax;
    long steps = 0;
    const long max_steps = 2000000;

    while (x < z) {
        if (++steps > max_steps)
            throw SolverError("evolve_bin: step budget exhausted at z=" + std::to_string(x) +
                              ", h=" + std::to_string(h) + " (step too coarse or system too stiff)");
        h = std::min(h, z - x);

        rhs(m, p, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + h * kA2 * k1[i];
        rhs(m, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + h * (kB31 * k1[i] + kB32 * k2[i]);
        rhs(m, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = p[i] + h * (kB41 * k1[i] + kB42 * k2[i] + kB43 * k3[i]);
        rhs(m, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = p[i] + h * (kB51 * k1[i] + kB52 * k2[i] + kB53 * k3[i] + kB54 * k4[i]);
        rhs(m, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = p[i] + h * (kB61 * k1[i] + kB62 * k2[i] + kB63 * k3[i] + kB64 * k4[i] +
                                 kB65 * k5[i]);
        rhs(m, tmp, k6);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pnew[i] = p[i] + h * (kC1 * k1[i] + kC3 * k3[i] + kC4 * k4[i] + kC6 * k6[i]);
            const double ei = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                                   kD6 * k6[i]);
            const double scale = atol + rtol * std::max(std::abs(p[i]), std::abs(pnew[i]));
            err = std::max(err, std::abs(ei) / scale);
        }

        if (err <= 1.0) {
            x += h;
            p.swap(pnew);
            // structural conservation check; drift here means the step got
            // numerically unstable despite the error estimate
            const double drift = std::abs(out.total() - total0);
            double low = 0.0;
            for (double v : p) low = std::min(low, v);
            if (drift > 1e-6 || low < -1e-6 || !std::isfinite(drift))
                throw SolverError("evolve_bin: probability drift " + std::to_string(drift) +
                                  " (min p = " + std::to_string(low) + ") at z=" +
                                  std::to_string(x) + ", h=" + std::to_string(h) +
                                  "; step too coarse");
        }
        const double safety = 0.9;
        const double grow = (err > 1e-12) ? safety * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.1, 5.0);
        h = std::min(h, hmax);
        if (h < hmin)
            throw SolverError("evolve_bin: step size underflow at z=" + std::to_string(x));
    }
    // suppress the tiny negative round-off the stepper can leave in the tail
    for (double& v : p)
        if (v < 0 && v > -1e-12) v = 0.0;
    return out;
}

namespace {

double mu_at(double mu0, const MediumParams& m, double z) {
    return mu0 * std::exp(-m.alpha * z);
}

} // namespace

double p1_series(double mu0, const MediumParams& m, double z, int kmax) {
    m.validate();
    if (mu0 < 0) throw std::domain_error("p1_series: mu0 must be >= 0");
    if (mu0 == 0.0) return 0.0;
    const int limit = (kmax < 0) ? 160 : kmax;
    double sum = 0.0;
    double pow_mu = mu0 * mu0; // (-mu0)^{k+2}, sign tracked separately
    double factorial = 1.0;    // k!
    for (int k = 0; k <= limit; ++k) {
        if (k > 0) {
            pow_mu *= mu0;
            factorial *= k;
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double denom = m.alpha1 - (k + 2) * m.alpha;
        const double term =
            sign * pow_mu * (std::expm1((denom)*z)) / (factorial * denom);
        sum += term;
        if (kmax < 0 && std::abs(term) < 1e-17 * (std::abs(sum) + 1.0) && k > 4) break;
    }
    return std::exp(-m.alpha1 * z) * (mu0 * std::exp(-mu0) + m.alpha * sum);
}

double p1_closed_neglected(double mu0, const MediumParams& m, double z) {
    m.validate();
    if (mu0 < 0) throw std::domain_error("p1_closed_neglected: mu0 must be >= 0");
    const double mu = mu_at(mu0, m, z);
    return std::exp(-m.alpha1 * z) * (1.0 - std::exp(-mu0)) - 1.0 +
           (1.0 + mu) * std::exp(-mu);
}

double bin_mean_analytic(double mu0, const MediumParams& m, double z, MeanForm form) {
    m.validate();
    if (mu0 < 0) throw std::domain_error("bin_mean_analytic: mu0 must be >= 0");
    if (z < 0 || z > m.length + 1e-12 * m.length)
        throw std::domain_error("bin_mean_analytic: z must lie in [0, L]");
    const double mu = mu_at(mu0, m, z);
    if (form == MeanForm::neglected) {
        // N_bin = e^{-a1 z}(1-e^{-mu0}) - 1 + mu + e^{-mu}
        return std::exp(-m.alpha1 * z) * (1.0 - std::exp(-mu0)) - 1.0 + mu + std::exp(-mu);
    }
    // exact: p1 + sum_{n>=2} n p_n = p1 + mu (1 - e^{-mu})
    return p1_series(mu0, m, z) + mu * (1.0 - std::exp(-mu));
}

double transmitted_mean(double n_in, double bins, double t0) {
    if (n_in < 0) throw std::domain_error("transmitted_mean: N_in must be >= 0");
    if (!(bins > 0)) throw std::domain_error("transmitted_mean: b must be > 0");
    if (t0 < 0 || t0 > 1) throw std::domain_error("transmitted_mean: T0 must be in [0,1]");
    return bins * t0 * (-std::expm1(-n_in / bins));
}

double bin_count_estimate(double pulse_duration, double correlation_time) {
    if (!(pulse_duration > 0 && correlation_time > 0))
        throw std::domain_error("bin_count_estimate: inputs must be > 0");
    return pulse_duration / correlation_time;
}

} // namespace switchsim
