#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace switchsim {

class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Truncated photon-number distribution of one temporal bin, p_0..p_nmax.
// trunc_error records the probability mass lost to truncation when the
// distribution was constructed; evolution conserves the stored total.
struct BinDistribution {
    std::vector<double> probs;
    double trunc_error = 0.0;

    int nmax() const { return static_cast<int>(probs.size()) - 1; }
    double total() const;
    double mean() const;

    // Poisson(mu) truncated at nmax; nmax < 0 selects the default rule
    // max(20, ceil(mu + 8 sqrt(mu))), which keeps the tail below ~2e-9
    // for mu <= 8.
    static BinDistribution poisson(double mu, int nmax = -1);
    static BinDistribution delta(int n, int nmax = -1);
};

// Homogeneous medium: absorption coefficient alpha without EIT, alpha1 at
// the EIT resonance, medium length and pulse length in the medium.
struct MediumParams {
    double alpha = 0;        // 1/m
    double alpha1 = 0;       // 1/m
    double length = 0;       // m (L)
    double pulse_length = 0; // m (L_p <= L)

    double od() const { return alpha * pulse_length; }
    double od_eit() const { return alpha1 * pulse_length; }
    double t0() const; // exp(-alpha1 * length)

    void validate() const;
    // convenience: build from optical depths with L_p = L = 1 m (the depth
    // products are all that the dimensionless results depend on)
    static MediumParams from_depths(double od, double od_eit, double length = 1.0);
};

// Integrates the bin master equation from 0 to z:
//   dp_n/dz = alpha (-n p_n + (n+1) p_{n+1}),   n >= 2
//   dp_1/dz = -alpha1 p_1 + 2 alpha p_2
//   dp_0/dz = alpha1 p_1
// with an adaptive embedded Runge-Kutta stepper (Cash-Karp 4/5). max_step
// caps the step size (<= 0 means z/16). Total probability is conserved to
// well below 1e-9; a per-step drift above 1e-6, component blow-up, or an
// exhausted step budget raises SolverError with diagnostics.
BinDistribution evolve_bin(const BinDistribution& init, const MediumParams& m, double z,
                           double max_step = 0.0);

// Mean photon number in a bin after distance z, for Poisson(mu0) input.
// `neglected` is the closed form with alpha1 dropped next to (k+2) alpha
// (good for alpha1/alpha << 1, the published-fit regime); `exact_series`
// keeps it and matches the master equation to solver accuracy.
enum class MeanForm { neglected, exact_series };
double bin_mean_analytic(double mu0, const MediumParams& m, double z,
                         MeanForm form = MeanForm::neglected);

// p_1(z) for Poisson(mu0) input, exact series
//   e^{-a1 z} ( mu0 e^{-mu0} + a sum_k (-mu0)^{k+2} (e^{(a1-(k+2)a) z}-1)
//                                       / (k! (a1-(k+2)a)) ).
// kmax < 0 sums adaptively to machine precision (k <= 160).
double p1_series(double mu0, const MediumParams& m, double z, int kmax = -1);

// p_1(z) with alpha1 neglected in the series denominators:
// e^{-a1 z}(1-e^{-mu0}) - 1 + (1+mu(z)) e^{-mu(z)}.
double p1_closed_neglected(double mu0, const MediumParams& m, double z);

// Rapid-blockade transmitted mean for the whole pulse:
// N_out = b T0 (1 - exp(-N_in / b)). b is a continuous parameter.
double transmitted_mean(double n_in, double bins, double t0);

// Independent estimate of the bin count, b ~ t_p / tau_c: one bin per
// correlation time of the transmitted light.
double bin_count_estimate(double pulse_duration, double correlation_time);

} // namespace switchsim
