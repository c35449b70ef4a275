#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "switchsim/propagation.hpp"
#include "switchsim/rng.hpp"
#include "switchsim/storage.hpp"

namespace switchsim {
namespace mc {

// Stochastic realization of the bin master equation over `distance`:
// while n >= 2 the next absorption is exponential with rate n*alpha; a
// lone photon survives the remaining distance with prob e^{-alpha1 dz}.
int simulate_bin_transit(int n0, const MediumParams& m, double distance, CounterRng& rng);

// One gate-target scenario. Depth-space geometry: the pulse length is 1,
// storage.od / storage.od_eit are the depth products over it.
struct Scenario {
    double n_g = 0; // mean incoming gate photons (on gate cycles)
    double n_t = 0; // mean incoming target photons
    StorageMode storage_mode = StorageMode::full;
    StorageParams storage;   // gate chain: eta_sb, bins, od, od_eit
    double target_bins = 0;  // b of the target pulse (continuous)
    double target_t0 = 0;    // e^{-OD_EIT} of the target transition
    double od_b0 = 0;        // blockaded optical depth at zero depletion
    double n1 = 0;           // depletion scale
    double n0 = 0;           // per-stored-excitation leak prob into the target window
    HeraldParams herald;     // eta_wr, eta_det, p_h0
    // grouping for the per-sample estimator; one "atomic sample" worth of
    // alternating cycles
    std::uint64_t cycles_per_sample = 9000;

    void validate() const;
    // conditional retrieval-and-detection probability per stored, non-leaked
    // excitation; chosen so that p_h = eta_wr eta_det N_b + p_h0 holds
    double herald_prob_per_stored() const;
};

struct CycleRecord {
    std::uint64_t cycle_index = 0;
    std::uint32_t gate_in = 0;
    std::uint32_t stored = 0;
    std::uint32_t target_in = 0;
    std::uint32_t background_emitted = 0; // undesired retrievals in the target window
    // photons reaching the detector in the target window: transmitted
    // target photons plus background_emitted
    std::uint32_t target_transmitted = 0;
    std::uint32_t target_detected = 0;
    bool herald_detected = false;
    bool background_herald = false;
    std::uint64_t rng_stream_id = 0;
};

// Per-"atomic sample" sums behind the ratio-of-sums estimators.
struct SampleSums {
    std::uint64_t det_gate = 0, det_ref = 0;
    std::uint64_t gate_cycles = 0, ref_cycles = 0;
    std::uint64_t her_cycles = 0, her_det = 0;
};

// Pure counts; merging aggregates is associative and commutative.
struct CycleAggregate {
    std::uint64_t cycles = 0, gate_cycles = 0, ref_cycles = 0;
    std::uint64_t gate_in = 0, stored_excitations = 0, stored_cycles = 0;
    std::uint64_t target_in = 0;
    std::uint64_t transmitted_gate = 0, transmitted_ref = 0;
    std::uint64_t detected_gate = 0, detected_ref = 0;
    std::uint64_t heralds = 0, background_heralds = 0;
    std::uint64_t heralded_cycles = 0, heralded_detected = 0;
    std::vector<SampleSums> samples;

    void merge(const CycleAggregate& other);
};

struct RatioEstimate {
    double value = 0;
    double stderr_sample = 0; // standard error of the per-sample mean
    double stderr_shot = 0;   // shot-noise approximation from total counts
    std::uint64_t n_samples = 0;
};

struct CycleSummary {
    CycleAggregate agg;
    RatioEstimate eps_total;   // per-sample ratio-of-sums, mean +- SE
    double eps_global = 0;     // ratio of the grand sums
    double p_h = 0, p_h_se = 0;
    double eps_post = 0, eps_post_shot_se = 0, eps_post_jack_se = 0;
};

// Runs n_cycles alternating reference/gate cycles (even index: N_g = 0).
// Per-cycle RNG streams are keyed by (seed, cycle index): the outcome of
// every cycle, and hence the summary, is bit-identical for any worker
// count. `records`, when given, receives one CycleRecord per cycle in
// cycle order.
CycleSummary simulate_cycles(std::uint64_t n_cycles, const Scenario& sc, std::uint64_t seed,
                             int workers = 1, std::vector<CycleRecord>* records = nullptr);

// --- second-order correlation -------------------------------------------

struct ClickRecord {
    std::uint64_t cycle = 0;
    int detector = 0; // 0 or 1
    std::vector<double> times; // sorted, within the pulse window
};

struct G2Row {
    double tau = 0; // bin center
    double g2 = 0;
    double se = 0;
    std::uint64_t coincidences = 0;
    std::uint64_t shuffled = 0;
    bool flagged = false; // insufficient statistics (< 10 coincidences)
};

// Cross-detector coincidence estimator, normalized by pairing each cycle's
// detector-0 clicks with the next cycle's detector-1 clicks (uncorrelated
// reference). Signed lags tau = t1 - t0 binned over [-tau_max, tau_max).
std::vector<G2Row> estimate_g2(const std::vector<ClickRecord>& records, double bin_width,
                               double tau_max);

// Synthetic click-stream generators for the estimator tests and the CLI.
// Uncorrelated coherent-state baseline: g2 = 1.
std::vector<ClickRecord> generate_poisson_clicks(std::uint64_t cycles, double rate, double window,
                                                 std::uint64_t seed);
// Mostly 0-or-1 retrieved photon per cycle plus weak uncorrelated
// background: antibunched, g2(0) << 1.
std::vector<ClickRecord> generate_retrieval_clicks(std::uint64_t cycles, double p_signal,
                                                   double bg_mean, double window,
                                                   std::uint64_t seed);
// Blockade-style cross-detector veto with a Gaussian kernel of rms width
// tau_c; the expected correlation is g2(tau) = 1 - exp(-tau^2/(2 tau_c^2)).
std::vector<ClickRecord> generate_blockade_clicks(std::uint64_t cycles, double rate0, double rate1,
                                                  double window, double tau_c, std::uint64_t seed);

} // namespace mc
} // namespace switchsim
