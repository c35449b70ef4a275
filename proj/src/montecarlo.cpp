#include "switchsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace switchsim {
namespace mc {

int simulate_bin_transit(int n0, const MediumParams& m, double distance, CounterRng& rng) {
    m.validate();
    if (n0 < 0) throw std::domain_error("simulate_bin_transit: n0 must be >= 0");
    if (distance < 0) throw std::domain_error("simulate_bin_transit: distance must be >= 0");
    int n = n0;
    double z = 0.0;
    while (n >= 2) {
        const double step = rng.exponential(n * m.alpha);
        if (z + step >= distance) return n; // no further event inside the medium
        z += step;
        --n;
    }
    if (n == 1) {
        const double p_survive = std::exp(-m.alpha1 * (distance - z));
        return rng.bernoulli(p_survive) ? 1 : 0;
    }
    return 0;
}

void Scenario::validate() const {
    if (n_g < 0 || n_t < 0) throw std::domain_error("Scenario: photon numbers must be >= 0");
    storage.validate();
    if (storage_mode == StorageMode::full && !(storage.od > storage.od_eit))
        throw std::domain_error("Scenario: full storage mode needs od > od_eit");
    if (!(target_bins > 0)) throw std::domain_error("Scenario: target_bins must be > 0");
    if (!(target_t0 > 0 && target_t0 <= 1))
        throw std::domain_error("Scenario: target_t0 must be in (0,1]");
    if (od_b0 < 0) throw std::domain_error("Scenario: od_b0 must be >= 0");
    if (!(n1 > 0)) throw std::domain_error("Scenario: n1 must be > 0");
    if (!(n0 >= 0 && n0 < 1)) throw std::domain_error("Scenario: n0 must be in [0,1)");
    herald.validate();
    if (!(cycles_per_sample >= 2))
        throw std::domain_error("Scenario: cycles_per_sample must be >= 2");
    const double p = herald_prob_per_stored();
    if (p > 1.0)
        throw std::domain_error("Scenario: eta_wr eta_det / (eta_sb (1-n0)) exceeds 1; "
                                "herald model inconsistent");
}

double Scenario::herald_prob_per_stored() const {
    if (storage.eta_sb <= 0.0) return 0.0;
    return herald.eta_wr * herald.eta_det / (storage.eta_sb * (1.0 - n0));
}

void CycleAggregate::merge(const CycleAggregate& other) {
    cycles += other.cycles;
    gate_cycles += other.gate_cycles;
    ref_cycles += other.ref_cycles;
    gate_in += other.gate_in;
    stored_excitations += other.stored_excitations;
    stored_cycles += other.stored_cycles;
    target_in += other.target_in;
    transmitted_gate += other.transmitted_gate;
    transmitted_ref += other.transmitted_ref;
    detected_gate += other.detected_gate;
    detected_ref += other.detected_ref;
    heralds += other.heralds;
    background_heralds += other.background_heralds;
    heralded_cycles += other.heralded_cycles;
    heralded_detected += other.heralded_detected;
    if (samples.size() < other.samples.size()) samples.resize(other.samples.size());
    for (std::size_t i = 0; i < other.samples.size(); ++i) {
        samples[i].det_gate += other.samples[i].det_gate;
        samples[i].det_ref += other.samples[i].det_ref;
        samples[i].gate_cycles += other.samples[i].gate_cycles;
        samples[i].ref_cycles += other.samples[i].ref_cycles;
        samples[i].her_cycles += other.samples[i].her_cycles;
        samples[i].her_det += other.samples[i].her_det;
    }
}

namespace {

// number of bins realized this cycle for a continuous b: floor(b) plus a
// Bernoulli(frac) partial bin, so the expected bin count equals b and the
// closed forms with continuous b are matched exactly in expectation
int draw_bin_count(double bins, CounterRng& rng) {
    const int base = static_cast<int>(std::floor(bins));
    const double frac = bins - base;
    if (frac > 0 && rng.bernoulli(frac)) return base + 1;
    return base;
}

CycleRecord run_cycle(std::uint64_t idx, const Scenario& sc, const MediumParams& gate_medium,
                      std::uint64_t seed) {
    CounterRng rng(seed, idx);
    CycleRecord rec;
    rec.cycle_index = idx;
    rec.rng_stream_id = idx;

    const bool gate_on = (idx % 2) == 1; // even cycles are the N_g = 0 reference
    const double ng = gate_on ? sc.n_g : 0.0;

    // ---- gate pulse: propagate to switch-off, store ----
    int stored = 0;
    if (ng > 0) {
        const int n_bins = draw_bin_count(sc.storage.bins, rng);
        const double mu0 = ng / sc.storage.bins;
        for (int j = 0; j < n_bins; ++j) {
            const int n_in = rng.poisson(mu0);
            rec.gate_in += n_in;
            if (n_in == 0) continue;
            // bin position when the control light switches off, uniform over
            // the pulse (pulse length 1 in depth coordinates)
            const double z = rng.uniform();
            int survivors = 0;
            if (sc.storage_mode == StorageMode::rapid) {
                survivors = rng.bernoulli(std::exp(-sc.storage.od_eit * z)) ? 1 : 0;
            } else {
                survivors = simulate_bin_transit(n_in, gate_medium, z, rng);
            }
            stored += rng.binomial(survivors, sc.storage.eta_sb);
        }
    }
    rec.stored = stored;

    // ---- per stored excitation: either leak into the target window or be
    // available for heralding (one excitation is retrieved at most once) ----
    int leaked = 0;
    bool any_herald = false;
    const double p_herald = sc.herald_prob_per_stored();
    for (int e = 0; e < stored; ++e) {
        if (rng.bernoulli(sc.n0))
            ++leaked;
        else if (rng.bernoulli(p_herald))
            any_herald = true;
    }
    const bool bg_herald = rng.bernoulli(sc.herald.p_h0);
    rec.background_herald = bg_herald;
    rec.herald_detected = (gate_on && any_herald) || bg_herald;

    // ---- target pulse ----
    int transmitted = 0;
    if (stored >= 1) {
        // blockaded transit: per-photon survival e^{-OD_b}
        const int n_in = rng.poisson(sc.n_t);
        rec.target_in = n_in;
        const double od_b = std::max(0.0, sc.od_b0 * (1.0 - sc.n_t / sc.n1));
        transmitted = rng.binomial(n_in, std::exp(-od_b));
    } else {
        // self-blockade of the target pulse, rapid approximation
        const int n_bins = draw_bin_count(sc.target_bins, rng);
        const double mu0 = sc.n_t / sc.target_bins;
        for (int j = 0; j < n_bins; ++j) {
            const int n_in = rng.poisson(mu0);
            rec.target_in += n_in;
            if (n_in >= 1 && rng.bernoulli(sc.target_t0)) ++transmitted;
        }
    }
    transmitted += leaked; // undesired retrievals land in the target window
    rec.background_emitted = leaked;
    rec.target_transmitted = transmitted;
    rec.target_detected = rng.binomial(transmitted, sc.herald.eta_det);
    return rec;
}

void accumulate(CycleAggregate& agg, const CycleRecord& rec, const Scenario& sc,
                std::uint64_t n_cycles) {
    const bool gate_on = (rec.cycle_index % 2) == 1;
    const std::uint64_t sample = rec.cycle_index / sc.cycles_per_sample;
    const std::uint64_t n_samples = (n_cycles + sc.cycles_per_sample - 1) / sc.cycles_per_sample;
    if (agg.samples.size() != n_samples) agg.samples.resize(n_samples);

    agg.cycles += 1;
    agg.gate_in += rec.gate_in;
    agg.stored_excitations += rec.stored;
    if (rec.stored > 0) agg.stored_cycles += 1;
    agg.target_in += rec.target_in;
    auto& s = agg.samples[sample];
    if (gate_on) {
        agg.gate_cycles += 1;
        agg.transmitted_gate += rec.target_transmitted;
        agg.detected_gate += rec.target_detected;
        s.det_gate += rec.target_detected;
        s.gate_cycles += 1;
        if (rec.herald_detected) {
            agg.heralds += 1;
            agg.heralded_cycles += 1;
            agg.heralded_detected += rec.target_detected;
            s.her_cycles += 1;
            s.her_det += rec.target_detected;
        }
        if (rec.background_herald) agg.background_heralds += 1;
    } else {
        agg.ref_cycles += 1;
        agg.transmitted_ref += rec.target_transmitted;
        agg.detected_ref += rec.target_detected;
        s.det_ref += rec.target_detected;
        s.ref_cycles += 1;
    }
}

} // namespace

CycleSummary simulate_cycles(std::uint64_t n_cycles, const Scenario& sc, std::uint64_t seed,
                             int workers, std::vector<CycleRecord>* records) {
    if (n_cycles < 2) throw std::domain_error("simulate_cycles: need at least 2 cycles");
    sc.validate();
    if (workers < 1) workers = 1;

    MediumParams gate_medium;
    if (sc.storage_mode == StorageMode::full)
        gate_medium = MediumParams::from_depths(sc.storage.od, sc.storage.od_eit, 1.0);

    if (records) records->resize(n_cycles);

    auto run_range = [&](std::uint64_t lo, std::uint64_t hi, CycleAggregate& agg) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const CycleRecord rec = run_cycle(i, sc, gate_medium, seed);
            accumulate(agg, rec, sc, n_cycles);
            if (records) (*records)[i] = rec;
        }
    };

    std::vector<CycleAggregate> partial(workers);
    if (workers == 1) {
        run_range(0, n_cycles, partial[0]);
    } else {
        std::vector<std::thread> threads;
        const std::uint64_t chunk = (n_cycles + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t lo = std::min<std::uint64_t>(w * chunk, n_cycles);
            const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, n_cycles);
            threads.emplace_back([&, lo, hi, w] { run_range(lo, hi, partial[w]); });
        }
        for (auto& t : threads) t.join();
    }

    CycleSummary sum;
    for (const auto& p : partial) sum.agg.merge(p);
    const CycleAggregate& a = sum.agg;

    // alternating-reference estimator: one ratio of sums per sample,
    // then sample mean and its standard error
    std::vector<double> ratios;
    for (const auto& s : a.samples)
        if (s.det_ref > 0 && s.gate_cycles > 0 && s.ref_cycles > 0)
            ratios.push_back((static_cast<double>(s.det_gate) / s.gate_cycles) /
                             (static_cast<double>(s.det_ref) / s.ref_cycles));
    sum.eps_total.n_samples = ratios.size();
    if (!ratios.empty()) {
        double mean = 0;
        for (double r : ratios) mean += r;
        mean /= ratios.size();
        double var = 0;
        for (double r : ratios) var += (r - mean) * (r - mean);
        var = (ratios.size() > 1) ? var / (ratios.size() - 1) : 0.0;
        sum.eps_total.value = mean;
        sum.eps_total.stderr_sample = std::sqrt(var / ratios.size());
    }
    if (a.detected_gate > 0 && a.detected_ref > 0) {
        const double num = static_cast<double>(a.detected_gate) / a.gate_cycles;
        const double den = static_cast<double>(a.detected_ref) / a.ref_cycles;
        sum.eps_global = num / den;
        sum.eps_total.stderr_shot =
            sum.eps_global * std::sqrt(1.0 / a.detected_gate + 1.0 / a.detected_ref);
    }

    if (a.gate_cycles > 0) {
        sum.p_h = static_cast<double>(a.heralds) / a.gate_cycles;
        sum.p_h_se = std::sqrt(std::max(sum.p_h * (1.0 - sum.p_h), 0.0) /
                               static_cast<double>(a.gate_cycles));
    }

    // postselected extinction: heralded events pooled over all samples
    if (a.heralded_cycles > 0 && a.detected_ref > 0) {
        const double num = static_cast<double>(a.heralded_detected) / a.heralded_cycles;
        const double den = static_cast<double>(a.detected_ref) / a.ref_cycles;
        sum.eps_post = num / den;
        if (a.heralded_detected > 0)
            sum.eps_post_shot_se = sum.eps_post * std::sqrt(1.0 / a.heralded_detected +
                                                            1.0 / a.detected_ref);
        // delete-one-sample jackknife as the empirical error estimate
        std::vector<double> jack;
        for (const auto& s : a.samples) {
            const std::uint64_t hd = a.heralded_detected - s.her_det;
            const std::uint64_t hc = a.heralded_cycles - s.her_cycles;
            const std::uint64_t dr = a.detected_ref - s.det_ref;
            const std::uint64_t rc = a.ref_cycles - s.ref_cycles;
            if (hc > 0 && dr > 0 && rc > 0)
                jack.push_back((static_cast<double>(hd) / hc) / (static_cast<double>(dr) / rc));
        }
        if (jack.size() > 1) {
            double mean = 0;
            for (double j : jack) mean += j;
            mean /= jack.size();
            double var = 0;
            for (double j : jack) var += (j - mean) * (j - mean);
            const double n = static_cast<double>(jack.size());
            sum.eps_post_jack_se = std::sqrt(var * (n - 1.0) / n);
        }
    }
    return sum;
}

// --- g2 ---------------------------------------------------------------

std::vector<G2Row> estimate_g2(const std::vector<ClickRecord>& records, double bin_width,
                               double tau_max) {
    if (!(bin_width > 0 && tau_max > 0))
        throw std::domain_error("estimate_g2: bin_width and tau_max must be > 0");

    // group clicks per cycle
    std::map<std::uint64_t, std::pair<std::vector<double>, std::vector<double>>> cycles;
    for (const auto& r : records) {
        if (r.detector != 0 && r.detector != 1)
            throw std::domain_error("estimate_g2: detector id must be 0 or 1");
        auto& entry = cycles[r.cycle];
        auto& dst = (r.detector == 0) ? entry.first : entry.second;
        dst.insert(dst.end(), r.times.begin(), r.times.end());
    }
    if (cycles.size() < 2)
        throw std::domain_error("estimate_g2: need clicks from at least 2 cycles");

    const int n_bins = 2 * static_cast<int>(std::ceil(tau_max / bin_width));
    const double lo = -0.5 * n_bins * bin_width;
    std::vector<std::uint64_t> same(n_bins, 0), shuf(n_bins, 0);
    auto fill = [&](const std::vector<double>& d0, const std::vector<double>& d1,
                    std::vector<std::uint64_t>& hist) {
        for (double t0 : d0)
            for (double t1 : d1) {
                const double tau = t1 - t0;
                const int k = static_cast<int>(std::floor((tau - lo) / bin_width));
                if (k >= 0 && k < n_bins) hist[k] += 1;
            }
    };

    // same-cycle coincidences and a next-cycle shuffle as the uncorrelated
    // normalization. The shuffle partner is cycle id + 1, not the next
    // cycle present in the data: cycles without clicks must contribute
    // empty partners, otherwise the normalization is biased up by the
    // probability of a cycle being empty.
    for (auto it = cycles.begin(); it != cycles.end(); ++it) {
        fill(it->second.first, it->second.second, same);
        const auto next = cycles.find(it->first + 1);
        if (next != cycles.end()) fill(it->second.first, next->second.second, shuf);
    }

    std::vector<G2Row> rows(n_bins);
    for (int k = 0; k < n_bins; ++k) {
        G2Row& row = rows[k];
        row.tau = lo + (k + 0.5) * bin_width;
        row.coincidences = same[k];
        row.shuffled = shuf[k];
        row.flagged = (same[k] < 10) || (shuf[k] < 10);
        if (shuf[k] > 0) {
            row.g2 = static_cast<double>(same[k]) / static_cast<double>(shuf[k]);
            if (same[k] > 0)
                row.se = row.g2 * std::sqrt(1.0 / same[k] + 1.0 / shuf[k]);
        }
    }
    return rows;
}

std::vector<ClickRecord> generate_poisson_clicks(std::uint64_t cycles, double rate, double window,
                                                 std::uint64_t seed) {
    if (!(rate >= 0 && window > 0))
        throw std::domain_error("generate_poisson_clicks: bad rate or window");
    std::vector<ClickRecord> out;
    for (std::uint64_t c = 0; c < cycles; ++c) {
        CounterRng rng(seed, c);
        for (int det = 0; det < 2; ++det) {
            const int n = rng.poisson(rate * window);
            if (n == 0) continue;
            ClickRecord r;
            r.cycle = c;
            r.detector = det;
            for (int i = 0; i < n; ++i) r.times.push_back(rng.uniform() * window);
            std::sort(r.times.begin(), r.times.end());
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<ClickRecord> generate_retrieval_clicks(std::uint64_t cycles, double p_signal,
                                                   double bg_mean, double window,
                                                   std::uint64_t seed) {
    if (!(p_signal >= 0 && p_signal <= 1 && bg_mean >= 0 && window > 0))
        throw std::domain_error("generate_retrieval_clicks: bad parameters");
    std::vector<ClickRecord> out;
    for (std::uint64_t c = 0; c < cycles; ++c) {
        CounterRng rng(seed, c);
        std::vector<double> t0, t1;
        if (rng.bernoulli(p_signal)) {
            // at most one retrieved photon per cycle (blockade among stored
            // excitations), split on the beam splitter
            const double t = rng.uniform() * window;
            (rng.bernoulli(0.5) ? t0 : t1).push_back(t);
        }
        const int nbg = rng.poisson(bg_mean);
        for (int i = 0; i < nbg; ++i) {
            const double t = rng.uniform() * window;
            (rng.bernoulli(0.5) ? t0 : t1).push_back(t);
        }
        for (int det = 0; det < 2; ++det) {
            auto& src = (det == 0) ? t0 : t1;
            if (src.empty()) continue;
            std::sort(src.begin(), src.end());
            ClickRecord r;
            r.cycle = c;
            r.detector = det;
            r.times = std::move(src);
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<ClickRecord> generate_blockade_clicks(std::uint64_t cycles, double rate0, double rate1,
                                                  double window, double tau_c,
                                                  std::uint64_t seed) {
    if (!(rate0 >= 0 && rate1 >= 0 && window > 0 && tau_c > 0))
        throw std::domain_error("generate_blockade_clicks: bad parameters");
    std::vector<ClickRecord> out;
    for (std::uint64_t c = 0; c < cycles; ++c) {
        CounterRng rng(seed, c);
        std::vector<double> t0;
        const int n0 = rng.poisson(rate0 * window);
        for (int i = 0; i < n0; ++i) t0.push_back(rng.uniform() * window);
        std::sort(t0.begin(), t0.end());

        // detector-1 candidates survive a Gaussian veto from every
        // detector-0 click; the resulting cross-correlation is exactly
        // 1 - exp(-tau^2/(2 tau_c^2))
        std::vector<double> t1;
        const int n1 = rng.poisson(rate1 * window);
        for (int i = 0; i < n1; ++i) {
            const double t = rng.uniform() * window;
            double accept = 1.0;
            for (double s : t0) {
                const double d = (t - s) / tau_c;
                accept *= 1.0 - std::exp(-0.5 * d * d);
            }
            if (rng.bernoulli(accept)) t1.push_back(t);
        }
        std::sort(t1.begin(), t1.end());

        for (int det = 0; det < 2; ++det) {
            auto& src = (det == 0) ? t0 : t1;
            if (src.empty()) continue;
            ClickRecord r;
            r.cycle = c;
            r.detector = det;
            r.times = std::move(src);
            out.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace mc
} // namespace switchsim
