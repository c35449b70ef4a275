#include "switchsim/eit.hpp"

#include <cmath>
#include <stdexcept>

#include "switchsim/constants.hpp"

namespace switchsim {
namespace eit {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

void SpectrumParams::validate() const {
    if (od < 0) throw std::domain_error("eit::SpectrumParams: od must be >= 0");
    if (!(gamma > 0)) throw std::domain_error("eit::SpectrumParams: gamma must be > 0");
    if (!(delta_t > 0)) throw std::domain_error("eit::SpectrumParams: delta_t must be > 0");
    if (t0 < 0 || t0 > 1) throw std::domain_error("eit::SpectrumParams: t0 must be in [0,1]");
}

double transmission(double delta_s, const SpectrumParams& p) {
    const double lor = 2.0 * (delta_s - p.delta0) / p.gamma;
    const double absorption = std::exp(-p.od / (1.0 + lor * lor));
    const double dg = delta_s - p.delta1;
    const double peak = p.t0 * std::exp(-4.0 * dg * dg * kLn2 / (p.delta_t * p.delta_t));
    return absorption + peak;
}

double transparency_width(double rabi, double gamma, double od) {
    if (!(od > 0)) throw std::domain_error("transparency_width: od must be > 0");
    if (!(gamma > 0)) throw std::domain_error("transparency_width: gamma must be > 0");
    return rabi * rabi * std::sqrt(kLn2) / (gamma * std::sqrt(od));
}

double resonant_od_with_dephasing(double od, double rabi, double gamma, double gamma21) {
    if (!(od > 0 && rabi > 0 && gamma > 0))
        throw std::domain_error("resonant_od_with_dephasing: od, rabi, gamma must be > 0");
    if (gamma21 < 0)
        throw std::domain_error("resonant_od_with_dephasing: gamma21 must be >= 0");
    const double g = gamma21 * gamma;
    return od * g / (g + 0.5 * rabi * rabi);
}

double group_velocity(double rabi, double absorption_length, double gamma) {
    if (!(rabi > 0 && absorption_length > 0 && gamma > 0))
        throw std::domain_error("group_velocity: inputs must be > 0");
    return rabi * rabi * absorption_length / gamma;
}

double group_velocity_from_delay(double sigma_z, double t_delay) {
    if (!(sigma_z > 0 && t_delay > 0))
        throw std::domain_error("group_velocity_from_delay: inputs must be > 0");
    return std::sqrt(kTwoPi) * sigma_z / t_delay;
}

double correlation_time_prediction(double od, double gamma, double rabi) {
    if (!(od > 0)) throw std::domain_error("correlation_time_prediction: od must be > 0");
    if (!(rabi > 0)) throw std::domain_error("correlation_time_prediction: rabi must be > 0");
    return 1.05 * std::sqrt(8.0 * od) * gamma / (rabi * rabi);
}

} // namespace eit
} // namespace switchsim
