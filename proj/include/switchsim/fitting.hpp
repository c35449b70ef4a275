#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace switchsim {

class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

using ParamMap = std::map<std::string, double>;
// y = f(x; params). Models must be smooth in every parameter.
using ModelFn = std::function<double(double, const ParamMap&)>;

struct DataSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma; // optional; empty means unit weights

    void validate(std::size_t n_free) const;
    bool has_sigma() const { return !sigma.empty(); }
};

struct FitProblem {
    ModelFn model;
    std::vector<std::string> free_params;
    ParamMap fixed;
    ParamMap initial; // initial values for the free parameters
    std::map<std::string, std::pair<double, double>> bounds; // optional, free params
    int max_iterations = 200;
};

struct FitResult {
    ParamMap values;     // free (best-fit) plus fixed, merged
    ParamMap std_errors; // free parameters only
    double residual_norm = 0; // sqrt(sum_i ((y_i - f_i)/sigma_i)^2)
    bool converged = false;
    int iterations = 0;
    std::string message;
    std::vector<double> damping_trace; // lambda after each accepted step
};

// Damped Gauss-Newton (Levenberg) minimizer of the weighted least-squares
// cost. Jacobians by central differences with relative step 1e-6 |theta|
// (1e-6 absolute only at theta = 0).
// Damping increases x10 on a rejected step and decreases /10 on an accepted
// one. Convergence: relative cost reduction < 1e-10 or scaled gradient
// norm < 1e-8. Standard errors come from the local quadratic approximation
// at the optimum; without measurement sigmas they are scaled by the
// residual variance. Singular normal equations raise FitError naming the
// unidentifiable parameter combination.
FitResult fit(const FitProblem& problem, const DataSeries& data);

// Weighted linear least squares, closed form. Parameters "intercept",
// "slope". Throws FitError for fewer than 2 points.
FitResult fit_linear(const DataSeries& data);

// Exponential convenience fits with log-domain initialization:
//   amplitude_decay:       y = amplitude * exp(-rate * t)
//   extinction_recovery:   y = 1 - (1 - eps0) * exp(-t / tau_pop)
enum class ExpModel { amplitude_decay, extinction_recovery };
FitResult fit_exponential(const DataSeries& data, ExpModel model);

} // namespace switchsim
