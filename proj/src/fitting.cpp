#include "switchsim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace switchsim {

void DataSeries::validate(std::size_t n_free) const {
    if (x.size() != y.size())
        throw FitError("DataSeries: x and y lengths differ");
    if (!sigma.empty() && sigma.size() != x.size())
        throw FitError("DataSeries: sigma length differs from x");
    if (x.size() < n_free + 1)
        throw FitError("DataSeries: need at least n_free + 1 = " + std::to_string(n_free + 1) +
                       " points, got " + std::to_string(x.size()));
    for (double s : sigma)
        if (!(s > 0)) throw FitError("DataSeries: sigmas must be > 0");
}

namespace {

using Matrix = std::vector<std::vector<double>>;

// Solves A x = b (symmetric positive definite A) in place; returns false if
// a pivot collapses, which signals (near-)singular normal equations.
bool solve_spd(Matrix a, std::vector<double> b, std::vector<double>& out) {
    const std::size_t n = b.size();
    double max_diag = 0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a[i][i]));
    if (max_diag == 0) return false;
    for (std::size_t k = 0; k < n; ++k) {
        // partial pivoting keeps this robust when damping is tiny
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            std::swap(b[piv], b[k]);
        }
        if (std::abs(a[k][k]) < 1e-14 * max_diag) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * out[j];
        out[i] = s / a[i][i];
    }
    return true;
}

// Inverse via Gauss-Jordan; same singularity convention as solve_spd.
bool invert(Matrix a, Matrix& inv) {
    const std::size_t n = a.size();
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    double max_diag = 0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a[i][i]));
    if (max_diag == 0) return false;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            std::swap(inv[piv], inv[k]);
        }
        if (std::abs(a[k][k]) < 1e-14 * max_diag) return false;
        const double d = a[k][k];
        for (std::size_t j = 0; j < n; ++j) {
            a[k][j] /= d;
            inv[k][j] /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = a[i][k];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return true;
}

// Smallest-eigenvector estimate by inverse iteration, used to name the
// parameter combination that makes the normal equations singular.
std::vector<double> null_direction(const Matrix& n_mat) {
    const std::size_t n = n_mat.size();
    double trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += std::abs(n_mat[i][i]);
    Matrix shifted = n_mat;
    const double eps = (trace > 0 ? trace : 1.0) * 1e-12;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] += eps;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w;
    for (int it = 0; it < 60; ++it) {
        if (!solve_spd(shifted, v, w)) break;
        double norm = 0;
        for (double c : w) norm += c * c;
        norm = std::sqrt(norm);
        if (!(norm > 0) || !std::isfinite(norm)) break;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    return v;
}

std::string combination_names(const std::vector<std::string>& names,
                              const std::vector<double>& v) {
    double vmax = 0;
    for (double c : v) vmax = std::max(vmax, std::abs(c));
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (std::abs(v[i]) >= 0.3 * vmax) {
            if (!out.empty()) out += ", ";
            out += names[i];
        }
    }
    return out.empty() ? "(undetermined)" : out;
}

struct Workspace {
    const FitProblem& problem;
    const DataSeries& data;
    std::vector<double> weights; // 1/sigma^2 (or 1)
    ParamMap scratch;

    Workspace(const FitProblem& p, const DataSeries& d) : problem(p), data(d) {
        weights.resize(d.x.size(), 1.0);
        if (d.has_sigma())
            for (std::size_t i = 0; i < d.x.size(); ++i)
                weights[i] = 1.0 / (d.sigma[i] * d.sigma[i]);
        scratch = p.fixed;
    }

    void load(const std::vector<double>& theta) {
        for (std::size_t j = 0; j < problem.free_params.size(); ++j)
            scratch[problem.free_params[j]] = theta[j];
    }

    // weighted residual sum of squares
    double cost(const std::vector<double>& theta) {
        load(theta);
        double c = 0;
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            const double r = data.y[i] - problem.model(data.x[i], scratch);
            c += weights[i] * r * r;
        }
        return c;
    }

    void residuals(const std::vector<double>& theta, std::vector<double>& r) {
        load(theta);
        r.resize(data.x.size());
        for (std::size_t i = 0; i < data.x.size(); ++i)
            r[i] = data.y[i] - problem.model(data.x[i], scratch);
    }

    std::pair<double, double> bound(std::size_t j) const {
        const auto it = problem.bounds.find(problem.free_params[j]);
        if (it == problem.bounds.end())
            return {-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};
        return it->second;
    }

    // central-difference Jacobian of the model, columns = free params;
    // probe points are clamped into bounds (one-sided at an active bound)
    void jacobian(const std::vector<double>& theta, Matrix& jac) {
        const std::size_t m = data.x.size(), p = theta.size();
        jac.assign(m, std::vector<double>(p, 0.0));
        std::vector<double> th = theta;
        for (std::size_t j = 0; j < p; ++j) {
            // relative step; an absolute floor would wreck parameters whose
            // natural magnitude is below it (times in seconds, slopes in SI)
            const double h = (theta[j] != 0.0) ? 1e-6 * std::abs(theta[j]) : 1e-6;
            const auto [lo, hi] = bound(j);
            const double up = std::min(theta[j] + h, hi);
            const double dn = std::max(theta[j] - h, lo);
            if (!(up > dn))
                throw FitError("fit: cannot probe parameter '" + problem.free_params[j] +
                               "' inside its bounds");
            th[j] = up;
            load(th);
            for (std::size_t i = 0; i < m; ++i) jac[i][j] = problem.model(data.x[i], scratch);
            th[j] = dn;
            load(th);
            for (std::size_t i = 0; i < m; ++i)
                jac[i][j] = (jac[i][j] - problem.model(data.x[i], scratch)) / (up - dn);
            th[j] = theta[j];
        }
    }
};

} // namespace

FitResult fit(const FitProblem& problem, const DataSeries& data) {
    const std::size_t p = problem.free_params.size();
    if (p == 0) throw FitError("fit: no free parameters");
    data.validate(p);
    for (const auto& name : problem.free_params) {
        if (problem.fixed.count(name))
            throw FitError("fit: parameter '" + name + "' is both free and fixed");
        if (!problem.initial.count(name))
            throw FitError("fit: missing initial value for '" + name + "'");
    }

    Workspace ws(problem, data);
    std::vector<double> theta(p);
    for (std::size_t j = 0; j < p; ++j) {
        theta[j] = problem.initial.at(problem.free_params[j]);
        const auto [lo, hi] = ws.bound(j);
        if (theta[j] < lo || theta[j] > hi)
            throw FitError("fit: initial value of '" + problem.free_params[j] +
                           "' lies outside its bounds");
    }

    FitResult res;
    double cost = ws.cost(theta);
    if (!std::isfinite(cost)) throw FitError("fit: initial cost is not finite");

    Matrix jac, n_mat(p, std::vector<double>(p));
    std::vector<double> r, g(p), scale(p), delta(p), trial(p);
    double lambda = 1e-3;
    const double cost_tol = 1e-10, grad_tol = 1e-8;

    // Parameters carry wildly different units (rad/s next to pure numbers),
    // so normal equations are solved in Jacobi-scaled (correlation) form:
    // M = D^-1/2 N D^-1/2 with D = diag(N). Rank tests and damping then see
    // a unit-free matrix.
    auto build_normal = [&](const std::vector<double>& th) {
        ws.residuals(th, r);
        ws.jacobian(th, jac);
        for (std::size_t a = 0; a < p; ++a) {
            g[a] = 0;
            for (std::size_t b = a; b < p; ++b) {
                double s = 0;
                for (std::size_t i = 0; i < r.size(); ++i)
                    s += ws.weights[i] * jac[i][a] * jac[i][b];
                n_mat[a][b] = n_mat[b][a] = s;
            }
            for (std::size_t i = 0; i < r.size(); ++i) g[a] += ws.weights[i] * jac[i][a] * r[i];
            scale[a] = std::sqrt(n_mat[a][a]);
        }
    };
    auto scaled_normal = [&]() {
        Matrix m(p, std::vector<double>(p));
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b)
                m[a][b] = n_mat[a][b] / (scale[a] * scale[b]);
        return m;
    };
    auto dead_parameter = [&]() -> const std::string* {
        for (std::size_t a = 0; a < p; ++a)
            if (!(scale[a] > 0)) return &problem.free_params[a];
        return nullptr;
    };

    int iter = 0;
    for (; iter < problem.max_iterations; ++iter) {
        build_normal(theta);

        // scale-invariant gradient test: |g_a| relative to the curvature
        double gnorm = 0;
        for (std::size_t a = 0; a < p; ++a)
            if (scale[a] > 0) gnorm = std::max(gnorm, std::abs(g[a]) / scale[a]);
        if (gnorm < grad_tol * std::max(1.0, std::sqrt(cost))) {
            res.converged = true;
            res.message = "gradient norm below tolerance";
            break;
        }

        if (iter == 0) {
            // an exactly rank-deficient Jacobian is a modeling error; report
            // it before damping can mask it
            if (const std::string* name = dead_parameter())
                throw FitError("fit: singular normal equations; unidentifiable parameter "
                               "combination: " +
                               *name);
            std::vector<double> probe, rhs(p);
            for (std::size_t a = 0; a < p; ++a) rhs[a] = g[a] / scale[a];
            if (!solve_spd(scaled_normal(), rhs, probe)) {
                const auto v = null_direction(scaled_normal());
                throw FitError("fit: singular normal equations; unidentifiable parameter "
                               "combination: " +
                               combination_names(problem.free_params, v));
            }
        }

        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            Matrix damped = scaled_normal();
            for (std::size_t a = 0; a < p; ++a) damped[a][a] += lambda;
            std::vector<double> rhs(p), y;
            for (std::size_t a = 0; a < p; ++a)
                rhs[a] = (scale[a] > 0) ? g[a] / scale[a] : 0.0;
            if (!solve_spd(damped, rhs, y)) {
                lambda *= 10.0;
                continue;
            }
            for (std::size_t j = 0; j < p; ++j) {
                delta[j] = (scale[j] > 0) ? y[j] / scale[j] : 0.0;
                const auto [lo, hi] = ws.bound(j);
                trial[j] = std::clamp(theta[j] + delta[j], lo, hi);
            }
            const double trial_cost = ws.cost(trial);
            if (std::isfinite(trial_cost) && trial_cost < cost) {
                const double reduction = (cost - trial_cost) / std::max(cost, 1e-300);
                theta = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 10.0, 1e-14);
                res.damping_trace.push_back(lambda);
                accepted = true;
                if (reduction < cost_tol) {
                    res.converged = true;
                    res.message = "relative cost reduction below tolerance";
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            res.message = "no downhill step found (damping exhausted)";
            break;
        }
        if (res.converged) break;
    }
    if (!res.converged && res.message.empty())
        res.message = "maximum iterations reached";
    res.iterations = iter + 1;
    res.residual_norm = std::sqrt(cost);

    // covariance from the local quadratic model at the optimum
    build_normal(theta);
    Matrix cov;
    if (const std::string* name = dead_parameter())
        throw FitError("fit: singular normal equations at the optimum; unidentifiable "
                       "parameter combination: " +
                       *name);
    if (!invert(scaled_normal(), cov)) {
        const auto v = null_direction(scaled_normal());
        throw FitError("fit: singular normal equations at the optimum; unidentifiable "
                       "parameter combination: " +
                       combination_names(problem.free_params, v));
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) cov[a][b] /= scale[a] * scale[b];
    double variance_scale = 1.0;
    if (!data.has_sigma()) {
        // unit weights: scale errors by the residual variance
        const double dof = static_cast<double>(data.x.size()) - static_cast<double>(p);
        variance_scale = (dof > 0) ? cost / dof : 1.0;
    }
    res.values = problem.fixed;
    for (std::size_t j = 0; j < p; ++j) {
        res.values[problem.free_params[j]] = theta[j];
        res.std_errors[problem.free_params[j]] = std::sqrt(std::max(0.0, cov[j][j] * variance_scale));
    }
    return res;
}

FitResult fit_linear(const DataSeries& data) {
    if (data.x.size() < 2) throw FitError("fit_linear: need at least 2 points");
    data.validate(1);
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double w = data.has_sigma() ? 1.0 / (data.sigma[i] * data.sigma[i]) : 1.0;
        sw += w;
        sx += w * data.x[i];
        sy += w * data.y[i];
        sxx += w * data.x[i] * data.x[i];
        sxy += w * data.x[i] * data.y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (!(std::abs(det) > 1e-14 * std::max(1.0, sw * sxx)))
        throw FitError("fit_linear: singular normal equations; unidentifiable parameter "
                       "combination: intercept, slope (all x identical)");
    const double slope = (sw * sxy - sx * sy) / det;
    const double intercept = (sxx * sy - sx * sxy) / det;

    double cost = 0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double w = data.has_sigma() ? 1.0 / (data.sigma[i] * data.sigma[i]) : 1.0;
        const double r = data.y[i] - intercept - slope * data.x[i];
        cost += w * r * r;
    }
    double variance_scale = 1.0;
    if (!data.has_sigma()) {
        const double dof = static_cast<double>(data.x.size()) - 2.0;
        variance_scale = (dof > 0) ? cost / dof : 1.0;
    }
    FitResult res;
    res.values["intercept"] = intercept;
    res.values["slope"] = slope;
    res.std_errors["intercept"] = std::sqrt(variance_scale * sxx / det);
    res.std_errors["slope"] = std::sqrt(variance_scale * sw / det);
    res.residual_norm = std::sqrt(cost);
    res.converged = true;
    res.iterations = 0;
    res.message = "closed form";
    return res;
}

FitResult fit_exponential(const DataSeries& data, ExpModel model) {
    if (data.x.size() < 3) throw FitError("fit_exponential: need at least 3 points");

    // log-domain line through the decaying part for the starting point
    DataSeries logd;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double v = (model == ExpModel::amplitude_decay) ? data.y[i] : 1.0 - data.y[i];
        if (v > 0) {
            logd.x.push_back(data.x[i]);
            logd.y.push_back(std::log(v));
        }
    }
    if (logd.x.size() < 2) throw FitError("fit_exponential: not enough positive data to initialize");
    const FitResult line = fit_linear(logd);
    const double rate0 = std::max(-line.values.at("slope"), 1e-30);
    const double amp0 = std::exp(line.values.at("intercept"));

    FitProblem prob;
    if (model == ExpModel::amplitude_decay) {
        prob.model = [](double t, const ParamMap& p) {
            return p.at("amplitude") * std::exp(-p.at("rate") * t);
        };
        prob.free_params = {"amplitude", "rate"};
        prob.initial = {{"amplitude", amp0}, {"rate", rate0}};
    } else {
        prob.model = [](double t, const ParamMap& p) {
            return 1.0 - (1.0 - p.at("eps0")) * std::exp(-t / p.at("tau_pop"));
        };
        prob.free_params = {"eps0", "tau_pop"};
        prob.initial = {{"eps0", 1.0 - amp0}, {"tau_pop", 1.0 / rate0}};
        prob.bounds["tau_pop"] = {1e-30, std::numeric_limits<double>::infinity()};
    }
    return fit(prob, data);
}

} // namespace switchsim
