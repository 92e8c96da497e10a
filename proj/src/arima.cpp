#include "tsa/arima.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "tsa/errors.hpp"
#include "tsa/optimize.hpp"

namespace tsa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
// Objective value handed to the optimizer for numerically failed points.
constexpr double kRejected = 1e300;

}  // namespace

void ModelOrder::validate() const {
    if (p < 0 || q < 0) throw DegenerateInput("AR/MA orders must be non-negative");
    if (d < 0 || d > 4) throw DegenerateInput("differencing order must be in [0, 4]");
    if (include_mean && d > 0) {
        throw DegenerateInput("a mean term requires d = 0 (differencing removes the level)");
    }
}

std::vector<double> pacf_to_ar(std::span<const double> partials) {
    std::vector<double> phi(partials.begin(), partials.end());
    std::vector<double> work(phi);
    for (std::size_t j = 1; j < phi.size(); ++j) {
        const double pj = phi[j];
        for (std::size_t k = 0; k < j; ++k) work[k] = phi[k] - pj * phi[j - k - 1];
        std::copy(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(j), phi.begin());
    }
    return phi;
}

std::vector<double> ar_to_pacf(std::span<const double> phi) {
    std::vector<double> work(phi.begin(), phi.end());
    std::vector<double> partials(phi.size());
    for (std::size_t j = phi.size(); j-- > 0;) {
        const double pj = work[j];
        if (!(std::fabs(pj) < 1.0)) {
            throw NonStationaryParams("coefficient vector has a root on or inside the unit circle");
        }
        partials[j] = pj;
        if (j == 0) break;
        std::vector<double> prev(j);
        const double denom = 1.0 - pj * pj;
        for (std::size_t k = 0; k < j; ++k) prev[k] = (work[k] + pj * work[j - k - 1]) / denom;
        work = std::move(prev);
    }
    return partials;
}

bool is_stationary(std::span<const double> phi) {
    try {
        ar_to_pacf(phi);
        return true;
    } catch (const NonStationaryParams&) {
        return false;
    }
}

bool is_invertible(std::span<const double> theta) {
    // 1 + theta_1 z + ... matches 1 - b_1 z - ... with b = -theta.
    std::vector<double> negated(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) negated[i] = -theta[i];
    return is_stationary(negated);
}

namespace {

// Durand-Kerner iteration; coefficients are constant-term first and the
// polynomial is normalized to monic. Degrees here never exceed a handful.
std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs) {
    while (coeffs.size() > 1 && std::fabs(coeffs.back()) < 1e-8) coeffs.pop_back();
    const std::size_t degree = coeffs.size() - 1;
    std::vector<std::complex<double>> roots(degree);
    if (degree == 0) return roots;

    std::vector<std::complex<double>> monic(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) monic[i] = coeffs[i] / coeffs.back();

    const std::complex<double> spread(0.4, 0.9);
    std::complex<double> power(1.0, 0.0);
    for (std::size_t i = 0; i < degree; ++i) {
        power *= spread;
        roots[i] = power;
    }
    const auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = monic.back();
        for (std::size_t i = monic.size() - 1; i-- > 0;) acc = acc * z + monic[i];
        return acc;
    };
    for (int iter = 0; iter < 200; ++iter) {
        double shift = 0.0;
        for (std::size_t i = 0; i < degree; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            const std::complex<double> delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-12) break;
    }
    return roots;
}

double min_modulus(const std::vector<double>& coeffs) {
    double best = std::numeric_limits<double>::infinity();
    for (const std::complex<double>& root : polynomial_roots(coeffs)) {
        best = std::min(best, std::abs(root));
    }
    return best;
}

}  // namespace

namespace {

std::vector<double> ar_coefficients(std::span<const double> phi) {
    std::vector<double> poly(phi.size() + 1, 1.0);
    for (std::size_t i = 0; i < phi.size(); ++i) poly[i + 1] = -phi[i];
    return poly;
}

std::vector<double> ma_coefficients(std::span<const double> theta) {
    std::vector<double> poly(theta.size() + 1, 1.0);
    for (std::size_t i = 0; i < theta.size(); ++i) poly[i + 1] = theta[i];
    return poly;
}

}  // namespace

double min_root_modulus(std::span<const double> phi, std::span<const double> theta) {
    return std::min(min_modulus(ar_coefficients(phi)), min_modulus(ma_coefficients(theta)));
}

double min_root_separation(std::span<const double> phi, std::span<const double> theta) {
    const std::vector<std::complex<double>> ar_roots = polynomial_roots(ar_coefficients(phi));
    const std::vector<std::complex<double>> ma_roots = polynomial_roots(ma_coefficients(theta));
    double best = std::numeric_limits<double>::infinity();
    for (const std::complex<double>& a : ar_roots) {
        for (const std::complex<double>& m : ma_roots) {
            best = std::min(best, std::abs(a - m));
        }
    }
    return best;
}

double intercept(const ArimaParams& params) {
    if (!params.mu.has_value()) {
        throw MissingMean("intercept is only defined for models with a mean term");
    }
    double phi_sum = 0.0;
    for (double c : params.phi) phi_sum += c;
    return *params.mu * (1.0 - phi_sum);
}

namespace {

// ---------------------------------------------------------------------------
// State-space innovations machinery.
//
// Representation of the zero-mean ARMA(p, q) process with r = max(p, q + 1)
// states: transition T has phi in its first column and ones on the
// superdiagonal; the innovation loads through v = (1, theta_1, ..,
// theta_q); the observation is the first state with no measurement noise.
// The filter runs with unit innovation variance, so the one-step prediction
// variances it reports are relative (F_t = sigma2 * gain_t).
// ---------------------------------------------------------------------------

struct InnovationsStats {
    double ssq = 0.0;     // sum of e_t^2 / gain_t
    double sumlog = 0.0;  // sum of log gain_t
    int n = 0;
};

class ArmaFilter {
public:
    ArmaFilter(std::span<const double> phi, std::span<const double> theta)
        : p_(static_cast<int>(phi.size())),
          q_(static_cast<int>(theta.size())),
          r_(std::max(p_, q_ + 1)),
          phi_(phi.begin(), phi.end()),
          v_(static_cast<std::size_t>(r_), 0.0),
          a_(static_cast<std::size_t>(r_), 0.0),
          pmat_(static_cast<std::size_t>(r_) * r_, 0.0) {
        v_[0] = 1.0;
        for (int j = 0; j < q_; ++j) v_[static_cast<std::size_t>(j) + 1] = theta[static_cast<std::size_t>(j)];
        stationary_covariance();
    }

    /// Runs the filter over the centered observations, returning the
    /// accumulated innovation statistics. When `innovations` is non-null it
    /// receives e_t / sqrt(gain_t), one per observation.
    InnovationsStats run(std::span<const double> w, std::vector<double>* innovations) {
        InnovationsStats stats;
        if (innovations) innovations->assign(w.size(), 0.0);
        std::vector<double> anew(static_cast<std::size_t>(r_));
        std::vector<double> pnew(static_cast<std::size_t>(r_) * r_);
        for (std::size_t t = 0; t < w.size(); ++t) {
            predict_state(anew);
            predict_covariance(pnew);
            const double gain = pnew[0];
            if (!(gain > 0.0) || !std::isfinite(gain)) {
                stats.ssq = kInf;
                return stats;
            }
            const double e = w[t] - anew[0];
            stats.ssq += e * e / gain;
            stats.sumlog += std::log(gain);
            stats.n += 1;
            if (innovations) (*innovations)[t] = e / std::sqrt(gain);
            for (int i = 0; i < r_; ++i) {
                a_[static_cast<std::size_t>(i)] =
                    anew[static_cast<std::size_t>(i)] + pnew[static_cast<std::size_t>(i)] * e / gain;
            }
            for (int i = 0; i < r_; ++i) {
                for (int j = 0; j < r_; ++j) {
                    pmat_[idx(i, j)] = pnew[idx(i, j)] -
                                       pnew[static_cast<std::size_t>(i)] *
                                           pnew[static_cast<std::size_t>(j)] / gain;
                }
            }
        }
        return stats;
    }

    /// After run(), iterates the state h steps with zero future innovations
    /// and returns the predicted observations.
    std::vector<double> forecast(int h) {
        std::vector<double> out(static_cast<std::size_t>(h));
        std::vector<double> anew(static_cast<std::size_t>(r_));
        for (int m = 0; m < h; ++m) {
            predict_state(anew);
            a_ = anew;
            out[static_cast<std::size_t>(m)] = a_[0];
        }
        return out;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(r_) * static_cast<std::size_t>(j); }

    void predict_state(std::vector<double>& anew) const {
        for (int i = 0; i < r_; ++i) {
            double acc = i + 1 < r_ ? a_[static_cast<std::size_t>(i) + 1] : 0.0;
            if (i < p_) acc += phi_[static_cast<std::size_t>(i)] * a_[0];
            anew[static_cast<std::size_t>(i)] = acc;
        }
    }

    // pnew = T P T' + v v', written element-wise against the sparse T.
    void predict_covariance(std::vector<double>& pnew) const {
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < r_; ++j) {
                double acc = v_[static_cast<std::size_t>(i)] * v_[static_cast<std::size_t>(j)];
                if (i < p_ && j < p_) acc += phi_[static_cast<std::size_t>(i)] * phi_[static_cast<std::size_t>(j)] * pmat_[0];
                if (i + 1 < r_ && j + 1 < r_) acc += pmat_[idx(i + 1, j + 1)];
                if (i < p_ && j + 1 < r_) acc += phi_[static_cast<std::size_t>(i)] * pmat_[idx(j + 1, 0)];
                if (j < p_ && i + 1 < r_) acc += phi_[static_cast<std::size_t>(j)] * pmat_[idx(i + 1, 0)];
                pnew[idx(i, j)] = acc;
            }
        }
    }

    // Solves P = T P T' + v v' (the stationary state covariance) as the
    // dense linear system (I - T (x) T) vec(P) = vec(v v') with partial
    // pivoting; r is small so this is cheap and robust.
    void stationary_covariance() {
        const int r = r_;
        const int m = r * r;
        std::vector<double> tmat(static_cast<std::size_t>(m), 0.0);
        for (int i = 0; i < p_; ++i) tmat[static_cast<std::size_t>(i)] = phi_[static_cast<std::size_t>(i)];
        for (int i = 0; i + 1 < r; ++i) tmat[static_cast<std::size_t>(i) + static_cast<std::size_t>(r) * (static_cast<std::size_t>(i) + 1)] = 1.0;

        std::vector<double> a(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
        std::vector<double> b(static_cast<std::size_t>(m), 0.0);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                const int row = i + r * j;
                b[static_cast<std::size_t>(row)] = v_[static_cast<std::size_t>(i)] * v_[static_cast<std::size_t>(j)];
                for (int k = 0; k < r; ++k) {
                    for (int l = 0; l < r; ++l) {
                        const int col = k + r * l;
                        const double tik = tmat[static_cast<std::size_t>(i) + static_cast<std::size_t>(r) * static_cast<std::size_t>(k)];
                        const double tjl = tmat[static_cast<std::size_t>(j) + static_cast<std::size_t>(r) * static_cast<std::size_t>(l)];
                        double val = -tik * tjl;
                        if (row == col) val += 1.0;
                        a[static_cast<std::size_t>(row) * static_cast<std::size_t>(m) + static_cast<std::size_t>(col)] = val;
                    }
                }
            }
        }

        // Gaussian elimination with partial pivoting.
        std::vector<int> perm(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (int col = 0; col < m; ++col) {
            int pivot = col;
            double best = std::fabs(a[static_cast<std::size_t>(col) * static_cast<std::size_t>(m) + static_cast<std::size_t>(col)]);
            for (int row = col + 1; row < m; ++row) {
                const double cand = std::fabs(a[static_cast<std::size_t>(row) * static_cast<std::size_t>(m) + static_cast<std::size_t>(col)]);
                if (cand > best) {
                    best = cand;
                    pivot = row;
                }
            }
            if (best == 0.0) throw NonStationaryParams("stationary covariance system is singular");
            if (pivot != col) {
                for (int j = 0; j < m; ++j) {
                    std::swap(a[static_cast<std::size_t>(pivot) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)],
                              a[static_cast<std::size_t>(col) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)]);
                }
                std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
            }
            const double diag = a[static_cast<std::size_t>(col) * static_cast<std::size_t>(m) + static_cast<std::size_t>(col)];
            for (int row = col + 1; row < m; ++row) {
                const double factor = a[static_cast<std::size_t>(row) * static_cast<std::size_t>(m) + static_cast<std::size_t>(col)] / diag;
                if (factor == 0.0) continue;
                for (int j = col; j < m; ++j) {
                    a[static_cast<std::size_t>(row) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] -=
                        factor * a[static_cast<std::size_t>(col) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)];
                }
                b[static_cast<std::size_t>(row)] -= factor * b[static_cast<std::size_t>(col)];
            }
        }
        for (int row = m - 1; row >= 0; --row) {
            double acc = b[static_cast<std::size_t>(row)];
            for (int j = row + 1; j < m; ++j) {
                acc -= a[static_cast<std::size_t>(row) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] * pmat_[static_cast<std::size_t>(j)];
            }
            pmat_[static_cast<std::size_t>(row)] = acc / a[static_cast<std::size_t>(row) * static_cast<std::size_t>(m) + static_cast<std::size_t>(row)];
        }
        // Symmetrize against elimination round-off.
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                const double avg = 0.5 * (pmat_[idx(i, j)] + pmat_[idx(j, i)]);
                pmat_[idx(i, j)] = pmat_[idx(j, i)] = avg;
            }
        }
    }

    int p_, q_, r_;
    std::vector<double> phi_;
    std::vector<double> v_;
    std::vector<double> a_;
    std::vector<double> pmat_;
};

void require_admissible(std::span<const double> phi, std::span<const double> theta) {
    if (!is_stationary(phi)) throw NonStationaryParams("AR polynomial is not stationary");
    if (!is_invertible(theta)) throw NonStationaryParams("MA polynomial is not invertible");
}

std::vector<double> centered_values(const TimeSeries& ts, const ModelOrder& order,
                                    std::optional<double> mu) {
    if (order.include_mean && !mu.has_value()) {
        throw MissingMean("order includes a mean term but no mu was supplied");
    }
    const DifferencedSeries ds = difference(ts, order.d);
    std::vector<double> w = ds.series.values();
    if (order.include_mean) {
        for (double& x : w) x -= *mu;
    }
    return w;
}

}  // namespace

ProfiledLikelihood profile_log_likelihood(const TimeSeries& ts, const ModelOrder& order,
                                          std::span<const double> phi,
                                          std::span<const double> theta,
                                          std::optional<double> mu) {
    order.validate();
    require_admissible(phi, theta);
    const std::vector<double> w = centered_values(ts, order, mu);
    const int n = static_cast<int>(w.size());
    if (n < 1) throw DegenerateInput("no observations left after differencing");

    ArmaFilter filter(phi, theta);
    const InnovationsStats stats = filter.run(w, nullptr);
    if (!std::isfinite(stats.ssq) || stats.ssq <= 0.0) {
        throw DegenerateInput("innovation sum of squares is not positive");
    }
    const double sigma2 = stats.ssq / n;
    const double loglik =
        -0.5 * n * (std::log(2.0 * kPi) + 1.0 + std::log(sigma2)) - 0.5 * stats.sumlog;
    return ProfiledLikelihood{loglik, sigma2};
}

double log_likelihood(const TimeSeries& ts, const ModelOrder& order, const ArimaParams& params) {
    order.validate();
    if (!(params.sigma2 > 0.0)) throw DegenerateInput("sigma2 must be positive");
    require_admissible(params.phi, params.theta);
    const std::vector<double> w = centered_values(ts, order, params.mu);
    const int n = static_cast<int>(w.size());
    if (n < 1) throw DegenerateInput("no observations left after differencing");

    ArmaFilter filter(params.phi, params.theta);
    const InnovationsStats stats = filter.run(w, nullptr);
    if (!std::isfinite(stats.ssq)) throw DegenerateInput("innovations recursion failed");
    return -0.5 * n * std::log(2.0 * kPi * params.sigma2) - 0.5 * stats.sumlog -
           0.5 * stats.ssq / params.sigma2;
}

namespace {

// Optimizer coordinates: p AR partials, q MA partials (both through tanh),
// then the mean on the standardized scale. The expansion below is the only
// bridge between the unconstrained space and (phi, theta).
struct Expanded {
    std::vector<double> phi;
    std::vector<double> theta;
    double mu = 0.0;
};

Expanded expand_coordinates(std::span<const double> u, const ModelOrder& order) {
    Expanded out;
    std::vector<double> partials(static_cast<std::size_t>(order.p));
    for (int i = 0; i < order.p; ++i) partials[static_cast<std::size_t>(i)] = std::tanh(u[static_cast<std::size_t>(i)]);
    out.phi = pacf_to_ar(partials);

    std::vector<double> ma_partials(static_cast<std::size_t>(order.q));
    for (int j = 0; j < order.q; ++j) {
        ma_partials[static_cast<std::size_t>(j)] = std::tanh(u[static_cast<std::size_t>(order.p + j)]);
    }
    const std::vector<double> b = pacf_to_ar(ma_partials);
    out.theta.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) out.theta[j] = -b[j];

    if (order.include_mean) out.mu = u[static_cast<std::size_t>(order.p + order.q)];
    return out;
}

double css_objective(std::span<const double> z, const Expanded& cand, int p, int q) {
    const int n = static_cast<int>(z.size());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    double ssq = 0.0;
    int used = 0;
    for (int t = p; t < n; ++t) {
        double r = z[static_cast<std::size_t>(t)] - cand.mu;
        for (int i = 0; i < p; ++i) {
            r -= cand.phi[static_cast<std::size_t>(i)] * (z[static_cast<std::size_t>(t - i - 1)] - cand.mu);
        }
        for (int j = 0; j < std::min(q, t); ++j) r -= cand.theta[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(t - j - 1)];
        e[static_cast<std::size_t>(t)] = r;
        ssq += r * r;
        ++used;
    }
    if (used < 1 || !(ssq > 0.0) || !std::isfinite(ssq)) return kRejected;
    return 0.5 * std::log(ssq / used);
}

double ml_objective(std::span<const double> z, const Expanded& cand) {
    const int n = static_cast<int>(z.size());
    std::vector<double> centered(z.begin(), z.end());
    for (double& x : centered) x -= cand.mu;
    ArmaFilter filter(cand.phi, cand.theta);
    const InnovationsStats stats = filter.run(centered, nullptr);
    if (!std::isfinite(stats.ssq) || !(stats.ssq > 0.0)) return kRejected;
    return 0.5 * (std::log(stats.ssq / n) + stats.sumlog / n);
}

}  // namespace

FittedModel fit(const TimeSeries& ts, const ModelOrder& order) {
    order.validate();
    const int k = order.parameter_count();
    const DifferencedSeries ds = difference(ts, order.d);
    const int n = static_cast<int>(ds.series.size());
    if (n <= k + 2) {
        throw DegenerateInput("series too short for order (" + std::to_string(order.p) + "," +
                              std::to_string(order.d) + "," + std::to_string(order.q) +
                              "): need more than " + std::to_string(k + 2) + " observations, have " +
                              std::to_string(n));
    }

    // Standardize the differenced series so the optimizer sees an O(1)
    // problem at any data scale; the model family is closed under this map,
    // so the optimum transforms back exactly.
    const std::vector<double>& w = ds.series.values();
    double shift = 0.0;
    if (order.include_mean) {
        double sum = 0.0;
        for (double x : w) sum += x;
        shift = sum / n;
    }
    double ss = 0.0;
    for (double x : w) ss += (x - shift) * (x - shift);
    const double scale = std::sqrt(ss / n);
    if (!(scale > 0.0)) {
        throw DegenerateInput("differenced series is constant; the innovation variance is zero");
    }
    std::vector<double> z(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) z[t] = (w[t] - shift) / scale;

    const int dim = order.p + order.q + (order.include_mean ? 1 : 0);
    std::vector<double> u(static_cast<std::size_t>(dim), 0.0);
    bool converged = true;
    int iterations_budget = 500 * k;

    if (dim > 0) {
        std::vector<double> step(static_cast<std::size_t>(dim), 0.1);
        NelderMeadOptions options;
        options.ftol = 1e-8;
        options.max_iterations = iterations_budget;

        auto css = [&](std::span<const double> cand_u) {
            return css_objective(z, expand_coordinates(cand_u, order), order.p, order.q);
        };
        const NelderMeadResult warm = nelder_mead(css, u, step, options);

        auto exact = [&](std::span<const double> cand_u) {
            return ml_objective(z, expand_coordinates(cand_u, order));
        };
        const NelderMeadResult refined = nelder_mead(exact, warm.x, step, options);
        u = refined.x;
        converged = refined.converged;
    }

    const Expanded best = expand_coordinates(u, order);
    std::vector<double> centered(z);
    for (double& x : centered) x -= best.mu;

    ArmaFilter filter(best.phi, best.theta);
    std::vector<double> innovations;
    const InnovationsStats stats = filter.run(centered, &innovations);
    if (!std::isfinite(stats.ssq) || !(stats.ssq > 0.0)) {
        throw DegenerateInput("innovations recursion failed at the fitted parameters");
    }

    const double sigma2_z = stats.ssq / n;
    const double loglik = -0.5 * n * (std::log(2.0 * kPi) + 1.0 + std::log(sigma2_z)) -
                          0.5 * stats.sumlog - n * std::log(scale);

    ArimaParams params;
    params.phi = best.phi;
    params.theta = best.theta;
    if (order.include_mean) params.mu = shift + scale * best.mu;
    params.sigma2 = sigma2_z * scale * scale;

    for (double& e : innovations) e *= scale;

    FittedModel model{
        .order = order,
        .params = std::move(params),
        .loglik = loglik,
        .aic = 2.0 * k - 2.0 * loglik,
        .aicc = 0.0,
        .bic = k * std::log(static_cast<double>(n)) - 2.0 * loglik,
        .residuals = TimeSeries(std::move(innovations), ds.series.start_year(), ts.label()),
        .nobs = n,
        .converged = converged,
    };
    model.aicc = model.aic + 2.0 * k * (k + 1.0) / (n - k - 1.0);
    return model;
}

std::vector<double> coefficient_standard_errors(const TimeSeries& ts, const FittedModel& model) {
    const ModelOrder& order = model.order;
    const int dim = order.p + order.q + (order.include_mean ? 1 : 0);
    if (dim == 0) return {};

    std::vector<double> x(static_cast<std::size_t>(dim));
    for (int i = 0; i < order.p; ++i) x[static_cast<std::size_t>(i)] = model.params.phi[static_cast<std::size_t>(i)];
    for (int j = 0; j < order.q; ++j) {
        x[static_cast<std::size_t>(order.p + j)] = model.params.theta[static_cast<std::size_t>(j)];
    }
    if (order.include_mean) x[static_cast<std::size_t>(dim - 1)] = *model.params.mu;

    const auto negative_loglik = [&](const std::vector<double>& at) {
        const std::span<const double> phi(at.data(), static_cast<std::size_t>(order.p));
        const std::span<const double> theta(at.data() + order.p, static_cast<std::size_t>(order.q));
        const std::optional<double> mu =
            order.include_mean ? std::optional<double>(at.back()) : std::nullopt;
        return -profile_log_likelihood(ts, order, phi, theta, mu).loglik;
    };

    // Central-difference Hessian. Near-boundary fits are screened out by the
    // caller, so small coefficient perturbations stay admissible.
    std::vector<double> h(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        h[static_cast<std::size_t>(i)] = 1e-4 * std::max(1.0, std::fabs(x[static_cast<std::size_t>(i)]));
    }
    std::vector<double> hess(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
    try {
        const double f0 = negative_loglik(x);
        for (int i = 0; i < dim; ++i) {
            for (int j = i; j < dim; ++j) {
                std::vector<double> at = x;
                double value;
                if (i == j) {
                    at[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h[static_cast<std::size_t>(i)];
                    const double fp = negative_loglik(at);
                    at[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - h[static_cast<std::size_t>(i)];
                    const double fm = negative_loglik(at);
                    value = (fp - 2.0 * f0 + fm) /
                            (h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)]);
                } else {
                    double quad = 0.0;
                    for (int si : {1, -1}) {
                        for (int sj : {1, -1}) {
                            at = x;
                            at[static_cast<std::size_t>(i)] += si * h[static_cast<std::size_t>(i)];
                            at[static_cast<std::size_t>(j)] += sj * h[static_cast<std::size_t>(j)];
                            quad += si * sj * negative_loglik(at);
                        }
                    }
                    value = quad / (4.0 * h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)]);
                }
                hess[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] = value;
                hess[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)] = value;
            }
        }
    } catch (const Error&) {
        return {};  // perturbation left the admissible region
    }

    // Invert via Cholesky; failure means the information matrix is not
    // positive definite and the fit is unidentified.
    std::vector<double> chol(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            double acc = hess[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
            for (int k = 0; k < j; ++k) {
                acc -= chol[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)] *
                       chol[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)];
            }
            if (i == j) {
                if (!(acc > 0.0)) return {};
                chol[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)] = std::sqrt(acc);
            } else {
                chol[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] =
                    acc / chol[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
            }
        }
    }
    // diag(H^-1) from the factor: solve L y = e_t, then L^T z = y.
    const auto lmat = [&](int i, int j) {
        return chol[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
    };
    std::vector<double> se(static_cast<std::size_t>(dim));
    std::vector<double> y(static_cast<std::size_t>(dim)), z(static_cast<std::size_t>(dim));
    for (int target = 0; target < dim; ++target) {
        for (int i = 0; i < dim; ++i) {
            double acc = i == target ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) acc -= lmat(i, k) * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = acc / lmat(i, i);
        }
        for (int i = dim - 1; i >= 0; --i) {
            double acc = y[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < dim; ++k) acc -= lmat(k, i) * z[static_cast<std::size_t>(k)];
            z[static_cast<std::size_t>(i)] = acc / lmat(i, i);
        }
        const double diag = z[static_cast<std::size_t>(target)];
        if (!(diag > 0.0) || !std::isfinite(diag)) return {};
        se[static_cast<std::size_t>(target)] = std::sqrt(diag);
    }
    return se;
}

TimeSeries simulate(const ModelOrder& order, const ArimaParams& params, int n,
                    std::uint64_t seed, int start_year, const std::string& label) {
    order.validate();
    if (n < 1) throw DegenerateInput("simulation length must be at least 1");
    if (!(params.sigma2 > 0.0)) throw DegenerateInput("sigma2 must be positive");
    if (static_cast<int>(params.phi.size()) != order.p ||
        static_cast<int>(params.theta.size()) != order.q) {
        throw DegenerateInput("coefficient vector lengths do not match the order");
    }
    if (params.mu.has_value() != order.include_mean) {
        throw DegenerateInput("mu must be present exactly when the order includes a mean term");
    }
    require_admissible(params.phi, params.theta);

    const int burn_in = std::max(200, 10 * (order.p + order.q + 1));
    const int total = burn_in + n;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(params.sigma2));

    std::vector<double> w(static_cast<std::size_t>(total), 0.0);
    std::vector<double> eps(static_cast<std::size_t>(total), 0.0);
    for (int t = 0; t < total; ++t) {
        eps[static_cast<std::size_t>(t)] = noise(rng);
        double x = eps[static_cast<std::size_t>(t)];
        for (int i = 0; i < order.p; ++i) {
            if (t - i - 1 >= 0) x += params.phi[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(t - i - 1)];
        }
        for (int j = 0; j < order.q; ++j) {
            if (t - j - 1 >= 0) x += params.theta[static_cast<std::size_t>(j)] * eps[static_cast<std::size_t>(t - j - 1)];
        }
        w[static_cast<std::size_t>(t)] = x;
    }

    std::vector<double> values(w.begin() + burn_in, w.end());
    if (params.mu.has_value()) {
        for (double& x : values) x += *params.mu;
    }
    if (order.d > 0) {
        DifferencedSeries ds{TimeSeries(std::move(values), start_year + order.d, label), order.d,
                             std::vector<double>(static_cast<std::size_t>(order.d), 0.0)};
        TimeSeries integrated = integrate(ds);
        std::vector<double> tail(integrated.values().end() - n, integrated.values().end());
        return TimeSeries(std::move(tail), start_year, label);
    }
    return TimeSeries(std::move(values), start_year, label);
}

std::vector<double> arma_forecast_deviations(std::span<const double> centered,
                                             std::span<const double> phi,
                                             std::span<const double> theta, int h) {
    if (h < 1) throw DegenerateInput("forecast horizon must be at least 1");
    require_admissible(phi, theta);
    ArmaFilter filter(phi, theta);
    const InnovationsStats stats = filter.run(centered, nullptr);
    if (!std::isfinite(stats.ssq)) throw DegenerateInput("innovations recursion failed");
    return filter.forecast(h);
}

}  // namespace tsa
