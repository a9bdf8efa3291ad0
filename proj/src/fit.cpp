#include "dlcz/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dlcz {

std::string to_string(FitModel model) {
    return model == FitModel::gaussian_decay ? "gaussian_decay" : "exponential_decay";
}

FitModel fit_model_from_string(const std::string& name) {
    if (name == "gaussian" || name == "gaussian_decay") return FitModel::gaussian_decay;
    if (name == "exponential" || name == "exponential_decay")
        return FitModel::exponential_decay;
    throw DomainError("unknown fit model: " + name);
}

namespace {

struct Point {
    double t, y, w;  // w = 1/sigma^2 or 1
};

double model_value(FitModel m, double t, double A, double c, double tau) {
    if (m == FitModel::gaussian_decay) return c + A * std::exp(-(t * t) / (tau * tau));
    return c + A * std::exp(-t / tau);
}

void model_jacobian(FitModel m, double t, double A, double /*c*/, double tau,
                    double& dA, double& dc, double& dtau) {
    if (m == FitModel::gaussian_decay) {
        const double e = std::exp(-(t * t) / (tau * tau));
        dA = e;
        dc = 1.0;
        dtau = A * e * 2.0 * t * t / (tau * tau * tau);
    } else {
        const double e = std::exp(-t / tau);
        dA = e;
        dc = 1.0;
        dtau = A * e * t / (tau * tau);
    }
}

using Mat3 = std::array<std::array<double, 3>, 3>;

bool solve3(Mat3 a, std::array<double, 3> b, std::array<double, 3>& x) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return true;
}

bool invert3(const Mat3& a, Mat3& inv) {
    for (int col = 0; col < 3; ++col) {
        std::array<double, 3> e{0.0, 0.0, 0.0};
        e[col] = 1.0;
        std::array<double, 3> x{};
        if (!solve3(a, e, x)) return false;
        for (int r = 0; r < 3; ++r) inv[r][col] = x[r];
    }
    return true;
}

double chi_square(FitModel m, const std::vector<Point>& pts, double A, double c,
                  double tau) {
    double chi2 = 0.0;
    for (const auto& p : pts) {
        const double r = p.y - model_value(m, p.t, A, c, tau);
        chi2 += p.w * r * r;
    }
    return chi2;
}

struct LmOutcome {
    double A, c, tau, chi2;
    Mat3 jtwj;
    int iterations;
    bool converged;
};

LmOutcome levenberg(FitModel m, const std::vector<Point>& pts, double A, double c,
                    double tau) {
    double lambda = 1e-3;
    double chi2 = chi_square(m, pts, A, c, tau);
    Mat3 jtwj{};
    int iter = 0;
    bool converged = false;
    for (; iter < 200; ++iter) {
        jtwj = Mat3{};
        std::array<double, 3> g{0.0, 0.0, 0.0};
        for (const auto& p : pts) {
            double dA, dc, dtau;
            model_jacobian(m, p.t, A, c, tau, dA, dc, dtau);
            const double r = p.y - model_value(m, p.t, A, c, tau);
            const double j[3] = {dA, dc, dtau};
            for (int a = 0; a < 3; ++a) {
                g[a] += p.w * j[a] * r;
                for (int b = 0; b < 3; ++b) jtwj[a][b] += p.w * j[a] * j[b];
            }
        }
        bool stepped = false;
        for (int attempt = 0; attempt < 30 && !stepped; ++attempt) {
            Mat3 damped = jtwj;
            for (int a = 0; a < 3; ++a) damped[a][a] *= 1.0 + lambda;
            std::array<double, 3> step{};
            if (!solve3(damped, g, step)) {
                lambda *= 5.0;
                continue;
            }
            const double A2 = A + step[0];
            const double c2 = c + step[1];
            const double tau2 = tau + step[2];
            if (!(tau2 > 0.0) || !std::isfinite(tau2)) {
                lambda *= 5.0;
                continue;
            }
            const double chi2_new = chi_square(m, pts, A2, c2, tau2);
            if (chi2_new <= chi2) {
                const double rel_step =
                    std::abs(step[0]) / std::max(std::abs(A2), 1e-30) +
                    std::abs(step[1]) / std::max(std::abs(c2) + std::abs(A2), 1e-30) +
                    std::abs(step[2]) / tau2;
                const double rel_chi = (chi2 - chi2_new) / std::max(chi2, 1e-300);
                A = A2;
                c = c2;
                tau = tau2;
                chi2 = chi2_new;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (rel_step < 1e-11 || rel_chi < 1e-13) converged = true;
            } else {
                lambda *= 5.0;
            }
        }
        if (!stepped) {
            // No improving step exists at any damping: we are at the optimum.
            converged = std::isfinite(chi2);
            break;
        }
        if (converged) break;
    }
    return {A, c, tau, chi2, jtwj, iter, converged};
}

}  // namespace

FitResult fit_decay(const DecayCurve& curve, FitModel model) {
    const auto& s = curve.samples;
    if (s.size() < 5) throw FitError("fit_decay: need at least 5 samples");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].sigma < 0.0) throw FitError("fit_decay: negative sigma");
        if (i > 0 && !(s[i].time > s[i - 1].time))
            throw FitError("fit_decay: times must be strictly increasing");
    }

    // Work in rescaled units so the optimum is invariant under unit changes.
    const double t_scale = std::max(std::abs(s.back().time), 1e-300);
    double y_abs = 0.0;
    for (const auto& p : s) y_abs = std::max(y_abs, std::abs(p.value));
    const double y_scale = std::max(y_abs, 1e-300);

    const bool have_sigmas =
        std::all_of(s.begin(), s.end(), [](const CurveSample& p) { return p.sigma > 0.0; });
    std::vector<Point> pts;
    pts.reserve(s.size());
    for (const auto& p : s) {
        const double w =
            have_sigmas ? (y_scale * y_scale) / (p.sigma * p.sigma) : 1.0;
        pts.push_back({p.time / t_scale, p.value / y_scale, w});
    }

    // Initialization: A = max-min, offset = min, tau from the sample closest
    // to offset + A/e.
    double ymin = pts.front().y, ymax = pts.front().y;
    for (const auto& p : pts) {
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    double A0 = ymax - ymin;
    double c0 = ymin;

    FitResult out;
    out.model = model;

    if (A0 < 1e-9 * std::max(std::abs(ymax), 1.0)) {
        // Flat data: amplitude ~ 0, lifetime unidentifiable.
        double mean = 0.0;
        for (const auto& p : pts) mean += p.y;
        mean /= static_cast<double>(pts.size());
        out.amplitude = 0.0;
        out.offset = mean * y_scale;
        out.tau_1e = t_scale;
        out.tau_identifiable = false;
        out.reduced_chi2 =
            chi_square(model, pts, 0.0, mean, 1.0) *
            (have_sigmas ? 1.0 : y_scale * y_scale) /
            static_cast<double>(pts.size() - 3);
        return out;
    }

    const double target = c0 + A0 / std::exp(1.0);
    double t_closest = pts.back().t;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        const double d = std::abs(p.y - target);
        if (d < best && p.t > 0.0) {
            best = d;
            t_closest = p.t;
        }
    }
    double tau0 = std::max(t_closest / 2.0, 1e-6);

    LmOutcome lm = levenberg(model, pts, A0, c0, tau0);
    if (!lm.converged) {
        // One restart from a perturbed initialization before failing.
        lm = levenberg(model, pts, A0, c0, tau0 * 1.1);
        if (!lm.converged)
            throw FitError("fit_decay: no convergence after restart (chi2 = " +
                           std::to_string(lm.chi2) + ")");
    }

    Mat3 cov_scaled{};
    if (!invert3(lm.jtwj, cov_scaled))
        throw FitError("fit_decay: singular normal matrix at optimum");

    const std::size_t n = pts.size();
    const double dof = static_cast<double>(n - 3);
    double cov_factor = 1.0;
    double red_chi2 = lm.chi2 / dof;
    if (!have_sigmas) {
        // Uniform weights: scale the covariance by the residual variance.
        cov_factor = lm.chi2 / dof;
        red_chi2 = lm.chi2 * y_scale * y_scale / dof;
    }

    out.amplitude = lm.A * y_scale;
    out.offset = lm.c * y_scale;
    out.tau_1e = lm.tau * t_scale;
    out.reduced_chi2 = red_chi2;
    out.iterations = lm.iterations;
    out.tau_identifiable = std::abs(out.amplitude) > 1e-9 * y_scale;
    const double unit[3] = {y_scale, y_scale, t_scale};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out.covariance[a][b] = cov_scaled[a][b] * cov_factor * unit[a] * unit[b];
    return out;
}

std::optional<std::pair<double, double>> lifetime_with_error(const FitResult& fit) {
    if (!fit.tau_identifiable) return std::nullopt;
    return std::make_pair(fit.tau_1e, std::sqrt(std::max(0.0, fit.covariance[2][2])));
}

std::string format_value_with_error(double value, double error,
                                    const std::string& unit) {
    char buf[128];
    if (!(error > 0.0) || !std::isfinite(error)) {
        std::snprintf(buf, sizeof buf, "%g %s", value, unit.c_str());
        return buf;
    }
    int e = static_cast<int>(std::floor(std::log10(error)));
    double err_digit = std::round(error / std::pow(10.0, e));
    if (err_digit >= 10.0) {
        err_digit = 1.0;
        ++e;
    }
    const int decimals = std::max(0, -e);
    const double rounded =
        std::round(value / std::pow(10.0, e)) * std::pow(10.0, e);
    std::snprintf(buf, sizeof buf, "%.*f(%d) %s", decimals, rounded,
                  static_cast<int>(err_digit), unit.c_str());
    return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("loglog_slope: need matched lists of size >= 2");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw DomainError("loglog_slope: values must be positive");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dlcz
