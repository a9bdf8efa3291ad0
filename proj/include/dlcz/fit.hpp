#ifndef DLCZ_FIT_HPP
#define DLCZ_FIT_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlcz/montecarlo.hpp"

namespace dlcz {

enum class FitModel { gaussian_decay, exponential_decay };

std::string to_string(FitModel model);
FitModel fit_model_from_string(const std::string& name);

struct FitResult {
    FitModel model = FitModel::gaussian_decay;
    double amplitude = 0.0;
    double offset = 0.0;
    double tau_1e = 0.0;  // s
    std::array<std::array<double, 3>, 3> covariance{};  // (A, offset, tau)
    double reduced_chi2 = 0.0;
    bool tau_identifiable = true;
    int iterations = 0;
};

// Weighted damped least squares for
//   gaussian:    y = offset + A exp(-t^2/tau^2)
//   exponential: y = offset + A exp(-t/tau)
// Weights 1/sigma^2 where sigma > 0, else uniform. One restart from a
// perturbed tau before declaring failure.
FitResult fit_decay(const DecayCurve& curve, FitModel model);

// tau and its standard error from the covariance; empty when the fit
// flagged tau as unidentifiable.
std::optional<std::pair<double, double>> lifetime_with_error(const FitResult& fit);

// Compact uncertainty notation, e.g. 123 us +- 1 us -> "123(1) us".
std::string format_value_with_error(double value, double error,
                                    const std::string& unit);

// Slope of ln(y) vs ln(x) by unweighted linear regression.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dlcz

#endif
