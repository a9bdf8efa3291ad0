#ifndef DLCZ_IO_HPP
#define DLCZ_IO_HPP

#include <string>
#include <vector>

#include "dlcz/config.hpp"
#include "dlcz/fit.hpp"
#include "dlcz/photon.hpp"
#include "dlcz/sweep.hpp"

namespace dlcz {

inline constexpr const char* kCsvSchemaVersion = "1";

// Curve CSV, columns: time_us,value,sigma. Times in us, 6 significant
// digits; byte-stable for identical inputs.
std::string curve_to_csv(const DecayCurve& curve);
std::string g2_points_to_csv(const std::vector<CorrelationPoint>& points);
DecayCurve curve_from_csv(const std::string& text);

// Sweep table CSV, columns:
// theta_deg,freezing,tau_us,tau_err_us,g2_0,g2_err
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Theory overlay CSV, columns: theta_deg,tau_us
std::string theory_to_csv(const std::vector<TheoryPoint>& points);

// JSON sidecar with schema version, config hash, seed and fit results.
std::string fit_to_json(const FitResult& fit);
std::string sidecar_json(const ExperimentConfig& config,
                         const std::vector<std::pair<std::string, FitResult>>& fits);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace dlcz

#endif
