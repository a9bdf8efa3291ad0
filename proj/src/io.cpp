#include "dlcz/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dlcz {

using nlohmann::json;

namespace {

std::string fmt_us(double seconds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", seconds * 1e6);
    return buf;
}

std::string fmt_val(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

}  // namespace

std::string curve_to_csv(const DecayCurve& curve) {
    std::string out = "time_us,value,sigma\n";
    for (const auto& s : curve.samples) {
        out += fmt_us(s.time);
        out += ',';
        out += fmt_val(s.value);
        out += ',';
        out += fmt_val(s.sigma);
        out += '\n';
    }
    return out;
}

std::string g2_points_to_csv(const std::vector<CorrelationPoint>& points) {
    DecayCurve c;
    for (const auto& p : points) c.samples.push_back({p.time, p.g2, p.g2_err});
    return curve_to_csv(c);
}

DecayCurve curve_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    if (header.size() != 3 || header[0] != "time_us" || header[1] != "value" ||
        header[2] != "sigma")
        throw ConfigError("csv: expected header time_us,value,sigma, got \"" + line +
                          "\"");
    DecayCurve curve;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 3)
            throw ConfigError("csv: line " + std::to_string(lineno) +
                              ": expected 3 columns");
        try {
            CurveSample s;
            s.time = std::stod(fields[0]) * 1e-6;
            s.value = std::stod(fields[1]);
            s.sigma = std::stod(fields[2]);
            curve.samples.push_back(s);
        } catch (const std::exception&) {
            throw ConfigError("csv: line " + std::to_string(lineno) +
                              ": malformed number");
        }
    }
    return curve;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "theta_deg,freezing,tau_us,tau_err_us,g2_0,g2_err\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%d,%.6g,%.6g,%.6g,%.6g\n",
                      r.theta_s * 180.0 / 3.14159265358979323846, r.freezing ? 1 : 0,
                      r.tau_1e * 1e6, r.tau_err * 1e6, r.g2_initial, r.g2_err);
        out += buf;
    }
    return out;
}

std::string theory_to_csv(const std::vector<TheoryPoint>& points) {
    std::string out = "theta_deg,tau_us\n";
    char buf[128];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g\n",
                      p.theta_s * 180.0 / 3.14159265358979323846, p.tau * 1e6);
        out += buf;
    }
    return out;
}

namespace {

json fit_json_obj(const FitResult& fit) {
    json j;
    j["model"] = to_string(fit.model);
    j["amplitude"] = fit.amplitude;
    j["offset"] = fit.offset;
    j["tau_1e_us"] = fit.tau_1e * 1e6;
    j["tau_err_us"] = std::sqrt(std::max(0.0, fit.covariance[2][2])) * 1e6;
    j["reduced_chi2"] = fit.reduced_chi2;
    j["tau_identifiable"] = fit.tau_identifiable;
    json cov = json::array();
    for (const auto& row : fit.covariance) cov.push_back(row);
    j["covariance"] = cov;
    return j;
}

}  // namespace

std::string fit_to_json(const FitResult& fit) {
    json j = fit_json_obj(fit);
    j["schema_version"] = kCsvSchemaVersion;
    return j.dump(2) + "\n";
}

std::string sidecar_json(const ExperimentConfig& config,
                         const std::vector<std::pair<std::string, FitResult>>& fits) {
    json j;
    j["schema_version"] = kCsvSchemaVersion;
    j["config"] = json::parse(config.canonical_json());
    j["config_hash"] = config.hash();
    j["master_seed"] = config.master_seed;
    for (const auto& [name, fit] : fits) j["fits"][name] = fit_json_obj(fit);
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("io: cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("io: write failed for " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("io: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dlcz
