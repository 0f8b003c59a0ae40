#include "thinannuli/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace thinannuli {

namespace {

nlohmann::ordered_json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["seed"] = seed;
  j["output"] = output;
  j["format"] = format;
  j["parameters"] = parameters;
  return j;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

void write_csv_header(std::ostream& out, const RunConfig& cfg) {
  out << "# thinannuli " << kVersion << " schema " << kSchemaVersion << '\n';
  out << "# run_config " << cfg.to_json().dump() << '\n';
}

void write_series_csv(std::ostream& out, const RunConfig& cfg, const SampleSeries& series) {
  write_csv_header(out, cfg);
  out << "t,value,weight\n";
  for (std::size_t i = 0; i < series.t.size(); ++i)
    out << format_real(series.t[i]) << ',' << format_real(series.value[i]) << ','
        << format_real(series.weight[i]) << '\n';
}

void write_scaling_csv(std::ostream& out, const RunConfig& cfg, const std::vector<ScalingRow>& rows) {
  write_csv_header(out, cfg);
  out << "R,delta,count,normalized\n";
  for (const auto& r : rows)
    out << format_real(r.R) << ',' << format_real(r.delta) << ',' << r.count << ','
        << format_real(r.normalized) << '\n';
}

void write_minima_csv(std::ostream& out, const RunConfig& cfg, const ExponentFit& fit) {
  write_csv_header(out, cfg);
  out << "q,min_value\n";
  for (const auto& m : fit.minima) out << m.q << ',' << format_real(m.min_value) << '\n';
}

nlohmann::ordered_json make_document(const RunConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["version"] = kVersion;
  doc["run_config"] = cfg.to_json();
  return doc;
}

nlohmann::ordered_json to_json(const MomentReport& r) {
  nlohmann::ordered_json j;
  j["mean"] = real(r.mean);
  j["variance"] = real(r.variance);
  j["sigma_squared_predicted"] = real(r.sigma_squared_predicted);
  j["ks_distance"] = real(r.ks_distance);
  auto moments = nlohmann::ordered_json::array();
  for (const auto& [m, v] : r.normalized_moments)
    moments.push_back({{"order", m}, {"value", real(v)}, {"gaussian", gaussian_moment(m)}});
  j["normalized_moments"] = moments;
  return j;
}

nlohmann::ordered_json to_json(const ExponentFit& fit) {
  nlohmann::ordered_json j;
  auto minima = nlohmann::ordered_json::array();
  for (const auto& m : fit.minima) minima.push_back({{"q", m.q}, {"min_value", real(m.min_value)}});
  j["minima"] = minima;
  j["fitted_exponent"] = real(fit.fitted_exponent);
  j["fit_residual"] = real(fit.fit_residual);
  if (fit.relation)
    j["relation"] = {{"coefficients", fit.relation->coefficients}, {"height", fit.relation->height}};
  else
    j["relation"] = nullptr;
  return j;
}

nlohmann::ordered_json to_json(const SqrtSumGap& gap) {
  nlohmann::ordered_json j;
  j["value"] = real(gap.value);
  j["empirical_K"] = real(gap.empirical_K);
  j["nonsymbolic_zero"] = gap.nonsymbolic_zero;
  j["terms"] = gap.terms;
  j["signs"] = gap.signs;
  return j;
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace thinannuli
