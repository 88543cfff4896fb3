#include "arakelov/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace arakelov {

using nlohmann::json;

const char* const kVersion = "0.1.0";

IntegrationConfig RunConfig::integration() const {
  IntegrationConfig c;
  c.samples = samples;
  c.seed = seed;
  c.kind = kind;
  return c;
}

void RunConfig::validate() const {
  if (!(eps > 0.0) || samples == 0 || quad_order <= 0)
    throw Error(ErrorKind::InvalidInput, "eps, samples and quad-order must be positive");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error(ErrorKind::InvalidInput, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from(const json& rows, int g, const char* key) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != g)
    throw Error(ErrorKind::InvalidInput, std::string(key) + " must have g rows");
  Mat m(g, g);
  for (int i = 0; i < g; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != g)
      throw Error(ErrorKind::InvalidInput, std::string(key) + " must be g x g");
    for (int j = 0; j < g; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"stderr", e.std_error}, {"samples", e.samples},
          {"censored", e.censored}, {"seed", e.seed}};
}

json config_json(const RunConfig& c) {
  return {{"eps", c.eps},
          {"samples", c.samples},
          {"seed", c.seed},
          {"quad_order", c.quad_order},
          {"kind", c.kind == SampleKind::Pseudo ? "pseudo" : "low-discrepancy"},
          {"format", c.format == OutputFormat::Json ? "json" : "csv"},
          {"version", kVersion}};
}

}  // namespace

std::string curve_to_json(const HyperellipticCurve& curve) {
  json pts = json::array();
  for (const cplx& a : curve.branch_points()) pts.push_back({a.real(), a.imag()});
  json j = {{"branch_points", pts}};
  if (!curve.label().empty()) j["label"] = curve.label();
  return j.dump(2) + "\n";
}

HyperellipticCurve curve_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("branch_points") || !j["branch_points"].is_array())
    throw Error(ErrorKind::InvalidInput, "curve JSON needs a branch_points array");
  std::vector<cplx> pts;
  for (const auto& p : j["branch_points"]) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::InvalidInput, "branch point must be [re, im]");
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return HyperellipticCurve(std::move(pts), j.value("label", std::string()));
}

std::string period_to_json(const PeriodMatrix& omega) {
  const json j = {{"genus", omega.genus()}, {"omega_re", matrix_json(omega.re())}, {"omega_im", matrix_json(omega.im())}};
  return j.dump(2) + "\n";
}

PeriodMatrix period_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("genus") || !j.contains("omega_re") || !j.contains("omega_im"))
    throw Error(ErrorKind::InvalidInput, "period JSON needs genus, omega_re, omega_im");
  const int g = j["genus"].get<int>();
  if (g < 1) throw Error(ErrorKind::InvalidInput, "genus must be positive");
  const Mat re = matrix_from(j["omega_re"], g, "omega_re");
  const Mat im = matrix_from(j["omega_im"], g, "omega_im");
  CMat omega(g, g);
  omega.real() = re;
  omega.imag() = im;
  return PeriodMatrix(omega);
}

InputSpec load_input(const std::string& spec) {
  if (spec.rfind("xn+1:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(spec.substr(5));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad preset " + spec);
    }
    return curve_xn_plus_one(n);
  }
  const std::string text = read_file(spec);
  const json j = parse(text);
  if (j.contains("branch_points")) return curve_from_json(text);
  if (j.contains("omega_re")) return period_from_json(text);
  throw Error(ErrorKind::InvalidInput, spec + " is neither a curve nor a period file");
}

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2) + "\n"; }

std::string report_to_json(const InvariantReport& report, const RunConfig& config) {
  json entries = json::object();
  for (const auto& e : report.entries) {
    json v = estimate_json(e.value);
    v["provenance"] = e.provenance;
    entries[e.name] = v;
  }
  json bounds = json::array();
  for (const auto& b : report.bounds) bounds.push_back({{"name", b.name}, {"margin", b.margin}, {"ok", b.ok()}});
  const json j = {{"genus", report.genus},
                  {"invariants", entries},
                  {"bounds", bounds},
                  {"bounds_ok", report.bounds_ok()},
                  {"notes", report.notes},
                  {"config", config_json(config)}};
  return j.dump(2) + "\n";
}

std::string report_to_csv(const InvariantReport& report) {
  std::string out = "name,value,stderr,samples,censored,provenance\n";
  for (const auto& e : report.entries)
    out += e.name + "," + format_number(e.value.value) + "," + format_number(e.value.std_error) + "," +
           std::to_string(e.value.samples) + "," + std::to_string(e.value.censored) + "," + e.provenance + "\n";
  for (const auto& b : report.bounds)
    out += "\"margin: " + b.name + "\"," + format_number(b.margin) + ",0,0,0,bound\n";
  return out;
}

}  // namespace arakelov
