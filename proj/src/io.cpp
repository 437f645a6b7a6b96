#include "cpcombss/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cpcombss {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::vector<double> read_y_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::vector<double> y;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (first && (line == "y" || line == "\"y\"")) {
      first = false;
      continue;
    }
    first = false;
    try {
      std::size_t pos = 0;
      const double v = std::stod(line, &pos);
      if (pos != line.size()) throw std::invalid_argument("trailing characters");
      y.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected one numeric value per line, got '" + line + "'");
    }
  }
  if (y.empty()) throw std::runtime_error(path + ": no data rows");
  return y;
}

void write_y_csv(const std::string& path, const std::vector<double>& y) {
  std::string out = "y\n";
  for (double v : y) {
    out += format_double(v);
    out += '\n';
  }
  write_text_file(path, out);
}

std::string to_json(const SignalSpec& spec, int indent) {
  nlohmann::json j;
  j["n"] = spec.n;
  j["tau"] = spec.tau;
  j["delta"] = spec.delta;
  j["sigma"] = spec.sigma;
  j["mu0"] = spec.mu0;
  return j.dump(indent);
}

SignalSpec signal_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("invalid spec JSON: ") + e.what());
  }
  SignalSpec spec;
  try {
    spec.n = j.at("n").get<int>();
    spec.tau = j.at("tau").get<std::vector<int>>();
    spec.delta = j.at("delta").get<double>();
    spec.sigma = j.value("sigma", 1.0);
    spec.mu0 = j.value("mu0", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("invalid spec JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

SignalSpec read_signal_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return signal_spec_from_json(buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace cpcombss
