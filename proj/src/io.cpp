#include "gram/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gram/errors.hpp"

namespace gram {

namespace {

nlohmann::json parse(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DomainError("invalid JSON");
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string spectrum_to_json(const Spectrum& s) {
  std::string out = "{\"thetas\": [";
  for (int i = 0; i < s.n(); ++i) {
    if (i) out += ", ";
    out += format_g17(s.thetas[i]);
  }
  out += "], \"m\": " + std::to_string(s.m) + "}\n";
  return out;
}

Spectrum spectrum_from_json_text(const std::string& text, int m_override) {
  auto j = parse(text);
  if (!j.contains("thetas") || !j["thetas"].is_array())
    throw DomainError("spectrum JSON needs a \"thetas\" array");
  std::vector<double> t;
  for (const auto& v : j["thetas"]) {
    if (!v.is_number()) throw DomainError("thetas must be numbers");
    t.push_back(v.get<double>());
  }
  int m = m_override;
  if (m < 0) {
    if (!j.contains("m") || !j["m"].is_number_integer())
      throw DomainError("spectrum JSON needs an integer \"m\"");
    m = j["m"].get<int>();
  }
  return make_spectrum(std::move(t), m);
}

std::string matrix_to_json(const Eigen::MatrixXcd& a) {
  auto dump_part = [&](bool imag) {
    std::string out = "[";
    for (int i = 0; i < a.rows(); ++i) {
      out += i ? ", [" : "[";
      for (int j = 0; j < a.cols(); ++j) {
        if (j) out += ", ";
        out += format_g17(imag ? a(i, j).imag() : a(i, j).real());
      }
      out += "]";
    }
    return out + "]";
  };
  return "{\"re\": " + dump_part(false) + ",\n \"im\": " + dump_part(true) +
         "}\n";
}

Eigen::MatrixXcd matrix_from_json_text(const std::string& text) {
  auto j = parse(text);
  if (!j.contains("re") || !j.contains("im"))
    throw DomainError("matrix JSON needs \"re\" and \"im\" arrays");
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array() || re.size() != im.size() ||
      re.empty())
    throw DomainError("matrix JSON parts must be equal-size 2d arrays");
  size_t rows = re.size(), cols = re[0].size();
  Eigen::MatrixXcd a(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (re[i].size() != cols || im[i].size() != cols)
      throw DomainError("ragged matrix JSON");
    for (size_t k = 0; k < cols; ++k)
      a(i, k) = {re[i][k].get<double>(), im[i][k].get<double>()};
  }
  return a;
}

Spectrum load_spectrum(const std::string& path, int m_override) {
  return spectrum_from_json_text(read_file(path), m_override);
}

void save_spectrum(const Spectrum& s, const std::string& path) {
  write_file(path, spectrum_to_json(s));
}

Eigen::MatrixXcd load_matrix(const std::string& path) {
  return matrix_from_json_text(read_file(path));
}

void save_matrix(const Eigen::MatrixXcd& a, const std::string& path) {
  write_file(path, matrix_to_json(a));
}

}  // namespace gram
