#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gram/spectrum.hpp"

namespace gram {

// Shortest-exact would round-trip too, but the on-disk contract is a fixed
// 17-significant-digit decimal form.
std::string format_g17(double v);

// {"thetas": [...], "m": k}
std::string spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json_text(const std::string& text, int m_override = -1);

// {"re": [[...]], "im": [[...]]}
std::string matrix_to_json(const Eigen::MatrixXcd& a);
Eigen::MatrixXcd matrix_from_json_text(const std::string& text);

Spectrum load_spectrum(const std::string& path, int m_override = -1);
void save_spectrum(const Spectrum& s, const std::string& path);
Eigen::MatrixXcd load_matrix(const std::string& path);
void save_matrix(const Eigen::MatrixXcd& a, const std::string& path);

}  // namespace gram
