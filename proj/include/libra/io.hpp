#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "libra/fit.hpp"
#include "libra/types.hpp"

namespace libra {

enum class CsvRole { design, response, covariance, binary_matrix, categorical_matrix };

struct CsvTable {
  std::vector<std::string> column_names;
  Mat values;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
};

// Comma-separated, optional header, UTF-8. Role-specific validation:
// binary cells in {0,1} or {-1,1}, categorical cells integral, covariance
// square and symmetric within 1e-8. Errors name the offending cell.
CsvTable load_csv(const std::filesystem::path& path, CsvRole role,
                  bool header = false);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& column_names, const Mat& values);

// Shortest round-trip decimal representation.
std::string format_double(double x);

// One row per path point: t, theta0 components, theta components.
void write_path_csv(const std::filesystem::path& path, const FitResult& fit);

// Re-parse a path.csv written by write_path_csv.
SolutionPath read_path_csv(const std::filesystem::path& path,
                           int theta0_dim, int theta_dim);

enum class PlotAxis { t, l1_norm };

// One polyline per coefficient, deterministic output for fixed input.
void emit_plot(const SolutionPath& path, PlotAxis x_axis,
               const std::filesystem::path& out_file);

}  // namespace libra
