#include "libra/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace libra {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

CsvTable load_csv(const std::filesystem::path& path, CsvRole role,
                  bool header) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const auto fields = split_fields(line);
    if (header && table.column_names.empty() && rows.empty()) {
      table.column_names = fields;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (size_t c = 0; c < fields.size(); ++c) {
      if (!looks_numeric(fields[c]))
        throw data_error(path.string() + ": non-numeric cell at row " +
                         std::to_string(lineno) + ", column " +
                         std::to_string(c + 1) + " ('" + fields[c] + "')");
      row.push_back(std::strtod(fields[c].c_str(), nullptr));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw data_error(path.string() + ": ragged row at line " +
                       std::to_string(lineno) + " (" +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw data_error(path.string() + ": no data rows");

  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(rows.front().size());
  table.values.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) table.values(i, j) = rows[i][j];
  if (table.column_names.empty())
    for (int j = 0; j < p; ++j)
      table.column_names.push_back("V" + std::to_string(j + 1));

  switch (role) {
    case CsvRole::design:
      break;
    case CsvRole::response:
      if (p != 1)
        throw data_error(path.string() + ": response must have one column, got " +
                         std::to_string(p));
      break;
    case CsvRole::covariance: {
      if (n != p)
        throw data_error(path.string() + ": covariance must be square");
      const double asym =
          (table.values - table.values.transpose()).cwiseAbs().maxCoeff();
      if (asym > 1e-8)
        throw data_error(path.string() +
                         ": covariance is not symmetric (max asymmetry " +
                         std::to_string(asym) + ")");
      break;
    }
    case CsvRole::binary_matrix: {
      bool has_minus = false, has_zero = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
          const double v = table.values(i, j);
          if (v == -1.0) has_minus = true;
          else if (v == 0.0) has_zero = true;
          else if (v != 1.0)
            throw data_error(path.string() + ": non-binary value " +
                             format_double(v) + " at row " +
                             std::to_string(i + 1) + ", column " +
                             std::to_string(j + 1));
        }
      if (has_minus && has_zero)
        throw data_error(path.string() +
                         ": mixes 0/1 and -1/1 codings");
      break;
    }
    case CsvRole::categorical_matrix:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
          const double v = table.values(i, j);
          if (v != std::floor(v) || !std::isfinite(v))
            throw data_error(path.string() + ": non-integral class label at row " +
                             std::to_string(i + 1) + ", column " +
                             std::to_string(j + 1));
        }
      break;
  }
  return table;
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& column_names,
               const Mat& values) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  for (size_t j = 0; j < column_names.size(); ++j)
    out << (j ? "," : "") << column_names[j];
  if (!column_names.empty()) out << "\n";
  for (int i = 0; i < values.rows(); ++i) {
    for (int j = 0; j < values.cols(); ++j)
      out << (j ? "," : "") << format_double(values(i, j));
    out << "\n";
  }
}

void write_path_csv(const std::filesystem::path& path, const FitResult& fit) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  out << "t";
  for (const auto& name : fit.theta0_names) out << "," << name;
  for (const auto& name : fit.coef_names) out << "," << name;
  out << "\n";
  for (int i = 0; i < fit.path.size(); ++i) {
    out << format_double(fit.path.times[i]);
    const Vec& t0 = fit.path.theta0_path[i];
    for (int j = 0; j < t0.size(); ++j) out << "," << format_double(t0[j]);
    const Vec& th = fit.path.theta_path[i];
    for (int j = 0; j < th.size(); ++j) out << "," << format_double(th[j]);
    out << "\n";
  }
}

SolutionPath read_path_csv(const std::filesystem::path& path, int theta0_dim,
                           int theta_dim) {
  const CsvTable table = load_csv(path, CsvRole::design, /*header=*/true);
  if (table.cols() != 1 + theta0_dim + theta_dim)
    throw data_error(path.string() + ": unexpected column count");
  SolutionPath out;
  for (int i = 0; i < table.rows(); ++i) {
    out.times.push_back(table.values(i, 0));
    out.theta0_path.push_back(table.values.row(i).segment(1, theta0_dim));
    out.theta_path.push_back(
        table.values.row(i).segment(1 + theta0_dim, theta_dim));
  }
  return out;
}

void emit_plot(const SolutionPath& path, PlotAxis x_axis,
               const std::filesystem::path& out_file) {
  if (path.size() == 0) throw std::invalid_argument("cannot plot an empty path");
  const int n = path.size();
  const int p = static_cast<int>(path.theta_path[0].size());

  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = x_axis == PlotAxis::t ? path.times[i]
                                  : path.theta_path[i].cwiseAbs().sum();
  double xmin = xs[0], xmax = xs[0], ymin = 0.0, ymax = 0.0;
  for (int i = 0; i < n; ++i) {
    xmin = std::min(xmin, xs[i]);
    xmax = std::max(xmax, xs[i]);
    ymin = std::min(ymin, path.theta_path[i].minCoeff());
    ymax = std::max(ymax, path.theta_path[i].maxCoeff());
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double W = 720, H = 480, ml = 60, mr = 20, mt = 20, mb = 50;
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
  };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                  "#bcbd22", "#17becf"};
  std::ofstream out(out_file);
  if (!out) throw data_error("cannot write " + out_file.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  const std::string xlabel = x_axis == PlotAxis::t ? "t" : "l1 norm of theta";
  out << "<text x=\"" << (ml + (W - ml - mr) / 2) << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">" << xlabel
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + (H - mt - mb) / 2)
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
      << (mt + (H - mt - mb) / 2) << ")\">coefficient</text>\n";
  for (double v : {xmin, xmax})
    out << "<text x=\"" << px(v) << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  for (double v : {ymin, ymax})
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v) << "</text>\n";
  for (int j = 0; j < p; ++j) {
    out << "<polyline fill=\"none\" stroke=\"" << palette[j % 10]
        << "\" stroke-width=\"1.2\" points=\"";
    for (int i = 0; i < n; ++i) {
      out << (i ? " " : "") << fmt(px(xs[i])) << "," << fmt(py(path.theta_path[i][j]));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace libra
