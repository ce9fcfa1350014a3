#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "libra/fit.hpp"
#include "libra/io.hpp"
#include "libra/iss.hpp"
#include "libra/simulate.hpp"

namespace py = pybind11;
using namespace libra;

namespace {

Mat stack_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return Mat(0, 0);
  Mat out(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) out.row(i) = rows[i].transpose();
  return out;
}

PathConfig make_config(double kappa, std::optional<double> alpha,
                       std::optional<std::vector<double>> tlist, int nt,
                       double trate, Family family, bool intercept,
                       bool normalize) {
  PathConfig cfg;
  cfg.kappa = kappa;
  cfg.alpha = alpha;
  cfg.tlist = std::move(tlist);
  cfg.nt = nt;
  cfg.trate = trate;
  cfg.family = family;
  cfg.intercept = intercept;
  cfg.normalize = normalize;
  return cfg;
}

py::dict result_to_dict(const FitResult& fit) {
  py::dict d;
  d["t"] = fit.path.times;
  d["theta0"] = stack_rows(fit.path.theta0_path);
  d["theta"] = stack_rows(fit.path.theta_path);
  d["t0"] = fit.t0;
  d["alpha"] = fit.alpha;
  d["coef_names"] = fit.coef_names;
  d["entry_order"] = fit.path.entry_order();
  d["group_entry_time"] = fit.path.group_entry_time;
  return d;
}

}  // namespace

PYBIND11_MODULE(_libra, m) {
  m.doc() = "Linearized Bregman / Inverse Scale Space sparse path solvers";

  py::register_exception<data_error>(m, "DataError", PyExc_ValueError);
  py::register_exception<divergence_error>(m, "DivergenceError",
                                           PyExc_ArithmeticError);

  m.def(
      "shrinkage",
      [](const Vec& z, std::optional<std::vector<int>> groups) {
        const GroupIndex gi = groups ? GroupIndex(*groups)
                                     : GroupIndex::singletons(z.size());
        return shrinkage(z, gi);
      },
      py::arg("z"), py::arg("groups") = std::nullopt,
      "Group soft-thresholding at radius 1 (entry-wise when groups is None)");

  m.def(
      "lb",
      [](const Mat& X, const Vec& y, double kappa, const std::string& family,
         std::optional<double> alpha, std::optional<std::vector<double>> tlist,
         int nt, double trate, bool intercept, bool normalize,
         std::optional<std::vector<int>> index, const std::string& sparsity) {
        auto cfg = make_config(kappa, alpha, std::move(tlist), nt, trate,
                               family_from_string(family), intercept, normalize);
        std::optional<GroupIndex> gi;
        if (index) gi = GroupIndex(*index);
        MultinomialSparsity mode = MultinomialSparsity::entry;
        if (sparsity == "column") mode = MultinomialSparsity::column;
        else if (sparsity == "block") mode = MultinomialSparsity::block;
        else if (sparsity != "entry")
          throw std::invalid_argument("sparsity must be entry, column or block");
        return result_to_dict(fit_lb(X, y, cfg, gi, mode));
      },
      py::arg("X"), py::arg("y"), py::arg("kappa"),
      py::arg("family") = "gaussian", py::arg("alpha") = std::nullopt,
      py::arg("tlist") = std::nullopt, py::arg("nt") = 100,
      py::arg("trate") = 100.0, py::arg("intercept") = true,
      py::arg("normalize") = false, py::arg("index") = std::nullopt,
      py::arg("sparsity") = "entry");

  m.def(
      "iss",
      [](const Mat& X, const Vec& y, bool intercept, bool normalize) {
        IssOptions opts;
        opts.intercept = intercept;
        opts.normalize = normalize;
        const IssPath path = iss_path(X, y, opts);
        py::dict d;
        d["knots"] = path.knots;
        d["theta"] = stack_rows(path.solutions);
        d["intercepts"] = path.intercepts;
        d["rho"] = stack_rows(path.rho_at_knot);
        d["entry_order"] = path.entry_order();
        return d;
      },
      py::arg("X"), py::arg("y"), py::arg("intercept") = true,
      py::arg("normalize") = true);

  m.def(
      "ggm",
      [](std::optional<Mat> X, std::optional<Mat> S, double kappa,
         std::optional<double> alpha, std::optional<std::vector<double>> tlist,
         int nt, double trate) {
        auto cfg = make_config(kappa, alpha, std::move(tlist), nt, trate,
                               Family::ggm, true, false);
        return result_to_dict(fit_ggm(X, S, cfg));
      },
      py::arg("X") = std::nullopt, py::arg("S") = std::nullopt,
      py::arg("kappa"), py::arg("alpha") = std::nullopt,
      py::arg("tlist") = std::nullopt, py::arg("nt") = 100,
      py::arg("trate") = 100.0);

  m.def(
      "ising",
      [](const Mat& X, double kappa, const std::string& responses,
         std::optional<double> alpha, std::optional<std::vector<double>> tlist,
         int nt, double trate, bool intercept) {
        auto cfg = make_config(kappa, alpha, std::move(tlist), nt, trate,
                               Family::ising, intercept, false);
        const auto coding = responses == "0,1" ? IsingCoding::zero_one
                                               : IsingCoding::pm_one;
        return result_to_dict(fit_ising(X, cfg, coding));
      },
      py::arg("X"), py::arg("kappa"), py::arg("responses") = "0,1",
      py::arg("alpha") = std::nullopt, py::arg("tlist") = std::nullopt,
      py::arg("nt") = 100, py::arg("trate") = 100.0,
      py::arg("intercept") = true);

  m.def(
      "potts",
      [](const IntMat& X, double kappa, bool group,
         std::optional<double> alpha, std::optional<std::vector<double>> tlist,
         int nt, double trate, bool intercept) {
        auto cfg = make_config(kappa, alpha, std::move(tlist), nt, trate,
                               Family::potts, intercept, false);
        return result_to_dict(fit_potts(X, cfg, group));
      },
      py::arg("X"), py::arg("kappa"), py::arg("group") = false,
      py::arg("alpha") = std::nullopt, py::arg("tlist") = std::nullopt,
      py::arg("nt") = 100, py::arg("trate") = 100.0,
      py::arg("intercept") = true);

  m.def(
      "gibbs_grid",
      [](int rows, int cols, double coupling, int n, int burn_in, int thinning,
         std::uint64_t seed, std::optional<Vec> field,
         const std::string& responses) {
        GridIsingSpec spec;
        spec.rows = rows;
        spec.cols = cols;
        spec.coupling = coupling;
        spec.n_samples = n;
        spec.burn_in = burn_in;
        spec.thinning = thinning;
        spec.seed = seed;
        if (field) spec.field = *field;
        spec.coding = responses == "-1,1" ? IsingCoding::pm_one
                                          : IsingCoding::zero_one;
        py::dict d;
        d["X"] = gibbs_sample_ising(spec);
        const auto edges = spec.edge_set();
        d["true_edges"] = std::vector<int>(edges.begin(), edges.end());
        return d;
      },
      py::arg("rows") = 10, py::arg("cols") = 10,
      py::arg("coupling") = 2.0 / 2.3, py::arg("n") = 5000,
      py::arg("burn_in") = 1000, py::arg("thinning") = 10, py::arg("seed") = 0,
      py::arg("field") = std::nullopt, py::arg("responses") = "0,1");

  m.def(
      "gen_linear_data",
      [](int n, int p, int sparsity, double snr, std::uint64_t seed) {
        const auto data = gen_linear_data(n, p, sparsity, snr, seed);
        return py::make_tuple(data.X, data.y, data.true_theta);
      },
      py::arg("n"), py::arg("p"), py::arg("sparsity"), py::arg("snr"),
      py::arg("seed") = 0);

  m.def(
      "support_recovery_curve",
      [](const std::vector<double>& times, const Mat& theta,
         const std::vector<int>& true_edges) {
        SolutionPath path;
        path.times = times;
        for (int i = 0; i < theta.rows(); ++i)
          path.theta_path.push_back(theta.row(i).transpose());
        const auto curve = support_recovery_curve(
            path, std::set<int>(true_edges.begin(), true_edges.end()));
        py::dict d;
        d["t"] = curve.times;
        d["tp_rate"] = curve.tp_rate;
        d["fp_rate"] = curve.fp_rate;
        d["exact_recovery"] = curve.exact_recovery;
        d["exact_interval"] =
            py::make_tuple(curve.exact_t_lo, curve.exact_t_hi);
        return d;
      },
      py::arg("times"), py::arg("theta"), py::arg("true_edges"));

  m.def("pair_index", &pair_index, py::arg("j"), py::arg("k"), py::arg("p"));
}
