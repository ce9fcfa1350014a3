#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "libra/fit.hpp"
#include "libra/io.hpp"
#include "libra/iss.hpp"
#include "libra/simulate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDiverged = 4;

struct CommonOpts {
  double kappa = 0.0;
  double alpha = 0.0;
  std::string tlist;
  int nt = 100;
  double trate = 100.0;
  bool intercept = true;
  bool normalize = false;
  bool header = false;
  std::string out_dir = ".";
  std::string x_axis = "t";
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_kappa = true) {
  auto* k = cmd->add_option("--kappa", o.kappa, "damping factor");
  if (needs_kappa) k->required();
  cmd->add_option("--alpha", o.alpha, "step size (default: auto from the stability bound)");
  cmd->add_option("--tlist", o.tlist, "comma-separated output times (default: geometric)");
  cmd->add_option("--nt", o.nt, "number of models on the path")->capture_default_str();
  cmd->add_option("--trate", o.trate, "t_max/t_min for the default tlist")->capture_default_str();
  cmd->add_flag("--intercept,!--no-intercept", o.intercept, "fit unpenalized intercept");
  cmd->add_flag("--normalize", o.normalize, "scale columns to unit 1/n-norm");
  cmd->add_flag("--header", o.header, "input CSVs carry a header row");
  cmd->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--x-axis", o.x_axis, "plot x axis: t or l1")
      ->check(CLI::IsMember({"t", "l1"}));
  cmd->add_flag("--plot", o.plot, "emit path.svg");
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
  return out;
}

libra::PathConfig make_config(const CommonOpts& o, libra::Family family) {
  libra::PathConfig cfg;
  cfg.kappa = o.kappa;
  if (o.alpha > 0.0) cfg.alpha = o.alpha;
  if (!o.tlist.empty()) cfg.tlist = parse_doubles(o.tlist);
  cfg.nt = o.nt;
  cfg.trate = o.trate;
  cfg.family = family;
  cfg.intercept = o.intercept;
  cfg.normalize = o.normalize;
  return cfg;
}

void emit_artifacts(const libra::FitResult& fit, const CommonOpts& o,
                    json manifest) {
  fs::create_directories(o.out_dir);
  libra::write_path_csv(fs::path(o.out_dir) / "path.csv", fit);

  manifest["family"] = libra::to_string(fit.family);
  manifest["kappa"] = o.kappa;
  manifest["alpha"] = fit.alpha;
  manifest["t0"] = fit.t0;
  manifest["nt"] = o.nt;
  manifest["trate"] = o.trate;
  manifest["intercept"] = o.intercept;
  manifest["normalize"] = o.normalize;
  manifest["tlist"] = fit.path.times;
  json entries = json::array();
  for (int g : fit.path.entry_order()) {
    json e;
    if (fit.groups.is_entrywise())
      e["coefficient"] = fit.coef_names[fit.groups.members(g)[0]];
    else
      e["group"] = g;
    e["t"] = fit.path.group_entry_time[g];
    entries.push_back(e);
  }
  manifest["entry_order"] = entries;
  std::ofstream(fs::path(o.out_dir) / "path.json") << manifest.dump(2) << "\n";

  if (o.plot)
    libra::emit_plot(fit.path,
                     o.x_axis == "t" ? libra::PlotAxis::t : libra::PlotAxis::l1_norm,
                     fs::path(o.out_dir) / "path.svg");
}

std::optional<libra::GroupIndex> load_index(const std::string& index_arg,
                                            bool header) {
  if (index_arg.empty()) return std::nullopt;
  std::vector<int> labels;
  if (fs::exists(index_arg)) {
    const auto table =
        libra::load_csv(index_arg, libra::CsvRole::categorical_matrix, header);
    for (int i = 0; i < table.rows(); ++i)
      for (int j = 0; j < table.cols(); ++j)
        labels.push_back(static_cast<int>(table.values(i, j)));
  } else {
    for (double v : parse_doubles(index_arg))
      labels.push_back(static_cast<int>(v));
  }
  return libra::GroupIndex(std::move(labels));
}

int run_app(int argc, char** argv) {
  CLI::App app{"Sparse regularization paths via the Linearized Bregman iteration"};
  app.require_subcommand(1);

  // ---- lb
  CommonOpts lb_opts;
  std::string lb_x, lb_y, lb_family = "gaussian", lb_index;
  bool lb_group = false;
  auto* lb = app.add_subcommand("lb", "regression path (gaussian/binomial/multinomial)");
  lb->add_option("X", lb_x, "design matrix CSV")->required();
  lb->add_option("y", lb_y, "response CSV")->required();
  lb->add_option("--family", lb_family, "gaussian, binomial or multinomial")
      ->check(CLI::IsMember({"gaussian", "binomial", "multinomial"}))
      ->capture_default_str();
  lb->add_flag("--group", lb_group, "group penalty (multinomial column/block sparsity)");
  lb->add_option("--index", lb_index, "group labels: CSV path or comma list");
  add_common(lb, lb_opts);

  // ---- iss
  CommonOpts iss_opts;
  std::string iss_x, iss_y;
  auto* issc = app.add_subcommand("iss", "exact Inverse Scale Space path (gaussian)");
  issc->add_option("X", iss_x, "design matrix CSV")->required();
  issc->add_option("y", iss_y, "response CSV")->required();
  add_common(issc, iss_opts, /*needs_kappa=*/false);

  // ---- ggm
  CommonOpts ggm_opts;
  std::string ggm_x, ggm_s;
  auto* ggm = app.add_subcommand("ggm", "Gaussian graphical model path");
  ggm->add_option("X", ggm_x, "data matrix CSV");
  ggm->add_option("--covariance", ggm_s, "precomputed covariance CSV");
  add_common(ggm, ggm_opts);

  // ---- ising
  CommonOpts ising_opts;
  std::string ising_x, ising_responses = "0,1";
  auto* ising = app.add_subcommand("ising", "Ising model path");
  ising->add_option("X", ising_x, "binary data matrix CSV")->required();
  ising->add_option("--responses", ising_responses, "coding: 0,1 or -1,1")
      ->check(CLI::IsMember({"0,1", "-1,1"}))
      ->capture_default_str();
  add_common(ising, ising_opts);

  // ---- potts
  CommonOpts potts_opts;
  std::string potts_x;
  bool potts_group = false;
  auto* potts = app.add_subcommand("potts", "Potts model path");
  potts->add_option("X", potts_x, "categorical data matrix CSV")->required();
  potts->add_flag("--group", potts_group, "group penalty over variable pairs");
  add_common(potts, potts_opts);

  // ---- simulate
  auto* sim = app.add_subcommand("simulate", "generate synthetic datasets");
  sim->require_subcommand(1);
  libra::GridIsingSpec grid_spec;
  std::string grid_out = ".";
  auto* grid = sim->add_subcommand("grid", "grid Ising Gibbs sampler");
  grid->add_option("--rows", grid_spec.rows)->capture_default_str();
  grid->add_option("--cols", grid_spec.cols)->capture_default_str();
  grid->add_option("--coupling", grid_spec.coupling, "J on grid edges")->capture_default_str();
  grid->add_option("--n", grid_spec.n_samples)->capture_default_str();
  grid->add_option("--burn-in", grid_spec.burn_in)->capture_default_str();
  grid->add_option("--thinning", grid_spec.thinning)->capture_default_str();
  grid->add_option("--seed", grid_spec.seed)->capture_default_str();
  grid->add_option("--out-dir", grid_out)->capture_default_str();

  int lin_n = 100, lin_p = 20, lin_sparsity = 5;
  double lin_snr = 10.0;
  std::uint64_t lin_seed = 0;
  std::string lin_out = ".";
  auto* lin = sim->add_subcommand("linear", "Gaussian design with sparse signal");
  lin->add_option("--n", lin_n)->capture_default_str();
  lin->add_option("--p", lin_p)->capture_default_str();
  lin->add_option("--sparsity", lin_sparsity)->capture_default_str();
  lin->add_option("--snr", lin_snr, "signal-to-noise ratio (inf = noiseless)")->capture_default_str();
  lin->add_option("--seed", lin_seed)->capture_default_str();
  lin->add_option("--out-dir", lin_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (lb->parsed()) {
    const auto X = libra::load_csv(lb_x, libra::CsvRole::design, lb_opts.header);
    const auto y = libra::load_csv(lb_y, libra::CsvRole::response, lb_opts.header);
    auto cfg = make_config(lb_opts, libra::family_from_string(lb_family));
    auto index = load_index(lb_index, lb_opts.header);
    libra::MultinomialSparsity mode = libra::MultinomialSparsity::entry;
    if (cfg.family == libra::Family::multinomial && lb_group)
      mode = index ? libra::MultinomialSparsity::block
                   : libra::MultinomialSparsity::column;
    auto fit = libra::fit_lb(X.values, y.values.col(0), cfg,
                             cfg.family == libra::Family::multinomial && lb_group
                                 ? index
                                 : index,
                             mode);
    // Use CSV header names where available.
    if (cfg.family != libra::Family::multinomial && lb_opts.header)
      fit.coef_names = X.column_names;
    json manifest;
    manifest["subcommand"] = "lb";
    manifest["inputs"] = {lb_x, lb_y};
    emit_artifacts(fit, lb_opts, manifest);
    return 0;
  }

  if (issc->parsed()) {
    const auto X = libra::load_csv(iss_x, libra::CsvRole::design, iss_opts.header);
    const auto y = libra::load_csv(iss_y, libra::CsvRole::response, iss_opts.header);
    libra::IssOptions opts;
    opts.intercept = iss_opts.intercept;
    opts.normalize = iss_opts.normalize;
    const auto path = libra::iss_path(X.values, y.values.col(0), opts);

    libra::FitResult fit;
    fit.family = libra::Family::gaussian;
    fit.path.times = path.knots;
    fit.path.theta_path = path.solutions;
    for (double ic : path.intercepts) {
      libra::Vec v(iss_opts.intercept ? 1 : 0);
      if (iss_opts.intercept) v[0] = ic;
      fit.path.theta0_path.push_back(v);
    }
    fit.groups = libra::GroupIndex::singletons(X.cols());
    fit.path.group_entry_time.assign(X.cols(), libra::kInf);
    for (size_t k = 0; k < path.solutions.size(); ++k)
      for (int j = 0; j < X.cols(); ++j)
        if (path.solutions[k][j] != 0.0 &&
            !std::isfinite(fit.path.group_entry_time[j]))
          fit.path.group_entry_time[j] = path.knots[k];
    fit.coef_names = iss_opts.header
                         ? X.column_names
                         : std::vector<std::string>{};
    for (int j = static_cast<int>(fit.coef_names.size()); j < X.cols(); ++j)
      fit.coef_names.push_back("x" + std::to_string(j));
    if (iss_opts.intercept) fit.theta0_names.push_back("intercept");
    fit.t0 = path.knots.size() > 1 ? path.knots[1] : 0.0;

    json manifest;
    manifest["subcommand"] = "iss";
    manifest["inputs"] = {iss_x, iss_y};
    manifest["knots"] = path.knots;
    emit_artifacts(fit, iss_opts, manifest);
    return 0;
  }

  if (ggm->parsed()) {
    if (ggm_x.empty() && ggm_s.empty())
      throw CLI::ValidationError("ggm", "provide a data matrix or --covariance");
    std::optional<libra::Mat> X, S;
    if (!ggm_x.empty())
      X = libra::load_csv(ggm_x, libra::CsvRole::design, ggm_opts.header).values;
    if (!ggm_s.empty())
      S = libra::load_csv(ggm_s, libra::CsvRole::covariance, ggm_opts.header).values;
    auto cfg = make_config(ggm_opts, libra::Family::ggm);
    const auto fit = libra::fit_ggm(X, S, cfg);
    json manifest;
    manifest["subcommand"] = "ggm";
    manifest["inputs"] = json::array();
    if (!ggm_x.empty()) manifest["inputs"].push_back(ggm_x);
    if (!ggm_s.empty()) manifest["inputs"].push_back(ggm_s);
    emit_artifacts(fit, ggm_opts, manifest);
    return 0;
  }

  if (ising->parsed()) {
    const auto X =
        libra::load_csv(ising_x, libra::CsvRole::binary_matrix, ising_opts.header);
    const auto coding = ising_responses == "0,1" ? libra::IsingCoding::zero_one
                                                 : libra::IsingCoding::pm_one;
    auto cfg = make_config(ising_opts, libra::Family::ising);
    const auto fit = libra::fit_ising(X.values, cfg, coding);
    json manifest;
    manifest["subcommand"] = "ising";
    manifest["inputs"] = {ising_x};
    manifest["responses"] = ising_responses;
    emit_artifacts(fit, ising_opts, manifest);
    return 0;
  }

  if (potts->parsed()) {
    const auto X = libra::load_csv(potts_x, libra::CsvRole::categorical_matrix,
                                   potts_opts.header);
    libra::IntMat labels = X.values.cast<int>();
    auto cfg = make_config(potts_opts, libra::Family::potts);
    const auto fit = libra::fit_potts(labels, cfg, potts_group);
    json manifest;
    manifest["subcommand"] = "potts";
    manifest["inputs"] = {potts_x};
    manifest["group"] = potts_group;
    emit_artifacts(fit, potts_opts, manifest);
    return 0;
  }

  if (grid->parsed()) {
    fs::create_directories(grid_out);
    const libra::Mat X = libra::gibbs_sample_ising(grid_spec);
    std::vector<std::string> names;
    for (int v = 0; v < grid_spec.num_nodes(); ++v)
      names.push_back("node" + std::to_string(v));
    libra::write_csv(fs::path(grid_out) / "data.csv", names, X);
    // True edges as (j,k) node pairs, for downstream recovery checks.
    libra::Mat edges(grid_spec.edge_set().size(), 2);
    int r = 0;
    for (int e : grid_spec.edge_set()) {
      const auto [j, k] = libra::pair_from_index(e, grid_spec.num_nodes());
      edges(r, 0) = j;
      edges(r, 1) = k;
      ++r;
    }
    libra::write_csv(fs::path(grid_out) / "edges.csv", {"j", "k"}, edges);
    json manifest;
    manifest["subcommand"] = "simulate grid";
    manifest["rows"] = grid_spec.rows;
    manifest["cols"] = grid_spec.cols;
    manifest["coupling"] = grid_spec.coupling;
    manifest["n"] = grid_spec.n_samples;
    manifest["burn_in"] = grid_spec.burn_in;
    manifest["thinning"] = grid_spec.thinning;
    manifest["seed"] = grid_spec.seed;
    std::ofstream(fs::path(grid_out) / "manifest.json") << manifest.dump(2) << "\n";
    return 0;
  }

  if (lin->parsed()) {
    fs::create_directories(lin_out);
    const auto data = libra::gen_linear_data(lin_n, lin_p, lin_sparsity,
                                             lin_snr, lin_seed);
    std::vector<std::string> names;
    for (int j = 0; j < lin_p; ++j) names.push_back("x" + std::to_string(j));
    libra::write_csv(fs::path(lin_out) / "X.csv", names, data.X);
    libra::write_csv(fs::path(lin_out) / "y.csv", {"y"}, data.y);
    libra::write_csv(fs::path(lin_out) / "theta.csv", {"theta"},
                     data.true_theta);
    json manifest;
    manifest["subcommand"] = "simulate linear";
    manifest["n"] = lin_n;
    manifest["p"] = lin_p;
    manifest["sparsity"] = lin_sparsity;
    manifest["snr"] = lin_snr;
    manifest["seed"] = lin_seed;
    std::ofstream(fs::path(lin_out) / "manifest.json") << manifest.dump(2) << "\n";
    return 0;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const libra::divergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const libra::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
