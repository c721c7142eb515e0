// recon: run single reconstructions, reproduce the published tables, or run
// the synthetic self-test.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "recon/experiment.hpp"
#include "recon/fixtures.hpp"
#include "recon/image_io.hpp"
#include "selftest.hpp"

#ifndef RECON_DEFAULT_CATALOG
#define RECON_DEFAULT_CATALOG "data/paper_tables.txt"
#endif

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunArgs {
  std::string image;
  std::string fixture;
  std::string method = "zero";
  std::string pattern = "rows2";
  int rate = 4;
  int lowpass = 43;
  std::optional<double> lambda, tau, sigma, theta, mu, eps;
  std::optional<int> iters, tv_iters, gamma, smooth, window;
  bool global_dual = false;
  std::string out = ".";
  std::string csv;
  bool save_image = false;
};

struct TableArgs {
  int id = 1;
  std::string images;
  std::string csv;
  std::string catalog = RECON_DEFAULT_CATALOG;
  int threads = 0;
  std::string out;
  bool save_images = false;
};

template <class T>
void apply(const std::optional<T>& v, T& target, const char* key, std::vector<std::string>& overrides) {
  if (!v) return;
  target = *v;
  std::ostringstream os;
  os << key << "=" << *v;
  overrides.push_back(os.str());
}

int do_run(const RunArgs& a) {
  using namespace recon;
  ExperimentConfig c;
  if (!a.fixture.empty()) {
    if (a.fixture == "phantom")
      c.image = shepp_logan(512);
    else if (a.fixture == "natural")
      c.image = natural_surrogate(512);
    else
      throw ConfigError("unknown fixture: " + a.fixture + " (phantom or natural)");
    c.image_id = "fixture-" + a.fixture;
  } else if (!a.image.empty()) {
    c.image_path = a.image;
  } else {
    throw ConfigError("either --image or --fixture is required");
  }
  c.method = parse_method(a.method);
  c.pattern = parse_pattern_kind(a.pattern);
  c.rate = a.rate;
  c.lowpass = a.lowpass;
  c.output_dir = a.out;
  c.save_image = a.save_image;

  apply(a.lambda, c.tv.lambda, "lambda", c.overrides);
  apply(a.tau, c.tv.tau, "tau", c.overrides);
  if (a.tau && !a.sigma) c.tv.sigma = TvParams::default_sigma(c.tv.tau);
  apply(a.sigma, c.tv.sigma, "sigma", c.overrides);
  apply(a.theta, c.tv.theta, "theta", c.overrides);
  if (a.global_dual) {
    c.tv.normalization = DualNormalization::kGlobal;
    c.overrides.push_back("dual=global");
  }
  apply(a.mu, c.hybrid.mu, "mu", c.overrides);
  apply(a.eps, c.hybrid.epsilon, "eps", c.overrides);
  apply(a.smooth, c.hybrid.smoothing, "smooth", c.overrides);
  if (a.gamma) {
    c.hybrid.gamma1 = c.hybrid.gamma2 = *a.gamma;
    c.overrides.push_back("gamma=" + std::to_string(*a.gamma));
  }
  if (a.window) {
    c.window.p1 = c.window.p2 = *a.window / 2;
    c.overrides.push_back("window=" + std::to_string(*a.window));
  }
  apply(a.tv_iters, c.tv.iterations, "tv_iters", c.overrides);
  if (a.iters) {
    switch (c.method) {
      case Method::kTv: apply(a.iters, c.tv.iterations, "iters", c.overrides); break;
      case Method::kHybrid: apply(a.iters, c.hybrid.iterations, "iters", c.overrides); break;
      case Method::kSpirit: apply(a.iters, c.spirit.iterations, "iters", c.overrides); break;
      default: throw ConfigError("--iters does not apply to method " + a.method);
    }
  }

  const ExperimentOutput out = run_experiment(c);
  TableRow row{0, out.row, std::nullopt, std::nullopt};
  const std::string csv = table_csv({row});
  std::cout << csv;
  if (!a.csv.empty()) {
    const bool fresh = !std::filesystem::exists(a.csv);
    std::ofstream f(a.csv, std::ios::app);
    if (!f) throw ConfigError("cannot write " + a.csv);
    f << (fresh ? csv : csv.substr(csv.find('\n') + 1));
  }
  return 0;
}

int do_table(const TableArgs& a) {
  using namespace recon;
  const std::vector<CatalogEntry> catalog = load_catalog(a.catalog);
  TableOptions opt;
  opt.threads = a.threads;
  opt.output_dir = a.out;
  opt.save_images = a.save_images;
  const std::vector<TableRow> rows = reproduce_table(a.id, catalog, a.images, opt);
  const std::string csv = table_csv(rows);
  write_text_atomic(a.csv, csv);
  int failures = 0;
  for (const TableRow& r : rows)
    if (r.hybrid_ge_tv && !*r.hybrid_ge_tv) ++failures;
  std::cout << csv;
  if (failures > 0) std::cerr << failures << " row(s) with hybrid PSNR below TV PSNR\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image reconstruction from structured incomplete Fourier data"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Reconstruct one image with one method");
  run_cmd->add_option("--image", run.image, "Ground-truth image (.pgm or .png)");
  run_cmd->add_option("--fixture", run.fixture, "Built-in 512x512 image instead of --image (phantom, natural)");
  run_cmd->add_option("--method", run.method, "zero, lowpass, hamming, grappa, spirit, tv, hybrid")->capture_default_str();
  run_cmd->add_option("--pattern", run.pattern, "rows2, rows3, rows4, box, lowpass")->capture_default_str();
  run_cmd->add_option("--rate", run.rate, "Reduction rate r")->capture_default_str();
  run_cmd->add_option("--lowpass", run.lowpass, "Low-pass width L (odd)")->capture_default_str();
  run_cmd->add_option("--lambda", run.lambda, "TV data weight");
  run_cmd->add_option("--tau", run.tau, "TV primal step");
  run_cmd->add_option("--sigma", run.sigma, "TV dual step (default 0.01 + 1/(8 tau))");
  run_cmd->add_option("--theta", run.theta, "TV extrapolation");
  run_cmd->add_option("--iters", run.iters, "Iterations of the selected method");
  run_cmd->add_option("--tv-iters", run.tv_iters, "TV iterations used to initialize the hybrid method");
  run_cmd->add_flag("--global-dual", run.global_dual, "Normalize the TV dual variable globally");
  run_cmd->add_option("--mu", run.mu, "Hybrid amplification in [1, 2)");
  run_cmd->add_option("--eps", run.eps, "Hybrid weight floor");
  run_cmd->add_option("--gamma", run.gamma, "MTV window half-width");
  run_cmd->add_option("--smooth", run.smooth, "Hybrid smoothing passes");
  run_cmd->add_option("--window", run.window, "GRAPPA/SPIRiT window size (odd)");
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--csv", run.csv, "Append the result row to this CSV");
  run_cmd->add_flag("--save-image", run.save_image, "Write the reconstruction as PNG");

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Reproduce one of the published tables");
  table_cmd->add_option("--id", table.id, "Table 1..5")->required()->check(CLI::Range(1, 5));
  table_cmd->add_option("--images", table.images, "Directory with cameraman, boat, phantom (.pgm or .png)")->required();
  table_cmd->add_option("--csv", table.csv, "Output CSV")->required();
  table_cmd->add_option("--catalog", table.catalog, "Parameter catalog")->capture_default_str();
  table_cmd->add_option("--threads", table.threads, "Parallel rows (default: RECON_THREADS or core count)");
  table_cmd->add_option("--out", table.out, "Directory for reconstructions");
  table_cmd->add_flag("--save-images", table.save_images, "Write reconstructions as PNG");

  auto* self_cmd = app.add_subcommand("selftest", "Run property checks on synthetic fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return do_run(run);
    if (*table_cmd) return do_table(table);
    if (*self_cmd) return recon_tool::run_selftest(std::cout) ? 0 : kExitNumerical;
  } catch (const recon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const recon::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
