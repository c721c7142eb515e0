#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recon/hybrid.hpp"
#include "recon/kspace_interp.hpp"
#include "recon/tv.hpp"

namespace recon {

enum class Method { kZero, kLowpass, kHamming, kGrappa, kSpirit, kTv, kHybrid };

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct ExperimentConfig {
  std::string image_id;
  /// Loaded when `image` is empty.
  std::string image_path;
  std::optional<Image> image;

  Method method = Method::kZero;
  PatternKind pattern = PatternKind::kRowsStride2;
  int rate = 4;
  int lowpass = 43;

  TvParams tv;
  HybridParams hybrid;
  NeighborhoodWindow window;
  SpiritParams spirit;
  /// Starting image for the hybrid method; computed by TV minimization when unset.
  std::optional<Image> hybrid_init;

  std::string output_dir;
  bool save_image = false;
  std::uint64_t seed = 0;
  /// Parameters that deviate from the catalog, as key=value.
  std::vector<std::string> overrides;
};

struct ResultRow {
  std::string image_id;
  Method method = Method::kZero;
  int rate = 0;
  int lowpass = 0;
  PatternKind pattern = PatternKind::kRowsStride2;
  double psnr_db = 0.0;
  double tv_value = 0.0;
  double data_fidelity = 0.0;
  double wall_time_ms = 0.0;
  std::string params;  // canonical key=value list
  std::string digest;  // 16 hex digits of FNV-1a over params
};

struct ExperimentOutput {
  ResultRow row;
  Image reconstruction;
};

/// Builds the sampling pattern for a method: the low-pass method uses only
/// the L centered rows (an L x L box for the box kind), all others the full
/// pattern of the given kind.
SamplingPattern experiment_pattern(int n, int m, Method method, PatternKind kind, int rate, int lowpass);

/// Samples the image spectrum, runs the method and scores the result. Module
/// errors are rethrown with the configuration prepended.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Parameter catalog
// ---------------------------------------------------------------------------

struct CatalogEntry {
  int table = 0;
  std::string image_id;
  int rate = 0;
  int lowpass = 0;
  PatternKind pattern = PatternKind::kRowsStride2;
  double lambda = 100.0;
  HybridParams hybrid;
  /// Methods to run with their published PSNR.
  std::map<Method, double> reference;
};

/// Whitespace-separated key=value lines; '#' starts a comment.
std::vector<CatalogEntry> parse_catalog(const std::string& text);
std::vector<CatalogEntry> load_catalog(const std::string& path);

struct TableRow {
  int table = 0;
  ResultRow result;
  std::optional<double> paper_psnr;
  /// For hybrid rows: hybrid PSNR >= TV PSNR of the same configuration.
  std::optional<bool> hybrid_ge_tv;
};

struct TableOptions {
  /// Worker threads; 0 reads RECON_THREADS and falls back to the hardware count.
  int threads = 0;
  std::string output_dir;
  bool save_images = false;
  /// Restricts the run to entries satisfying the predicate when set.
  std::function<bool(const CatalogEntry&)> filter;
};

/// Runs every catalog entry of a table. Image files are looked up as
/// `<dir>/<image_id>.pgm` or `.png`; a missing image is an error raised before
/// any computation.
std::vector<TableRow> reproduce_table(int table, const std::vector<CatalogEntry>& catalog,
                                      const std::string& image_dir, const TableOptions& options = {});

/// Same, with images supplied in memory by id.
std::vector<TableRow> reproduce_table(int table, const std::vector<CatalogEntry>& catalog,
                                      const std::map<std::string, Image>& images, const TableOptions& options = {});

std::string find_image(const std::string& dir, const std::string& image_id);

/// CSV with header; PSNR values with 4 decimals.
std::string table_csv(const std::vector<TableRow>& rows);
/// Writes via a temporary file so that a failed run leaves no partial CSV.
void write_text_atomic(const std::string& path, const std::string& text);

int thread_budget(int requested);

}  // namespace recon
