#include "recon/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "recon/image_io.hpp"
#include "recon/linear.hpp"
#include "recon/metrics.hpp"

namespace recon {

namespace {

const std::map<Method, std::string>& method_names() {
  static const std::map<Method, std::string> names{
      {Method::kZero, "zero"}, {Method::kLowpass, "lowpass"}, {Method::kHamming, "hamming"},
      {Method::kGrappa, "grappa"}, {Method::kSpirit, "spirit"}, {Method::kTv, "tv"},
      {Method::kHybrid, "hybrid"},
  };
  return names;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string canonical_params(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "method=" << to_string(c.method) << ";pattern=" << to_string(c.pattern) << ";r=" << c.rate
     << ";L=" << c.lowpass;
  const bool uses_tv = c.method == Method::kTv || (c.method == Method::kHybrid && !c.hybrid_init);
  if (uses_tv)
    os << ";lambda=" << fmt(c.tv.lambda) << ";tau=" << fmt(c.tv.tau) << ";sigma=" << fmt(c.tv.sigma)
       << ";theta=" << fmt(c.tv.theta) << ";tv_iters=" << c.tv.iterations
       << ";dual=" << (c.tv.normalization == DualNormalization::kPixelwise ? "pixelwise" : "global");
  if (c.method == Method::kHybrid) {
    if (c.hybrid_init) os << ";init_lambda=" << fmt(c.tv.lambda);
    os << ";mu=" << fmt(c.hybrid.mu) << ";eps=" << fmt(c.hybrid.epsilon) << ";gamma=" << c.hybrid.gamma1 << "x"
       << c.hybrid.gamma2 << ";smooth=" << c.hybrid.smoothing << ";hybrid_iters=" << c.hybrid.iterations
       << ";refresh=" << (c.hybrid.refresh_mtv ? 1 : 0);
    if (c.hybrid.stop_tol) os << ";stop_tol=" << fmt(*c.hybrid.stop_tol);
  }
  if (c.method == Method::kGrappa || c.method == Method::kSpirit)
    os << ";window=" << c.window.height() << "x" << c.window.width();
  if (c.method == Method::kSpirit) {
    os << ";spirit_lambda=" << fmt(c.spirit.lambda) << ";spirit_iters=" << c.spirit.iterations;
    os << ";spirit_mu=" << (c.spirit.mu ? fmt(*c.spirit.mu) : "auto");
  }
  for (const std::string& o : c.overrides) os << ";override:" << o;
  return os.str();
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[" << (c.image_id.empty() ? c.image_path : c.image_id) << " " << to_string(c.method) << " "
     << to_string(c.pattern) << " r=" << c.rate << " L=" << c.lowpass << "] ";
  return os.str();
}

Image reconstruct(const ExperimentConfig& c, const Spectrum& s_masked, const Mask& mask) {
  switch (c.method) {
    case Method::kZero:
    case Method::kLowpass:
      return real_part(zero_refill(s_masked, mask));
    case Method::kHamming:
      if (c.pattern == PatternKind::kBox) throw ConfigError("Hamming reconstruction needs a row pattern");
      return real_part(window_recon(s_masked, mask, hamming_window(c.lowpass / 2, mask.rows())));
    case Method::kGrappa: {
      GrappaOptions opt;
      opt.window = c.window;
      return grappa_reconstruct(s_masked, mask, opt).image;
    }
    case Method::kSpirit: {
      const SpiritKernel k = fit_spirit_kernel(s_masked, CalibrationRegion::from_mask(mask), c.window);
      return spirit_reconstruct(s_masked, mask, k, c.spirit).image;
    }
    case Method::kTv:
      return tv_minimize(s_masked, mask, c.tv).image;
    case Method::kHybrid: {
      const Image init = c.hybrid_init ? *c.hybrid_init : tv_minimize(s_masked, mask, c.tv).image;
      if (c.pattern == PatternKind::kBox) return hybrid_reconstruct_box(init, s_masked, mask, c.hybrid).image;
      return hybrid_reconstruct(init, s_masked, mask, c.hybrid).image;
    }
  }
  throw ConfigError("unknown method");
}

}  // namespace

std::string to_string(Method m) { return method_names().at(m); }

Method parse_method(const std::string& s) {
  for (const auto& [m, name] : method_names())
    if (name == s) return m;
  throw ConfigError("unknown method: " + s);
}

SamplingPattern experiment_pattern(int n, int m, Method method, PatternKind kind, int rate, int lowpass) {
  if (method == Method::kLowpass || kind == PatternKind::kLowpassOnly) {
    if (kind == PatternKind::kBox) return build_lowpass_box_pattern(n, m, lowpass);
    return build_lowpass_pattern(n, m, lowpass);
  }
  switch (kind) {
    case PatternKind::kRowsStride2:
      return build_row_pattern(n, m, rate, lowpass, 2);
    case PatternKind::kRowsStride3:
      return build_row_pattern(n, m, rate, lowpass, 3);
    case PatternKind::kRowsStride4:
      return build_row_pattern(n, m, rate, lowpass, 4);
    case PatternKind::kBox:
      return build_box_pattern(n, m, rate, lowpass);
    case PatternKind::kLowpassOnly:
      break;
  }
  return build_lowpass_pattern(n, m, lowpass);
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  try {
    const Image truth = config.image ? *config.image : load_image(config.image_path);
    const SamplingPattern pattern =
        experiment_pattern(truth.rows(), truth.cols(), config.method, config.pattern, config.rate, config.lowpass);
    const Mask mask = build_mask(pattern);
    const Spectrum s_masked = apply_mask(dft2_centered(truth), mask);

    const auto t0 = std::chrono::steady_clock::now();
    Image rec = reconstruct(config, s_masked, mask);
    const auto t1 = std::chrono::steady_clock::now();

    ExperimentOutput out;
    ResultRow& row = out.row;
    row.image_id = config.image_id.empty() ? std::filesystem::path(config.image_path).stem().string() : config.image_id;
    row.method = config.method;
    row.rate = config.rate;
    row.lowpass = config.lowpass;
    row.pattern = config.pattern;
    const QualityReport q = evaluate(truth, rec, s_masked, mask);
    row.psnr_db = q.psnr_db;
    row.tv_value = q.tv_value;
    row.data_fidelity = q.data_fidelity;
    row.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.params = canonical_params(config);
    row.digest = fnv1a_hex(row.params);

    if (config.save_image) {
      const std::filesystem::path dir = config.output_dir.empty() ? "." : config.output_dir;
      std::filesystem::create_directories(dir);
      std::ostringstream name;
      name << row.image_id << "_" << to_string(config.method) << "_" << to_string(config.pattern) << "_r"
           << config.rate << "_L" << config.lowpass << ".png";
      save_image(rec, (dir / name.str()).string());
    }
    out.reconstruction = std::move(rec);
    return out;
  } catch (const InsufficientCalibration& e) {
    throw InsufficientCalibration(describe(config) + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(describe(config) + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(describe(config) + e.what());
  }
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
  std::vector<CatalogEntry> out;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string field;
    CatalogEntry e;
    bool any = false;
    std::set<std::string> seen;
    try {
      while (fields >> field) {
        any = true;
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        if (key == "table")
          e.table = std::stoi(value);
        else if (key == "image")
          e.image_id = value;
        else if (key == "r")
          e.rate = std::stoi(value);
        else if (key == "L")
          e.lowpass = std::stoi(value);
        else if (key == "pattern")
          e.pattern = parse_pattern_kind(value);
        else if (key == "lambda")
          e.lambda = std::stod(value);
        else if (key == "smooth")
          e.hybrid.smoothing = std::stoi(value);
        else if (key == "iters")
          e.hybrid.iterations = std::stoi(value);
        else if (key == "mu")
          e.hybrid.mu = std::stod(value);
        else if (key == "eps")
          e.hybrid.epsilon = std::stod(value);
        else if (key == "gamma")
          e.hybrid.gamma1 = e.hybrid.gamma2 = std::stoi(value);
        else
          e.reference[parse_method(key)] = std::stod(value);
      }
    } catch (const ConfigError& err) {
      throw ConfigError("catalog line " + std::to_string(lineno) + ": " + err.what());
    } catch (const std::exception&) {
      throw ConfigError("catalog line " + std::to_string(lineno) + ": malformed number in '" + field + "'");
    }
    if (!any) continue;
    if (e.table <= 0 || e.image_id.empty() || e.rate <= 0 || e.lowpass <= 0 || e.reference.empty())
      throw ConfigError("catalog line " + std::to_string(lineno) + ": incomplete entry");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

std::string find_image(const std::string& dir, const std::string& image_id) {
  for (const char* ext : {".pgm", ".png"}) {
    const std::filesystem::path p = std::filesystem::path(dir) / (image_id + ext);
    if (std::filesystem::exists(p)) return p.string();
  }
  throw ConfigError("missing image: " + image_id + " (expected " + image_id + ".pgm or .png in " + dir + ")");
}

int thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RECON_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("RECON_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<TableRow> reproduce_table(int table, const std::vector<CatalogEntry>& catalog,
                                      const std::string& image_dir, const TableOptions& options) {
  std::map<std::string, Image> images;
  for (const CatalogEntry& e : catalog) {
    if (e.table != table || (options.filter && !options.filter(e)) || images.count(e.image_id)) continue;
    images.emplace(e.image_id, load_image(find_image(image_dir, e.image_id)));
  }
  return reproduce_table(table, catalog, images, options);
}

std::vector<TableRow> reproduce_table(int table, const std::vector<CatalogEntry>& catalog,
                                      const std::map<std::string, Image>& images, const TableOptions& options) {
  std::vector<const CatalogEntry*> entries;
  for (const CatalogEntry& e : catalog)
    if (e.table == table && (!options.filter || options.filter(e))) entries.push_back(&e);
  if (entries.empty()) throw ConfigError("no catalog entries for table " + std::to_string(table));
  for (const CatalogEntry* e : entries)
    if (!images.count(e->image_id)) throw ConfigError("missing image: " + e->image_id);

  std::vector<std::vector<TableRow>> results(entries.size());
  auto run_entry = [&](std::size_t idx) {
    const CatalogEntry& e = *entries[idx];
    ExperimentConfig base;
    base.image_id = e.image_id;
    base.image = images.at(e.image_id);
    base.pattern = e.pattern;
    base.rate = e.rate;
    base.lowpass = e.lowpass;
    base.tv.lambda = e.lambda;
    base.hybrid = e.hybrid;
    base.output_dir = options.output_dir;
    base.save_image = options.save_images;

    std::optional<Image> tv_image;
    std::optional<double> tv_psnr;
    for (const auto& [method, ref] : e.reference) {
      ExperimentConfig c = base;
      c.method = method;
      if (method == Method::kHybrid) {
        if (!tv_image) {
          ExperimentConfig t = base;
          t.method = Method::kTv;
          t.save_image = false;
          ExperimentOutput tv_out = run_experiment(t);
          tv_psnr = tv_out.row.psnr_db;
          tv_image = std::move(tv_out.reconstruction);
        }
        c.hybrid_init = tv_image;
      }
      ExperimentOutput out = run_experiment(c);
      TableRow row{table, out.row, ref, std::nullopt};
      if (method == Method::kTv) {
        tv_psnr = out.row.psnr_db;
        tv_image = std::move(out.reconstruction);
      }
      results[idx].push_back(std::move(row));
    }
    for (TableRow& row : results[idx])
      if (row.result.method == Method::kHybrid && tv_psnr) row.hybrid_ge_tv = row.result.psnr_db >= *tv_psnr;
  };

  const int threads = std::min<int>(thread_budget(options.threads), static_cast<int>(entries.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        run_entry(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = entries.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TableRow> out;
  for (auto& r : results)
    for (auto& row : r) out.push_back(std::move(row));
  return out;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "table,image,method,pattern,r,L,psnr_db,paper_psnr_db,delta_db,tv_value,data_fidelity,wall_time_ms,"
        "digest,hybrid_ge_tv,params\n";
  os << std::fixed;
  for (const TableRow& t : rows) {
    const ResultRow& r = t.result;
    os << t.table << ',' << r.image_id << ',' << to_string(r.method) << ',' << to_string(r.pattern) << ',' << r.rate
       << ',' << r.lowpass << ',';
    if (r.psnr_db == kInfinitePsnr)
      os << "inf";
    else
      os << std::setprecision(4) << r.psnr_db;
    os << ',';
    if (t.paper_psnr) os << std::setprecision(4) << *t.paper_psnr;
    os << ',';
    if (t.paper_psnr && r.psnr_db != kInfinitePsnr) os << std::setprecision(4) << r.psnr_db - *t.paper_psnr;
    os << ',' << std::setprecision(4) << r.tv_value << ',' << std::setprecision(6) << r.data_fidelity << ','
       << std::setprecision(1) << r.wall_time_ms << ',' << r.digest << ',';
    if (t.hybrid_ge_tv) os << (*t.hybrid_ge_tv ? "pass" : "fail");
    os << ',' << r.params << '\n';
  }
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
    if (!out) throw ConfigError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace recon
