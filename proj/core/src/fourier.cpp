#include "recon/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>

namespace recon {

namespace {

int lowest_index(int n) { return -(n / 2); }
int highest_index(int n) { return n - n / 2 - 1; }

/// Centered index of -nu under periodic wrap.
int mirror_index(int nu, int n) {
  int r = -nu;
  if (r > highest_index(n)) r -= n;
  return r;
}

std::vector<int> lowpass_rows(int lowpass, int n) {
  std::vector<int> out;
  if (lowpass <= 0) return out;
  if (lowpass >= n) return centered_index_set(n);
  const int half = lowpass / 2;
  for (int k = -half; k <= half; ++k) out.push_back(k);
  return out;
}

std::vector<int> merge_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

/// Stride sets must lie inside Lambda_N without the unpaired index -N/2.
bool stride_set_fits(const std::vector<int>& set, int n) {
  const int lo = (n % 2 == 0) ? lowest_index(n) + 1 : lowest_index(n);
  const int hi = highest_index(n);
  return std::all_of(set.begin(), set.end(), [&](int v) { return v >= lo && v <= hi; });
}

std::vector<int> stride_set(int stride, int param) {
  switch (stride) {
    case 2: return odd_index_set(2 * param);
    case 3: return stride3_index_set(2 * param);
    case 4: return stride4_index_set(2 * param + 1);
    default: throw ConfigError("stride must be 2, 3 or 4");
  }
}

int extent_of(int stride, int param) { return stride == 4 ? 2 * param + 1 : 2 * param; }

void check_lowpass_width(int lowpass, int n) {
  if (lowpass < 0 || lowpass > n) throw ConfigError("low-pass width must satisfy 0 <= L <= N");
  if (lowpass % 2 == 0 && lowpass != 0 && lowpass != n) throw ConfigError("low-pass width L must be odd");
}

void check_grid(int n, int m) {
  if (n < 1 || m < 1) throw ConfigError("grid dimensions must be positive");
}

// FFTW planning is not thread safe; execution on distinct buffers is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* scratch = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    fftw_plan p = fftw_plan_dft_2d(rows, cols, scratch, scratch, sign, FFTW_ESTIMATE);
    fftw_free(scratch);
    plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

/// Centered transform: shift so that centered index 0 sits at position 0,
/// run the standard DFT, shift back, scale by 1/sqrt(NM).
Grid<Complex> centered_transform(const Grid<Complex>& in, int sign) {
  const int rows = in.rows();
  const int cols = in.cols();
  if (rows % 2 != 0 || cols % 2 != 0) throw ConfigError("centered DFT requires even dimensions");
  const int hr = rows / 2;
  const int hc = cols / 2;
  const std::size_t total = static_cast<std::size_t>(rows) * cols;
  FftwBuffer buf(total);
  auto* b = reinterpret_cast<Complex*>(buf.ptr);
  for (int i = 0; i < rows; ++i) {
    const int si = (i + hr) % rows;
    for (int j = 0; j < cols; ++j) b[static_cast<std::size_t>(si) * cols + (j + hc) % cols] = in(i, j);
  }
  fftw_execute_dft(PlanCache::instance().get(rows, cols, sign), buf.ptr, buf.ptr);
  const double scale = 1.0 / std::sqrt(static_cast<double>(total));
  Grid<Complex> out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const int si = (i + hr) % rows;
    for (int j = 0; j < cols; ++j) out(i, j) = b[static_cast<std::size_t>(si) * cols + (j + hc) % cols] * scale;
  }
  return out;
}

}  // namespace

std::vector<int> centered_index_set(int n) {
  if (n < 1) throw ConfigError("index set size must be positive");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = lowest_index(n); k <= highest_index(n); ++k) out.push_back(k);
  return out;
}

std::vector<int> odd_index_set(int k) {
  if (k < 0 || k % 2 != 0) throw ConfigError("odd index set needs an even K >= 0");
  std::vector<int> out;
  for (int v = -k + 1; v <= k - 1; v += 2) out.push_back(v);
  return out;
}

std::vector<int> stride3_index_set(int k) {
  if (k < 0 || k % 2 != 0) throw ConfigError("stride-3 set needs an even K >= 0");
  const int kappa = k / 2;
  std::vector<int> out;
  for (int v = -3 * kappa + 2; v <= -1; v += 3) out.push_back(v);
  for (int v = 2; v <= 3 * kappa - 1; v += 3) out.push_back(v);
  return out;
}

std::vector<int> stride4_index_set(int k) {
  if (k < 1 || k % 2 != 1) throw ConfigError("stride-4 set needs an odd K >= 1");
  const int kappa = (k - 1) / 2;
  std::vector<int> out;
  for (int v = -4 * kappa - 1; v <= -1; v += 4) out.push_back(v);
  for (int v = 3; v <= 4 * kappa - 1; v += 4) out.push_back(v);
  return out;
}

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::kRowsStride2: return "rows2";
    case PatternKind::kRowsStride3: return "rows3";
    case PatternKind::kRowsStride4: return "rows4";
    case PatternKind::kLowpassOnly: return "lowpass";
    case PatternKind::kBox: return "box";
  }
  return "unknown";
}

PatternKind parse_pattern_kind(const std::string& s) {
  if (s == "rows2" || s == "rows-stride2") return PatternKind::kRowsStride2;
  if (s == "rows3" || s == "rows-stride3") return PatternKind::kRowsStride3;
  if (s == "rows4" || s == "rows-stride4") return PatternKind::kRowsStride4;
  if (s == "lowpass" || s == "rows-lowpass-only") return PatternKind::kLowpassOnly;
  if (s == "box") return PatternKind::kBox;
  throw ConfigError("unknown pattern kind '" + s + "'");
}

bool SamplingPattern::is_hermitian_symmetric() const {
  auto symmetric = [](const std::vector<int>& set, int n) {
    return std::all_of(set.begin(), set.end(), [&](int v) {
      return std::binary_search(set.begin(), set.end(), mirror_index(v, n));
    });
  };
  return symmetric(rows, rows_n) && symmetric(cols, cols_m);
}

std::string SamplingPattern::describe() const {
  std::ostringstream os;
  os << to_string(kind) << ',' << rows_n << ',' << cols_m << ',' << rate << ',' << lowpass << ',' << extent << ','
     << (kind == PatternKind::kBox ? acquired_count() : static_cast<long>(rows.size()));
  return os.str();
}

SamplingPattern build_row_pattern(int n, int m, int rate, int lowpass, int stride) {
  check_grid(n, m);
  if (rate < 1) throw ConfigError("reduction rate must be >= 1");
  check_lowpass_width(lowpass, n);
  const int budget = n / rate;
  if (lowpass > budget) {
    std::ostringstream os;
    os << "invalid budget: L=" << lowpass << " exceeds floor(N/r)=" << budget;
    throw ConfigError(os.str());
  }
  if (stride < 2 || stride > 4) throw ConfigError("stride must be 2, 3 or 4");

  const auto low = lowpass_rows(lowpass, n);
  SamplingPattern p;
  p.kind = stride == 2 ? PatternKind::kRowsStride2
                       : (stride == 3 ? PatternKind::kRowsStride3 : PatternKind::kRowsStride4);
  p.rows_n = n;
  p.cols_m = m;
  p.rate = rate;
  p.lowpass = lowpass;
  p.rows = low;
  p.extent = 0;
  for (int param = 0;; ++param) {
    auto set = stride_set(stride, param);
    if (!stride_set_fits(set, n)) break;
    auto rows = merge_sorted(low, set);
    if (static_cast<int>(rows.size()) > budget) break;
    p.rows = std::move(rows);
    p.extent = extent_of(stride, param);
  }
  p.cols = centered_index_set(m);
  return p;
}

SamplingPattern build_lowpass_pattern(int n, int m, int lowpass) {
  check_grid(n, m);
  check_lowpass_width(lowpass, n);
  SamplingPattern p;
  p.kind = PatternKind::kLowpassOnly;
  p.rows_n = n;
  p.cols_m = m;
  p.rate = 1;
  p.lowpass = lowpass;
  p.rows = lowpass_rows(lowpass, n);
  p.cols = centered_index_set(m);
  return p;
}

SamplingPattern build_box_pattern(int n, int m, int rate, int lowpass) {
  check_grid(n, m);
  if (rate < 1) throw ConfigError("reduction rate must be >= 1");
  check_lowpass_width(lowpass, n);
  check_lowpass_width(lowpass, m);
  const long budget = static_cast<long>(n) * m / rate;
  if (static_cast<long>(lowpass) * lowpass > budget) throw ConfigError("invalid budget: L*L exceeds floor(NM/r)");
  const auto low_n = lowpass_rows(lowpass, n);
  const auto low_m = lowpass_rows(lowpass, m);
  SamplingPattern p;
  p.kind = PatternKind::kBox;
  p.rows_n = n;
  p.cols_m = m;
  p.rate = rate;
  p.lowpass = lowpass;
  p.rows = low_n;
  p.cols = low_m;
  for (int k = 0;; k += 2) {
    auto set = odd_index_set(k);
    if (!stride_set_fits(set, n) || !stride_set_fits(set, m)) break;
    auto rows = merge_sorted(low_n, set);
    auto cols = merge_sorted(low_m, set);
    if (static_cast<long>(rows.size()) * static_cast<long>(cols.size()) > budget) break;
    p.rows = std::move(rows);
    p.cols = std::move(cols);
    p.extent = k;
  }
  return p;
}

SamplingPattern build_lowpass_box_pattern(int n, int m, int lowpass) {
  check_grid(n, m);
  check_lowpass_width(lowpass, n);
  check_lowpass_width(lowpass, m);
  SamplingPattern p;
  p.kind = PatternKind::kBox;
  p.rows_n = n;
  p.cols_m = m;
  p.rate = 1;
  p.lowpass = lowpass;
  p.rows = lowpass_rows(lowpass, n);
  p.cols = lowpass_rows(lowpass, m);
  return p;
}

SamplingPattern pattern_from_rows(int n, int m, std::vector<int> rows) {
  check_grid(n, m);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  for (int v : rows)
    if (v < lowest_index(n) || v > highest_index(n)) throw ConfigError("row index outside Lambda_N");
  SamplingPattern p;
  p.kind = PatternKind::kRowsStride2;
  p.rows_n = n;
  p.cols_m = m;
  p.rows = std::move(rows);
  p.cols = centered_index_set(m);
  return p;
}

long Mask::count() const {
  long c = 0;
  for (double v : values()) c += v != 0.0 ? 1 : 0;
  return c;
}

bool Mask::is_hermitian_symmetric() const {
  for (int k1 = lowest_index(rows()); k1 <= highest_index(rows()); ++k1)
    for (int k2 = lowest_index(cols()); k2 <= highest_index(cols()); ++k2)
      if (acquired(k1, k2) != acquired(mirror_index(k1, rows()), mirror_index(k2, cols()))) return false;
  return true;
}

Mask Mask::full(int rows, int cols) {
  Mask m(rows, cols);
  m.fill(1.0);
  return m;
}

Mask build_mask(const SamplingPattern& pattern) {
  Mask mask(pattern.rows_n, pattern.cols_m);
  for (int r : pattern.rows)
    for (int c : pattern.cols) mask.at(r, c) = 1.0;
  return mask;
}

Spectrum apply_mask(const Spectrum& s, const Mask& mask) {
  require_same_shape(s, mask, "apply_mask");
  Spectrum out(s.rows(), s.cols());
  auto src = s.values();
  auto mv = mask.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = mv[i] != 0.0 ? src[i] : Complex{};
  return out;
}

Spectrum dft2_centered(const ComplexImage& a) { return Spectrum(centered_transform(a, FFTW_FORWARD)); }

Spectrum dft2_centered(const Image& a) { return dft2_centered(to_complex(a)); }

ComplexImage idft2_centered(const Grid<Complex>& s) { return centered_transform(s, FFTW_BACKWARD); }

std::pair<Spectrum, Spectrum> hermitian_split(const Spectrum& s, const Mask& mask) {
  require_same_shape(s, mask, "hermitian_split");
  if (!mask.is_hermitian_symmetric())
    throw ConfigError("symmetry violation: sampling pattern is not Hermitian symmetric");
  const int n = s.rows();
  const int m = s.cols();
  Spectrum re(n, m), im(n, m);
  const Complex two_i(0.0, 2.0);
  for (int k1 = lowest_index(n); k1 <= highest_index(n); ++k1) {
    for (int k2 = lowest_index(m); k2 <= highest_index(m); ++k2) {
      if (!mask.acquired(k1, k2)) continue;
      const Complex a = s.at(k1, k2);
      const Complex b = std::conj(s.at(mirror_index(k1, n), mirror_index(k2, m)));
      re.at(k1, k2) = 0.5 * (a + b);
      im.at(k1, k2) = (a - b) / two_i;
    }
  }
  return {std::move(re), std::move(im)};
}

}  // namespace recon
