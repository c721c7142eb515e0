#pragma once

#include <string>
#include <utility>
#include <vector>

#include "recon/grid.hpp"

namespace recon {

// ---------------------------------------------------------------------------
// Index sets
// ---------------------------------------------------------------------------

/// {-N/2, ..., N/2-1} for even N, {-(N-1)/2, ..., (N-1)/2} for odd N.
std::vector<int> centered_index_set(int n);

/// The K odd integers -K+1, -K+3, ..., K-1 (K even).
std::vector<int> odd_index_set(int k);

/// Every third row outside the origin: {-3k+2, ..., -4, -1} u {2, 5, ..., 3k-1}
/// with K = 2k entries (K even).
std::vector<int> stride3_index_set(int k);

/// Every fourth row: {-4k-1, ..., -5, -1} u {3, 7, ..., 4k-1} with K = 2k+1
/// entries (K odd).
std::vector<int> stride4_index_set(int k);

// ---------------------------------------------------------------------------
// Sampling patterns and masks
// ---------------------------------------------------------------------------

enum class PatternKind { kRowsStride2, kRowsStride3, kRowsStride4, kLowpassOnly, kBox };

std::string to_string(PatternKind kind);
PatternKind parse_pattern_kind(const std::string& s);

/// Acquired Fourier rows (and, for the box kind, columns) of an N x M grid.
struct SamplingPattern {
  PatternKind kind = PatternKind::kRowsStride2;
  int rows_n = 0;  // N
  int cols_m = 0;  // M
  int rate = 1;    // r
  int lowpass = 0; // L
  int extent = 0;  // K of the stride set
  std::vector<int> rows;  // sorted acquired centered row indices
  std::vector<int> cols;  // sorted acquired centered column indices (all of Lambda_M for row kinds)

  bool is_row_pattern() const { return kind != PatternKind::kBox; }

  /// Number of acquired (row, column) pairs.
  long acquired_count() const { return static_cast<long>(rows.size()) * static_cast<long>(cols.size()); }

  /// nu in rows implies -nu (mod N) in rows, likewise for columns.
  bool is_hermitian_symmetric() const;

  /// `kind,N,M,r,L,K,|rows|` (|rows| counts index pairs for the box kind).
  std::string describe() const;
};

/// Row pattern Lambda_L u S_K with the largest stride extent K such that at
/// most floor(N/r) rows are acquired. Stride 2, 3 or 4. The index -N/2 is
/// never placed in a stride set.
SamplingPattern build_row_pattern(int n, int m, int rate, int lowpass, int stride);

/// Only the L centered rows. L may equal N (full sampling).
SamplingPattern build_lowpass_pattern(int n, int m, int lowpass);

/// (Lambda_L u Lambda_K^(2)) x (Lambda_L u Lambda_K^(2)) with the largest K
/// such that at most floor(NM/r) index pairs are acquired.
SamplingPattern build_box_pattern(int n, int m, int rate, int lowpass);

/// Box pattern with the stride part omitted (low-pass box L x L).
SamplingPattern build_lowpass_box_pattern(int n, int m, int lowpass);

/// Pattern from an explicit row set (all columns acquired).
SamplingPattern pattern_from_rows(int n, int m, std::vector<int> rows);

/// Binary matrix P with P(nu1, nu2) = 1 iff (nu1, nu2) is acquired.
class Mask : public Grid<double> {
 public:
  Mask() = default;
  Mask(int rows, int cols) : Grid<double>(rows, cols, 0.0) {}

  bool acquired(int nu1, int nu2) const { return at(nu1, nu2) != 0.0; }
  bool acquired_wrapped(int nu1, int nu2) const { return wrapped(nu1, nu2) != 0.0; }
  long count() const;
  bool is_full() const { return count() == static_cast<long>(size()); }
  bool is_hermitian_symmetric() const;

  /// Mask with every entry one.
  static Mask full(int rows, int cols);
};

Mask build_mask(const SamplingPattern& pattern);

/// Pointwise product mask o s.
Spectrum apply_mask(const Spectrum& s, const Mask& mask);

// ---------------------------------------------------------------------------
// Centered unitary DFT
// ---------------------------------------------------------------------------

/// a_hat(nu) = (NM)^(-1/2) sum_k a(k) w_N^(k1 nu1) w_M^(k2 nu2), w_N = exp(-2 pi i/N),
/// all indices centered. Both dimensions must be even.
Spectrum dft2_centered(const ComplexImage& a);
Spectrum dft2_centered(const Image& a);

/// Exact inverse of dft2_centered.
ComplexImage idft2_centered(const Grid<Complex>& s);

/// Parts of a masked spectrum belonging to the real and imaginary parts of the
/// image: S_R(nu) = (S(nu) + conj S(-nu)) / 2, S_I(nu) = (S(nu) - conj S(-nu)) / 2i,
/// so that S = S_R + i S_I on the mask. Requires a Hermitian-symmetric mask.
std::pair<Spectrum, Spectrum> hermitian_split(const Spectrum& s, const Mask& mask);

}  // namespace recon
