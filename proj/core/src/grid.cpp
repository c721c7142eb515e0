#include "recon/grid.hpp"

#include <cmath>

namespace recon {

ComplexImage to_complex(const Image& a) {
  ComplexImage out(a.rows(), a.cols());
  auto src = a.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return out;
}

Image real_part(const ComplexImage& a) {
  Image out(a.rows(), a.cols());
  auto src = a.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].real();
  return out;
}

Image imag_part(const ComplexImage& a) {
  Image out(a.rows(), a.cols());
  auto src = a.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].imag();
  return out;
}

double frobenius_norm(const Image& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

double frobenius_norm(const Grid<Complex>& a) {
  double s = 0.0;
  for (const Complex& v : a.values()) s += std::norm(v);
  return std::sqrt(s);
}

double squared_distance(const Image& a, const Image& b) {
  require_same_shape(a, b, "squared_distance");
  auto x = a.values();
  auto y = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double squared_distance(const Grid<Complex>& a, const Grid<Complex>& b) {
  require_same_shape(a, b, "squared_distance");
  auto x = a.values();
  auto y = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return s;
}

}  // namespace recon
