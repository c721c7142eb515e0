#include "recon/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

namespace recon {

namespace {

std::string extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Next header token of a PNM file, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

Image from_bytes(const std::vector<std::uint8_t>& bytes, int w, int h, double maxval) {
  Image a(h, w);
  for (std::size_t i = 0; i < bytes.size(); ++i) a.values()[i] = bytes[i] / maxval;
  return a;
}

std::vector<std::uint8_t> to_bytes(const Image& a) {
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = std::clamp(a.values()[i], 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  return out;
}

Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open image: " + path);
  if (pnm_token(in) != "P5") throw ConfigError("unsupported format: only binary PGM (P5) is read: " + path);
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pnm_token(in));
    h = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw ConfigError("malformed PGM header: " + path);
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) throw ConfigError("unsupported format: PGM must be 8-bit: " + path);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw ConfigError("truncated PGM data: " + path);
  return from_bytes(bytes, w, h, static_cast<double>(maxval));
}

Image load_png(const std::string& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str()))
    throw ConfigError("cannot read PNG " + path + ": " + img.message);
  img.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> bytes(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, bytes.data(), 0, nullptr)) {
    png_image_free(&img);
    throw ConfigError("cannot decode PNG " + path + ": " + img.message);
  }
  return from_bytes(bytes, static_cast<int>(img.width), static_cast<int>(img.height), 255.0);
}

}  // namespace

Image load_image(const std::string& path) {
  const std::string ext = extension(path);
  Image a;
  if (ext == ".pgm")
    a = load_pgm(path);
  else if (ext == ".png")
    a = load_png(path);
  else
    throw ConfigError("unsupported format: " + path + " (expected .pgm or .png)");
  if (a.rows() % 2 != 0 || a.cols() % 2 != 0) throw ConfigError("image dimensions must be even: " + path);
  return a;
}

void save_image(const Image& a, const std::string& path) {
  const std::string ext = extension(path);
  const std::vector<std::uint8_t> bytes = to_bytes(a);
  if (ext == ".pgm") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write image: " + path);
    out << "P5\n" << a.cols() << ' ' << a.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("cannot write image: " + path);
  } else if (ext == ".png") {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(a.cols());
    img.height = static_cast<png_uint_32>(a.rows());
    img.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&img, path.c_str(), 0, bytes.data(), 0, nullptr))
      throw ConfigError("cannot write PNG " + path + ": " + img.message);
  } else {
    throw ConfigError("unsupported format: " + path + " (expected .pgm or .png)");
  }
}

}  // namespace recon
