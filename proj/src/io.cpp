#include "chroma_sr/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

// jpeglib.h expects FILE and size_t to be declared first.
#include <jpeglib.h>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

namespace {

ColorImage from_interleaved(const std::uint8_t* rgb, int width, int height) {
  ColorImage img(width, height);
  for (int r = 0; r < height; ++r)
    for (int k = 0; k < width; ++k)
      for (int c = 0; c < kChannels; ++c)
        img.at(c, r, k) = rgb[(static_cast<std::size_t>(r) * width + k) * 3 + c];
  return img;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

ColorImage read_png(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError(path, std::string("cannot read PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError(path, "cannot decode PNG: " + msg);
  }
  return from_interleaved(buffer.data(), static_cast<int>(image.width),
                          static_cast<int>(image.height));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

ColorImage read_jpeg(const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!file) throw IoError(path, "cannot open file");

  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  std::vector<std::uint8_t> buffer;
  int width = 0;
  int height = 0;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError(path, std::string("cannot decode JPEG: ") + jerr.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  buffer.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = buffer.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return from_interleaved(buffer.data(), width, height);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

constexpr char kFixtureMagic[4] = {'C', 'S', 'R', '1'};

}  // namespace

ColorImage read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");
  std::array<unsigned char, 8> sig{};
  in.read(reinterpret_cast<char*>(sig.data()), sig.size());
  if (in.gcount() < 3) throw IoError(path, "file too short to be an image");
  in.close();
  if (png_sig_cmp(sig.data(), 0, 8) == 0) return read_png(path);
  if (sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) return read_jpeg(path);
  throw IoError(path, "unsupported image format (expected PNG or JPEG)");
}

ColorImage quantize_8bit(const ColorImage& img) {
  ColorImage out = img;
  for (int c = 0; c < kChannels; ++c)
    for (double& v : out.plane(c).values()) v = to_byte(v);
  return out;
}

void write_png(const std::string& path, const ColorImage& img) {
  if (img.empty()) throw InvalidArgument("write_png: empty image");
  std::vector<std::uint8_t> buffer(static_cast<std::size_t>(img.width()) * img.height() * 3);
  for (int r = 0; r < img.height(); ++r)
    for (int k = 0; k < img.width(); ++k)
      for (int c = 0; c < kChannels; ++c)
        buffer[(static_cast<std::size_t>(r) * img.width() + k) * 3 + c] = to_byte(img.at(c, r, k));

  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError(path, std::string("cannot write PNG: ") + image.message);
  }
}

void write_fixture(const std::string& path, const std::vector<Plane>& planes) {
  if (planes.empty()) throw InvalidArgument("write_fixture: no planes");
  const int w = planes.front().width();
  const int h = planes.front().height();
  for (const Plane& p : planes) {
    if (p.width() != w || p.height() != h) throw InvalidArgument("write_fixture: ragged planes");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path, "cannot open for writing");
  os.write(kFixtureMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(w));
  put_u32(os, static_cast<std::uint32_t>(h));
  put_u32(os, static_cast<std::uint32_t>(planes.size()));
  for (const Plane& p : planes)
    for (double v : p.values()) put_f64(os, v);
  if (!os) throw IoError(path, "write failed");
}

std::vector<Plane> read_fixture(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");
  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (in.gcount() != 16 || std::memcmp(header, kFixtureMagic, 4) != 0) {
    throw IoError(path, "not a CSR1 fixture");
  }
  const std::uint32_t w = get_u32(header + 4);
  const std::uint32_t h = get_u32(header + 8);
  const std::uint32_t n = get_u32(header + 12);
  std::vector<Plane> planes;
  planes.reserve(n);
  std::vector<unsigned char> buf(static_cast<std::size_t>(w) * h * 8);
  for (std::uint32_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) throw IoError(path, "truncated fixture");
    Plane p(static_cast<int>(w), static_cast<int>(h));
    auto vals = p.values();
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = get_f64(buf.data() + 8 * k);
    planes.push_back(std::move(p));
  }
  return planes;
}

void write_fixture(const std::string& path, const ColorImage& img) {
  write_fixture(path, std::vector<Plane>{img.plane(0), img.plane(1), img.plane(2)});
}

ColorImage read_color_fixture(const std::string& path) {
  auto planes = read_fixture(path);
  if (planes.size() != kChannels) throw IoError(path, "fixture does not hold 3 planes");
  return ColorImage({std::move(planes[0]), std::move(planes[1]), std::move(planes[2])});
}

void write_matrix_fixture(const std::string& path, const Matrix& m) {
  Plane p(static_cast<int>(m.cols()), static_cast<int>(m.rows()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) p(r, c) = m(r, c);
  write_fixture(path, std::vector<Plane>{p});
}

Matrix read_matrix_fixture(const std::string& path) {
  auto planes = read_fixture(path);
  if (planes.size() != 1) throw IoError(path, "matrix fixture must hold one plane");
  const Plane& p = planes.front();
  Matrix m(p.height(), p.width());
  for (int r = 0; r < p.height(); ++r)
    for (int c = 0; c < p.width(); ++c) m(r, c) = p(r, c);
  return m;
}

}  // namespace chroma_sr
