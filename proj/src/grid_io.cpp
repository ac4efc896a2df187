#include "l1spline/grid_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace l1spline::io {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

double parse_value(std::string_view token) {
  if (token == "NaN" || token == "nan" || token == "NAN") return std::numeric_limits<double>::quiet_NaN();
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw std::runtime_error("malformed number '" + std::string(token) + "'");
  }
  return v;
}

std::size_t parse_extent(std::string_view token) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || end != token.data() + token.size() || v == 0) {
    throw std::runtime_error("malformed extent '" + std::string(token) + "'");
  }
  return v;
}

std::size_t parse_sample(std::string_view token) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw std::runtime_error("malformed PGM sample '" + std::string(token) + "'");
  }
  return v;
}

GridTensor shaped(std::vector<double> values, const std::optional<Shape>& declared) {
  if (values.empty()) throw std::runtime_error("input holds no values");
  if (!declared) return GridTensor::from_vector(std::move(values));
  const std::size_t expected = element_count(*declared);
  if (expected != values.size()) {
    throw std::runtime_error("declared shape holds " + std::to_string(expected) + " values but input has " +
                             std::to_string(values.size()));
  }
  return GridTensor(*declared, std::move(values));
}

GridFile parse_csv(std::string_view contents, const std::optional<Shape>& declared) {
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 1) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected one value per line");
    }
    values.push_back(parse_value(tokens[0]));
  }
  return {shaped(std::move(values), declared), Format::csv, {}};
}

GridFile parse_grid_text(std::string_view contents, const std::optional<Shape>& declared) {
  const std::size_t eol = std::min(contents.find('\n'), contents.size());
  const auto header = split_whitespace(contents.substr(0, eol));
  if (header.empty() || header[0] != "#shape" || header.size() < 2) {
    throw std::runtime_error("grid file must start with '#shape n1 ... nm'");
  }
  Shape shape;
  for (std::size_t i = 1; i < header.size(); ++i) shape.push_back(parse_extent(header[i]));
  if (declared && *declared != shape) throw std::runtime_error("declared shape contradicts the file header");
  std::vector<double> values;
  for (auto token : split_whitespace(contents.substr(std::min(eol + 1, contents.size())))) {
    values.push_back(parse_value(token));
  }
  return {shaped(std::move(values), shape), Format::grid, {}};
}

GridFile parse_pgm(std::string_view contents) {
  if (contents.size() < 2 || contents[0] != 'P' || (contents[1] != '2' && contents[1] != '5')) {
    throw std::runtime_error("not a P2/P5 PGM file");
  }
  const bool binary = contents[1] == '5';
  std::size_t pos = 2;
  auto next_header_token = [&]() {
    while (pos < contents.size()) {
      if (is_space(contents[pos])) {
        ++pos;
      } else if (contents[pos] == '#') {
        while (pos < contents.size() && contents[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < contents.size() && !is_space(contents[pos])) ++pos;
    if (pos == start) throw std::runtime_error("truncated PGM header");
    return contents.substr(start, pos - start);
  };
  const std::size_t width = parse_extent(next_header_token());
  const std::size_t height = parse_extent(next_header_token());
  const std::size_t maxval = parse_extent(next_header_token());
  if (maxval > 65535) throw std::runtime_error("PGM maxval exceeds 65535");

  const std::size_t n = width * height;
  std::vector<double> values;
  values.reserve(n);
  if (binary) {
    ++pos;  // single whitespace byte after maxval
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    if (contents.size() < pos + n * bytes) throw std::runtime_error("truncated PGM raster");
    for (std::size_t i = 0; i < n; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(contents.data() + pos + i * bytes);
      const unsigned sample = bytes == 2 ? (static_cast<unsigned>(p[0]) << 8) | p[1] : p[0];
      values.push_back(static_cast<double>(sample) / static_cast<double>(maxval));
    }
  } else {
    for (auto token : split_whitespace(contents.substr(pos))) {
      values.push_back(static_cast<double>(parse_sample(token)) / static_cast<double>(maxval));
    }
    if (values.size() != n) throw std::runtime_error("PGM raster size does not match header");
  }
  for (double v : values) {
    if (v > 1.0) throw std::runtime_error("PGM sample exceeds maxval");
  }
  return {GridTensor(Shape{height, width}, std::move(values)), Format::pgm,
          PgmInfo{binary, static_cast<unsigned>(maxval)}};
}

}  // namespace

std::string format_value(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("cannot format value");
  return std::string(buf, end);
}

Format detect_format(const std::filesystem::path& path, std::string_view contents) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") return Format::pgm;
  if (contents.size() >= 2 && contents[0] == 'P' && (contents[1] == '2' || contents[1] == '5')) return Format::pgm;
  if (contents.starts_with("#shape")) return Format::grid;
  return Format::csv;
}

GridFile parse_grid(std::string_view contents, std::optional<Format> format, const std::optional<Shape>& declared_shape) {
  const Format f = format.value_or(detect_format({}, contents));
  switch (f) {
    case Format::csv:
      return parse_csv(contents, declared_shape);
    case Format::grid:
      return parse_grid_text(contents, declared_shape);
    case Format::pgm: {
      GridFile file = parse_pgm(contents);
      if (declared_shape && *declared_shape != file.values.shape()) {
        throw std::runtime_error("declared shape contradicts the PGM header");
      }
      return file;
    }
  }
  throw std::logic_error("unhandled format");
}

std::string format_grid(const GridTensor& values, Format format, const PgmInfo& pgm) {
  std::string out;
  switch (format) {
    case Format::csv:
      for (double v : values.values()) {
        out += format_value(v);
        out += '\n';
      }
      return out;
    case Format::grid: {
      out = "#shape";
      for (auto e : values.shape()) out += ' ' + std::to_string(e);
      out += '\n';
      const std::size_t row = values.shape().back();
      for (std::size_t i = 0; i < values.size(); ++i) {
        out += format_value(values[i]);
        out += (i + 1) % row == 0 ? '\n' : ' ';
      }
      return out;
    }
    case Format::pgm: {
      if (values.rank() != 2) throw std::invalid_argument("PGM output needs a 2-D grid");
      if (pgm.maxval == 0 || pgm.maxval > 65535) throw std::invalid_argument("PGM maxval must be in [1, 65535]");
      const std::size_t height = values.shape()[0];
      const std::size_t width = values.shape()[1];
      out = (pgm.binary ? "P5\n" : "P2\n") + std::to_string(width) + ' ' + std::to_string(height) + '\n' +
            std::to_string(pgm.maxval) + '\n';
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw std::invalid_argument("PGM output cannot hold non-finite values");
        const double scaled = std::round(std::clamp(values[i], 0.0, 1.0) * pgm.maxval);
        const auto sample = static_cast<unsigned>(scaled);
        if (pgm.binary) {
          if (pgm.maxval > 255) out += static_cast<char>((sample >> 8) & 0xff);
          out += static_cast<char>(sample & 0xff);
        } else {
          out += std::to_string(sample);
          out += (i + 1) % width == 0 ? '\n' : ' ';
        }
      }
      return out;
    }
  }
  throw std::logic_error("unhandled format");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into '" + path.string() + "'");
  }
}

GridFile read_grid(const std::filesystem::path& path, const std::optional<Shape>& declared_shape) {
  const std::string contents = read_text(path);
  try {
    return parse_grid(contents, detect_format(path, contents), declared_shape);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_grid(const std::filesystem::path& path, const GridTensor& values, Format format, const PgmInfo& pgm) {
  write_text_atomic(path, format_grid(values, format, pgm));
}

Mask read_mask(const std::filesystem::path& path, const Shape& shape) {
  const GridFile file = read_grid(path, shape);
  if (file.values.shape() != shape) throw std::runtime_error("mask shape does not match data shape");
  Mask mask(shape, false);
  for (std::size_t i = 0; i < file.values.size(); ++i) {
    const double v = file.values[i];
    if (std::isnan(v)) throw std::runtime_error("mask file contains NaN");
    mask.set(i, v != 0.0);
  }
  return mask;
}

}  // namespace l1spline::io
