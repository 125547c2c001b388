#include "ccx/grid_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ccx {

namespace {

constexpr const char* kGridMagic = "CCXGRID 1";

[[noreturn]] void format_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::format, path + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  require(!in.bad(), ErrorCode::io, "read failure on " + path);
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io, "cannot create " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    require(out.good(), ErrorCode::io, "write failure on " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::io, "cannot move temporary onto " + path);
  }
}

// Token scanner that treats '#'-to-end-of-line as whitespace (PGM comments).
struct TokenScanner {
  const std::string& text;
  std::size_t pos = 0;

  bool next(std::string& token) {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= text.size()) return false;
    const std::size_t start = pos;
    while (pos < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '#') {
      ++pos;
    }
    token = text.substr(start, pos - start);
    return true;
  }
};

double parse_double(const std::string& tok, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) format_error(path, "bad number '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    format_error(path, "bad number '" + tok + "'");
  }
}

std::int64_t parse_int(const std::string& tok, const std::string& path) {
  std::int64_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    format_error(path, "bad integer '" + tok + "'");
  }
  return v;
}

GridFunction parse_ccxgrid(const std::string& text, const std::string& path) {
  std::istringstream in(text);
  std::string magic;
  std::getline(in, magic);
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (magic != kGridMagic) format_error(path, "missing CCXGRID 1 magic");

  std::string rest;
  {
    std::ostringstream buf;
    buf << in.rdbuf();
    rest = buf.str();
  }
  TokenScanner scan{rest};
  std::string tok;
  auto want = [&](const char* what) {
    if (!scan.next(tok)) format_error(path, std::string("missing ") + what);
    return tok;
  };
  const std::int64_t dim = parse_int(want("dimension"), path);
  if (dim < 1 || dim > kMaxDim) format_error(path, "dimension out of range");
  std::vector<std::int64_t> shape(dim);
  for (auto& s : shape) s = parse_int(want("shape"), path);
  std::vector<double> spacing(dim);
  for (auto& h : spacing) h = parse_double(want("spacing"), path);
  std::vector<double> origin(dim);
  for (auto& o : origin) o = parse_double(want("origin"), path);

  GridDomain domain(static_cast<int>(dim), shape, spacing, origin);
  std::vector<double> values;
  values.reserve(domain.node_count());
  while (scan.next(tok)) values.push_back(parse_double(tok, path));
  if (static_cast<std::int64_t>(values.size()) != domain.node_count()) {
    format_error(path, "value count does not match shape");
  }
  return GridFunction(std::move(domain), std::move(values));
}

GridFunction parse_pgm(const std::string& text, const std::string& path) {
  TokenScanner scan{text};
  std::string tok;
  require(scan.next(tok), ErrorCode::format, path + ": empty file");
  const bool binary = tok == "P5";
  if (!binary && tok != "P2") format_error(path, "not a P2/P5 PGM");
  auto want_int = [&](const char* what) {
    if (!scan.next(tok)) format_error(path, std::string("missing ") + what);
    return parse_int(tok, path);
  };
  const std::int64_t width = want_int("width");
  const std::int64_t height = want_int("height");
  const std::int64_t maxval = want_int("maxval");
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    format_error(path, "bad PGM header");
  }
  const std::int64_t count = width * height;
  std::vector<double> values(count);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    std::size_t p = scan.pos;
    require(p < text.size(), ErrorCode::format, path + ": truncated PGM");
    ++p;
    const int bytes = maxval > 255 ? 2 : 1;
    require(text.size() - p >=
                static_cast<std::size_t>(count) * bytes,
            ErrorCode::format, path + ": truncated PGM raster");
    for (std::int64_t i = 0; i < count; ++i) {
      std::uint32_t raw;
      if (bytes == 1) {
        raw = static_cast<unsigned char>(text[p + i]);
      } else {
        raw = (static_cast<std::uint32_t>(
                   static_cast<unsigned char>(text[p + 2 * i]))
               << 8) |
              static_cast<unsigned char>(text[p + 2 * i + 1]);
      }
      values[i] = static_cast<double>(raw) / static_cast<double>(maxval);
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      if (!scan.next(tok)) format_error(path, "truncated PGM raster");
      const std::int64_t raw = parse_int(tok, path);
      if (raw < 0 || raw > maxval) format_error(path, "pixel out of range");
      values[i] = static_cast<double>(raw) / static_cast<double>(maxval);
    }
  }
  const std::int64_t shape[2] = {height, width};
  const double spacing[2] = {1.0, 1.0};
  const double origin[2] = {0.0, 0.0};
  return GridFunction(GridDomain(2, shape, spacing, origin),
                      std::move(values));
}

bool looks_like_pgm(const std::string& text) {
  return text.size() >= 2 && text[0] == 'P' &&
         (text[1] == '2' || text[1] == '5');
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

GridFunction read_grid(const std::string& path) {
  const std::string text = read_file(path);
  if (looks_like_pgm(text)) return parse_pgm(text, path);
  return parse_ccxgrid(text, path);
}

void write_grid(const GridFunction& g, const std::string& path) {
  const GridDomain& dom = g.domain();
  std::ostringstream out;
  out << kGridMagic << "\n" << dom.dim() << "\n";
  for (int k = 0; k < dom.dim(); ++k) {
    out << dom.extent(k) << (k + 1 < dom.dim() ? " " : "");
  }
  out << "\n";
  for (int k = 0; k < dom.dim(); ++k) {
    out << format_double(dom.spacing(k)) << (k + 1 < dom.dim() ? " " : "");
  }
  out << "\n";
  for (int k = 0; k < dom.dim(); ++k) {
    out << format_double(dom.origin(k)) << (k + 1 < dom.dim() ? " " : "");
  }
  out << "\n";
  const std::int64_t n = g.size();
  for (std::int64_t i = 0; i < n; ++i) {
    out << format_double(g[i]);
    out << ((i % 8 == 7 || i + 1 == n) ? "\n" : " ");
  }
  write_file_atomic(path, out.str());
}

SampleMask read_mask(const std::string& path) {
  const GridFunction g = read_grid(path);
  std::vector<std::uint8_t> member(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) member[i] = g[i] != 0.0 ? 1 : 0;
  return SampleMask(g.domain(), std::move(member));
}

void write_mask(const SampleMask& m, const std::string& path) {
  std::vector<double> values(m.size());
  for (std::int64_t i = 0; i < m.size(); ++i) {
    values[i] = m.is_member(i) ? 1.0 : 0.0;
  }
  write_grid(GridFunction(m.domain(), std::move(values)), path);
}

ScatteredSamples read_samples_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  int dim = 0;
  std::vector<double> points;
  std::vector<double> values;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // Parse comma-separated numbers.
    std::vector<double> row;
    std::string cell;
    std::istringstream cells(line);
    bool any = false;
    while (std::getline(cells, cell, ',')) {
      std::size_t a = cell.find_first_not_of(" \t\r");
      if (a == std::string::npos) {
        if (any) format_error(path, "empty cell on line " + std::to_string(lineno));
        continue;
      }
      const std::size_t b = cell.find_last_not_of(" \t\r");
      row.push_back(parse_double(cell.substr(a, b - a + 1), path));
      any = true;
    }
    if (!any) continue;
    if (dim == 0) {
      dim = static_cast<int>(row.size()) - 1;
      if (dim < 1 || dim > kMaxDim) {
        format_error(path, "rows must be x1,...,xn,value with n in [1,3]");
      }
    }
    if (static_cast<int>(row.size()) != dim + 1) {
      format_error(path, "inconsistent column count on line " +
                             std::to_string(lineno));
    }
    for (int k = 0; k < dim; ++k) points.push_back(row[k]);
    values.push_back(row[dim]);
  }
  require(!values.empty(), ErrorCode::format, path + ": no samples");
  return ScatteredSamples(dim, std::move(points), std::move(values));
}

void write_samples_csv(const ScatteredSamples& s, const std::string& path) {
  std::ostringstream out;
  out << "# x1";
  for (int k = 1; k < s.dim(); ++k) out << ",x" << (k + 1);
  out << ",value\n";
  for (std::int64_t i = 0; i < s.count(); ++i) {
    for (int k = 0; k < s.dim(); ++k) {
      out << format_double(s.points()[i * s.dim() + k]) << ",";
    }
    out << format_double(s.values()[i]) << "\n";
  }
  write_file_atomic(path, out.str());
}

ModulusModel read_modulus_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  ModulusModel m;
  std::vector<double> knots, wf, wc;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# a=", 0) == 0) {
      std::istringstream meta(line.substr(2));
      std::string kv;
      while (meta >> kv) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const double val = parse_double(kv.substr(eq + 1), path);
        if (key == "a") m.a = val;
        if (key == "b") m.b = val;
        if (key == "lip" && !std::isnan(val)) m.lip = val;
        if (key == "grad_lip" && !std::isnan(val)) m.grad_lip = val;
      }
      m.affine_valid = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("knot,", 0) != 0) format_error(path, "missing CSV header");
      header_seen = true;
      continue;
    }
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(parse_double(cell, path));
    if (row.size() != 3) format_error(path, "modulus rows need 3 columns");
    knots.push_back(row[0]);
    wf.push_back(row[1]);
    wc.push_back(row[2]);
  }
  require(!knots.empty(), ErrorCode::format, path + ": no knots");
  m.knots = std::move(knots);
  m.omega_f = std::move(wf);
  m.omega_cav = std::move(wc);
  return m;
}

void write_modulus_csv(const ModulusModel& m, const std::string& path) {
  std::ostringstream out;
  out << "# a=" << format_double(m.a) << " b=" << format_double(m.b)
      << " lip=" << (m.lip ? format_double(*m.lip) : "nan")
      << " grad_lip=" << (m.grad_lip ? format_double(*m.grad_lip) : "nan")
      << "\n";
  out << "knot,omega_f,omega_cav\n";
  for (std::size_t i = 0; i < m.knots.size(); ++i) {
    out << format_double(m.knots[i]) << "," << format_double(m.omega_f[i])
        << ","
        << format_double(m.has_cav() ? m.omega_cav[i] : m.omega_f[i]) << "\n";
  }
  write_file_atomic(path, out.str());
}

}  // namespace ccx
