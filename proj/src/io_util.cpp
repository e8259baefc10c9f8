#include "io_util.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace bogolab {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::runtime_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_g17(v));
  row(cells);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

static const char kMagic[8] = {'B', 'G', 'L', 'F', 'R', 'A', 'M', 'E'};

void write_frame(std::ostream& os, const FrameHeader& h, const std::vector<cplx>& amps) {
  os.write(kMagic, 8);
  std::uint32_t u[4] = {static_cast<std::uint32_t>(h.dim),
                        static_cast<std::uint32_t>(h.sites_per_dim),
                        static_cast<std::uint32_t>(h.n_particles), 0u};
  os.write(reinterpret_cast<const char*>(u), 16);
  os.write(reinterpret_cast<const char*>(&h.time), 8);
  os.write(reinterpret_cast<const char*>(amps.data()),
           static_cast<std::streamsize>(amps.size() * sizeof(cplx)));
  if (!os) throw std::runtime_error("frame write failed");
}

FrameHeader read_frame(std::istream& is, std::vector<cplx>& amps) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("bad frame magic");
  std::uint32_t u[4];
  is.read(reinterpret_cast<char*>(u), 16);
  FrameHeader h;
  h.dim = static_cast<int>(u[0]);
  h.sites_per_dim = static_cast<int>(u[1]);
  h.n_particles = static_cast<int>(u[2]);
  is.read(reinterpret_cast<char*>(&h.time), 8);
  std::int64_t sites = 1;
  for (int i = 0; i < h.dim; ++i) sites *= h.sites_per_dim;
  std::int64_t count = 1;
  for (int i = 0; i < h.n_particles; ++i) count *= sites;
  amps.resize(static_cast<std::size_t>(count));
  is.read(reinterpret_cast<char*>(amps.data()),
          static_cast<std::streamsize>(amps.size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("frame read failed");
  return h;
}

}  // namespace bogolab
