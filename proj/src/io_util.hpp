#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "model.hpp"

namespace bogolab {

// shortest round-trip decimal, locale-independent
std::string format_g17(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t width_;
};

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

// frame files: 8-byte magic, u32 dim, u32 sites_per_dim, u32 particles, u32 reserved,
// f64 time, then sites^particles complex<double> amplitudes
struct FrameHeader {
  int dim = 0, sites_per_dim = 0, n_particles = 0;
  double time = 0;
};

void write_frame(std::ostream& os, const FrameHeader& h, const std::vector<cplx>& amps);
FrameHeader read_frame(std::istream& is, std::vector<cplx>& amps);

}  // namespace bogolab
