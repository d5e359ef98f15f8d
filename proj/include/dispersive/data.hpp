#pragma once

#include "dispersive/fourier.hpp"
#include "dispersive/kernels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dispersive {

enum class DataFamily { gaussian, shifted_gaussian, skew, kernel_k, file };

inline std::string to_string(DataFamily f) {
  switch (f) {
    case DataFamily::gaussian: return "gaussian";
    case DataFamily::shifted_gaussian: return "shifted-gaussian";
    case DataFamily::skew: return "skew";
    case DataFamily::kernel_k: return "kernel-K";
    case DataFamily::file: return "file";
  }
  return "?";
}

inline DataFamily parse_data_family(const std::string& s) {
  if (s == "gaussian") return DataFamily::gaussian;
  if (s == "shifted-gaussian") return DataFamily::shifted_gaussian;
  if (s == "skew") return DataFamily::skew;
  if (s == "kernel-K") return DataFamily::kernel_k;
  if (s == "file") return DataFamily::file;
  throw std::invalid_argument("unknown data family '" + s +
                              "' (expected gaussian, shifted-gaussian, skew, kernel-K or file)");
}

// Initial data:
//   gaussian          A exp(-x^2 / (2 w^2))
//   shifted-gaussian  A exp(-(x - c)^2 / (2 w^2))
//   skew              A exp(-(x - c)^2 / (2 w^2)) (1 + s (x - c))
//   kernel-K          A K_m^j
//   file              samples read from a text file, one value per line (or x,value)
// A positive smallness rescales the result so that its discrete W^{2,1} proxy
// equals that value.
template <typename Scalar>
struct DataDescriptor {
  DataFamily family = DataFamily::gaussian;
  Scalar amplitude = 1;
  Scalar width = 1;
  Scalar center = 0;
  Scalar skew = Scalar(0.5);
  int kernel_power = 1;
  std::string path;
  Scalar smallness = 0;
};

// |v|_1 + |v'|_1 + |v''|_1 by rectangle rule with spectral derivatives.
template <typename Scalar>
Scalar w21_proxy(const Field<Scalar>& v) {
  return lp_norm(v, Scalar(1)) + lp_norm(derivative(v, 1), Scalar(1)) + lp_norm(derivative(v, 2), Scalar(1));
}

template <typename Scalar>
Field<Scalar> read_field_file(const std::string& path, const SpectralGrid<Scalar>& grid) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open data file '" + path + "'");
  std::vector<Scalar> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.rfind(',');
    const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
    std::istringstream ss(cell);
    double v;
    if (!(ss >> v)) continue;  // header row
    vals.push_back(Scalar(v));
  }
  if (Index(vals.size()) != grid.size())
    throw std::invalid_argument("data file '" + path + "' has " + std::to_string(vals.size()) + " values, grid needs " +
                                std::to_string(grid.size()));
  return Field<Scalar>(grid, Eigen::Map<Vector<Scalar>>(vals.data(), Index(vals.size())));
}

template <typename Scalar>
Field<Scalar> make_initial_data(const DataDescriptor<Scalar>& d, const SpectralGrid<Scalar>& grid, Scalar m) {
  if (!(d.width > 0)) throw std::invalid_argument("data width must be positive");
  if (d.smallness < 0) throw std::invalid_argument("smallness must be non-negative");
  auto bump = [&](Scalar x, Scalar c) {
    const Scalar y = (x - c) / d.width;
    return d.amplitude * std::exp(-y * y / 2);
  };
  Field<Scalar> v = [&] {
    switch (d.family) {
      case DataFamily::gaussian: return Field<Scalar>::sample(grid, [&](Scalar x) { return bump(x, 0); });
      case DataFamily::shifted_gaussian:
        return Field<Scalar>::sample(grid, [&](Scalar x) { return bump(x, d.center); });
      case DataFamily::skew:
        return Field<Scalar>::sample(grid, [&](Scalar x) { return bump(x, d.center) * (1 + d.skew * (x - d.center)); });
      case DataFamily::kernel_k: return d.amplitude * bessel_kernel(m, d.kernel_power, grid);
      case DataFamily::file: return read_field_file(d.path, grid);
    }
    throw std::logic_error("unhandled data family");
  }();
  if (d.smallness > 0) {
    const Scalar w = w21_proxy(v);
    if (!(w > 0)) throw std::invalid_argument("cannot rescale zero data to a smallness target");
    v = (d.smallness / w) * v;
  }
  return v;
}

}  // namespace dispersive
