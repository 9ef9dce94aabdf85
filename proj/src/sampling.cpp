#include "nlfi/sampling.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace nlfi {

std::vector<double> chebyshev_nodes(Interval iv, std::size_t count) {
  if (count < 2) throw std::invalid_argument("chebyshev_nodes: need at least 2 nodes");
  std::vector<double> nodes(count);
  const double mid = 0.5 * (iv.lo + iv.hi);
  const double half = 0.5 * (iv.hi - iv.lo);
  const double n = static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    // k = 0 maps to lo so the result is ascending
    nodes[k] = mid - half * std::cos(std::numbers::pi * static_cast<double>(k) / n);
  }
  nodes.front() = iv.lo;
  nodes.back() = iv.hi;
  if (count % 2 == 1) nodes[count / 2] = mid;
  return nodes;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace nlfi
