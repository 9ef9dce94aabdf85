#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nlfi {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool operator==(const Interval&) const = default;
};

/// Chebyshev-Lobatto nodes on [lo, hi], endpoints included, sorted ascending.
/// Node sets for counts 2^m + 1 are nested.
std::vector<double> chebyshev_nodes(Interval iv, std::size_t count);

/// 17 significant digits (%.17g).
std::string format_double(double v);
/// Shortest text that reads back to the same double.
std::string format_shortest(double v);

}  // namespace nlfi
