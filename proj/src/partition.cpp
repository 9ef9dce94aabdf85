#include "nlfi/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nlfi {

PartitionMap::PartitionMap(Expression forward, std::optional<Expression> inverse, Interval domain,
                           double eps, std::size_t index)
    : forward_(forward.bind(Var::eps, eps)),
      domain_(domain),
      eps_(eps),
      index_(index) {
  if (inverse) inverse_ = inverse->bind(Var::eps, eps);
  if (forward_.is_differentiable()) {
    first_ = forward_.differentiate(Var::x);
    second_ = first_->differentiate(Var::x);
  }
  monotonicity_ = check_monotone(forward_, domain_, eps_);
  if (inverse_ && monotonicity_ != Monotonicity::none) {
    for (double x : chebyshev_nodes(domain_, 257)) {
      double back;
      try {
        back = inverse_->eval(this->forward(x), eps_);
      } catch (const DomainError&) {
        back = std::numeric_limits<double>::infinity();
      }
      inverse_error_ = std::max(inverse_error_, std::abs(back - x));
      if (!std::isfinite(inverse_error_)) break;
    }
  }
}

double PartitionMap::derivative(double x) const {
  if (!first_) throw NonDifferentiableError("partition map '" + forward_.to_string() + "' is not differentiable");
  return first_->eval(x, eps_);
}

double PartitionMap::second_derivative(double x) const {
  if (!second_) throw NonDifferentiableError("partition map '" + forward_.to_string() + "' is not differentiable");
  return second_->eval(x, eps_);
}

Interval PartitionMap::image() const {
  if (monotonicity_ == Monotonicity::none) {
    throw InversionError("partition map '" + forward_.to_string() + "' is not strictly monotone");
  }
  const double a = forward(domain_.lo);
  const double b = forward(domain_.hi);
  return {std::min(a, b), std::max(a, b)};
}

double PartitionMap::inverse(double y, double tol) const {
  const Interval img = image();
  const double slack = 1e-12 * std::max(1.0, img.length());
  if (!img.contains(y, slack)) {
    throw InversionError("point " + format_double(y) + " outside the image [" +
                         format_double(img.lo) + ", " + format_double(img.hi) + "] of map " +
                         std::to_string(index_ + 1));
  }
  y = img.clamp(y);
  if (inverse_ && inverse_verified()) return domain_.clamp(inverse_->eval(y, eps_));
  return domain_.clamp(invert_bracketed(forward_, first_, y, domain_, increasing(), eps_, tol));
}

Interval image(const PartitionMap& m) { return m.image(); }

double inverse_eval(const PartitionMap& m, double y, double tol) { return m.inverse(y, tol); }

double lipschitz_estimate(const PartitionMap& m, std::size_t samples) {
  if (!m.differentiable()) {
    throw NonDifferentiableError("Lipschitz estimate needs a differentiable map");
  }
  double best = 0.0;
  for (double x : chebyshev_nodes(m.domain(), samples)) best = std::max(best, std::abs(m.derivative(x)));
  return best * (1.0 + 1e-6);
}

std::string to_string(PartitionVerdict v) {
  switch (v) {
    case PartitionVerdict::strict_partition: return "strict-partition";
    case PartitionVerdict::contact_partition: return "contact-partition";
    case PartitionVerdict::invalid: return "invalid";
  }
  return "invalid";
}

PartitionReport validate_partition(std::span<const PartitionMap> maps, double tol) {
  PartitionReport report;
  if (maps.empty()) {
    report.issues.push_back("no partition maps");
    return report;
  }
  const Interval x = maps.front().domain();
  const double scale = std::max(1.0, x.length());
  bool ok = true;

  for (const auto& m : maps) {
    const std::string label = "map " + std::to_string(m.index() + 1);
    if (!(m.domain() == x)) {
      report.issues.push_back(label + ": domain differs from the common domain");
      ok = false;
    }
    if (m.monotonicity() == Monotonicity::none) {
      report.issues.push_back(label + ": not strictly monotone on the domain");
      report.images.push_back({std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN()});
      report.lipschitz.push_back(std::numeric_limits<double>::quiet_NaN());
      ok = false;
      continue;
    }
    const Interval img = m.image();
    report.images.push_back(img);
    if (img.lo < x.lo - tol * scale || img.hi > x.hi + tol * scale) {
      report.issues.push_back(label + ": image [" + format_double(img.lo) + ", " +
                              format_double(img.hi) + "] is not contained in the domain");
      ok = false;
    }
    if (!m.inverse_verified()) {
      report.issues.push_back(label + ": closed-form inverse disagrees with the forward map (max error " +
                              format_double(m.inverse_check_error()) + ")");
      ok = false;
    }
    report.lipschitz.push_back(m.differentiable() ? lipschitz_estimate(m)
                                                  : std::numeric_limits<double>::quiet_NaN());
  }
  if (!ok) {
    report.verdict = PartitionVerdict::invalid;
    return report;
  }

  // sort images by left endpoint and measure gaps and overlaps
  std::vector<std::size_t> order(maps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.images[a].lo < report.images[b].lo;
  });
  const double gap_tol = 1e-9 * x.length();
  double gaps = 0.0;
  double reach = x.lo;
  if (report.images[order.front()].lo - x.lo > gap_tol) gaps += report.images[order.front()].lo - x.lo;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Interval img = report.images[order[k]];
    if (k > 0) {
      if (img.lo - reach > gap_tol) gaps += img.lo - reach;
    }
    reach = std::max(reach, img.hi);
  }
  if (x.hi - reach > gap_tol) gaps += x.hi - reach;
  for (std::size_t a = 0; a < maps.size(); ++a) {
    for (std::size_t b = a + 1; b < maps.size(); ++b) {
      const double lo = std::max(report.images[a].lo, report.images[b].lo);
      const double hi = std::min(report.images[a].hi, report.images[b].hi);
      if (hi > lo) report.overlap_measure += hi - lo;
    }
  }
  if (report.overlap_measure <= gap_tol) report.overlap_measure = 0.0;
  report.covers = gaps == 0.0;
  if (!report.covers) report.issues.push_back("images leave gaps of total length " + format_double(gaps));
  if (report.overlap_measure > 0.0) {
    report.issues.push_back("images overlap with total length " + format_double(report.overlap_measure));
  }

  // contact points: shared image endpoints of distinct maps
  for (std::size_t a = 0; a < maps.size(); ++a) {
    for (std::size_t b = a + 1; b < maps.size(); ++b) {
      for (double xa : {x.lo, x.hi}) {
        for (double xb : {x.lo, x.hi}) {
          const double ya = maps[a].forward(xa);
          const double yb = maps[b].forward(xb);
          if (std::abs(ya - yb) <= tol) {
            // lower image first so entries read left-to-right
            if (report.images[a].lo <= report.images[b].lo) {
              report.contact_points.push_back({0.5 * (ya + yb), a, xa, b, xb});
            } else {
              report.contact_points.push_back({0.5 * (ya + yb), b, xb, a, xa});
            }
          }
        }
      }
    }
  }
  std::sort(report.contact_points.begin(), report.contact_points.end(),
            [](const ContactPoint& p, const ContactPoint& q) { return p.point < q.point; });

  if (!report.covers || report.overlap_measure > 0.0) {
    report.verdict = PartitionVerdict::invalid;
  } else if (report.contact_points.empty()) {
    report.verdict = PartitionVerdict::strict_partition;
  } else {
    report.verdict = PartitionVerdict::contact_partition;
  }
  return report;
}

PieceLocator::PieceLocator(std::span<const PartitionMap> maps) {
  order_.resize(maps.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::vector<double> lo(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) lo[i] = maps[i].image().lo;
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return lo[a] < lo[b]; });
  lefts_.resize(maps.size());
  for (std::size_t k = 0; k < maps.size(); ++k) lefts_[k] = lo[order_[k]];
}

std::size_t PieceLocator::locate(double x) const {
  // last left endpoint <= x; points left of the first image go to the first piece
  auto it = std::upper_bound(lefts_.begin(), lefts_.end(), x);
  std::size_t k = it == lefts_.begin() ? 0 : static_cast<std::size_t>(it - lefts_.begin()) - 1;
  return order_[k];
}

}  // namespace nlfi
