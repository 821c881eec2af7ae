#pragma once

#include <vector>

#include "harmap/geometry.hpp"

namespace harmap {

/// Uniform axis of a tensor grid. A periodic axis has `intervals` nodes and no
/// duplicated seam; a bounded one has `intervals + 1` nodes including both ends.
struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  int intervals = 1;
  bool periodic = false;

  int nodes() const { return periodic ? intervals : intervals + 1; }
  double spacing() const { return (hi - lo) / intervals; }
  double length() const { return hi - lo; }
  double coord(int i) const { return (!periodic && i == intervals) ? hi : lo + i * spacing(); }
  /// Composite trapezoid weight of node i.
  double weight(int i) const {
    if (!periodic && (i == 0 || i == intervals)) return 0.5 * spacing();
    return spacing();
  }
};

struct JetSample {
  ParamPoint param;
  Jet2 jet;
  double weight = 0.0;  // quadrature weight in the Cartesian domain measure du dv
  bool near_boundary = false;
};

/// Jets on a tensor grid together with their quadrature weights. Samples are
/// stored with the u-index varying slowest.
struct JetField {
  GridAxis axis_u;
  GridAxis axis_v;
  int resolution = 0;
  std::vector<JetSample> samples;
  double domain_measure = 0.0;  // area of the full parameter domain
  double diameter = 1.0;
  double excluded_fraction = 0.0;  // domain area not covered by the samples
};

}  // namespace harmap
