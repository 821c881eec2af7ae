#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "harmap/field.hpp"
#include "harmap/geometry.hpp"

namespace harmap {

struct Rectangle {
  double u_min = 0.0;
  double u_max = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;
  bool periodic_u = false;
  bool periodic_v = false;
};

/// Annulus r_min <= |(u, v)| <= r_max, sampled on a polar grid with a periodic
/// angular axis.
struct Annulus {
  double r_min = 1.0;
  double r_max = 2.0;
};

struct DomainSpec {
  std::variant<Rectangle, Annulus> shape;

  void validate() const;
  bool contains(ParamPoint p) const;
  double measure() const;
  double diameter() const;
  bool is_annulus() const { return std::holds_alternative<Annulus>(shape); }
};

using ParamMap = std::map<std::string, double>;

/// Closed-form map with exact second-order jets.
struct AnalyticFamily {
  std::string name;
  ParamMap params;
  int ambient_dim = 3;
  DomainSpec domain;
  bool is_harmonic = false;
  std::optional<bool> is_conformal;
  std::optional<bool> is_minimal_image;
  bool degree_one = true;  // recorded, never checked
  std::function<Jet2(double, double)> jet_fn;
};

/// Names accepted by make_family.
std::vector<std::string> family_names();

/// Builds a built-in family. Missing parameters take their defaults; unknown
/// names or parameters throw Error(InvalidConfig).
AnalyticFamily make_family(std::string_view name, const ParamMap& params = {},
                           const std::optional<DomainSpec>& domain = std::nullopt);

/// Throws Error(OutOfDomain) outside the family's domain.
Jet2 eval_jet(const AnalyticFamily& family, ParamPoint p);

/// |h_uu + h_vv| at p.
double laplacian_residual(const AnalyticFamily& family, ParamPoint p);

/// Exact jets on the uniform tensor grid of the family's domain.
JetField sample_grid(const AnalyticFamily& family, int resolution);

/// Grid axes used for `domain` at `resolution`; annuli use (r, phi).
std::pair<GridAxis, GridAxis> grid_axes(const DomainSpec& domain, int resolution);

}  // namespace harmap
