#include "harmap/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace harmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd out(3);
  out << x, y, z;
  return out;
}

double param(const ParamMap& params, const std::string& key) { return params.at(key); }

struct FamilyInfo {
  ParamMap defaults;
  DomainSpec domain;
  bool harmonic;
  std::optional<bool> conformal;
  std::optional<bool> minimal;
};

DomainSpec rect(double u0, double u1, double v0, double v1, bool pu = false) {
  return DomainSpec{Rectangle{u0, u1, v0, v1, pu, false}};
}

std::optional<FamilyInfo> family_info(std::string_view name) {
  const DomainSpec unit = rect(0, 1, 0, 1);
  const DomainSpec strip = rect(0, kTwoPi, -1, 1, true);
  if (name == "identity_plane") return FamilyInfo{{}, unit, true, true, true};
  if (name == "affine_plane") return FamilyInfo{{{"p", 2.0}, {"q", 1.0}}, unit, true, std::nullopt, true};
  if (name == "catenoid") return FamilyInfo{{}, strip, true, true, true};
  if (name == "helicoid") return FamilyInfo{{}, rect(0, kTwoPi, -1, 1), true, true, true};
  if (name == "enneper") return FamilyInfo{{}, rect(-1, 1, -1, 1), true, true, true};
  if (name == "saddle_graph") return FamilyInfo{{}, rect(-1, 1, -1, 1), true, false, false};
  if (name == "radial_family") {
    return FamilyInfo{{{"alpha", 1.0}, {"beta", 0.5}, {"gamma", 1.0}}, DomainSpec{Annulus{1.0, 2.0}}, true,
                      std::nullopt, std::nullopt};
  }
  if (name == "exp_map") return FamilyInfo{{}, unit, true, false, false};
  if (name == "sphere_patch") return FamilyInfo{{{"R", 1.0}}, strip, false, true, false};
  if (name == "stretched_catenoid") return FamilyInfo{{{"lambda", 2.0}}, strip, false, false, true};
  if (name == "cylinder") return FamilyInfo{{}, strip, false, true, false};
  return std::nullopt;
}

std::function<Jet2(double, double)> make_jet_fn(std::string_view name, const ParamMap& pm) {
  if (name == "identity_plane") {
    return [](double u, double v) {
      Jet2 j = Jet2::zero(3);
      j.value = vec3(u, v, 0);
      j.du = vec3(1, 0, 0);
      j.dv = vec3(0, 1, 0);
      return j;
    };
  }
  if (name == "affine_plane") {
    const double p = param(pm, "p"), q = param(pm, "q");
    return [p, q](double u, double v) {
      Jet2 j = Jet2::zero(3);
      j.value = vec3(p * u, q * v, 0);
      j.du = vec3(p, 0, 0);
      j.dv = vec3(0, q, 0);
      return j;
    };
  }
  if (name == "catenoid" || name == "stretched_catenoid") {
    const double lam = name == "catenoid" ? 1.0 : param(pm, "lambda");
    return [lam](double u, double v) {
      const double c = std::cosh(lam * v), s = std::sinh(lam * v);
      const double cu = std::cos(u), su = std::sin(u);
      return Jet2{vec3(c * cu, c * su, lam * v),     vec3(-c * su, c * cu, 0),
                  vec3(lam * s * cu, lam * s * su, lam), vec3(-c * cu, -c * su, 0),
                  vec3(-lam * s * su, lam * s * cu, 0),  vec3(lam * lam * c * cu, lam * lam * c * su, 0)};
    };
  }
  if (name == "helicoid") {
    return [](double u, double v) {
      const double c = std::cosh(v), s = std::sinh(v);
      const double cu = std::cos(u), su = std::sin(u);
      return Jet2{vec3(s * cu, s * su, u),   vec3(-s * su, s * cu, 1), vec3(c * cu, c * su, 0),
                  vec3(-s * cu, -s * su, 0), vec3(-c * su, c * cu, 0), vec3(s * cu, s * su, 0)};
    };
  }
  if (name == "enneper") {
    return [](double u, double v) {
      return Jet2{vec3(u - u * u * u / 3 + u * v * v, -v + v * v * v / 3 - u * u * v, u * u - v * v),
                  vec3(1 - u * u + v * v, -2 * u * v, 2 * u),
                  vec3(2 * u * v, -1 + v * v - u * u, -2 * v),
                  vec3(-2 * u, -2 * v, 2),
                  vec3(2 * v, -2 * u, 0),
                  vec3(2 * u, 2 * v, -2)};
    };
  }
  if (name == "saddle_graph") {
    return [](double u, double v) {
      return Jet2{vec3(u, v, u * u - v * v), vec3(1, 0, 2 * u), vec3(0, 1, -2 * v),
                  vec3(0, 0, 2),             vec3(0, 0, 0),     vec3(0, 0, -2)};
    };
  }
  if (name == "exp_map") {
    // (e^u cos v, e^u sin v, u): real and imaginary parts of exp plus a linear coordinate.
    return [](double u, double v) {
      const double e = std::exp(u), c = std::cos(v), s = std::sin(v);
      return Jet2{vec3(e * c, e * s, u),  vec3(e * c, e * s, 1),  vec3(-e * s, e * c, 0),
                  vec3(e * c, e * s, 0),  vec3(-e * s, e * c, 0), vec3(-e * c, -e * s, 0)};
    };
  }
  if (name == "radial_family") {
    // ((alpha r + beta/r) cos phi, (alpha r + beta/r) sin phi, gamma ln r) written
    // in Cartesian (u, v) = (r cos phi, r sin phi).
    const double al = param(pm, "alpha"), be = param(pm, "beta"), ga = param(pm, "gamma");
    return [al, be, ga](double u, double v) {
      const double q = u * u + v * v;
      const double q2 = q * q, q3 = q2 * q;
      // g = u/q and k = v/q with their derivatives
      const double g = u / q, g_u = (v * v - u * u) / q2, g_v = -2 * u * v / q2;
      const double g_uu = (2 * u * u * u - 6 * u * v * v) / q3;
      const double g_uv = (6 * u * u * v - 2 * v * v * v) / q3;
      const double k = v / q, k_u = -2 * u * v / q2, k_v = (u * u - v * v) / q2;
      const double k_vv = (2 * v * v * v - 6 * u * u * v) / q3;
      const double k_uv = (6 * u * v * v - 2 * u * u * u) / q3;
      return Jet2{vec3(al * u + be * g, al * v + be * k, 0.5 * ga * std::log(q)),
                  vec3(al + be * g_u, be * k_u, ga * u / q),
                  vec3(be * g_v, al + be * k_v, ga * v / q),
                  vec3(be * g_uu, -be * k_vv, ga * (v * v - u * u) / q2),
                  vec3(be * g_uv, be * k_uv, -2 * ga * u * v / q2),
                  vec3(-be * g_uu, be * k_vv, ga * (u * u - v * v) / q2)};
    };
  }
  if (name == "sphere_patch") {
    const double R = param(pm, "R");
    return [R](double u, double v) {
      const double cv = std::cos(v), sv = std::sin(v), cu = std::cos(u), su = std::sin(u);
      return Jet2{vec3(R * cv * cu, R * cv * su, R * sv),   vec3(-R * cv * su, R * cv * cu, 0),
                  vec3(-R * sv * cu, -R * sv * su, R * cv), vec3(-R * cv * cu, -R * cv * su, 0),
                  vec3(R * sv * su, -R * sv * cu, 0),       vec3(-R * cv * cu, -R * cv * su, -R * sv)};
    };
  }
  if (name == "cylinder") {
    return [](double u, double v) {
      Jet2 j = Jet2::zero(3);
      j.value = vec3(std::cos(u), std::sin(u), v);
      j.du = vec3(-std::sin(u), std::cos(u), 0);
      j.dv = vec3(0, 0, 1);
      j.duu = vec3(-std::cos(u), -std::sin(u), 0);
      return j;
    };
  }
  throw Error(ErrorCode::InvalidConfig, "unknown family: " + std::string(name));
}

}  // namespace

void DomainSpec::validate() const {
  if (const auto* r = std::get_if<Rectangle>(&shape)) {
    if (!(r->u_max > r->u_min) || !(r->v_max > r->v_min)) {
      throw Error(ErrorCode::InvalidConfig, "rectangle domain has empty interior");
    }
  } else {
    const auto& a = std::get<Annulus>(shape);
    if (!(a.r_min > 0.0) || !(a.r_max > a.r_min)) {
      throw Error(ErrorCode::InvalidConfig, "annulus requires 0 < r_min < r_max");
    }
  }
}

bool DomainSpec::contains(ParamPoint p) const {
  if (!std::isfinite(p.u) || !std::isfinite(p.v)) return false;
  if (const auto* r = std::get_if<Rectangle>(&shape)) {
    const double tu = 1e-12 * (r->u_max - r->u_min), tv = 1e-12 * (r->v_max - r->v_min);
    const bool in_u = r->periodic_u || (p.u >= r->u_min - tu && p.u <= r->u_max + tu);
    const bool in_v = r->periodic_v || (p.v >= r->v_min - tv && p.v <= r->v_max + tv);
    return in_u && in_v;
  }
  const auto& a = std::get<Annulus>(shape);
  const double rad = std::hypot(p.u, p.v);
  const double t = 1e-12 * a.r_max;
  return rad >= a.r_min - t && rad <= a.r_max + t;
}

double DomainSpec::measure() const {
  if (const auto* r = std::get_if<Rectangle>(&shape)) return (r->u_max - r->u_min) * (r->v_max - r->v_min);
  const auto& a = std::get<Annulus>(shape);
  return std::numbers::pi * (a.r_max * a.r_max - a.r_min * a.r_min);
}

double DomainSpec::diameter() const {
  if (const auto* r = std::get_if<Rectangle>(&shape)) return std::hypot(r->u_max - r->u_min, r->v_max - r->v_min);
  return 2.0 * std::get<Annulus>(shape).r_max;
}

std::vector<std::string> family_names() {
  return {"identity_plane", "affine_plane", "catenoid",     "helicoid",           "enneper", "saddle_graph",
          "radial_family",  "exp_map",      "sphere_patch", "stretched_catenoid", "cylinder"};
}

AnalyticFamily make_family(std::string_view name, const ParamMap& params, const std::optional<DomainSpec>& domain) {
  const auto info = family_info(name);
  if (!info) throw Error(ErrorCode::InvalidConfig, "unknown family: " + std::string(name));
  ParamMap merged = info->defaults;
  for (const auto& [key, value] : params) {
    if (!merged.contains(key)) {
      throw Error(ErrorCode::InvalidConfig, "family " + std::string(name) + " has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw Error(ErrorCode::InvalidConfig, "parameter '" + key + "' is not finite");
    merged[key] = value;
  }
  AnalyticFamily fam;
  fam.name = std::string(name);
  fam.params = merged;
  fam.domain = domain.value_or(info->domain);
  fam.domain.validate();
  fam.is_harmonic = info->harmonic;
  fam.is_conformal = info->conformal;
  fam.is_minimal_image = info->minimal;
  if (name == "affine_plane") fam.is_conformal = merged["p"] == merged["q"];
  if (name == "radial_family") {
    // The radial map is conformal exactly for the catenoid member alpha = beta = gamma/2.
    const bool cat = merged["alpha"] == merged["beta"] && merged["gamma"] == 2.0 * merged["alpha"];
    fam.is_conformal = cat;
    fam.is_minimal_image = cat ? std::optional<bool>(true) : std::nullopt;
  }
  fam.jet_fn = make_jet_fn(name, merged);
  return fam;
}

Jet2 eval_jet(const AnalyticFamily& family, ParamPoint p) {
  if (!family.domain.contains(p)) {
    std::ostringstream os;
    os << "point (" << p.u << ", " << p.v << ") outside the domain of " << family.name;
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  return family.jet_fn(p.u, p.v);
}

double laplacian_residual(const AnalyticFamily& family, ParamPoint p) {
  const Jet2 j = eval_jet(family, p);
  return (j.duu + j.dvv).norm();
}

std::pair<GridAxis, GridAxis> grid_axes(const DomainSpec& domain, int resolution) {
  if (const auto* r = std::get_if<Rectangle>(&domain.shape)) {
    return {GridAxis{r->u_min, r->u_max, resolution, r->periodic_u},
            GridAxis{r->v_min, r->v_max, resolution, r->periodic_v}};
  }
  const auto& a = std::get<Annulus>(domain.shape);
  return {GridAxis{a.r_min, a.r_max, resolution, false}, GridAxis{0.0, kTwoPi, resolution, true}};
}

JetField sample_grid(const AnalyticFamily& family, int resolution) {
  if (resolution < 4) throw Error(ErrorCode::InvalidConfig, "grid resolution must be at least 4");
  JetField field;
  std::tie(field.axis_u, field.axis_v) = grid_axes(family.domain, resolution);
  field.resolution = resolution;
  field.domain_measure = family.domain.measure();
  field.diameter = family.domain.diameter();
  const bool polar = family.domain.is_annulus();
  const int nu = field.axis_u.nodes(), nv = field.axis_v.nodes();
  field.samples.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double a = field.axis_u.coord(i), b = field.axis_v.coord(j);
      JetSample s;
      s.weight = field.axis_u.weight(i) * field.axis_v.weight(j);
      if (polar) {
        s.param = ParamPoint{a * std::cos(b), a * std::sin(b)};
        s.weight *= a;  // du dv = r dr dphi
      } else {
        s.param = ParamPoint{a, b};
      }
      s.jet = family.jet_fn(s.param.u, s.param.v);
      field.samples.push_back(std::move(s));
    }
  }
  return field;
}

}  // namespace harmap
