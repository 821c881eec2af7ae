#include "harmap/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace harmap {

namespace {

const Rectangle& require_rectangle(const DomainSpec& domain) {
  const auto* r = std::get_if<Rectangle>(&domain.shape);
  if (!r) throw Error(ErrorCode::InvalidBoundary, "the Laplace solver supports rectangular domains only");
  if (r->periodic_u && r->periodic_v) {
    throw Error(ErrorCode::InvalidBoundary, "fully periodic domain has no Dirichlet boundary");
  }
  return *r;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Scalar field on the full node grid, u-index slowest.
struct Grid {
  GridAxis au, av;
  int nu, nv;
  std::vector<double> x;

  Grid(const GridAxis& u, const GridAxis& v) : au(u), av(v), nu(u.nodes()), nv(v.nodes()), x(nu * nv, 0.0) {}
  double& operator()(int i, int j) { return x[i * nv + j]; }
  double operator()(int i, int j) const { return x[i * nv + j]; }
};

// 5-point Laplacian at an interior node; periodic axes wrap.
double laplacian_at(const Grid& g, int i, int j, double inv_hu2, double inv_hv2) {
  const double c = g(i, j);
  const int ip = wrap(i + 1, g.nu), im = wrap(i - 1, g.nu);
  const int jp = wrap(j + 1, g.nv), jm = wrap(j - 1, g.nv);
  return ((g(ip, j) + g(im, j)) - 2.0 * c) * inv_hu2 + ((g(i, jp) + g(i, jm)) - 2.0 * c) * inv_hv2;
}

bool on_boundary(const GridAxis& au, const GridAxis& av, int i, int j) {
  return (!au.periodic && (i == 0 || i == au.intervals)) || (!av.periodic && (j == 0 || j == av.intervals));
}

}  // namespace

DiscreteMap::DiscreteMap(DomainSpec domain, GridAxis axis_u, GridAxis axis_v, int ambient_dim)
    : domain_(std::move(domain)),
      axis_u_(axis_u),
      axis_v_(axis_v),
      ambient_dim_(ambient_dim),
      values_(static_cast<std::size_t>(axis_u.nodes()) * axis_v.nodes() * ambient_dim, 0.0) {}

Eigen::VectorXd DiscreteMap::value(int i, int j) const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data() + index(i, j), ambient_dim_);
}

bool DiscreteMap::is_boundary(int i, int j) const { return on_boundary(axis_u_, axis_v_, i, j); }

std::vector<std::pair<int, int>> boundary_nodes(const GridAxis& axis_u, const GridAxis& axis_v) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < axis_u.nodes(); ++i) {
    for (int j = 0; j < axis_v.nodes(); ++j) {
      if (on_boundary(axis_u, axis_v, i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

BoundaryData BoundaryData::from_trace(const DomainSpec& domain, int resolution,
                                      const std::function<Eigen::VectorXd(double, double)>& trace) {
  require_rectangle(domain);
  const auto [au, av] = grid_axes(domain, resolution);
  BoundaryData bd;
  for (const auto& [i, j] : boundary_nodes(au, av)) bd.values.push_back(trace(au.coord(i), av.coord(j)));
  bd.ambient_dim = bd.values.empty() ? 3 : static_cast<int>(bd.values.front().size());
  return bd;
}

BoundaryData BoundaryData::constant(const DomainSpec& domain, int resolution, const Eigen::VectorXd& c) {
  return from_trace(domain, resolution, [&c](double, double) { return c; });
}

DiscreteMap solve(const DomainSpec& domain, int resolution, const BoundaryData& boundary, double tol, int max_iter) {
  require_rectangle(domain);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "solver tolerance must be positive");
  if (resolution < 8) throw Error(ErrorCode::InvalidConfig, "solver resolution must be at least 8");
  const auto [au, av] = grid_axes(domain, resolution);
  const auto bnodes = boundary_nodes(au, av);
  if (boundary.values.size() != bnodes.size()) {
    std::ostringstream os;
    os << "boundary data has " << boundary.values.size() << " nodes, grid needs " << bnodes.size();
    throw Error(ErrorCode::InvalidBoundary, os.str());
  }
  const int n = boundary.ambient_dim;
  for (const auto& b : boundary.values) {
    if (b.size() != n || !b.allFinite()) throw Error(ErrorCode::InvalidBoundary, "boundary values malformed or not finite");
  }

  DiscreteMap map(domain, au, av, n);
  const double hu = au.spacing(), hv = av.spacing();
  const double inv_hu2 = 1.0 / (hu * hu), inv_hv2 = 1.0 / (hv * hv);
  std::vector<std::pair<int, int>> interior;
  for (int i = 0; i < au.nodes(); ++i) {
    for (int j = 0; j < av.nodes(); ++j) {
      if (!on_boundary(au, av, i, j)) interior.emplace_back(i, j);
    }
  }

  double worst = 0.0;
  int total_iters = 0;
  for (int c = 0; c < n; ++c) {
    double lo = boundary.values.front()(c), hi = lo;
    for (const auto& b : boundary.values) {
      lo = std::min(lo, b(c));
      hi = std::max(hi, b(c));
    }
    const double target = tol * (hi - lo);

    Grid X(au, av), P(au, av), Q(au, av);
    const double guess = 0.5 * (lo + hi);
    for (const auto& [i, j] : interior) X(i, j) = guess;
    for (std::size_t k = 0; k < bnodes.size(); ++k) X(bnodes[k].first, bnodes[k].second) = boundary.values[k](c);

    std::vector<double> r(interior.size());
    auto true_residual = [&] {
      double m = 0.0;
      for (std::size_t k = 0; k < interior.size(); ++k) {
        r[k] = laplacian_at(X, interior[k].first, interior[k].second, inv_hu2, inv_hv2);
        m = std::max(m, std::abs(r[k]));
      }
      return m;
    };

    double res = true_residual();
    int iters = 0;
    // CG on A = -L; restarted from the true residual whenever the recurrence
    // claims convergence that the true residual does not confirm.
    while (res > target && iters < max_iter) {
      double rr = 0.0;
      for (double x : r) rr += x * x;
      for (std::size_t k = 0; k < interior.size(); ++k) P(interior[k].first, interior[k].second) = r[k];
      double rec = res;
      while (rec > target && iters < max_iter) {
        double pq = 0.0;
        for (const auto& [i, j] : interior) {
          Q(i, j) = -laplacian_at(P, i, j, inv_hu2, inv_hv2);
          pq += P(i, j) * Q(i, j);
        }
        if (!(pq > 0.0)) break;
        const double alpha = rr / pq;
        double rr_new = 0.0;
        rec = 0.0;
        for (std::size_t k = 0; k < interior.size(); ++k) {
          const auto [i, j] = interior[k];
          X(i, j) += alpha * P(i, j);
          r[k] -= alpha * Q(i, j);
          rr_new += r[k] * r[k];
          rec = std::max(rec, std::abs(r[k]));
        }
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t k = 0; k < interior.size(); ++k) {
          const auto [i, j] = interior[k];
          P(i, j) = r[k] + beta * P(i, j);
        }
        ++iters;
      }
      const double prev = res;
      res = true_residual();
      if (rec > target && !(res < prev)) break;  // stagnated at round-off
    }
    total_iters += iters;
    if (res > target) {
      std::ostringstream os;
      os.precision(6);
      os << "component " << c << " not converged after " << iters << " iterations: residual " << res
         << " > " << target;
      throw Error(ErrorCode::NotConverged, os.str());
    }
    worst = std::max(worst, res);
    for (int i = 0; i < au.nodes(); ++i) {
      for (int j = 0; j < av.nodes(); ++j) map.at(i, j, c) = X(i, j);
    }
  }
  map.solver_residual = worst;
  map.converged = true;
  map.iterations = total_iters;
  return map;
}

double residual(const DiscreteMap& map) {
  const GridAxis& au = map.axis_u();
  const GridAxis& av = map.axis_v();
  const double inv_hu2 = 1.0 / (au.spacing() * au.spacing());
  const double inv_hv2 = 1.0 / (av.spacing() * av.spacing());
  double worst = 0.0;
  for (int c = 0; c < map.ambient_dim(); ++c) {
    Grid g(au, av);
    for (int i = 0; i < g.nu; ++i) {
      for (int j = 0; j < g.nv; ++j) g(i, j) = map.at(i, j, c);
    }
    for (int i = 0; i < g.nu; ++i) {
      for (int j = 0; j < g.nv; ++j) {
        if (!map.is_boundary(i, j)) worst = std::max(worst, std::abs(laplacian_at(g, i, j, inv_hu2, inv_hv2)));
      }
    }
  }
  return worst;
}

DiscreteMap sample_map(const AnalyticFamily& family, int resolution) {
  require_rectangle(family.domain);
  const auto [au, av] = grid_axes(family.domain, resolution);
  DiscreteMap map(family.domain, au, av, family.ambient_dim);
  for (int i = 0; i < au.nodes(); ++i) {
    for (int j = 0; j < av.nodes(); ++j) {
      const Eigen::VectorXd x = family.jet_fn(au.coord(i), av.coord(j)).value;
      for (int c = 0; c < family.ambient_dim; ++c) map.at(i, j, c) = x(c);
    }
  }
  map.converged = true;
  map.solver_residual = residual(map);
  return map;
}

Jet2 jets_from_grid(const DiscreteMap& map, int i, int j) {
  const GridAxis& au = map.axis_u();
  const GridAxis& av = map.axis_v();
  const int nu = au.nodes(), nv = av.nodes();
  const bool u_ok = au.periodic ? (i >= 0 && i < nu) : (i >= 1 && i <= au.intervals - 1);
  const bool v_ok = av.periodic ? (j >= 0 && j < nv) : (j >= 1 && j <= av.intervals - 1);
  if (!u_ok || !v_ok) {
    throw Error(ErrorCode::BoundaryNode, "jet requested on a boundary node (" + std::to_string(i) + ", " +
                                             std::to_string(j) + ")");
  }
  const int ip = wrap(i + 1, nu), im = wrap(i - 1, nu);
  const int jp = wrap(j + 1, nv), jm = wrap(j - 1, nv);
  const double hu = au.spacing(), hv = av.spacing();
  const Eigen::VectorXd c = map.value(i, j);
  const Eigen::VectorXd e = map.value(ip, j), w = map.value(im, j);
  const Eigen::VectorXd nn = map.value(i, jp), s = map.value(i, jm);
  Jet2 jet;
  jet.value = c;
  jet.du = (e - w) / (2.0 * hu);
  jet.dv = (nn - s) / (2.0 * hv);
  jet.duu = ((e + w) - 2.0 * c) / (hu * hu);
  jet.dvv = ((nn + s) - 2.0 * c) / (hv * hv);
  jet.duv = ((map.value(ip, jp) - map.value(ip, jm)) - (map.value(im, jp) - map.value(im, jm))) / (4.0 * hu * hv);
  return jet;
}

JetField jet_field(const DiscreteMap& map) {
  const GridAxis& au = map.axis_u();
  const GridAxis& av = map.axis_v();
  if ((!au.periodic && au.intervals < 3) || (!av.periodic && av.intervals < 3)) {
    throw Error(ErrorCode::InvalidConfig, "grid too coarse for an interior sub-grid");
  }
  // Interior sub-axis: drops the outer ring of a bounded axis.
  auto sub_axis = [](const GridAxis& a) {
    if (a.periodic) return a;
    return GridAxis{a.lo + a.spacing(), a.hi - a.spacing(), a.intervals - 2, false};
  };
  const GridAxis su = sub_axis(au), sv = sub_axis(av);
  JetField field;
  field.axis_u = au;
  field.axis_v = av;
  field.resolution = std::max(au.intervals, av.intervals);
  field.domain_measure = map.domain().measure();
  field.diameter = map.domain().diameter();
  field.excluded_fraction = 1.0 - (su.length() * sv.length()) / (au.length() * av.length());
  const int off_u = au.periodic ? 0 : 1, off_v = av.periodic ? 0 : 1;
  for (int a = 0; a < su.nodes(); ++a) {
    for (int b = 0; b < sv.nodes(); ++b) {
      const int i = a + off_u, j = b + off_v;
      JetSample s;
      s.param = ParamPoint{au.coord(i), av.coord(j)};
      s.jet = jets_from_grid(map, i, j);
      s.weight = su.weight(a) * sv.weight(b);
      s.near_boundary = (!au.periodic && (i == 1 || i == au.intervals - 1)) ||
                        (!av.periodic && (j == 1 || j == av.intervals - 1));
      field.samples.push_back(std::move(s));
    }
  }
  return field;
}

void write_csv(std::ostream& os, const DiscreteMap& map) {
  const Rectangle& r = std::get<Rectangle>(map.domain().shape);
  char buf[64];
  auto num = [&buf](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  os << "# harmap discrete_map v1\n";
  os << "nodes_u,nodes_v,ambient_dim,h_u,h_v,u_min,u_max,v_min,v_max,periodic_u,periodic_v,intervals_u,"
        "intervals_v,solver_residual,converged,iterations\n";
  os << map.nodes_u() << ',' << map.nodes_v() << ',' << map.ambient_dim() << ',' << num(map.axis_u().spacing())
     << ',' << num(map.axis_v().spacing()) << ',' << num(r.u_min) << ',' << num(r.u_max) << ',' << num(r.v_min)
     << ',' << num(r.v_max) << ',' << int(r.periodic_u) << ',' << int(r.periodic_v) << ','
     << map.axis_u().intervals << ',' << map.axis_v().intervals << ',' << num(map.solver_residual) << ','
     << int(map.converged) << ',' << map.iterations << '\n';
  os << "i,j";
  for (int c = 0; c < map.ambient_dim(); ++c) os << ",x" << c;
  os << '\n';
  for (int i = 0; i < map.nodes_u(); ++i) {
    for (int j = 0; j < map.nodes_v(); ++j) {
      os << i << ',' << j;
      for (int c = 0; c < map.ambient_dim(); ++c) os << ',' << num(map.at(i, j, c));
      os << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorCode::Io, "malformed number in map CSV: '" + s + "'");
  return x;
}

int to_int(const std::string& s) {
  const double x = to_double(s);
  if (x != std::floor(x)) throw Error(ErrorCode::Io, "expected integer in map CSV: '" + s + "'");
  return static_cast<int>(x);
}

}  // namespace

DiscreteMap read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# harmap discrete_map v1", 0) != 0) {
    throw Error(ErrorCode::Io, "not a harmap discrete_map v1 file");
  }
  std::getline(is, line);  // header names
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, "missing map metadata row");
  const auto m = split_csv(line);
  if (m.size() != 16) throw Error(ErrorCode::Io, "map metadata row has wrong arity");
  const int n = to_int(m[2]);
  Rectangle r{to_double(m[5]), to_double(m[6]), to_double(m[7]), to_double(m[8]), to_int(m[9]) != 0,
              to_int(m[10]) != 0};
  const GridAxis au{r.u_min, r.u_max, to_int(m[11]), r.periodic_u};
  const GridAxis av{r.v_min, r.v_max, to_int(m[12]), r.periodic_v};
  if (au.nodes() != to_int(m[0]) || av.nodes() != to_int(m[1]) || n < 1) {
    throw Error(ErrorCode::Io, "map metadata is inconsistent");
  }
  DiscreteMap map(DomainSpec{r}, au, av, n);
  map.solver_residual = to_double(m[13]);
  map.converged = to_int(m[14]) != 0;
  map.iterations = to_int(m[15]);
  std::getline(is, line);  // column names
  long rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != 2 + n) throw Error(ErrorCode::Io, "map row has wrong arity");
    const int i = to_int(cells[0]), j = to_int(cells[1]);
    if (i < 0 || i >= au.nodes() || j < 0 || j >= av.nodes()) throw Error(ErrorCode::Io, "map row index out of range");
    for (int c = 0; c < n; ++c) map.at(i, j, c) = to_double(cells[2 + c]);
    ++rows;
  }
  if (rows != static_cast<long>(au.nodes()) * av.nodes()) throw Error(ErrorCode::Io, "map CSV is missing rows");
  return map;
}

}  // namespace harmap
