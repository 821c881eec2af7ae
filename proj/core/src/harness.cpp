#include "harmap/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "harmap/parallel.hpp"
#include "harmap/report_io.hpp"
#include "json_report.hpp"

namespace harmap {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) config_error(what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) config_error(what + " must be finite");
  return x;
}

ParamMap parse_params(const json& j) {
  ParamMap out;
  if (j.is_null()) return out;
  if (!j.is_object()) config_error("params must be an object");
  for (const auto& [k, v] : j.items()) out[k] = get_number(v, "parameter '" + k + "'");
  return out;
}

DomainSpec parse_domain(const json& j) {
  if (!j.is_object()) config_error("domain must be an object");
  DomainSpec d;
  if (j.contains("rectangle")) {
    const auto& r = j["rectangle"];
    if (!r.is_array() || r.size() != 4) config_error("domain.rectangle must be [u_min, u_max, v_min, v_max]");
    Rectangle rect{get_number(r[0], "u_min"), get_number(r[1], "u_max"), get_number(r[2], "v_min"),
                   get_number(r[3], "v_max")};
    if (j.contains("periodic")) {
      const auto& p = j["periodic"];
      if (!p.is_array() || p.size() != 2 || !p[0].is_boolean() || !p[1].is_boolean()) {
        config_error("domain.periodic must be [bool, bool]");
      }
      rect.periodic_u = p[0].get<bool>();
      rect.periodic_v = p[1].get<bool>();
    }
    d.shape = rect;
  } else if (j.contains("annulus")) {
    const auto& a = j["annulus"];
    if (!a.is_array() || a.size() != 2) config_error("domain.annulus must be [r_min, r_max]");
    d.shape = Annulus{get_number(a[0], "r_min"), get_number(a[1], "r_max")};
  } else {
    config_error("domain needs 'rectangle' or 'annulus'");
  }
  d.validate();
  return d;
}

void parse_thresholds(const json& j, Thresholds& th) {
  if (j.is_null()) return;
  if (!j.is_object()) config_error("thresholds must be an object");
  for (const auto& [k, v] : j.items()) {
    const double x = get_number(v, "threshold '" + k + "'");
    if (!(x > 0.0)) config_error("threshold '" + k + "' must be positive");
    if (k == "flat") th.geometry.flat = x;
    else if (k == "umbilic") th.geometry.umbilic = x;
    else if (k == "immersion") th.geometry.immersion = x;
    else if (k == "parallel") th.geometry.parallel = x;
    else if (k == "min_sin2theta") th.min_sin2theta = x;
    else if (k == "max_masked_fraction") th.max_masked_fraction = x;
    else if (k == "max_positive_fraction") th.max_positive_fraction = x;
    else if (k == "roundoff") th.roundoff = x;
    else config_error("unknown threshold '" + k + "'");
  }
}

SolverCase parse_solver(const json& j) {
  if (!j.is_object()) config_error("case.solver must be an object");
  SolverCase sc;
  if (!j.contains("domain")) config_error("solver case needs a domain");
  sc.domain = parse_domain(j["domain"]);
  if (!std::holds_alternative<Rectangle>(sc.domain.shape)) config_error("solver domains must be rectangles");
  const auto& r = std::get<Rectangle>(sc.domain.shape);
  if (r.periodic_u && r.periodic_v) config_error("solver domain cannot be periodic on both axes");
  if (j.contains("tol")) {
    sc.tol = get_number(j["tol"], "solver tol");
    if (!(sc.tol > 0.0)) config_error("solver tol must be positive");
  }
  if (j.contains("max_iter")) {
    if (!j["max_iter"].is_number_integer() || j["max_iter"].get<long>() < 1) config_error("max_iter must be a positive integer");
    sc.max_iter = j["max_iter"].get<int>();
  }
  if (!j.contains("boundary") || !j["boundary"].is_object()) config_error("solver case needs a boundary object");
  const auto& b = j["boundary"];
  int kinds = 0;
  if (b.contains("trace")) {
    ++kinds;
    if (!b["trace"].is_string()) config_error("boundary.trace must be a family name");
    sc.trace_family = b["trace"].get<std::string>();
    sc.trace_params = parse_params(b.value("params", json()));
    make_family(*sc.trace_family, sc.trace_params, sc.domain);  // validates name and params
  }
  if (b.contains("constant")) {
    ++kinds;
    const auto& c = b["constant"];
    if (!c.is_array() || c.empty()) config_error("boundary.constant must be a non-empty array");
    Eigen::VectorXd v(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) v(k) = get_number(c[k], "boundary constant");
    sc.constant = v;
  }
  if (b.contains("table")) {
    ++kinds;
    const auto& t = b["table"];
    if (!t.is_array() || t.empty()) config_error("boundary.table must be a non-empty array of rows");
    for (const auto& row : t) {
      if (!row.is_array() || row.empty()) config_error("boundary.table rows must be arrays");
      std::vector<double> vals;
      for (const auto& x : row) vals.push_back(get_number(x, "boundary table value"));
      if (!sc.table.empty() && vals.size() != sc.table.front().size()) config_error("boundary.table rows differ in length");
      sc.table.push_back(std::move(vals));
    }
  }
  if (kinds != 1) config_error("boundary needs exactly one of 'trace', 'constant', 'table'");
  return sc;
}

}  // namespace

BoundaryData SolverCase::boundary(int resolution) const {
  if (trace_family) {
    const AnalyticFamily fam = make_family(*trace_family, trace_params, domain);
    return BoundaryData::from_trace(domain, resolution,
                                    [&fam](double u, double v) { return fam.jet_fn(u, v).value; });
  }
  if (constant) return BoundaryData::constant(domain, resolution, *constant);
  BoundaryData bd;
  bd.ambient_dim = static_cast<int>(table.front().size());
  for (const auto& row : table) bd.values.push_back(Eigen::Map<const Eigen::VectorXd>(row.data(), row.size()));
  return bd;
}

std::string SolverCase::label() const {
  if (trace_family) return "solver:" + *trace_family;
  if (constant) return "solver:constant";
  return "solver:table";
}

CaseConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  static const char* known[] = {"case", "resolutions", "thresholds", "sweep", "order_band", "output"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) config_error("unknown config key '" + k + "'");
  }
  CaseConfig cfg;
  if (!j.contains("case")) config_error("config needs a 'case'");
  const auto& c = j["case"];
  if (c.is_string()) {
    cfg.family = c.get<std::string>();
  } else if (c.is_object() && c.contains("solver")) {
    cfg.solver = parse_solver(c["solver"]);
  } else if (c.is_object() && c.contains("family") && c["family"].is_string()) {
    cfg.family = c["family"].get<std::string>();
    cfg.params = parse_params(c.value("params", json()));
    if (c.contains("domain")) cfg.domain = parse_domain(c["domain"]);
  } else {
    config_error("case must be a family name, {\"family\": ...} or {\"solver\": ...}");
  }
  if (!cfg.is_solver()) make_family(cfg.family, cfg.params, cfg.domain);  // validates

  if (!j.contains("resolutions") || !j["resolutions"].is_array() || j["resolutions"].empty()) {
    config_error("resolutions must be a non-empty array");
  }
  for (const auto& r : j["resolutions"]) {
    if (!r.is_number_integer()) config_error("resolutions must be integers");
    const int n = r.get<int>();
    if (n < (cfg.is_solver() ? 8 : 4)) config_error("resolution " + std::to_string(n) + " is too small");
    if (!cfg.resolutions.empty() && n <= cfg.resolutions.back()) config_error("resolutions must be strictly increasing");
    cfg.resolutions.push_back(n);
  }
  parse_thresholds(j.value("thresholds", json()), cfg.thresholds);

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (!s.is_object() || s.empty()) config_error("sweep must be a non-empty object of parameter lists");
    for (const auto& [k, v] : s.items()) {
      if (!v.is_array() || v.empty()) config_error("sweep range for '" + k + "' is empty");
      std::vector<double> vals;
      for (const auto& x : v) vals.push_back(get_number(x, "sweep value"));
      cfg.sweep.emplace_back(k, std::move(vals));
    }
  }
  if (j.contains("order_band")) {
    const auto& b = j["order_band"];
    if (!b.is_array() || b.size() != 2) config_error("order_band must be [lo, hi]");
    cfg.order_band = {get_number(b[0], "order_band lo"), get_number(b[1], "order_band hi")};
    if (!(cfg.order_band.first < cfg.order_band.second)) config_error("order_band must satisfy lo < hi");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (o.is_string()) cfg.output_dir = o.get<std::string>();
    else if (o.is_object() && o.contains("dir") && o["dir"].is_string()) cfg.output_dir = o["dir"].get<std::string>();
    else config_error("output must be a directory string or {\"dir\": ...}");
  }
  return cfg;
}

CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

CaseRun run_case(const CaseConfig& config, int threads) {
  CaseRun run;
  for (int res : config.resolutions) {
    JetField field;
    CaseInfo info;
    if (config.is_solver()) {
      const SolverCase& sc = *config.solver;
      const DiscreteMap map = solve(sc.domain, res, sc.boundary(res), sc.tol, sc.max_iter);
      field = jet_field(map);
      info.name = sc.label();
      info.params = sc.trace_params;
      info.source = "solver";
      info.asserted_harmonic = map.converged;
    } else {
      const AnalyticFamily fam = make_family(config.family, config.params, config.domain);
      field = sample_grid(fam, res);
      info.name = fam.name;
      info.params = fam.params;
      info.asserted_harmonic = fam.is_harmonic;
    }
    auto points = point_reports(field, config.thresholds, threads);
    const VerificationReport* coarser = run.reports.empty() ? nullptr : &run.reports.back();
    run.reports.push_back(assemble_report(field, points, info, config.thresholds, coarser));
    run.points.push_back(std::move(points));
  }
  return run;
}

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::ChainHolds: return kExitChainHolds;
    case Verdict::ChainViolated: return kExitChainViolated;
    case Verdict::Undefined: return kExitUndefined;
  }
  return kExitUndefined;
}

std::string verify_document(const CaseConfig& config, const CaseRun& run) {
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = "verify";
  doc["resolutions"] = config.resolutions;
  ordered_json reports = ordered_json::array();
  for (const auto& r : run.reports) reports.push_back(detail::to_json(r));
  doc["reports"] = reports;

  ordered_json rows = ordered_json::array();
  for (const auto& r : run.reports) {
    rows.push_back(ordered_json{{"resolution", r.resolution},
                                {"energy", r.energy},
                                {"functional_F", detail::number_or_inf(r.functional_F)},
                                {"two_area", r.two_area},
                                {"err_est", r.err_est},
                                {"verdict", std::string(to_string(r.verdict))}});
  }
  const auto& finest = run.reports.back();
  doc["refinement"] = ordered_json{{"rows", rows},
                                   {"finest_resolution", finest.resolution},
                                   {"final_verdict", std::string(to_string(finest.verdict))},
                                   {"final_reason", finest.verdict_reason}};
  return doc.dump(2) + "\n";
}

namespace {

std::filesystem::path prepare_out(const CaseConfig& config, const RunOptions& opts) {
  std::filesystem::path dir = opts.out_dir.empty() ? config.output_dir.value_or("harmap_out") : opts.out_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + p.string());
}

// Converts library errors to exit codes with a diagnostic line.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "harmap: " << to_string(e.code()) << ": " << e.what() << '\n';
    if (e.code() == ErrorCode::NotConverged) return kExitNotConverged;
    return kExitConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "harmap: Io: " << e.what() << '\n';
    return kExitConfigError;
  }
}

std::string margin_text(const std::optional<double>& m) { return m ? format_number(*m) : "n/a"; }

}  // namespace

int cmd_verify(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const auto dir = prepare_out(config, opts);
    const CaseRun run = run_case(config, opts.threads);
    write_file(dir / "report.json", verify_document(config, run));
    if (opts.fields) {
      for (std::size_t k = 0; k < run.reports.size(); ++k) {
        std::ostringstream os;
        write_fields_csv(os, run.points[k]);
        write_file(dir / ("fields_" + std::to_string(run.reports[k].resolution) + ".csv"), os.str());
      }
    }
    if (!opts.quiet) {
      for (const auto& r : run.reports) {
        log << r.case_info.name << " N=" << r.resolution << " energy=" << format_number(r.energy)
            << " F=" << format_number(r.functional_F) << " 2A=" << format_number(r.two_area)
            << " left=" << margin_text(r.left_margin) << " right=" << margin_text(r.right_margin)
            << " err_est=" << format_number(r.err_est) << " verdict=" << to_string(r.verdict)
            << (r.verdict_reason.empty() ? "" : " (" + r.verdict_reason + ")") << '\n';
      }
    }
    return exit_code_for(run.reports.back().verdict);
  });
}

int cmd_solve(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    if (!config.is_solver()) config_error("solve needs a solver case");
    const SolverCase& sc = *config.solver;
    const auto dir = prepare_out(config, opts);
    std::optional<AnalyticFamily> trace;
    if (sc.trace_family) trace = make_family(*sc.trace_family, sc.trace_params, sc.domain);

    ordered_json rows = ordered_json::array();
    std::vector<double> errors;
    for (int res : config.resolutions) {
      const DiscreteMap map = solve(sc.domain, res, sc.boundary(res), sc.tol, sc.max_iter);
      std::ostringstream os;
      write_csv(os, map);
      write_file(dir / ("map_" + std::to_string(res) + ".csv"), os.str());
      ordered_json row{{"resolution", res},
                       {"solver_residual", map.solver_residual},
                       {"iterations", map.iterations},
                       {"converged", map.converged}};
      if (trace) {
        double e = 0.0;
        for (int i = 0; i < map.nodes_u(); ++i) {
          for (int j = 0; j < map.nodes_v(); ++j) {
            const Eigen::VectorXd exact = trace->jet_fn(map.axis_u().coord(i), map.axis_v().coord(j)).value;
            e = std::max(e, (map.value(i, j) - exact).lpNorm<Eigen::Infinity>());
          }
        }
        row["max_error_vs_trace"] = e;
        errors.push_back(e);
      }
      rows.push_back(row);
      if (!opts.quiet) {
        log << sc.label() << " N=" << res << " residual=" << format_number(map.solver_residual)
            << " iterations=" << map.iterations << (trace ? " max_error=" + format_number(errors.back()) : "")
            << '\n';
      }
    }
    ordered_json ratios = ordered_json::array();
    for (std::size_t k = 1; k < errors.size(); ++k) {
      ratios.push_back(errors[k] > 0.0 ? ordered_json(errors[k - 1] / errors[k]) : ordered_json(nullptr));
    }
    ordered_json doc{{"schema_version", kReportSchemaVersion}, {"command", "solve"}, {"case", sc.label()},
                     {"tol", sc.tol},                          {"rows", rows},       {"error_ratios", ratios}};
    write_file(dir / "solve.json", doc.dump(2) + "\n");
    return kExitChainHolds;
  });
}

int cmd_sweep(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    if (config.sweep.empty()) config_error("sweep needs at least one swept parameter");
    if (config.is_solver()) config_error("sweeps run over analytic families only");
    const auto dir = prepare_out(config, opts);

    std::ostringstream csv;
    for (const auto& [name, _] : config.sweep) csv << name << ',';
    csv << "resolution,energy,functional_F,two_area,left_margin,right_margin,err_est,eq9_max,eq10_max,"
           "sin2theta_min,masked_fraction,positive_curvature_fraction,verdict,reason,error\n";

    std::vector<std::size_t> idx(config.sweep.size(), 0);
    bool any_violated = false, any_other = false;
    for (;;) {
      CaseConfig row_cfg = config;
      row_cfg.sweep.clear();
      for (std::size_t k = 0; k < idx.size(); ++k) row_cfg.params[config.sweep[k].first] = config.sweep[k].second[idx[k]];
      for (std::size_t k = 0; k < idx.size(); ++k) csv << format_number(config.sweep[k].second[idx[k]]) << ',';
      auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
      try {
        const CaseRun run = run_case(row_cfg, opts.threads);
        const auto& r = run.reports.back();
        csv << r.resolution << ',' << format_number(r.energy) << ',' << format_number(r.functional_F) << ','
            << format_number(r.two_area) << ',' << opt(r.left_margin) << ',' << opt(r.right_margin) << ','
            << format_number(r.err_est) << ',' << opt(r.eq9_residual_max_all) << ','
            << opt(r.eq10_residual_max_all) << ',' << opt(r.sin2theta_min) << ','
            << format_number(r.masked_fraction) << ',' << format_number(r.positive_curvature_fraction) << ','
            << to_string(r.verdict) << ',' << r.verdict_reason << ",\n";
        if (r.verdict == Verdict::ChainViolated) any_violated = true;
        if (r.verdict == Verdict::Undefined) any_other = true;
        if (!opts.quiet) {
          log << "sweep row";
          for (const auto& [k, v] : row_cfg.params) log << ' ' << k << '=' << format_number(v);
          log << " left=" << margin_text(r.left_margin) << " right=" << margin_text(r.right_margin)
              << " verdict=" << to_string(r.verdict) << '\n';
        }
      } catch (const Error& e) {
        csv << ",,,,,,,,,,,,,," << to_string(e.code()) << ": " << e.what() << '\n';
        any_other = true;
      }
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == config.sweep[k].second.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    write_file(dir / "sweep.csv", csv.str());
    if (any_violated) return static_cast<int>(kExitChainViolated);
    return any_other ? static_cast<int>(kExitUndefined) : static_cast<int>(kExitChainHolds);
  });
}

namespace {

struct OracleValues {
  double energy, area, functional_F;
};

// Closed forms on the family's configured rectangle.
std::optional<OracleValues> closed_form_oracle(const AnalyticFamily& fam) {
  const auto* r = std::get_if<Rectangle>(&fam.domain.shape);
  if (!r) return std::nullopt;
  const double lu = r->u_max - r->u_min, lv = r->v_max - r->v_min;
  if (fam.name == "identity_plane" || fam.name == "affine_plane") {
    const double p = fam.name == "affine_plane" ? fam.params.at("p") : 1.0;
    const double q = fam.name == "affine_plane" ? fam.params.at("q") : 1.0;
    const double area = std::abs(p * q) * lu * lv;
    return OracleValues{(p * p + q * q) * lu * lv, area, 2.0 * area};
  }
  if ((fam.name == "catenoid" || fam.name == "helicoid") && !r->periodic_v) {
    // E = G = cosh^2 v; antiderivative v/2 + sinh(2v)/4
    auto prim = [](double v) { return 0.5 * v + 0.25 * std::sinh(2.0 * v); };
    const double c = lu * (prim(r->v_max) - prim(r->v_min));
    return OracleValues{2.0 * c, c, 2.0 * c};
  }
  return std::nullopt;
}

}  // namespace

int cmd_convergence(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    if (config.is_solver()) config_error("convergence runs on analytic families only");
    if (config.resolutions.size() < 2) config_error("convergence needs at least two resolutions");
    const auto dir = prepare_out(config, opts);
    const AnalyticFamily fam = make_family(config.family, config.params, config.domain);
    const CaseRun run = run_case(config, opts.threads);

    OracleValues oracle{};
    std::string oracle_kind = "closed_form";
    if (auto cf = closed_form_oracle(fam)) {
      oracle = *cf;
    } else {
      oracle_kind = "self_reference";
      CaseConfig fine = config;
      fine.resolutions = {4 * config.resolutions.back()};
      const CaseRun ref = run_case(fine, opts.threads);
      const auto& r = ref.reports.back();
      oracle = OracleValues{r.energy, 0.5 * r.two_area, r.functional_F};
    }

    struct Quantity {
      const char* name;
      double oracle;
      double VerificationReport::*field;
      bool halve;
    };
    const Quantity quantities[] = {{"energy", oracle.energy, &VerificationReport::energy, false},
                                   {"area", oracle.area, &VerificationReport::two_area, true},
                                   {"functional_F", oracle.functional_F, &VerificationReport::functional_F, false}};

    std::ostringstream csv;
    csv << "quantity,resolution,h,value,oracle,abs_error,fitted_order,band_ok\n";
    bool all_ok = true;
    for (const auto& q : quantities) {
      std::vector<double> hs, errs, vals;
      for (const auto& r : run.reports) {
        double val = r.*(q.field);
        if (q.halve) val *= 0.5;
        vals.push_back(val);
        hs.push_back(1.0 / r.resolution);
        errs.push_back(std::abs(val - q.oracle));
      }
      // Least-squares slope of log(error) against log(h), skipping errors at round-off.
      const double floor = 1e-11 * std::max(1.0, std::abs(q.oracle));
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int m = 0;
      for (std::size_t k = 0; k < errs.size(); ++k) {
        if (!(errs[k] > floor) || !std::isfinite(errs[k])) continue;
        const double x = std::log(hs[k]), y = std::log(errs[k]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
        ++m;
      }
      std::optional<double> order;
      bool ok = true;
      if (!std::isfinite(q.oracle)) {
        ok = false;
      } else if (m >= 2) {
        order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        ok = *order >= config.order_band.first && *order <= config.order_band.second;
      } else if (m == 1) {
        ok = false;  // neither at round-off nor resolvable into an order
      }
      all_ok = all_ok && ok;
      for (std::size_t k = 0; k < errs.size(); ++k) {
        csv << q.name << ',' << run.reports[k].resolution << ',' << format_number(hs[k]) << ','
            << format_number(vals[k]) << ',' << format_number(q.oracle) << ',' << format_number(errs[k]) << ','
            << (order ? format_number(*order) : (m == 0 ? "roundoff" : "")) << ',' << (ok ? 1 : 0) << '\n';
      }
      if (!opts.quiet) {
        log << fam.name << ' ' << q.name << " oracle(" << oracle_kind << ")=" << format_number(q.oracle)
            << " order=" << (order ? format_number(*order) : (m == 0 ? "roundoff" : "n/a"))
            << (ok ? " ok" : " OUT OF BAND") << '\n';
      }
    }
    write_file(dir / "convergence.csv", csv.str());
    return all_ok ? static_cast<int>(kExitChainHolds) : static_cast<int>(kExitChainViolated);
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"harmap: numerical checks of the energy / curvature / area chain for harmonic maps"};
  app.require_subcommand(1);
  std::string config_path;
  RunOptions opts;
  opts.out_dir.clear();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON case configuration")->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_flag("--fields", opts.fields, "write pointwise CSV dumps");
    sub->add_flag("--quiet", opts.quiet, "suppress progress lines");
  };
  CLI::App* verify = app.add_subcommand("verify", "run the inequality chain on each resolution");
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve the discrete Dirichlet problem and dump the grid");
  CLI::App* sweep = app.add_subcommand("sweep", "verify over a parameter grid, one CSV row per tuple");
  CLI::App* conv = app.add_subcommand("convergence", "quadrature errors against oracle values");
  for (auto* s : {verify, solve_cmd, sweep, conv}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(kExitConfigError);
  }
  opts.threads = threads_from_env();

  CaseConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "harmap: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitConfigError;
  }
  if (*verify) return cmd_verify(cfg, opts, std::clog, std::cerr);
  if (*solve_cmd) return cmd_solve(cfg, opts, std::clog, std::cerr);
  if (*sweep) return cmd_sweep(cfg, opts, std::clog, std::cerr);
  return cmd_convergence(cfg, opts, std::clog, std::cerr);
}

}  // namespace harmap
