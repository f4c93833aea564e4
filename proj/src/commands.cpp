#include "homsphere/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "homsphere/foliations.hpp"
#include "homsphere/geodesics.hpp"

namespace homsphere {

namespace {

constexpr int kPropGeoTimes = 100;

Rational parse_rational(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(text);
  } catch (const DomainError& e) {
    throw UsageError(what + ": " + e.what());
  }
}

MilnorTriple<Rational> parse_triple(const RunConfig& cfg) {
  if (cfg.triple.size() != 3) throw UsageError("expected a triple X Y Z");
  try {
    return {parse_rational(cfg.triple[0], "x"), parse_rational(cfg.triple[1], "y"),
            parse_rational(cfg.triple[2], "z")};
  } catch (const UsageError&) {
    throw;
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

Rational parse_eps(const RunConfig& cfg) {
  if (!cfg.eps) throw UsageError("--eps is required");
  const Rational eps = parse_rational(*cfg.eps, "--eps");
  if (eps.sign() <= 0) throw UsageError("--eps must be positive");
  return eps;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

template <class S>
Json exact_vector(const Vec3<S>& v) {
  return Json::array({exact_json(v(0)), exact_json(v(1)), exact_json(v(2))});
}

template <class S>
Json exact_matrix(const Mat3<S>& m) {
  Json out = Json::array();
  for (int i = 0; i < 3; ++i) out.push_back(exact_vector(Vec3<S>(m.row(i).transpose())));
  return out;
}

template <class S>
Json triple_json(const MilnorTriple<S>& m) {
  return Json::array({exact_json(m.x), exact_json(m.y), exact_json(m.z)});
}

const std::array<std::string, 3> kPairNames{"E2,E3", "E3,E1", "E1,E2"};

template <class S>
Json exact_analysis_json(const ExactFoliationAnalysis<S>& a) {
  Json d = Json::object();
  for (int p = 0; p < 3; ++p) d[kPairNames[static_cast<std::size_t>(p)]] = exact_json(a.d_omega(p));
  return Json{{"metric_residuals",
               {{"uu", exact_json(a.residuals.uu)},
                {"ww", exact_json(a.residuals.ww)},
                {"mixed", exact_json(a.residuals.mixed)}}},
              {"omega", exact_vector(a.omega)},
              {"d_omega", d},
              {"is_metric", a.is_metric},
              {"is_closed", a.is_closed}};
}

std::string verdict(bool metric, bool closed) {
  if (!metric) return "not_metric";
  return closed ? "homogeneous" : "inhomogeneous";
}

template <class S>
Json exact_certificate_json(const ExactCertificate<S>& c) {
  Json out{{"status", to_string(c.status)}};
  if (c.witness) {
    out["witness"] = {{"pair", Json::array({c.witness->first + 1, c.witness->second + 1})},
                      {"value", exact_json(c.witness->value)}};
  } else {
    out["potential"] = "0";
    out["killing_residual"] = exact_matrix(c.killing);
  }
  return out;
}

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  for (double v : values) {
    if (!row.empty()) row += ',';
    row += format_double(v);
  }
  return row + '\n';
}

// --- foliation field selection ----------------------------------------------

struct KillingChoice {
  double eps;
  KillingGenerator gen;
};

KillingChoice parse_killing(const RunConfig& cfg, const std::string& spec) {
  std::vector<double> coeffs;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    coeffs.push_back(to_double(parse_rational(item, "killing coefficient")));
  }
  if (coeffs.size() != 3 && coeffs.size() != 4) {
    throw UsageError("killing field needs a1,a2,a3[,h]");
  }
  KillingGenerator gen{AlgebraVectord(coeffs[0], coeffs[1], coeffs[2]), coeffs.size() == 4 ? coeffs[3] : 0.0};
  if (gen.xi.norm() == 0.0 && gen.hopf == 0.0) throw UsageError("killing field generator is zero");
  return {to_double(parse_eps(cfg)), gen};
}

MilnorTriple<Rational> field_metric(const RunConfig& cfg) {
  if (!cfg.triple.empty()) return parse_triple(cfg);
  return berger_triple(parse_eps(cfg));
}

std::optional<int> frame_field_index(const std::string& field) {
  if (field == "y1") return 0;
  if (field == "y2") return 1;
  if (field == "y3") return 2;
  return std::nullopt;
}

Json numeric_report_json(const FoliationReport& r) { return to_json(r); }

std::string foliation_csv(const FoliationReport& r) {
  std::string csv = "sample,uu,ww,mixed,d_omega_23,d_omega_31,d_omega_12\n";
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const SampleResiduals& s = r.samples[i];
    csv += std::to_string(i) + ',' +
           csv_row({s.metric(0), s.metric(1), s.metric(2), s.d_omega(0), s.d_omega(1), s.d_omega(2)});
  }
  return csv;
}

CommandResult foliation_build(const RunConfig& cfg) {
  const MilnorTriple<Rational> m = parse_triple(cfg);
  if (!(m.x > m.y && m.y > m.z)) throw UsageError("foliation build needs x > y > z > 0");
  const InhomogeneousFoliation<SurdNumber> f = build_inhomogeneous_foliation(m);
  const ExactFoliationAnalysis<SurdNumber> a = analyze_left_invariant(f.metric, f.field());
  Json report{{"command", "foliation"},
              {"mode", "build"},
              {"triple", triple_json(m)},
              {"v2", exact_json(f.v2)},
              {"v3", exact_json(f.v3)},
              {"field", exact_vector(f.field())}};
  report.update(exact_analysis_json(a));
  report["predicted_d_omega"] = exact_json(f.predicted_d_omega());
  report["verdict"] = verdict(a.is_metric, a.is_closed);
  CommandResult out{report, "v2,v3,uu,ww,mixed,d_omega_23,predicted_d_omega\n"};
  out.csv += csv_row({to_double(f.v2), to_double(f.v3), to_double(a.residuals.uu), to_double(a.residuals.ww),
                      to_double(a.residuals.mixed), to_double(a.d_omega(0)), to_double(f.predicted_d_omega())});
  return out;
}

CommandResult foliation_field(const RunConfig& cfg) {
  const bool certify = cfg.mode == "certify";
  Json report{{"command", "foliation"}, {"mode", cfg.mode}, {"field", cfg.field}};
  FoliationOptions opt;

  if (const std::optional<int> idx = frame_field_index(cfg.field)) {
    const MilnorTriple<Rational> m = field_metric(cfg);
    const Vec3<Rational> v = basis_vector<Rational>(*idx);
    report["triple"] = triple_json(m);
    if (certify) {
      const ExactCertificate<Rational> c = homogeneity_certificate(m, v);
      report["certificate"] = exact_certificate_json(c);
      return {report, "status\n" + to_string(c.status) + "\n"};
    }
    const ExactFoliationAnalysis<Rational> a = analyze_left_invariant(m, v);
    report["exact"] = exact_analysis_json(a);
    const FoliationReport num =
        is_metric_foliation(m.cast<double>(), FrameField::constant(Eigen::Vector3d::Unit(*idx)), {}, cfg.tol, opt);
    report["numeric"] = numeric_report_json(num);
    report["verdict"] = verdict(a.is_metric, a.is_closed);
    return {report, foliation_csv(num)};
  }

  if (cfg.field == "theorem1") {
    const MilnorTriple<Rational> m = parse_triple(cfg);
    if (!(m.x > m.y && m.y > m.z)) throw UsageError("theorem1 field needs x > y > z > 0");
    const InhomogeneousFoliation<SurdNumber> f = build_inhomogeneous_foliation(m);
    report["triple"] = triple_json(m);
    if (certify) {
      const ExactCertificate<SurdNumber> c = homogeneity_certificate(f.metric, f.field());
      report["certificate"] = exact_certificate_json(c);
      std::string csv = "status,pair,value\n" + to_string(c.status);
      csv += c.witness ? "," + std::to_string(c.witness->first + 1) + std::to_string(c.witness->second + 1) + ',' +
                             format_double(to_double(c.witness->value)) + '\n'
                       : ",,\n";
      return {report, csv};
    }
    const ExactFoliationAnalysis<SurdNumber> a = analyze_left_invariant(f.metric, f.field());
    report["exact"] = exact_analysis_json(a);
    const InhomogeneousFoliation<double> fd = build_inhomogeneous_foliation(m.cast<double>());
    const FoliationReport num = is_metric_foliation(fd.metric, FrameField::constant(fd.field()), {}, cfg.tol, opt);
    report["numeric"] = numeric_report_json(num);
    report["verdict"] = verdict(a.is_metric, a.is_closed);
    return {report, foliation_csv(num)};
  }

  if (cfg.field.rfind("killing:", 0) == 0) {
    const KillingChoice k = parse_killing(cfg, cfg.field.substr(8));
    if (cfg.samples == 0) throw UsageError("--samples must be positive");
    std::mt19937_64 rng(cfg.seed);
    const KillingFoliationSample setup = killing_foliation_sample(k.eps, k.gen, cfg.samples, rng);
    const MilnorTriple<double> m = berger_triple(k.eps);
    report["eps"] = k.eps;
    report["seed"] = cfg.seed;
    report["base"] = Json::array({setup.base.w(), setup.base.x(), setup.base.y(), setup.base.z()});
    if (certify) {
      CertificateOptions copt;
      copt.closed_tolerance = cfg.tol;
      const HomogeneityCertificate c = homogeneity_certificate(m, setup.v, setup.base, setup.points, copt);
      report["certificate"] = to_json(c);
      std::string csv = "sample,potential\n";
      for (std::size_t i = 0; i < c.potential.size(); ++i) {
        csv += std::to_string(i) + ',' + format_double(c.potential[i]) + '\n';
      }
      return {report, csv};
    }
    FoliationReport num = is_metric_foliation(m, setup.v, setup.points, cfg.tol, opt);
    report["numeric"] = numeric_report_json(num);
    report["lemma"] = to_json(lemma_equalities_check(k.eps, setup.v, setup.points));
    report["verdict"] = verdict(num.is_metric, num.is_closed);
    return {report, foliation_csv(num)};
  }

  throw UsageError("unknown field '" + cfg.field + "' (y1, y2, y3, theorem1, killing:a1,a2,a3[,h])");
}

// --- geodesic ------------------------------------------------------------------

Json trajectory_json(const Trajectory& traj) {
  Json rows = Json::array();
  for (const TrajectorySample& s : traj.samples) {
    const Eigen::Vector4d q = s.state.point.coeffs();
    rows.push_back(Json::array({s.t, q(0), q(1), q(2), q(3), s.state.velocity(0), s.state.velocity(1),
                                s.state.velocity(2)}));
  }
  return Json{{"columns", Json::array({"t", "qw", "qx", "qy", "qz", "a1", "a2", "a3"})}, {"rows", rows}};
}

}  // namespace

std::vector<double> GridAxis::values() const {
  if (count < 1) throw UsageError("empty grid");
  return linspace(lo, hi, count);
}

CommandResult cmd_classify(const RunConfig& cfg) {
  const MilnorTriple<Rational> m = parse_triple(cfg);
  const IsometryClass<Rational> cls = classify(m);
  const ChristoffelTable<Rational> t = christoffel(m);
  Json report{{"command", "classify"}, {"triple", triple_json(m)}};
  report.update(to_json(cls));
  report["christoffel"] = christoffel_json(t);
  report["sectional_curvature"] = {{"K12", exact_json(sectional_curvature(t, m, 0, 1))},
                                   {"K23", exact_json(sectional_curvature(t, m, 1, 2))},
                                   {"K31", exact_json(sectional_curvature(t, m, 2, 0))}};
  std::string csv = "class,x,y,z,epsilon\n" + to_string(cls.kind) + ',' + to_string(cls.canonical.x) + ',' +
                    to_string(cls.canonical.y) + ',' + to_string(cls.canonical.z) + ',' +
                    (cls.epsilon ? to_string(*cls.epsilon) : std::string()) + '\n';
  return {report, csv};
}

CommandResult cmd_geodesic(const RunConfig& cfg) {
  const double eps = to_double(parse_eps(cfg));
  if (!(cfg.step > 0) || !std::isfinite(cfg.step)) throw UsageError("--step must be positive");
  if (!(cfg.t_end >= 0) || !std::isfinite(cfg.t_end)) throw UsageError("--t-end must be finite and >= 0");
  const IntegratorConfig icfg{cfg.step, true};
  Json report{{"command", "geodesic"}, {"eps", eps}, {"theta", cfg.theta}, {"t_end", cfg.t_end}, {"step", cfg.step}};

  const bool at_endpoint = cfg.theta == 0.0 || cfg.theta == std::numbers::pi;
  Trajectory traj;
  if (at_endpoint) {
    if (eps == 1.0) throw UsageError("eps = 1 is the round sphere, not a Berger sphere");
    const double dir = cfg.theta == 0.0 ? 1.0 : -1.0;
    traj = integrate_geodesic(berger_triple(eps), {GroupPoint::identity(), Eigen::Vector3d(0.0, 0.0, dir)},
                              cfg.t_end, icfg);
    double dev = 0.0;
    for (const TrajectorySample& s : traj.samples) {
      dev = std::max(dev, distance(s.state.point, hopf_flow(eps, dir * s.t, GroupPoint::identity())));
    }
    report["mode"] = "hopf_orbit";
    report["notice"] = "theta at an endpoint: the geodesic is the Y3-orbit through the identity";
    report["period"] = 2 * std::numbers::pi * eps;
    report["max_deviation"] = dev;
  } else {
    if (!(cfg.theta > 0 && cfg.theta < std::numbers::pi)) throw UsageError("--theta must lie in [0, pi]");
    const BergerGeodesicSpec spec(eps, cfg.theta);
    traj = integrate_geodesic(spec.metric(), spec.initial_state(), cfg.t_end, icfg);
    double dev = 0.0;
    for (const TrajectorySample& s : traj.samples) {
      dev = std::max(dev, distance(s.state.point, berger_geodesic(spec, s.t)));
    }
    const std::vector<double> times = linspace(0.0, cfg.t_end, kPropGeoTimes);
    const std::array<double, 1> period{spec.period()};
    const GroupPoint returned =
        sample_geodesic(spec.metric(), spec.initial_state(), period, icfg).samples.front().state.point;
    report["mode"] = "berger";
    report["alpha"] = spec.alpha();
    report["beta"] = spec.beta();
    report["period"] = spec.period();
    report["shift"] = spec.shift();
    report["max_deviation"] = dev;
    report["prop_geo_residual"] = verify_prop_geo(spec, times);
    report["integrated_return_residual"] =
        distance(returned, hopf_flow(eps, spec.shift(), GroupPoint::identity()));
  }
  report["max_speed_drift"] = max_speed_drift(traj);
  report["max_norm_defect"] = traj.max_norm_defect;
  report["samples"] = traj.samples.size();
  report["trajectory"] = trajectory_json(traj);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, cfg.hopf_columns);
  return {report, csv.str()};
}

CommandResult cmd_foliation(const RunConfig& cfg) {
  if (cfg.mode == "build") return foliation_build(cfg);
  if (cfg.mode == "check" || cfg.mode == "certify") return foliation_field(cfg);
  throw UsageError("foliation mode must be build, check or certify");
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  const std::vector<double> eps_values = cfg.eps_grid.values();
  const std::vector<double> theta_values = cfg.theta_grid.values();
  if (cfg.integrate && !(cfg.step > 0)) throw UsageError("--step must be positive");
  const std::vector<double> times = linspace(0.0, cfg.t_end, kPropGeoTimes);

  struct Cell {
    double eps, theta, period = 0, shift = 0, closed = 0, integrated = 0;
    std::exception_ptr error;
  };
  std::vector<Cell> cells;
  for (double e : eps_values)
    for (double t : theta_values) cells.push_back({e, t, 0, 0, 0, 0, nullptr});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& c = cells[i];
      try {
        const BergerGeodesicSpec spec(c.eps, c.theta);
        c.period = spec.period();
        c.shift = spec.shift();
        c.closed = verify_prop_geo(spec, times);
        if (cfg.integrate) c.integrated = verify_prop_geo_integrated(spec, times, {cfg.step, true}).residual;
      } catch (...) {
        c.error = std::current_exception();
      }
    }
  };
  unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, cells.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  Json rows = Json::array();
  std::string csv = cfg.integrate ? "eps,theta,period,shift,closed_form_residual,integrated_residual\n"
                                  : "eps,theta,period,shift,closed_form_residual\n";
  double worst = 0.0;
  for (const Cell& c : cells) {
    if (c.error) std::rethrow_exception(c.error);
    Json row{{"eps", c.eps}, {"theta", c.theta}, {"period", c.period}, {"shift", c.shift},
             {"closed_form_residual", c.closed}};
    if (cfg.integrate) {
      row["integrated_residual"] = c.integrated;
      csv += csv_row({c.eps, c.theta, c.period, c.shift, c.closed, c.integrated});
    } else {
      csv += csv_row({c.eps, c.theta, c.period, c.shift, c.closed});
    }
    rows.push_back(row);
    worst = std::max(worst, c.closed);
  }
  Json report{{"command", "sweep"}, {"cells", cells.size()}, {"max_closed_form_residual", worst}, {"rows", rows}};
  return {report, csv};
}

CommandResult run_command(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  if (cfg.subcommand == "classify") return cmd_classify(cfg);
  if (cfg.subcommand == "geodesic") return cmd_geodesic(cfg);
  if (cfg.subcommand == "foliation") return cmd_foliation(cfg);
  if (cfg.subcommand == "sweep") return cmd_sweep(cfg);
  throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
}

std::string output_path(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  const char* dir = std::getenv(kOutDirEnv);
  if (dir == nullptr || *dir == '\0') return {};
  std::string name = cfg.subcommand + (cfg.mode.empty() ? "" : "-" + cfg.mode);
  return std::string(dir) + "/" + name + (cfg.format == "csv" ? ".csv" : ".json");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    isomorphism_self_test();
  } catch (const std::exception& e) {
    err << "self-test failed: " << e.what() << '\n';
    return 2;
  }

  RunConfig cfg;
  CLI::App app{"Left-invariant metrics, Berger geodesics and metric foliations on SU(2)", "homsphere"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "homsphere 1.0");

  auto add_output = [&cfg](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output file (default: stdout or $HOMSPHERE_OUT_DIR)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "Isometry class, Christoffel symbols, curvature");
  classify_cmd->add_option("triple", cfg.triple, "Structure constants X Y Z")->expected(3)->required();
  add_output(classify_cmd);

  CLI::App* geodesic_cmd = app.add_subcommand("geodesic", "Berger geodesic: closed form against integrator");
  geodesic_cmd->add_option("--eps", cfg.eps, "Berger parameter")->required();
  geodesic_cmd->add_option("--theta", cfg.theta, "Angle between c'(0) and Y3");
  geodesic_cmd->add_option("--t-end", cfg.t_end, "Integration time");
  geodesic_cmd->add_option("--step", cfg.step, "RK4 step");
  geodesic_cmd->add_flag("--hopf-columns", cfg.hopf_columns, "Add the Hopf projection to the CSV");
  add_output(geodesic_cmd);

  CLI::App* foliation_cmd = app.add_subcommand("foliation", "Build, check or certify a foliation");
  foliation_cmd->require_subcommand(1);
  for (const char* mode : {"build", "check", "certify"}) {
    CLI::App* sub = foliation_cmd->add_subcommand(mode);
    sub->add_option("triple", cfg.triple, "Structure constants X Y Z")->expected(3);
    if (std::string(mode) != "build") {
      sub->add_option("--field", cfg.field, "y1 | y2 | y3 | theorem1 | killing:a1,a2,a3[,h]");
      sub->add_option("--eps", cfg.eps, "Berger parameter");
      sub->add_option("--tol", cfg.tol, "Verdict tolerance");
      sub->add_option("--samples", cfg.samples, "Sample points for non-invariant fields");
      sub->add_option("--seed", cfg.seed, "Random seed");
    }
    add_output(sub);
    sub->callback([&cfg, mode] { cfg.mode = mode; });
  }

  std::vector<double> eps_range, theta_range;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Period-shift residuals over an (eps, theta) grid");
  sweep_cmd->add_option("--eps-range", eps_range, "LO HI COUNT")->expected(3);
  sweep_cmd->add_option("--theta-range", theta_range, "LO HI COUNT")->expected(3);
  sweep_cmd->add_option("--t-end", cfg.t_end, "Time window for the residual");
  sweep_cmd->add_flag("--integrate", cfg.integrate, "Also check the integrated trajectory");
  sweep_cmd->add_option("--step", cfg.step, "RK4 step for --integrate");
  sweep_cmd->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  add_output(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  for (CLI::App* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    auto to_axis = [](const std::vector<double>& r, GridAxis fallback) {
      if (r.empty()) return fallback;
      if (r[2] != std::floor(r[2]) || r[2] < 0) throw UsageError("grid COUNT must be a non-negative integer");
      return GridAxis{r[0], r[1], static_cast<int>(r[2])};
    };
    cfg.eps_grid = to_axis(eps_range, cfg.eps_grid);
    cfg.theta_grid = to_axis(theta_range, cfg.theta_grid);

    const CommandResult result = run_command(cfg);
    const std::string text = cfg.format == "csv" ? result.csv : result.report.dump(2) + "\n";
    const std::string path = output_path(cfg);
    if (path.empty()) {
      out << text;
    } else {
      std::ofstream file(path, std::ios::binary);
      if (!file) throw UsageError("cannot open output file " + path);
      file << text;
      err << "wrote " << path << '\n';
    }
    if (result.report.contains("notice")) err << "notice: " << result.report["notice"].get<std::string>() << '\n';
    return 0;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const EvaluationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const IntegrationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace homsphere
