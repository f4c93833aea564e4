#include "homsphere/report.hpp"

#include <charconv>
#include <iomanip>

namespace homsphere {

Json to_json(const Eigen::Vector3d& v) { return Json::array({v(0), v(1), v(2)}); }

Json to_json(const Eigen::Matrix3d& m) {
  Json out = Json::array();
  for (int i = 0; i < 3; ++i) out.push_back(to_json(Eigen::Vector3d(m.row(i).transpose())));
  return out;
}

Json to_json(const IsometryClass<Rational>& c) {
  Json out{{"class", to_string(c.kind)},
           {"canonical", Json::array({exact_json(c.canonical.x), exact_json(c.canonical.y),
                                      exact_json(c.canonical.z)})}};
  if (c.epsilon) out["epsilon"] = exact_json(*c.epsilon);
  return out;
}

Json to_json(const FoliationReport& r) {
  Json samples = Json::array();
  for (const SampleResiduals& s : r.samples) {
    samples.push_back({{"metric_residuals", to_json(s.metric)},
                       {"omega", to_json(s.omega)},
                       {"d_omega", to_json(s.d_omega)}});
  }
  return Json{{"tolerance", r.tolerance},
              {"max_metric_residual", r.max_metric_residual},
              {"max_d_omega", r.max_d_omega},
              {"is_metric", r.is_metric},
              {"is_closed", r.is_closed},
              {"certificate", r.certificate},
              {"samples", samples}};
}

Json to_json(const LemmaReport& r) {
  Json out = Json::object();
  for (const LemmaEntry& e : r.entries) out[e.name] = e.max_abs;
  return out;
}

Json to_json(const HomogeneityCertificate& c) {
  Json out{{"status", to_string(c.status)}, {"max_d_omega", c.max_d_omega}};
  if (c.witness) {
    out["witness"] = {{"pair", Json::array({c.witness->first + 1, c.witness->second + 1})},
                      {"value", c.witness->value},
                      {"sample", c.witness->sample}};
  } else {
    out["max_killing_residual"] = c.max_killing_residual;
    out["potential"] = c.potential;
  }
  return out;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool hopf_columns) {
  os << "t,qw,qx,qy,qz,a1,a2,a3";
  if (hopf_columns) os << ",hx,hy,hz";
  os << '\n';
  for (const TrajectorySample& s : traj.samples) {
    const Eigen::Vector4d q = s.state.point.coeffs();
    os << format_double(s.t);
    for (int i = 0; i < 4; ++i) os << ',' << format_double(q(i));
    for (int i = 0; i < 3; ++i) os << ',' << format_double(s.state.velocity(i));
    if (hopf_columns) {
      const Eigen::Vector3d h = hopf_projection(s.state.point);
      for (int i = 0; i < 3; ++i) os << ',' << format_double(h(i));
    }
    os << '\n';
  }
}

}  // namespace homsphere
