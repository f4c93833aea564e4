#pragma once

// JSON and CSV renderings of library results.

#include <ostream>
#include <string>

#include <json.hpp>

#include "homsphere/foliations.hpp"
#include "homsphere/geodesics.hpp"
#include "homsphere/milnor.hpp"

namespace homsphere {

using Json = nlohmann::ordered_json;

Json to_json(const Eigen::Vector3d& v);
Json to_json(const Eigen::Matrix3d& m);
Json to_json(const IsometryClass<Rational>& c);
Json to_json(const FoliationReport& r);
Json to_json(const LemmaReport& r);
Json to_json(const HomogeneityCertificate& c);

/// Exact scalars are rendered as {"exact": "...", "value": <double>}.
template <class S>
Json exact_json(const S& x) {
  return Json{{"exact", to_string(x)}, {"value", to_double(x)}};
}

/// Nonzero entries only, keyed "ijk" with 1-based frame indices.
template <class S>
Json christoffel_json(const ChristoffelTable<S>& t) {
  Json out = Json::object();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        if (is_zero(t(i, j, k))) continue;
        out[std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1)] = exact_json(t(i, j, k));
      }
  return out;
}

/// Header t,qw,qx,qy,qz,a1,a2,a3 (+ hx,hy,hz with the Hopf projection).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool hopf_columns = false);

/// Doubles in CSV cells: shortest round-trip representation.
std::string format_double(double v);

}  // namespace homsphere
