#include "rbw/report.hpp"

#include <cstdio>
#include <ostream>

namespace rbw {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json ConfigEcho::to_json() const {
  Json j;
  j["type"] = type;
  j["p"] = p;
  j["b"] = b;
  j["L0"] = L0;
  j["seed"] = seed;
  if (!extra.is_null())
    for (auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int dim) {
  os << "n,t,eps,label";
  for (int k = 1; k <= dim; ++k) os << ",x_" << k;
  os << "\n";
  // Row n >= 1 describes the state after the n-th crossing, with the epsilon
  // and label of that crossing. The initial point is row n = 0.
  for (size_t i = 0; i < traj.points.size(); ++i) {
    os << i << ',' << format_double(traj.times[i]);
    if (i == 0 || i - 1 >= traj.labels.size())
      os << ",,";  // initial point, or the final partial segment of a timed walk
    else
      os << ',' << int(traj.epsilons[i - 1]) << ',' << traj.labels[i - 1];
    for (int k = 0; k < dim; ++k) os << ',' << format_double(traj.points[i][k]);
    os << '\n';
  }
}

}  // namespace rbw
