#pragma once

#include <string>

#include <json.hpp>

#include "rbw/linalg.hpp"
#include "rbw/walk.hpp"

namespace rbw {

using Json = nlohmann::ordered_json;

// Config echo written into every report; carries enough to re-run the
// experiment bit-identically (b and L0 as the exact strings given).
struct ConfigEcho {
  std::string type;
  double p = 0.0;
  std::string b;
  std::string L0;
  std::uint64_t seed = 0;
  Json extra;

  Json to_json() const;
};

Json vec_to_json(const Vec& v);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int dim);

// Deterministic double formatting (%.17g) for byte-stable outputs.
std::string format_double(double x);

}  // namespace rbw
