#pragma once

#include <string>
#include <vector>

#include "rbw/linalg.hpp"
#include "rbw/root_system.hpp"

namespace rbw {

enum class DirectionClass { rational, fully_irrational, intermediate };

// Advisory classification of a direction by integer-relation search on its
// coroot-basis coordinates. Nothing downstream branches on this.
struct DirectionReport {
  DirectionClass cls = DirectionClass::intermediate;
  Vec coroot_coords;           // B^{-1} b (b unit-normalized)
  std::vector<long> relation;  // best integer relation found; empty if none
  double residual = 0.0;       // |m . y| for that relation
  std::string note;
};

std::string to_string(DirectionClass c);

// height: coefficient bound H for the relation search.
DirectionReport classify_direction(const Vec& b, const RootSystemSpec& spec, double height = 1e6);

}  // namespace rbw
