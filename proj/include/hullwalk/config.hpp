#pragma once

#include <istream>
#include <string>

#include "hullwalk/montecarlo.hpp"

namespace hullwalk {

struct RunSettings {
  McConfig mc;
  bool acceptance = false;  // when set, a failed tolerance exits with code 3
};

// Flat `key = value` text, one entry per line, `#` starts a comment.
//
//   model.kind = circle_drift | two_point_degenerate | finite_support | gaussian_drift
//   model.mu = 0.2                     (circle_drift)
//   model.mean = 0,1                   (gaussian_drift)
//   model.sdev_along = 1               (gaussian_drift)
//   model.sdev_perp = 1                (gaussian_drift)
//   atom = x,y,p                       (finite_support, repeated)
//   n_values = 100,1000,10000
//   reps = 1000
//   seed = 42
//   delta = 0.3
//   gamma = 0.1
//   grid_size = 1024
//   panel_size = 9
//   threads = 0
//   acceptance = true
//
// Throws ConfigError carrying the line number and key. The result is
// validated.
RunSettings parse_config(std::istream& in);
RunSettings parse_config_text(const std::string& text);
RunSettings load_config(const std::string& path);

}  // namespace hullwalk
