#pragma once

#include "spotsim/time_util.hpp"

namespace spotsim {

struct JobSpec {
  Seconds w = 0;                 // total work
  Seconds t_c = 0;               // checkpoint write time
  Seconds r = 0;                 // restart overhead after a relaunch
  Seconds t_w = 0;               // wait for a spot-price query
  Seconds adapt_delta = 600;     // ADAPT decision interval
  Seconds relaunch_poll = 60;    // ACC price polling period while terminated

  // Throws ConfigError unless w > 0, t_c, r, t_w >= 0, t_c + t_w < 3600 and
  // adapt_delta, relaunch_poll > 0.
  void validate() const;
};

}  // namespace spotsim
