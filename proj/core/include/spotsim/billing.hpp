#pragma once

#include <string_view>
#include <vector>

#include "spotsim/money.hpp"
#include "spotsim/time_util.hpp"
#include "spotsim/trace.hpp"

namespace spotsim {

enum class EndCause { provider_out_of_bid, user_terminated, still_running_at_job_end };

std::string_view to_string(EndCause cause);

struct InstanceLifetime {
  Seconds launch_time = 0;
  Seconds end_time = 0;
  EndCause end_cause = EndCause::user_terminated;

  friend bool operator==(const InstanceLifetime&, const InstanceLifetime&) = default;
};

// One begun instance-hour. Hours are anchored at launch, not the wall clock.
struct ChargeLine {
  int hour_index = 0;
  Seconds hour_start = 0;
  Money rate;
  bool charged = true;

  friend bool operator==(const ChargeLine&, const ChargeLine&) = default;
};

struct Bill {
  Money total;
  std::vector<ChargeLine> lines;
};

// launch + k*3600 for k >= 1 while <= end_time.
std::vector<Seconds> hour_boundaries(const InstanceLifetime& lifetime);

// Each hour is billed at the price in effect when it opens. The last partial
// hour is free after an out-of-bid kill and charged in full otherwise.
// Throws ValidationError if launch >= end and OutOfRangeError if the lifetime
// leaves the trace span.
Bill bill(const InstanceLifetime& lifetime, const PriceTrace& trace);

}  // namespace spotsim
