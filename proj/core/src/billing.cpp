#include "spotsim/billing.hpp"

#include "spotsim/error.hpp"

namespace spotsim {

std::string_view to_string(EndCause cause) {
  switch (cause) {
    case EndCause::provider_out_of_bid: return "provider_out_of_bid";
    case EndCause::user_terminated: return "user_terminated";
    case EndCause::still_running_at_job_end: return "still_running_at_job_end";
  }
  return "unknown";
}

std::vector<Seconds> hour_boundaries(const InstanceLifetime& lifetime) {
  std::vector<Seconds> out;
  for (Seconds b = lifetime.launch_time + kHour; b <= lifetime.end_time; b += kHour) out.push_back(b);
  return out;
}

Bill bill(const InstanceLifetime& lifetime, const PriceTrace& trace) {
  if (lifetime.launch_time >= lifetime.end_time) throw ValidationError("lifetime must end after launch");
  if (lifetime.launch_time < trace.start() || lifetime.end_time > trace.horizon_end())
    throw OutOfRangeError("lifetime outside trace span");

  Bill result;
  int index = 0;
  for (Seconds hour_start = lifetime.launch_time; hour_start < lifetime.end_time; hour_start += kHour, ++index) {
    const bool partial = hour_start + kHour > lifetime.end_time;
    const bool charged = !(partial && lifetime.end_cause == EndCause::provider_out_of_bid);
    const Money rate = trace.price_at(hour_start);
    result.lines.push_back({index, hour_start, rate, charged});
    if (charged) result.total += rate;
  }
  return result;
}

}  // namespace spotsim
