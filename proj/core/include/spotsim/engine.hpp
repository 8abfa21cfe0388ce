#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spotsim/billing.hpp"
#include "spotsim/job.hpp"
#include "spotsim/money.hpp"
#include "spotsim/schemes.hpp"
#include "spotsim/time_util.hpp"
#include "spotsim/trace.hpp"

namespace spotsim {

struct BidConfig {
  Money a_bid;
  Money s_bid;  // provider bid for ACC; ignored by the other schemes
  SchemeId scheme = SchemeId::none;
};

enum class EventKind {
  launch,
  relaunch,
  checkpoint_begin,
  checkpoint_end,
  provider_kill,
  user_terminate,
  hour_charge,
  job_complete,
};

std::string_view to_string(EventKind kind);

struct SimEvent {
  Seconds time = 0;
  EventKind kind = EventKind::launch;
  std::string detail;
};

// Wall-clock seconds by what they were spent on. Every second from
// submission to completion (or horizon) lands in exactly one bucket.
struct TimeBreakdown {
  Seconds useful_work = 0;
  Seconds lost_work = 0;
  Seconds checkpointing = 0;
  Seconds query_wait = 0;
  Seconds restart = 0;
  Seconds unavailable = 0;

  Seconds total() const {
    return useful_work + lost_work + checkpointing + query_wait + restart + unavailable;
  }
  friend bool operator==(const TimeBreakdown&, const TimeBreakdown&) = default;
};

struct SimResult {
  bool completed = false;
  Seconds completion_time = 0;  // submission (trace start) to completion, or to horizon
  Money total_cost;
  double cost_time_product = 0.0;  // USD x hours
  Seconds work_lost = 0;
  int checkpoints_taken = 0;
  TimeBreakdown breakdown;
  std::vector<InstanceLifetime> lifetimes;
  std::vector<SimEvent> events;
};

// Event-driven simulation of one job under one scheme, submitted at trace
// start. Deterministic. Throws ConfigError on an invalid job or bid config.
SimResult simulate(const PriceTrace& trace, const JobSpec& job, const BidConfig& cfg);

// Same contract as simulate, computed by stepping one second at a time.
// Slow; exists to check simulate.
SimResult simulate_oracle(const PriceTrace& trace, const JobSpec& job, const BidConfig& cfg);

struct Metrics {
  double completion_hours = 0.0;
  Money cost;
  double product = 0.0;  // USD x hours
};

// Throws ValidationError for an incomplete result.
Metrics metrics(const SimResult& result);

// Shared validation used by both simulators.
void validate_run(const PriceTrace& trace, const JobSpec& job, const BidConfig& cfg);

}  // namespace spotsim
