#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spotsim/failure.hpp"
#include "spotsim/job.hpp"
#include "spotsim/money.hpp"
#include "spotsim/time_util.hpp"
#include "spotsim/trace.hpp"

namespace spotsim {

// --- decision points --------------------------------------------------------

struct DecisionPoints {
  Seconds checkpoint;  // t_cd = t_h - t_c - t_w
  Seconds terminate;   // t_td = t_h - t_w
};

// Throws ConfigError when t_c + t_w >= 3600, when t_c + t_w == 0 (both points
// would sit on the boundary) or when either is negative.
DecisionPoints decision_points(Seconds hour_boundary, Seconds t_c, Seconds t_w);

// --- monitor event stream ---------------------------------------------------

enum class SpotEvent { checkpoint, terminate, launch };

std::string_view to_string(SpotEvent event);

struct GeneratedEvent {
  Seconds time = 0;
  SpotEvent kind = SpotEvent::checkpoint;

  friend bool operator==(const GeneratedEvent&, const GeneratedEvent&) = default;
};

// Events the monitor raises for an instance launched at `anchor` that runs
// until the trace horizon: a checkpoint event at t_cd of every instance-hour
// whose price is strictly above a_bid there, and a terminate event at t_td
// when the price is still above a_bid after such a checkpoint. After a termination the monitor polls every job.relaunch_poll
// seconds and raises a launch event at the first poll below a_bid; hours then
// re-anchor at the relaunch.
std::vector<GeneratedEvent> generate_events(const PriceTrace& trace, Money a_bid, const JobSpec& job,
                                            Seconds anchor);

// --- application lifecycle --------------------------------------------------

enum class AppState { New, Inactive, Active, Unbalanced, Unreachable, Terminated };

inline constexpr std::array<AppState, 6> kAllAppStates = {AppState::New,        AppState::Inactive,
                                                          AppState::Active,     AppState::Unbalanced,
                                                          AppState::Unreachable, AppState::Terminated};

std::string_view to_string(AppState state);
bool transition_allowed(AppState from, AppState to);
// Returns `to`; throws StateError for a pair outside the lifecycle relation.
AppState transition(AppState from, AppState to);

enum class ProviderAction { launch_spot, mount_volume, copy_job, start_job, save_results, terminate_spot, resume_tasks };

std::string_view to_string(ProviderAction action);

struct ProviderRecord {
  Seconds time = 0;
  ProviderAction action = ProviderAction::launch_spot;

  friend bool operator==(const ProviderRecord&, const ProviderRecord&) = default;
};

// Append-only record of what a real provider would have been asked to do.
class MockProviderLog {
 public:
  void append(Seconds time, ProviderAction action) { records_.push_back({time, action}); }
  const std::vector<ProviderRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<ProviderRecord> records_;
};

enum class Workflow { start, checkpoint, terminate, launch };

std::string_view to_string(Workflow workflow);
std::span<const ProviderAction> workflow_actions(Workflow workflow);

// Appends the workflow's actions at `now` and returns the new state.
// start: Inactive -> Active; checkpoint: Active or Unreachable, unchanged;
// terminate: Active -> Unreachable; launch: Unreachable -> Active.
// Throws StateError when the workflow is not legal in `state`.
AppState run_workflow(Workflow workflow, AppState state, MockProviderLog& log, Seconds now);

// --- bid and instance-type selection ----------------------------------------

using Capabilities = std::map<std::string, double>;

struct SlaPolicy {
  Capabilities minimum;  // every listed capability must be met or exceeded
};

// "vcpu=4,ram_gb=15" -> SlaPolicy. Throws ParseError.
SlaPolicy parse_sla(std::string_view text);

struct ServiceOffer {
  std::string provider;
  std::string instance_type;
  std::string zone;
  Money on_demand_rate;
  Capabilities capabilities;
  std::shared_ptr<const PriceTrace> history;
};

bool meets_sla(const ServiceOffer& offer, const SlaPolicy& sla);

struct Selection {
  Money a_bid;
  std::string instance_type;
  // Expected execution time per SLA-meeting type; std::nullopt = never finishes.
  std::map<std::string, std::optional<double>> eet_table;
};

// Greedy choice: a_bid is the cheapest on-demand rate among SLA-meeting
// offers; the type with the smallest finite EET at that bid wins (ties: lower
// on-demand rate, then type name). Throws InfeasibleError when no offer meets
// the SLA or no EET is finite; the message lists per-type diagnostics.
Selection select_bid_and_type(std::span<const ServiceOffer> offers, const SlaPolicy& sla, Seconds w, Seconds r,
                              Seconds bucket_width);

// S_bid used when none is configured: twice the highest observed price.
Money default_provider_bid(const PriceTrace& history);

}  // namespace spotsim
