#include "spotsim/framework.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "spotsim/error.hpp"

namespace spotsim {

DecisionPoints decision_points(Seconds hour_boundary, Seconds t_c, Seconds t_w) {
  if (t_c < 0 || t_w < 0) throw ConfigError("t_c and t_w must be non-negative");
  if (t_c + t_w >= kHour) throw ConfigError("t_c + t_w must be below one hour");
  if (t_c + t_w == 0) throw ConfigError("t_c + t_w must be positive so decision points precede the boundary");
  return {hour_boundary - t_c - t_w, hour_boundary - t_w};
}

std::string_view to_string(SpotEvent event) {
  switch (event) {
    case SpotEvent::checkpoint: return "checkpoint";
    case SpotEvent::terminate: return "terminate";
    case SpotEvent::launch: return "launch";
  }
  return "unknown";
}

std::vector<GeneratedEvent> generate_events(const PriceTrace& trace, Money a_bid, const JobSpec& job, Seconds anchor) {
  job.validate();
  decision_points(kHour, job.t_c, job.t_w);
  if (anchor < trace.start() || anchor >= trace.horizon_end()) throw OutOfRangeError("anchor outside trace span");

  const Seconds horizon = trace.horizon_end();
  std::vector<GeneratedEvent> events;
  Seconds launch = anchor;
  for (Seconds boundary = launch + kHour;; boundary += kHour) {
    const DecisionPoints dp = decision_points(boundary, job.t_c, job.t_w);
    if (dp.checkpoint >= horizon) break;
    const bool checkpointed = trace.price_at(dp.checkpoint) > a_bid;
    if (checkpointed) events.push_back({dp.checkpoint, SpotEvent::checkpoint});
    if (dp.terminate >= horizon) break;
    if (!checkpointed || trace.price_at(dp.terminate) <= a_bid) continue;

    events.push_back({dp.terminate, SpotEvent::terminate});
    Seconds poll = dp.terminate + job.relaunch_poll;
    while (poll < horizon && !(trace.price_at(poll) < a_bid)) poll += job.relaunch_poll;
    if (poll >= horizon) break;
    events.push_back({poll, SpotEvent::launch});
    launch = poll;
    boundary = launch;  // incremented to launch + 1h by the loop
  }
  return events;
}

std::string_view to_string(AppState state) {
  switch (state) {
    case AppState::New: return "New";
    case AppState::Inactive: return "Inactive";
    case AppState::Active: return "Active";
    case AppState::Unbalanced: return "Unbalanced";
    case AppState::Unreachable: return "Unreachable";
    case AppState::Terminated: return "Terminated";
  }
  return "unknown";
}

bool transition_allowed(AppState from, AppState to) {
  using S = AppState;
  switch (from) {
    case S::New: return to == S::Inactive;
    case S::Inactive: return to == S::Active || to == S::Terminated;
    case S::Active:
      return to == S::Inactive || to == S::Unbalanced || to == S::Unreachable || to == S::Terminated;
    case S::Unbalanced: return to == S::Active;
    case S::Unreachable: return to == S::Active;
    case S::Terminated: return false;
  }
  return false;
}

AppState transition(AppState from, AppState to) {
  if (!transition_allowed(from, to))
    throw StateError("illegal transition " + std::string(to_string(from)) + " -> " + std::string(to_string(to)));
  return to;
}

std::string_view to_string(ProviderAction action) {
  switch (action) {
    case ProviderAction::launch_spot: return "launch_spot";
    case ProviderAction::mount_volume: return "mount_volume";
    case ProviderAction::copy_job: return "copy_job";
    case ProviderAction::start_job: return "start_job";
    case ProviderAction::save_results: return "save_results";
    case ProviderAction::terminate_spot: return "terminate_spot";
    case ProviderAction::resume_tasks: return "resume_tasks";
  }
  return "unknown";
}

std::string_view to_string(Workflow workflow) {
  switch (workflow) {
    case Workflow::start: return "start";
    case Workflow::checkpoint: return "checkpoint";
    case Workflow::terminate: return "terminate";
    case Workflow::launch: return "launch";
  }
  return "unknown";
}

std::span<const ProviderAction> workflow_actions(Workflow workflow) {
  using A = ProviderAction;
  static constexpr A kStart[] = {A::launch_spot, A::mount_volume, A::copy_job, A::start_job};
  static constexpr A kCheckpoint[] = {A::save_results};
  static constexpr A kTerminate[] = {A::terminate_spot};
  static constexpr A kLaunch[] = {A::launch_spot, A::mount_volume, A::resume_tasks};
  switch (workflow) {
    case Workflow::start: return kStart;
    case Workflow::checkpoint: return kCheckpoint;
    case Workflow::terminate: return kTerminate;
    case Workflow::launch: return kLaunch;
  }
  return {};
}

AppState run_workflow(Workflow workflow, AppState state, MockProviderLog& log, Seconds now) {
  bool legal = false;
  AppState next = state;
  switch (workflow) {
    case Workflow::start:
      legal = state == AppState::Inactive;
      next = AppState::Active;
      break;
    case Workflow::checkpoint:
      legal = state == AppState::Active || state == AppState::Unreachable;
      break;
    case Workflow::terminate:
      legal = state == AppState::Active;
      next = AppState::Unreachable;
      break;
    case Workflow::launch:
      legal = state == AppState::Unreachable;
      next = AppState::Active;
      break;
  }
  if (!legal)
    throw StateError("workflow " + std::string(to_string(workflow)) + " is not legal in state " +
                     std::string(to_string(state)));
  if (next != state) next = transition(state, next);
  for (ProviderAction a : workflow_actions(workflow)) log.append(now, a);
  return next;
}

SlaPolicy parse_sla(std::string_view text) {
  SlaPolicy sla;
  std::string item;
  std::istringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(0, "SLA item '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
      throw ParseError(0, "SLA value '" + value + "' for " + key + " is not a number");
    sla.minimum[key] = v;
  }
  return sla;
}

bool meets_sla(const ServiceOffer& offer, const SlaPolicy& sla) {
  for (const auto& [key, minimum] : sla.minimum) {
    auto it = offer.capabilities.find(key);
    if (it == offer.capabilities.end() || it->second < minimum) return false;
  }
  return true;
}

Selection select_bid_and_type(std::span<const ServiceOffer> offers, const SlaPolicy& sla, Seconds w, Seconds r,
                              Seconds bucket_width) {
  std::vector<const ServiceOffer*> feasible;
  for (const auto& o : offers)
    if (meets_sla(o, sla)) feasible.push_back(&o);
  if (feasible.empty()) throw InfeasibleError("no offer meets the SLA");

  Selection sel;
  sel.a_bid = (*std::min_element(feasible.begin(), feasible.end(), [](auto* a, auto* b) {
                return a->on_demand_rate < b->on_demand_rate;
              }))->on_demand_rate;

  const ServiceOffer* best = nullptr;
  double best_eet = 0.0;
  std::string diagnostics;
  for (const ServiceOffer* o : feasible) {
    if (!o->history) throw ConfigError("offer " + o->instance_type + " has no price history");
    std::optional<double> e;
    try {
      e = eet(estimate_pdf(*o->history, sel.a_bid, bucket_width), {w, r});
      if (!e) diagnostics += "\n  " + o->instance_type + ": fails before completion with certainty";
    } catch (const InfeasibleError&) {
      diagnostics += "\n  " + o->instance_type + ": never available at bid " + sel.a_bid.to_string();
    }
    auto [slot, inserted] = sel.eet_table.try_emplace(o->instance_type, e);
    if (!inserted && e && (!slot->second || *e < *slot->second)) slot->second = e;
    if (!e) continue;
    const bool better = best == nullptr || *e < best_eet ||
                        (*e == best_eet && (o->on_demand_rate < best->on_demand_rate ||
                                            (o->on_demand_rate == best->on_demand_rate &&
                                             o->instance_type < best->instance_type)));
    if (better) {
      best = o;
      best_eet = *e;
    }
  }
  if (best == nullptr) throw InfeasibleError("no instance type finishes the job at bid " + sel.a_bid.to_string() + ":" + diagnostics);
  sel.instance_type = best->instance_type;
  return sel;
}

Money default_provider_bid(const PriceTrace& history) {
  const Money doubled = history.max_price() * 2;
  return std::max(doubled, history.max_price() + Money::from_micros(1));
}

}  // namespace spotsim
