#include "spotsim/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "spotsim/error.hpp"
#include "spotsim/framework.hpp"

namespace spotsim {

std::string_view to_string(SchemeId id) {
  switch (id) {
    case SchemeId::none: return "none";
    case SchemeId::opt: return "opt";
    case SchemeId::hour: return "hour";
    case SchemeId::edge: return "edge";
    case SchemeId::adapt: return "adapt";
    case SchemeId::acc: return "acc";
  }
  return "unknown";
}

SchemeId parse_scheme(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (SchemeId id : kAllSchemes)
    if (to_string(id) == lower) return id;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(PolicyAction action) {
  switch (action) {
    case PolicyAction::continue_running: return "continue";
    case PolicyAction::take_checkpoint: return "take_checkpoint";
    case PolicyAction::user_terminate: return "user_terminate";
    case PolicyAction::relaunch: return "relaunch";
  }
  return "unknown";
}

namespace {

const JobSpec& job_of(const PolicyView& view) {
  if (view.job == nullptr) throw ConfigError("policy view without a job");
  return *view.job;
}

// now == launch + k*3600 - offset for some k >= 1
bool before_boundary(Seconds now, Seconds launch, Seconds offset) {
  const Seconds shifted = now - launch + offset;
  return shifted >= kHour && shifted % kHour == 0;
}

}  // namespace

PolicyAction decide_none(const PolicyView&) { return PolicyAction::continue_running; }

std::optional<PolicyAction> decide_opt(const PolicyView& view, std::optional<Seconds> next_out_of_bid) {
  if (!next_out_of_bid) return PolicyAction::continue_running;
  const JobSpec& job = job_of(view);
  const Seconds start = *next_out_of_bid - job.t_c;
  if (start < view.now) return std::nullopt;
  // A job that finishes by the kill instant needs no checkpoint.
  if (view.now == start && job.w - view.work_done > job.t_c) return PolicyAction::take_checkpoint;
  return PolicyAction::continue_running;
}

PolicyAction decide_hour(const PolicyView& view) {
  const JobSpec& job = job_of(view);
  return before_boundary(view.now, view.instance_launch_time, job.t_c) ? PolicyAction::take_checkpoint
                                                                       : PolicyAction::continue_running;
}

PolicyAction decide_edge(const PolicyView& view, bool price_changed, bool rose) {
  if (price_changed && rose && view.current_price < view.a_bid) return PolicyAction::take_checkpoint;
  return PolicyAction::continue_running;
}

PolicyAction decide_adapt(const PolicyView& view) {
  const JobSpec& job = job_of(view);
  const Seconds uptime = view.now - view.instance_launch_time;
  if (uptime <= 0 || uptime % job.adapt_delta != 0) return PolicyAction::continue_running;
  if (view.pdf == nullptr) throw ConfigError("ADAPT needs a failure pdf");
  const double h = hazard(*view.pdf, uptime, job.adapt_delta);
  const double skip_loss = h * static_cast<double>(view.work_done - view.last_checkpoint_work + job.r);
  return skip_loss > static_cast<double>(job.t_c) ? PolicyAction::take_checkpoint : PolicyAction::continue_running;
}

bool is_acc_checkpoint_instant(Seconds now, Seconds launch, const JobSpec& job) {
  return before_boundary(now, launch, job.t_c + job.t_w);
}

bool is_acc_terminate_instant(Seconds now, Seconds launch, const JobSpec& job) {
  return before_boundary(now, launch, job.t_w);
}

PolicyAction decide_acc(const PolicyView& view, AccPoint point) {
  const JobSpec& job = job_of(view);
  decision_points(kHour, job.t_c, job.t_w);  // validates t_c + t_w
  const bool above = view.current_price > view.a_bid;
  switch (point) {
    case AccPoint::checkpoint_decision:
      if (above && is_acc_checkpoint_instant(view.now, view.instance_launch_time, job))
        return PolicyAction::take_checkpoint;
      break;
    case AccPoint::terminate_decision:
      if (above && is_acc_terminate_instant(view.now, view.instance_launch_time, job) &&
          view.last_checkpoint_end == view.now)
        return PolicyAction::user_terminate;
      break;
    case AccPoint::relaunch_poll:
      if (view.current_price < view.a_bid) return PolicyAction::relaunch;
      break;
  }
  return PolicyAction::continue_running;
}

}  // namespace spotsim
