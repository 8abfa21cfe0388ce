#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "spotsim/failure.hpp"
#include "spotsim/job.hpp"
#include "spotsim/money.hpp"
#include "spotsim/time_util.hpp"

namespace spotsim {

// Declaration order is the report order.
enum class SchemeId { none, opt, hour, edge, adapt, acc };

inline constexpr std::array<SchemeId, 6> kAllSchemes = {
    SchemeId::none, SchemeId::opt, SchemeId::hour, SchemeId::edge, SchemeId::adapt, SchemeId::acc};

std::string_view to_string(SchemeId id);
// Case-insensitive; throws ConfigError on an unknown name.
SchemeId parse_scheme(std::string_view name);

enum class PolicyAction { continue_running, take_checkpoint, user_terminate, relaunch };

std::string_view to_string(PolicyAction action);

// Snapshot of one running (or, for ACC polling, terminated) instance.
struct PolicyView {
  Seconds now = 0;
  Seconds work_done = 0;
  Seconds last_checkpoint_work = 0;
  Seconds instance_launch_time = 0;
  Money current_price;
  Money a_bid;
  const JobSpec* job = nullptr;
  const FailurePdf* pdf = nullptr;  // ADAPT only
  bool trace_oracle = false;        // OPT only
  std::optional<Seconds> last_checkpoint_end;  // ACC: when the latest checkpoint committed
};

PolicyAction decide_none(const PolicyView& view);

// Checkpoints so the write completes exactly at the next out-of-bid instant,
// unless the job would finish first. std::nullopt signals the remaining
// available time is shorter than t_c, so nothing can be saved.
std::optional<PolicyAction> decide_opt(const PolicyView& view, std::optional<Seconds> next_out_of_bid);

// Checkpoints t_c before every launch-anchored instance-hour boundary.
PolicyAction decide_hour(const PolicyView& view);

// Checkpoints at a price rise that leaves the instance below the bid.
PolicyAction decide_edge(const PolicyView& view, bool price_changed, bool rose);

// Every adapt_delta seconds of uptime: checkpoint when
//   hazard(next delta) * (unsaved work + r) > t_c.
PolicyAction decide_adapt(const PolicyView& view);

enum class AccPoint { checkpoint_decision, terminate_decision, relaunch_poll };

// ACC decisions. At a checkpoint decision instant (t_cd) a price strictly above
// a_bid asks for a checkpoint. At a terminate decision instant (t_td) the
// price must still be above a_bid and the t_cd checkpoint must have just
// committed (last_checkpoint_end == now); then it asks for termination. Any
// other instant yields continue_running. While terminated, a poll with price
// strictly below a_bid asks for a relaunch.
PolicyAction decide_acc(const PolicyView& view, AccPoint point);

// True when `now` is the t_cd (or t_td) instant of some instance-hour k >= 1
// of an instance launched at `launch`.
bool is_acc_checkpoint_instant(Seconds now, Seconds launch, const JobSpec& job);
bool is_acc_terminate_instant(Seconds now, Seconds launch, const JobSpec& job);

}  // namespace spotsim
