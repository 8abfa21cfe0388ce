#include "spotsim/engine.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "spotsim/error.hpp"
#include "spotsim/failure.hpp"
#include "spotsim/framework.hpp"

namespace spotsim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::launch: return "launch";
    case EventKind::relaunch: return "relaunch";
    case EventKind::checkpoint_begin: return "checkpoint_begin";
    case EventKind::checkpoint_end: return "checkpoint_end";
    case EventKind::provider_kill: return "provider_kill";
    case EventKind::user_terminate: return "user_terminate";
    case EventKind::hour_charge: return "hour_charge";
    case EventKind::job_complete: return "job_complete";
  }
  return "unknown";
}

void JobSpec::validate() const {
  if (w <= 0) throw ConfigError("job length w must be positive");
  if (t_c < 0 || r < 0 || t_w < 0) throw ConfigError("t_c, r and t_w must be non-negative");
  if (t_c + t_w >= kHour) throw ConfigError("t_c + t_w must be below one hour");
  if (adapt_delta <= 0) throw ConfigError("adapt_delta must be positive");
  if (relaunch_poll <= 0) throw ConfigError("relaunch_poll must be positive");
}

void validate_run(const PriceTrace& trace, const JobSpec& job, const BidConfig& cfg) {
  job.validate();
  if (cfg.a_bid < Money{}) throw ConfigError("a_bid must be non-negative");
  if (cfg.scheme == SchemeId::acc) {
    decision_points(trace.start() + kHour, job.t_c, job.t_w);
    if (job.r + job.t_c + job.t_w >= kHour)
      throw ConfigError("ACC needs r + t_c + t_w below one hour so every hour reaches its checkpoint point");
    if (cfg.s_bid <= trace.max_price())
      throw ConfigError("ACC provider bid " + cfg.s_bid.to_string() + " must exceed the trace maximum " +
                        trace.max_price().to_string());
  }
}

Metrics metrics(const SimResult& result) {
  if (!result.completed) throw ValidationError("metrics need a completed run");
  const double hours = static_cast<double>(result.completion_time) / kHour;
  return {hours, result.total_cost, result.total_cost.usd() * hours};
}

namespace {

constexpr Seconds kNever = std::numeric_limits<Seconds>::max();

// Jumps between the instants where something can change, applying the same
// per-instant rules as the second-by-second reference.
class EventSimulation {
 public:
  EventSimulation(const PriceTrace& trace, const JobSpec& job, const BidConfig& cfg)
      : trace_(trace), job_(job), cfg_(cfg), acc_(cfg.scheme == SchemeId::acc),
        intervals_(availability(trace, cfg.a_bid)) {
    if (cfg.scheme == SchemeId::adapt && !intervals_.empty()) pdf_ = estimate_pdf(trace, cfg.a_bid, job.adapt_delta);
  }

  SimResult run() {
    const Seconds horizon = trace_.horizon_end();
    Seconds t = trace_.start();
    for (;;) {
      if (up_ && writing_ && write_end_ == t) commit(t);
      if (up_ && work_done_ == job_.w) {
        res_.completed = true;
        finish_lifetime(t, EndCause::still_running_at_job_end);
        log(t, EventKind::job_complete);
        break;
      }
      if (t == horizon) break;
      process(t);
      const Seconds next = next_instant(t);
      spend(t, next);
      t = next;
    }
    if (up_) finish_lifetime(t, EndCause::still_running_at_job_end);

    res_.completion_time = t - trace_.start();
    res_.breakdown.lost_work = res_.work_lost;
    res_.breakdown.useful_work = worked_ - res_.work_lost;
    for (const auto& life : res_.lifetimes) {
      const Bill b = bill(life, trace_);
      res_.total_cost += b.total;
      for (const auto& line : b.lines)
        if (line.charged) log(line.hour_start, EventKind::hour_charge, "rate=" + line.rate.to_string());
    }
    std::stable_sort(res_.events.begin(), res_.events.end(),
                     [](const SimEvent& a, const SimEvent& b) { return a.time < b.time; });
    res_.cost_time_product = res_.total_cost.usd() * static_cast<double>(res_.completion_time) / kHour;
    return std::move(res_);
  }

 private:
  void log(Seconds t, EventKind kind, std::string detail = {}) { res_.events.push_back({t, kind, std::move(detail)}); }

  void commit(Seconds t) {
    saved_ = snapshot_;
    writing_ = false;
    last_commit_ = t;
    ++res_.checkpoints_taken;
    log(t, EventKind::checkpoint_end, "saved=" + std::to_string(saved_));
  }

  void begin_write(Seconds t) {
    writing_ = true;
    write_end_ = t + job_.t_c;
    snapshot_ = work_done_;
    log(t, EventKind::checkpoint_begin);
    if (job_.t_c == 0) commit(t);
  }

  void finish_lifetime(Seconds t, EndCause cause) {
    res_.lifetimes.push_back({launch_, t, cause});
    up_ = false;
  }

  void stop(Seconds t, EndCause cause) {
    res_.work_lost += work_done_ - saved_;
    work_done_ = saved_;
    writing_ = false;
    finish_lifetime(t, cause);
  }

  const AvailabilityInterval* interval_containing(Seconds t) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](Seconds v, const AvailabilityInterval& iv) { return v < iv.start; });
    if (it == intervals_.begin()) return nullptr;
    --it;
    return t < it->end ? &*it : nullptr;
  }

  // Steps 3-5 of an instant.
  void process(Seconds t) {
    const Money price = trace_.price_at(t);
    if (up_) {
      PolicyView view{t, work_done_, saved_, launch_, price, cfg_.a_bid, &job_, pdf_ ? &*pdf_ : nullptr,
                      cfg_.scheme == SchemeId::opt, {}};
      const bool working = !writing_ && t >= restart_end_;
      if (!acc_) {
        PolicyAction action = PolicyAction::continue_running;
        if (working) action = consult(view);
        if (action == PolicyAction::take_checkpoint) begin_write(t);
        if (t == run_end_) {
          log(t, EventKind::provider_kill, "price=" + price.to_string());
          stop(t, EndCause::provider_out_of_bid);
        }
      } else {
        if (working && decide_acc(view, AccPoint::checkpoint_decision) == PolicyAction::take_checkpoint)
          begin_write(t);
        view.last_checkpoint_work = saved_;
        view.last_checkpoint_end = last_commit_;
        if (decide_acc(view, AccPoint::terminate_decision) == PolicyAction::user_terminate) {
          log(t, EventKind::user_terminate, "price=" + price.to_string());
          stop(t, EndCause::user_terminated);
          terminated_at_ = t;
        }
      }
    }
    if (!up_) {
      bool go = false;
      if (!acc_ || !launched_once_) {
        go = price < cfg_.a_bid;
      } else if (terminated_at_ && (t - *terminated_at_) % job_.relaunch_poll == 0) {
        PolicyView view{t, work_done_, saved_, launch_, price, cfg_.a_bid, &job_, nullptr, false, {}};
        go = decide_acc(view, AccPoint::relaunch_poll) == PolicyAction::relaunch;
      }
      if (go) launch_at(t, price);
    }
  }

  PolicyAction consult(const PolicyView& view) {
    switch (cfg_.scheme) {
      case SchemeId::none: return decide_none(view);
      case SchemeId::opt: {
        std::optional<Seconds> out_of_bid;
        if (run_end_ < trace_.horizon_end()) out_of_bid = run_end_;
        return decide_opt(view, out_of_bid).value_or(PolicyAction::continue_running);
      }
      case SchemeId::hour: return decide_hour(view);
      case SchemeId::edge: {
        const auto& pts = trace_.points();
        const std::size_t i = trace_.index_at(view.now);
        const bool changed = i > 0 && pts[i].timestamp == view.now && pts[i].price != pts[i - 1].price;
        return decide_edge(view, changed, changed && pts[i].price > pts[i - 1].price);
      }
      case SchemeId::adapt: return decide_adapt(view);
      case SchemeId::acc: break;
    }
    return PolicyAction::continue_running;
  }

  void launch_at(Seconds t, Money price) {
    up_ = true;
    launch_ = t;
    restart_end_ = t + (launched_once_ ? job_.r : 0);
    log(t, launched_once_ ? EventKind::relaunch : EventKind::launch, "price=" + price.to_string());
    launched_once_ = true;
    terminated_at_.reset();
    // Non-ACC instances die when their availability interval ends; ACC
    // instances only stop when the user says so.
    run_end_ = kNever;
    if (!acc_) run_end_ = interval_containing(t)->end;
  }

  bool in_query_window(Seconds t) const {
    const Seconds boundary = launch_ + kHour * ((t - launch_) / kHour + 1);
    const DecisionPoints dp = decision_points(boundary, job_.t_c, job_.t_w);
    return (t >= dp.checkpoint && t < dp.checkpoint + job_.t_w) || (t >= dp.terminate && t < boundary);
  }

  // Smallest launch + k*period - offset (k >= 1) strictly after t.
  Seconds next_periodic(Seconds t, Seconds period, Seconds offset) const {
    const Seconds k = std::max<Seconds>(1, (t - launch_ + offset) / period + 1);
    return launch_ + k * period - offset;
  }

  Seconds next_instant(Seconds t) const {
    Seconds next = trace_.horizon_end();
    auto consider = [&](Seconds c) {
      if (c > t) next = std::min(next, c);
    };

    if (up_) {
      if (writing_) consider(write_end_);
      if (t < restart_end_) consider(restart_end_);
      if (run_end_ != kNever) consider(run_end_);
      const bool frozen = acc_ && in_query_window(t);
      if (!writing_ && t >= restart_end_ && !frozen) consider(t + (job_.w - work_done_));
      switch (cfg_.scheme) {
        case SchemeId::none: break;
        case SchemeId::opt:
          if (run_end_ != kNever && run_end_ < trace_.horizon_end()) consider(run_end_ - job_.t_c);
          break;
        case SchemeId::hour: consider(next_periodic(t, kHour, job_.t_c)); break;
        case SchemeId::edge: {
          const auto& pts = trace_.points();
          auto it = std::upper_bound(pts.begin(), pts.end(), t,
                                     [](Seconds v, const PricePoint& p) { return v < p.timestamp; });
          if (it != pts.end()) consider(it->timestamp);
          break;
        }
        case SchemeId::adapt: consider(next_periodic(t, job_.adapt_delta, 0)); break;
        case SchemeId::acc:
          // t_cd, end of the t_cd query window, t_td and the boundary itself
          for (Seconds offset : {job_.t_c + job_.t_w, job_.t_c, job_.t_w, Seconds{0}})
            consider(next_periodic(t, kHour, offset));
          break;
      }
      return next;
    }

    if (acc_ && launched_once_) {
      // first poll instant inside an availability interval
      for (auto it = intervals_.begin(); it != intervals_.end(); ++it) {
        if (it->end <= t + 1) continue;
        const Seconds from = std::max(it->start, t + 1);
        const Seconds poll = *terminated_at_ + ceil_to_multiple(from - *terminated_at_, job_.relaunch_poll);
        if (poll < it->end) {
          consider(poll);
          break;
        }
      }
      return next;
    }

    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](Seconds v, const AvailabilityInterval& iv) { return v < iv.start; });
    if (it != intervals_.end()) consider(it->start);
    return next;
  }

  // The span [from, to) has a single activity by construction of next_instant.
  void spend(Seconds from, Seconds to) {
    const Seconds span = to - from;
    if (!up_) {
      res_.breakdown.unavailable += span;
    } else if (writing_) {
      res_.breakdown.checkpointing += span;
    } else if (from < restart_end_) {
      res_.breakdown.restart += span;
    } else if (acc_ && in_query_window(from)) {
      res_.breakdown.query_wait += span;
    } else {
      work_done_ += span;
      worked_ += span;
    }
  }

  const PriceTrace& trace_;
  const JobSpec& job_;
  const BidConfig& cfg_;
  const bool acc_;
  const std::vector<AvailabilityInterval> intervals_;
  std::optional<FailurePdf> pdf_;

  SimResult res_;
  bool up_ = false;
  bool launched_once_ = false;
  Seconds launch_ = 0;
  Seconds restart_end_ = 0;
  Seconds run_end_ = kNever;
  bool writing_ = false;
  Seconds write_end_ = 0;
  Seconds snapshot_ = 0;
  Seconds work_done_ = 0;
  Seconds saved_ = 0;
  Seconds worked_ = 0;
  std::optional<Seconds> terminated_at_;
  std::optional<Seconds> last_commit_;
};

}  // namespace

SimResult simulate(const PriceTrace& trace, const JobSpec& job, const BidConfig& cfg) {
  validate_run(trace, job, cfg);
  return EventSimulation(trace, job, cfg).run();
}

}  // namespace spotsim
