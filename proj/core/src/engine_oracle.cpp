// Brute-force reference simulator: one loop iteration per wall-clock second,
// no event queue and no precomputed availability. Every instant t is
// processed in the same fixed order as simulate():
//   1. a checkpoint whose write finishes at t commits
//   2. the job completes if all work is done
//   3. the scheme's policy is consulted (running instances only)
//   4. the provider kills a non-ACC instance whose price reached the bid
//   5. a stopped instance (re)launches when allowed
// and then the second [t, t+1) is spent on exactly one thing.
#include <algorithm>
#include <optional>

#include "spotsim/engine.hpp"
#include "spotsim/error.hpp"
#include "spotsim/failure.hpp"

namespace spotsim {

namespace {

bool in_acc_query_window(Seconds t, Seconds launch, const JobSpec& job) {
  const Seconds boundary = launch + kHour * ((t - launch) / kHour + 1);
  const Seconds checkpoint_point = boundary - job.t_c - job.t_w;
  const Seconds terminate_point = boundary - job.t_w;
  return (checkpoint_point <= t && t < checkpoint_point + job.t_w) || (terminate_point <= t && t < boundary);
}

}  // namespace

SimResult simulate_oracle(const PriceTrace& trace, const JobSpec& job, const BidConfig& cfg) {
  validate_run(trace, job, cfg);
  const bool acc = cfg.scheme == SchemeId::acc;
  const Seconds begin = trace.start();
  const Seconds horizon = trace.horizon_end();

  std::optional<FailurePdf> pdf;
  if (cfg.scheme == SchemeId::adapt) {
    try {
      pdf = estimate_pdf(trace, cfg.a_bid, job.adapt_delta);
    } catch (const InfeasibleError&) {
      // never available: the job never launches, so the policy is never asked
    }
  }

  SimResult res;
  bool up = false;
  bool launched_once = false;
  Seconds launch = 0;
  Seconds restart_left = 0;
  bool writing = false;
  Seconds write_left = 0;
  Seconds write_snapshot = 0;
  Seconds work_done = 0;
  Seconds saved = 0;
  std::optional<Seconds> terminated_at;
  std::optional<Seconds> last_commit;
  Money last_hour_rate;
  Seconds worked_seconds = 0;
  std::optional<Seconds> cached_out_of_bid;  // OPT lookahead
  bool cache_valid = false;

  auto log = [&](Seconds t, EventKind kind, std::string detail = {}) {
    res.events.push_back({t, kind, std::move(detail)});
  };
  auto commit = [&](Seconds t) {
    saved = write_snapshot;
    writing = false;
    last_commit = t;
    ++res.checkpoints_taken;
    log(t, EventKind::checkpoint_end, "saved=" + std::to_string(saved));
  };
  auto begin_write = [&](Seconds t) {
    writing = true;
    write_left = job.t_c;
    write_snapshot = work_done;
    log(t, EventKind::checkpoint_begin);
    if (job.t_c == 0) commit(t);
  };
  auto stop = [&](Seconds t, EndCause cause) {
    const Seconds lost = work_done - saved;
    res.work_lost += lost;
    work_done = saved;
    writing = false;
    up = false;
    res.lifetimes.push_back({launch, t, cause});
  };

  Seconds t = begin;
  for (;; ++t) {
    if (up && writing && write_left == 0) commit(t);
    if (up && work_done == job.w) {
      res.completed = true;
      res.lifetimes.push_back({launch, t, EndCause::still_running_at_job_end});
      up = false;
      log(t, EventKind::job_complete);
      break;
    }
    if (t == horizon) break;

    const Money price = trace.price_at(t);
    if (up) {
      PolicyView view{t, work_done, saved, launch, price, cfg.a_bid, &job, pdf ? &*pdf : nullptr,
                      cfg.scheme == SchemeId::opt, {}};
      const bool working = !writing && restart_left == 0;
      if (!acc) {
        PolicyAction action = PolicyAction::continue_running;
        if (working) {
          switch (cfg.scheme) {
            case SchemeId::none: action = decide_none(view); break;
            case SchemeId::opt: {
              if (!cache_valid || (cached_out_of_bid && *cached_out_of_bid < t)) {
                cached_out_of_bid.reset();
                for (Seconds s = t; s < horizon; ++s)
                  if (trace.price_at(s) >= cfg.a_bid) {
                    cached_out_of_bid = s;
                    break;
                  }
                cache_valid = true;
              }
              action = decide_opt(view, cached_out_of_bid).value_or(PolicyAction::continue_running);
              break;
            }
            case SchemeId::hour: action = decide_hour(view); break;
            case SchemeId::edge: {
              const bool changed = t > begin && trace.price_at(t - 1) != price;
              const bool rose = t > begin && trace.price_at(t - 1) < price;
              action = decide_edge(view, changed, rose);
              break;
            }
            case SchemeId::adapt: action = decide_adapt(view); break;
            case SchemeId::acc: break;
          }
        }
        if (action == PolicyAction::take_checkpoint) begin_write(t);
        if (price >= cfg.a_bid) {
          log(t, EventKind::provider_kill, "price=" + price.to_string());
          if ((t - launch) % kHour != 0) {
            // the free partial hour is refunded
            res.total_cost -= last_hour_rate;
            for (auto it = res.events.rbegin(); it != res.events.rend(); ++it)
              if (it->kind == EventKind::hour_charge) {
                res.events.erase(std::next(it).base());
                break;
              }
          }
          stop(t, EndCause::provider_out_of_bid);
        }
      } else {
        if (working && decide_acc(view, AccPoint::checkpoint_decision) == PolicyAction::take_checkpoint)
          begin_write(t);
        view.last_checkpoint_work = saved;
        view.last_checkpoint_end = last_commit;
        if (decide_acc(view, AccPoint::terminate_decision) == PolicyAction::user_terminate) {
          log(t, EventKind::user_terminate, "price=" + price.to_string());
          stop(t, EndCause::user_terminated);
          terminated_at = t;
        }
      }
    }

    if (!up) {
      bool go = false;
      if (!acc || !launched_once) {
        go = price < cfg.a_bid;
      } else if (terminated_at && (t - *terminated_at) % job.relaunch_poll == 0) {
        PolicyView view{t, work_done, saved, launch, price, cfg.a_bid, &job, nullptr, false, {}};
        go = decide_acc(view, AccPoint::relaunch_poll) == PolicyAction::relaunch;
      }
      if (go) {
        up = true;
        launch = t;
        restart_left = launched_once ? job.r : 0;
        log(t, launched_once ? EventKind::relaunch : EventKind::launch, "price=" + price.to_string());
        launched_once = true;
        terminated_at.reset();
      }
    }

    // the second [t, t+1)
    if (up) {
      if ((t - launch) % kHour == 0) {
        last_hour_rate = price;
        res.total_cost += price;
        log(t, EventKind::hour_charge, "rate=" + price.to_string());
      }
      if (writing) {
        --write_left;
        ++res.breakdown.checkpointing;
      } else if (restart_left > 0) {
        --restart_left;
        ++res.breakdown.restart;
      } else if (acc && in_acc_query_window(t, launch, job)) {
        ++res.breakdown.query_wait;
      } else {
        ++work_done;
        ++worked_seconds;
      }
    } else {
      ++res.breakdown.unavailable;
    }
  }

  if (up) res.lifetimes.push_back({launch, t, EndCause::still_running_at_job_end});
  res.completion_time = t - begin;
  res.breakdown.lost_work = res.work_lost;
  res.breakdown.useful_work = worked_seconds - res.work_lost;
  res.cost_time_product = res.total_cost.usd() * static_cast<double>(res.completion_time) / kHour;
  return res;
}

}  // namespace spotsim
