#include "doctest.h"

#include "spotsim/error.hpp"
#include "spotsim/schemes.hpp"
#include "support/oracles.hpp"

using namespace spotsim;

namespace {

Money usd(const char* s) { return Money::parse(s); }

PolicyView view_at(Seconds now, const JobSpec& job, Seconds launch = 0) {
  PolicyView v;
  v.now = now;
  v.instance_launch_time = launch;
  v.current_price = usd("0.30");
  v.a_bid = usd("0.40");
  v.job = &job;
  return v;
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(parse_scheme("ACC") == SchemeId::acc);
  CHECK(parse_scheme("Edge") == SchemeId::edge);
  CHECK(to_string(SchemeId::adapt) == "adapt");
  CHECK_THROWS_AS(parse_scheme("greedy"), ConfigError);
}

TEST_CASE("NONE never acts") {
  const JobSpec job{30000, 60, 300, 5};
  CHECK(decide_none(view_at(17, job)) == PolicyAction::continue_running);
  CHECK(decide_none(view_at(3600, job)) == PolicyAction::continue_running);
  PolicyView v = view_at(100, job);
  v.current_price = usd("0.90");
  CHECK(decide_none(v) == PolicyAction::continue_running);
}

TEST_CASE("OPT checkpoints just before the kill") {
  const JobSpec job{30000, 60, 300, 5};
  CHECK(decide_opt(view_at(4940, job), Seconds{5000}) == PolicyAction::take_checkpoint);
  CHECK(decide_opt(view_at(4939, job), Seconds{5000}) == PolicyAction::continue_running);
  CHECK_FALSE(decide_opt(view_at(0, job), Seconds{30}).has_value());
  CHECK(decide_opt(view_at(4940, job), std::nullopt) == PolicyAction::continue_running);

  PolicyView nearly_done = view_at(4940, job);
  nearly_done.work_done = job.w - job.t_c;
  CHECK(decide_opt(nearly_done, Seconds{5000}) == PolicyAction::continue_running);
}

TEST_CASE("HOUR checkpoints t_c before each launch-anchored hour") {
  const JobSpec job{30000, 60, 300, 5};
  for (Seconds t : {3540, 7140, 10740}) CHECK(decide_hour(view_at(t, job)) == PolicyAction::take_checkpoint);
  for (Seconds t : {3600, 3539, 0, 7200}) CHECK(decide_hour(view_at(t, job)) == PolicyAction::continue_running);
  for (Seconds t : {4040, 7640}) CHECK(decide_hour(view_at(t, job, 500)) == PolicyAction::take_checkpoint);
  CHECK(decide_hour(view_at(3540, job, 500)) == PolicyAction::continue_running);
}

TEST_CASE("EDGE reacts to rising prices that stay below the bid") {
  const JobSpec job{30000, 60, 300, 5};
  PolicyView v = view_at(1000, job);
  v.current_price = usd("0.35");
  CHECK(decide_edge(v, true, true) == PolicyAction::take_checkpoint);
  v.current_price = usd("0.30");
  CHECK(decide_edge(v, true, false) == PolicyAction::continue_running);
  v.current_price = usd("0.45");
  CHECK(decide_edge(v, true, true) == PolicyAction::continue_running);
  v.current_price = usd("0.40");
  CHECK(decide_edge(v, true, true) == PolicyAction::continue_running);
  CHECK(decide_edge(view_at(1000, job), false, false) == PolicyAction::continue_running);
}

TEST_CASE("ADAPT weighs expected loss against checkpoint cost") {
  JobSpec job{30000, 60, 300, 5};
  job.adapt_delta = 600;

  FailurePdf safe;
  safe.bucket_width = 600;
  safe.tail_mass = 1.0;
  PolicyView v = view_at(1200, job);
  v.work_done = 1000;
  v.pdf = &safe;
  CHECK(decide_adapt(v) == PolicyAction::continue_running);

  FailurePdf doomed;
  doomed.bucket_width = 600;
  doomed.mass = {0.0, 0.0, 1.0};
  v.pdf = &doomed;
  CHECK(decide_adapt(v) == PolicyAction::take_checkpoint);  // 1 * 1300 > 60

  const FailurePdf mild = testing::geometric_pdf(0.01, 100, 600);
  v.pdf = &mild;
  CHECK(decide_adapt(v) == PolicyAction::continue_running);  // 0.01 * 1300 = 13 < 60

  v.pdf = &doomed;
  v.now = 1100;  // between decision instants
  CHECK(decide_adapt(v) == PolicyAction::continue_running);
}

TEST_CASE("ACC decision instants and actions") {
  const JobSpec job{30000, 60, 300, 5};
  CHECK(is_acc_checkpoint_instant(3535, 0, job));
  CHECK(is_acc_terminate_instant(3595, 0, job));
  CHECK(is_acc_checkpoint_instant(7135, 0, job));
  CHECK_FALSE(is_acc_checkpoint_instant(3595, 0, job));
  CHECK(is_acc_terminate_instant(4095, 500, job));

  PolicyView v = view_at(3535, job);
  CHECK(decide_acc(v, AccPoint::checkpoint_decision) == PolicyAction::continue_running);
  v.current_price = usd("0.50");
  CHECK(decide_acc(v, AccPoint::checkpoint_decision) == PolicyAction::take_checkpoint);
  v.now = 3595;
  // no checkpoint this hour: the price rose after t_cd, keep running
  CHECK(decide_acc(v, AccPoint::terminate_decision) == PolicyAction::continue_running);
  v.last_checkpoint_end = Seconds{3595};
  CHECK(decide_acc(v, AccPoint::terminate_decision) == PolicyAction::user_terminate);
  v.current_price = usd("0.40");
  CHECK(decide_acc(v, AccPoint::terminate_decision) == PolicyAction::continue_running);
  CHECK(decide_acc(v, AccPoint::relaunch_poll) == PolicyAction::continue_running);
  v.current_price = usd("0.39");
  CHECK(decide_acc(v, AccPoint::relaunch_poll) == PolicyAction::relaunch);

  const JobSpec bad{30000, 3599, 300, 5};
  CHECK_THROWS_AS(decide_acc(view_at(0, bad), AccPoint::checkpoint_decision), ConfigError);
}
