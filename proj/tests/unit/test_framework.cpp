#include "doctest.h"

#include <set>
#include <sstream>

#include "spotsim/app_definition.hpp"
#include "spotsim/error.hpp"
#include "spotsim/framework.hpp"
#include "support/oracles.hpp"

using namespace spotsim;

namespace {

Money usd(const char* s) { return Money::parse(s); }

using A = ProviderAction;

}  // namespace

TEST_CASE("decision points sit before the hour boundary") {
  const DecisionPoints p = decision_points(3600, 60, 5);
  CHECK(p.checkpoint == 3535);
  CHECK(p.terminate == 3595);
  CHECK_THROWS_AS(decision_points(7200, 0, 0), ConfigError);
  CHECK_THROWS_AS(decision_points(3600, 3599, 5), ConfigError);
  CHECK_THROWS_AS(decision_points(3600, -1, 5), ConfigError);
  CHECK(decision_points(3600, 0, 5).checkpoint == 3595);
}

TEST_CASE("three hour-boundary cases") {
  // Hour 1: cheap throughout. Hour 2: spike covers t_cd only. Hour 3: spike
  // covers both decision points.
  const PriceTrace t("t", "z",
                     {{0, usd("0.30")},
                      {7200 - 100, usd("0.50")},
                      {7200 - 30, usd("0.30")},
                      {10800 - 100, usd("0.50")},
                      {10800 + 10, usd("0.30")}},
                     12000);
  JobSpec job{100'000, 60, 0, 5};
  job.relaunch_poll = 60;
  const auto events = generate_events(t, usd("0.40"), job, 0);
  const std::vector<GeneratedEvent> expected = {
      {7135, SpotEvent::checkpoint},
      {10735, SpotEvent::checkpoint},
      {10795, SpotEvent::terminate},
      {10855, SpotEvent::launch},
  };
  CHECK(events == expected);
}

TEST_CASE("transition relation") {
  const std::set<std::pair<AppState, AppState>> allowed = {
      {AppState::New, AppState::Inactive},        {AppState::Inactive, AppState::Active},
      {AppState::Active, AppState::Inactive},     {AppState::Active, AppState::Unbalanced},
      {AppState::Unbalanced, AppState::Active},   {AppState::Active, AppState::Unreachable},
      {AppState::Unreachable, AppState::Active},  {AppState::Inactive, AppState::Terminated},
      {AppState::Active, AppState::Terminated},
  };
  int count = 0;
  for (AppState from : kAllAppStates)
    for (AppState to : kAllAppStates) {
      const bool ok = allowed.count({from, to}) != 0;
      CHECK(transition_allowed(from, to) == ok);
      if (ok) {
        CHECK(transition(from, to) == to);
        ++count;
      } else {
        CHECK_THROWS_AS(transition(from, to), StateError);
      }
    }
  CHECK(count == 9);
}

TEST_CASE("workflows append their action lists") {
  MockProviderLog log;
  AppState s = run_workflow(Workflow::start, AppState::Inactive, log, 0);
  CHECK(s == AppState::Active);
  s = run_workflow(Workflow::checkpoint, s, log, 3535);
  CHECK(s == AppState::Active);
  s = run_workflow(Workflow::terminate, s, log, 3595);
  CHECK(s == AppState::Unreachable);
  s = run_workflow(Workflow::launch, s, log, 4255);
  CHECK(s == AppState::Active);

  const std::vector<ProviderRecord> expected = {
      {0, A::launch_spot},       {0, A::mount_volume},      {0, A::copy_job},    {0, A::start_job},
      {3535, A::save_results},   {3595, A::terminate_spot}, {4255, A::launch_spot},
      {4255, A::mount_volume},   {4255, A::resume_tasks},
  };
  CHECK(log.records() == expected);

  CHECK_THROWS_AS(run_workflow(Workflow::launch, AppState::Active, log, 0), StateError);
  CHECK_THROWS_AS(run_workflow(Workflow::terminate, AppState::Inactive, log, 0), StateError);
  CHECK(log.size() == expected.size());
  CHECK(to_string(A::resume_tasks) == "resume_tasks");
}

TEST_CASE("sla parsing and matching") {
  const SlaPolicy sla = parse_sla("vcpu=4, ram_gb=15");
  CHECK(sla.minimum.at("vcpu") == 4.0);
  CHECK(sla.minimum.at("ram_gb") == 15.0);
  CHECK_THROWS_AS(parse_sla("vcpu"), ParseError);
  CHECK_THROWS_AS(parse_sla("vcpu=lots"), ParseError);

  ServiceOffer o;
  o.capabilities = {{"vcpu", 4}, {"ram_gb", 15}};
  CHECK(meets_sla(o, sla));
  o.capabilities["ram_gb"] = 7.5;
  CHECK_FALSE(meets_sla(o, sla));
  o.capabilities.erase("ram_gb");
  CHECK_FALSE(meets_sla(o, sla));
}

namespace {

ServiceOffer offer(const char* type, const char* rate, std::shared_ptr<const PriceTrace> history) {
  ServiceOffer o;
  o.provider = "aws";
  o.instance_type = type;
  o.zone = "z";
  o.on_demand_rate = usd(rate);
  o.capabilities = {{"vcpu", 8}};
  o.history = std::move(history);
  return o;
}

}  // namespace

TEST_CASE("bid and type selection") {
  auto cheap = std::make_shared<const PriceTrace>(PriceTrace("t", "z", {{0, usd("0.03")}}, 100'000));
  // cheap intervals of 600 s, 3000 s and one cut off by the horizon
  auto mixed = std::make_shared<const PriceTrace>(PriceTrace(
      "t", "z", {{0, usd("0.03")}, {600, usd("0.90")}, {1200, usd("0.03")}, {4200, usd("0.90")}, {4800, usd("0.03")}},
      9000));
  // every cheap interval lasts 600 s
  auto spiky = std::make_shared<const PriceTrace>(
      gen_trace(SquareWaveModel{usd("0.03"), usd("0.90"), 600, 600, 0, 0, 100'800}, 0));

  SUBCASE("a_bid is the lowest on-demand rate") {
    const std::vector<ServiceOffer> offers = {offer("typeA", "0.085", cheap), offer("typeB", "0.68", cheap)};
    const Selection s = select_bid_and_type(offers, {}, 3000, 300, 600);
    CHECK(s.a_bid == usd("0.085"));
    CHECK(s.instance_type == "typeA");
    CHECK(*s.eet_table.at("typeA") == doctest::Approx(3000.0));
  }
  SUBCASE("smaller EET wins over a cheaper rate") {
    const std::vector<ServiceOffer> offers = {offer("typeA", "0.085", mixed), offer("typeB", "0.68", cheap)};
    const Selection s = select_bid_and_type(offers, {}, 1000, 300, 600);
    CHECK(s.instance_type == "typeB");
    CHECK(*s.eet_table.at("typeA") > 1000.0);
  }
  SUBCASE("ties go to the lower on-demand rate") {
    const std::vector<ServiceOffer> offers = {offer("typeB", "0.68", cheap), offer("typeA", "0.085", cheap)};
    CHECK(select_bid_and_type(offers, {}, 3000, 300, 600).instance_type == "typeA");
  }
  SUBCASE("infeasible inputs") {
    CHECK_THROWS_AS(select_bid_and_type({}, {}, 3000, 300, 600), InfeasibleError);
    const std::vector<ServiceOffer> offers = {offer("typeA", "0.085", spiky)};
    CHECK_THROWS_AS(select_bid_and_type(offers, parse_sla("vcpu=16"), 3000, 300, 600), InfeasibleError);
    CHECK_THROWS_AS(select_bid_and_type(offers, {}, 3000, 300, 600), InfeasibleError);
  }
}

TEST_CASE("default provider bid clears the trace maximum") {
  const PriceTrace t("t", "z", {{0, usd("0.30")}, {10, usd("0.45")}}, 100);
  CHECK(default_provider_bid(t) == usd("0.90"));
  const PriceTrace free("t", "z", {{0, usd("0")}}, 100);
  CHECK(default_provider_bid(free) == Money::from_micros(1));
}

namespace {

const char* kApp = R"({
  "tiers": ["compute"],
  "resources": [
    {"id": "vm", "provider": "aws", "type": "spot_instance", "size": "m1.xlarge"},
    {"id": "vol", "provider": "aws", "type": "ebs", "size": "50"}
  ],
  "resource_map": {"vm": "compute", "vol": "compute"},
  "policies": [{"vcpu": 4, "ram_gb": 15}],
  "users": ["alice"],
  "monitoring": {
    "events": [
      {"name": "checkpoint", "threshold": "0.40"},
      {"name": "terminate", "threshold": "0.40"},
      {"name": "launch", "threshold": 0.4, "bid": "2.00"}
    ],
    "workflows": [
      {"name": "checkpoint", "actions": ["save_results"]},
      {"name": "terminate", "actions": ["terminate_spot"]},
      {"name": "launch", "actions": ["launch_spot", "mount_volume", "resume_tasks"]}
    ],
    "event_map": {"checkpoint": "vm", "terminate": "vm", "launch": "vm"},
    "workflow_map": {"checkpoint": "checkpoint", "terminate": "terminate", "launch": "launch"}
  }
})";

}  // namespace

TEST_CASE("application definition JSON") {
  std::istringstream in(kApp);
  const ApplicationDefinition app = parse_app_definition(in);
  CHECK(app.a_bid() == usd("0.40"));
  CHECK(app.s_bid() == usd("2.00"));
  CHECK(app.instance_type() == "m1.xlarge");
  CHECK(app.policies.at(0).minimum.at("vcpu") == 4.0);

  std::string broken = kApp;
  broken.replace(broken.find("\"vol\": \"compute\""), 16, "\"vol\": \"storage\"");
  std::istringstream bad(broken);
  CHECK_THROWS_AS(parse_app_definition(bad), ValidationError);

  std::istringstream junk("{not json");
  CHECK_THROWS_AS(parse_app_definition(junk), ParseError);
}

TEST_CASE("a rise between the decision points raises no terminate event") {
  const PriceTrace t("t", "z", {{0, usd("0.30")}, {3560, usd("0.50")}, {3700, usd("0.30")}}, 8000);
  const JobSpec job{100'000, 60, 0, 5};
  CHECK(generate_events(t, usd("0.40"), job, 0).empty());
}
