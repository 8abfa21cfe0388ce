#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spotsim/framework.hpp"
#include "spotsim/money.hpp"

namespace spotsim {

struct ResourceSpec {
  std::string id;
  std::string provider;
  std::string type;  // "spot_instance", "ebs", ...
  std::string size;  // instance type for spot instances, volume size otherwise
};

struct EventSpec {
  std::string name;           // "checkpoint", "terminate" or "launch"
  Money threshold;            // a_bid
  std::optional<Money> bid;   // s_bid, launch event only
};

struct WorkflowSpec {
  std::string name;  // "start", "checkpoint", "terminate", "launch"
  std::vector<std::string> actions;
};

struct MonitoringSpec {
  std::vector<EventSpec> events;
  std::vector<WorkflowSpec> workflows;
  std::map<std::string, std::string> event_map;     // event -> resource
  std::map<std::string, std::string> workflow_map;  // workflow -> event
};

// Unified definition of one application: tiers, resources and their tier
// mapping, SLA policies, users and the monitoring subsystem.
struct ApplicationDefinition {
  std::set<std::string> tiers;
  std::vector<ResourceSpec> resources;
  std::map<std::string, std::string> resource_map;  // resource -> tier
  std::vector<SlaPolicy> policies;
  std::set<std::string> users;  // carried, unused by spot jobs
  MonitoringSpec monitoring;

  // Throws ValidationError on dangling references, a resource_map that does
  // not cover every resource, a workflow_map missing one of the three spot
  // workflows, unequal event thresholds or an unknown workflow action.
  void validate() const;

  Money a_bid() const;
  std::optional<Money> s_bid() const;
  // size of the first spot_instance resource
  std::string instance_type() const;
};

// JSON document; see README for the schema. Throws ParseError on malformed
// JSON or missing fields, ValidationError from validate().
ApplicationDefinition parse_app_definition(std::istream& in);

}  // namespace spotsim
