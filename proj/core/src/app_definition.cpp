#include "spotsim/app_definition.hpp"

#include <algorithm>
#include <istream>

#include "json.hpp"
#include "spotsim/error.hpp"

namespace spotsim {

using nlohmann::json;

namespace {

Money money_field(const json& j) {
  if (j.is_string()) return Money::parse(j.get<std::string>());
  if (j.is_number()) return Money::parse(j.dump());
  throw ParseError(0, "expected a price, got " + j.dump());
}

bool known_action(const std::string& name) {
  for (Workflow w : {Workflow::start, Workflow::checkpoint, Workflow::terminate, Workflow::launch})
    for (ProviderAction a : workflow_actions(w))
      if (to_string(a) == name) return true;
  return false;
}

}  // namespace

void ApplicationDefinition::validate() const {
  if (tiers.empty()) throw ValidationError("application has no tiers");
  std::set<std::string> resource_ids;
  for (const auto& r : resources) {
    if (!resource_ids.insert(r.id).second) throw ValidationError("duplicate resource id '" + r.id + "'");
  }
  for (const auto& id : resource_ids) {
    auto it = resource_map.find(id);
    if (it == resource_map.end()) throw ValidationError("resource '" + id + "' is not mapped to a tier");
    if (!tiers.count(it->second)) throw ValidationError("resource '" + id + "' maps to unknown tier '" + it->second + "'");
  }
  for (const auto& [res, tier] : resource_map)
    if (!resource_ids.count(res)) throw ValidationError("resource_map names unknown resource '" + res + "'");

  std::set<std::string> event_names;
  for (const auto& e : monitoring.events) event_names.insert(e.name);
  for (const auto& [event, res] : monitoring.event_map) {
    if (!event_names.count(event)) throw ValidationError("event_map names unknown event '" + event + "'");
    if (!resource_ids.count(res)) throw ValidationError("event '" + event + "' maps to unknown resource '" + res + "'");
  }

  std::set<std::string> workflow_names;
  for (const auto& w : monitoring.workflows) {
    workflow_names.insert(w.name);
    for (const auto& a : w.actions)
      if (!known_action(a)) throw ValidationError("workflow '" + w.name + "' has unknown action '" + a + "'");
  }
  for (const char* required : {"checkpoint", "terminate", "launch"}) {
    auto it = monitoring.workflow_map.find(required);
    if (it == monitoring.workflow_map.end())
      throw ValidationError(std::string("workflow_map lacks the '") + required + "' workflow");
    if (!workflow_names.count(required))
      throw ValidationError(std::string("workflow '") + required + "' is not defined");
    if (!event_names.count(it->second))
      throw ValidationError(std::string("workflow '") + required + "' maps to unknown event '" + it->second + "'");
  }

  if (monitoring.events.empty()) throw ValidationError("monitoring defines no events");
  for (const auto& e : monitoring.events)
    if (e.threshold != monitoring.events.front().threshold)
      throw ValidationError("all spot events must share one threshold (a_bid)");
  if (instance_type().empty()) throw ValidationError("no spot_instance resource");
}

Money ApplicationDefinition::a_bid() const {
  if (monitoring.events.empty()) throw ValidationError("monitoring defines no events");
  return monitoring.events.front().threshold;
}

std::optional<Money> ApplicationDefinition::s_bid() const {
  for (const auto& e : monitoring.events)
    if (e.bid) return e.bid;
  return std::nullopt;
}

std::string ApplicationDefinition::instance_type() const {
  for (const auto& r : resources)
    if (r.type == "spot_instance") return r.size;
  return {};
}

ApplicationDefinition parse_app_definition(std::istream& in) {
  ApplicationDefinition app;
  try {
    const json doc = json::parse(in);
    for (const auto& t : doc.at("tiers")) app.tiers.insert(t.get<std::string>());
    for (const auto& r : doc.at("resources"))
      app.resources.push_back({r.at("id").get<std::string>(), r.at("provider").get<std::string>(),
                               r.at("type").get<std::string>(), r.at("size").get<std::string>()});
    app.resource_map = doc.at("resource_map").get<std::map<std::string, std::string>>();
    if (doc.contains("policies"))
      for (const auto& p : doc.at("policies")) {
        SlaPolicy sla;
        for (const auto& [key, value] : p.items()) sla.minimum[key] = value.get<double>();
        app.policies.push_back(std::move(sla));
      }
    if (doc.contains("users"))
      for (const auto& u : doc.at("users")) app.users.insert(u.get<std::string>());

    const json& mon = doc.at("monitoring");
    for (const auto& e : mon.at("events")) {
      EventSpec spec{e.at("name").get<std::string>(), money_field(e.at("threshold")), std::nullopt};
      if (e.contains("bid")) spec.bid = money_field(e.at("bid"));
      app.monitoring.events.push_back(std::move(spec));
    }
    for (const auto& w : mon.at("workflows")) {
      WorkflowSpec spec{w.at("name").get<std::string>(), {}};
      if (w.contains("actions")) spec.actions = w.at("actions").get<std::vector<std::string>>();
      app.monitoring.workflows.push_back(std::move(spec));
    }
    app.monitoring.event_map = mon.at("event_map").get<std::map<std::string, std::string>>();
    app.monitoring.workflow_map = mon.at("workflow_map").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("application definition: ") + e.what());
  }
  app.validate();
  return app;
}

}  // namespace spotsim
