#ifndef INTERNAMES_SCENARIO_HPP
#define INTERNAMES_SCENARIO_HPP

#include "internames/internetwork.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace internames {

struct ScenarioBinding
{
  Name name;
  NapId nap;

  bool operator==(const ScenarioBinding&) const = default;
};

struct ScenarioPolicy
{
  NodeId node;
  AccessRule rule;

  bool operator==(const ScenarioPolicy&) const = default;
};

enum class ActionKind {
  pull,
  push,
  publish,
  subscribe,
  search,
  bind,
  unbind,
  partition,
  heal,
  nrs_register,
  nrs_withdraw,
};

std::string_view
to_string(ActionKind k);

struct Action
{
  Tick tick = 0;
  ActionKind kind = ActionKind::pull;
  Name caller;            // pull push publish subscribe search
  Name target;            // pull push; bind unbind (the bound name); nrs_withdraw (prefix)
  std::string topic;      // publish subscribe
  std::string body;       // push publish
  std::vector<std::string> keywords; // search
  bool then_pull = false; // search
  NapId nap;              // bind unbind
  RealmId realm;          // partition heal
  NrsRecord record;       // nrs_register
  Locator address;        // nrs_withdraw

  bool operator==(const Action&) const = default;
};

/** \brief a complete, self-contained simulation input
 *
 *  Text form: sections `[namerealms] [realms] [nodes] [naps] [links] [entities]
 *  [bindings] [nrs] [routes] [policies] [timeline]`, one comma-separated record
 *  per line, `#` comments, double quotes around fields holding commas.
 */
struct Scenario
{
  std::vector<NameRealm> name_realms;
  std::vector<NetworkRealm> realms;
  std::vector<NodeInfo> nodes;
  std::vector<NetworkAttachmentPoint> naps;
  std::vector<Link> links;
  std::vector<NamedEntity> entities;
  std::vector<ScenarioBinding> bindings;
  std::vector<NrsRecord> nrs_records;
  std::vector<Route> routes;
  std::vector<ScenarioPolicy> policies;
  std::vector<Action> timeline;

  bool operator==(const Scenario&) const = default;
};

/// \throw Error(ParseError) with the line number, Error(ValidationError)
Scenario
parse_scenario(std::string_view text);

/// \throw Error(ParseError), Error(ValidationError), or ParseError when the file cannot be read
Scenario
load_scenario(const std::string& path);

std::string
save_scenario(const Scenario& s);

/// Dangling references and ordering.
/// \throw Error(ValidationError)
void
validate(const Scenario& s);

/// Build the internetwork with initial bindings applied and the timeline scheduled.
std::unique_ptr<Internetwork>
build(const Scenario& s);

/// Canonical trace text of a full run (or up to `until`).
std::string
run_scenario(const Scenario& s, Tick until = kForever);

// ---------------------------------------------------------------------------
// migration

enum class StepKind { replace_authoritative_resolver, deploy_nested_realm, update_nrs };

std::string_view
to_string(StepKind k);

struct MigrationStep
{
  StepKind kind = StepKind::update_nrs;
  /// replace_authoritative_resolver
  NodeId resolver;
  /// deploy_nested_realm: the sections it adds
  Scenario deploy;
  /// update_nrs
  std::vector<std::pair<Name, Locator>> withdraw; // (prefix, next_hop)
  std::vector<NrsRecord> add;

  bool operator==(const MigrationStep&) const = default;
};

/** Text form: `[step <kind>]` headers; inside a step, `<section>: <record>` lines,
 *  where section is one of the scenario sections (deploy_nested_realm),
 *  `register`/`withdraw` (update_nrs) or `node` (replace_authoritative_resolver).
 */
struct MigrationPlan
{
  std::vector<MigrationStep> steps;
};

/// \throw Error(ParseError)
MigrationPlan
parse_migration_plan(std::string_view text);

/// \throw Error(InvalidStep)
Scenario
apply_migration(const Scenario& s, const MigrationPlan& plan);

// ---------------------------------------------------------------------------
// built-ins and trace comparison

std::vector<std::string>
builtin_names();

/// \throw Error(NotFound)
Scenario
builtin_scenario(std::string_view name);

/// Text of a built-in scenario file, or of the built-in migration plan ("cdn-migration").
std::optional<std::string_view>
builtin_text(std::string_view name);

struct TraceDiff
{
  bool equal = true;
  std::size_t line = 0; // 1-based first differing line
  std::string expected;
  std::string actual;
};

TraceDiff
diff_trace(std::string_view actual, std::string_view golden);

} // namespace internames

#endif // INTERNAMES_SCENARIO_HPP
