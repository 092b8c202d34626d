// internames: run, compare and migrate simulation scenarios.

#include "internames/error.hpp"
#include "internames/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace internames;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kBadInput = 2;

std::string
read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void
write_file(const std::string& path, std::string_view text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size())))
    throw Error(Errc::ParseError, "cannot write " + path);
}

// A built-in name, unless a file of that name exists.
Scenario
resolve_scenario(const std::string& arg)
{
  if (std::filesystem::exists(arg))
    return load_scenario(arg);
  return builtin_scenario(arg);
}

MigrationPlan
resolve_plan(const std::string& arg)
{
  if (!std::filesystem::exists(arg))
    if (auto text = builtin_text(arg))
      return parse_migration_plan(*text);
  return parse_migration_plan(read_file(arg));
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Name-to-name internetworking simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string trace_out;
  Tick until = kForever;
  auto* run = app.add_subcommand("run", "Run a scenario and print its trace");
  run->add_option("scenario", scenario, "Scenario file or built-in name")->required();
  run->add_option("--until", until, "Stop after this tick");
  run->add_option("--trace", trace_out, "Write the trace here instead of stdout");

  std::string golden;
  bool bless = false;
  auto* diff = app.add_subcommand("diff", "Compare a scenario's trace with a golden file");
  diff->add_option("scenario", scenario, "Scenario file or built-in name")->required();
  diff->add_option("golden", golden, "Golden trace file")->required();
  diff->add_flag("--bless", bless, "Overwrite the golden file with the current trace");

  std::string plan;
  auto* migrate = app.add_subcommand("migrate", "Apply a migration plan and print the result");
  migrate->add_option("scenario", scenario, "Scenario file or built-in name")->required();
  migrate->add_option("plan", plan, "Plan file or built-in plan name")->required();

  auto* list = app.add_subcommand("list-builtin", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*list) {
      for (const auto& n : builtin_names())
        std::cout << n << '\n';
      return kOk;
    }

    if (*migrate) {
      std::cout << save_scenario(apply_migration(resolve_scenario(scenario), resolve_plan(plan)));
      return kOk;
    }

    auto s = resolve_scenario(scenario);
    if (*run) {
      auto trace = run_scenario(s, until);
      if (trace_out.empty())
        std::cout << trace;
      else
        write_file(trace_out, trace);
      return kOk;
    }

    auto trace = run_scenario(s);
    if (bless) {
      write_file(golden, trace);
      std::cout << "blessed " << golden << '\n';
      return kOk;
    }
    auto d = diff_trace(trace, read_file(golden));
    if (d.equal) {
      std::cout << "match\n";
      return kOk;
    }
    std::cout << "mismatch at line " << d.line << '\n'
              << "  expected: " << d.expected << '\n'
              << "  actual:   " << d.actual << '\n';
    return kMismatch;
  }
  catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}
