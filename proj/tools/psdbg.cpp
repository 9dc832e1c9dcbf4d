#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "psdbg/cli/commands.hpp"

namespace {

std::atomic<bool> interrupted{false};

extern "C" void onSignal(int) { interrupted = true; }

}  // namespace

int main(int argc, char** argv) {
  using namespace psdbg::cli;
  CLI::App app{"psdbg: proof-script debugger"};
  app.require_subcommand(1);

  std::string script, problem, pattern, host = "127.0.0.1", staticRoot;
  std::optional<std::string> checkProblem, sequent, tracePath, serveProblem, serveScript;
  std::optional<std::int64_t> maxSteps;
  std::string entry;
  int port = defaultPort();

  auto* check = app.add_subcommand("check", "parse and validate a script");
  check->add_option("script", script, "script file")->required();
  check->add_option("--problem", checkProblem, "problem file for checking term literals");

  auto* run = app.add_subcommand("run", "run a script to the end");
  run->add_option("problem", problem, "problem file")->required();
  run->add_option("script", script, "script file")->required();
  run->add_option("--trace", tracePath, "write the execution trace as JSON");
  run->add_option("--entry", entry, "entry script (default: first)");
  run->add_option("--max-steps", maxSteps, "step budget of each strategy call");

  auto* debug = app.add_subcommand("debug", "interactive terminal debugger");
  debug->add_option("problem", problem, "problem file")->required();
  debug->add_option("script", script, "script file")->required();

  auto* match = app.add_subcommand("match", "evaluate a match pattern");
  match->add_option("problem", problem, "problem file")->required();
  match->add_option("--pattern", pattern, "sequent pattern")->required();
  match->add_option("--sequent", sequent, "sequent to match (default: the conjecture)");

  auto* serve = app.add_subcommand("serve", "start the debug server");
  serve->add_option("--port", port, "port (default 7317, or PSDBG_PORT)");
  serve->add_option("--host", host, "listen address");
  serve->add_option("--problem", serveProblem, "problem file to preload");
  serve->add_option("--script", serveScript, "script file to preload");
  serve->add_option("--static", staticRoot, "directory of web UI assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (*check) return cmdCheck(script, checkProblem, std::cout, std::cerr);
  if (*run) return cmdRun(problem, script, RunOptions{tracePath, entry, maxSteps}, std::cout, std::cerr);
  if (*debug) return cmdDebug(problem, script, std::cin, std::cout, std::cerr);
  if (*match) return cmdMatch(problem, pattern, sequent, std::cout, std::cerr);
  ServeOptions o;
  o.host = host;
  o.port = port;
  o.problemPath = serveProblem;
  o.scriptPath = serveScript;
  o.staticRoot = staticRoot;
  o.interrupt = &interrupted;
  std::signal(SIGINT, onSignal);
  std::signal(SIGTERM, onSignal);
  return cmdServe(o, std::cout, std::cerr);
}
