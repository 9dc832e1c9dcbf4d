#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "psdbg/debugger/session.hpp"
#include "psdbg/server/web_server.hpp"

namespace psdbg::cli {

enum ExitStatus : int {
  kClosed = 0,
  kOpenGoals = 1,
  kScriptError = 2,
  kUsageError = 3,
};

/// Reads a whole file. Throws IoError.
std::string readFile(const std::string& path);

/// Parses and validates a script. With a problem file, term literals are
/// checked against its signature.
int cmdCheck(const std::string& scriptPath, const std::optional<std::string>& problemPath, std::ostream& out,
             std::ostream& err);

struct RunOptions {
  std::optional<std::string> tracePath;
  std::string entry;
  std::optional<std::int64_t> maxSteps;
};

int cmdRun(const std::string& problemPath, const std::string& scriptPath, const RunOptions& options,
           std::ostream& out, std::ostream& err);

/// Matches against `sequentText`, or the problem's root sequent.
int cmdMatch(const std::string& problemPath, const std::string& pattern, const std::optional<std::string>& sequentText,
             std::ostream& out, std::ostream& err);

/// Terminal debugger. Each verb calls one debugger operation.
class Repl {
 public:
  Repl(std::string scriptPath, debugger::DebugSession session);

  /// Runs one input line; false after `q`.
  bool execute(const std::string& line, std::ostream& out);

  const debugger::DebugSession& session() const { return session_; }
  static const char* help();

 private:
  void location(std::ostream& out) const;
  void outcome(std::ostream& out) const;
  void goals(std::ostream& out) const;
  void goal(std::ostream& out, std::size_t index) const;
  void tree(std::ostream& out, debugger::NodeId id, int depth) const;
  void vars(std::ostream& out) const;
  void trace(std::ostream& out) const;
  debugger::NodeId applyTarget(const std::string& selector) const;

  std::string scriptPath_;
  debugger::DebugSession session_;
};

int cmdDebug(const std::string& problemPath, const std::string& scriptPath, std::istream& in, std::ostream& out,
             std::ostream& err);

inline constexpr int kDefaultPort = 7317;

/// PSDBG_PORT when set to a valid port, else kDefaultPort.
int defaultPort();

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = kDefaultPort;
  std::optional<std::string> problemPath;
  std::optional<std::string> scriptPath;
  std::string staticRoot;
  /// Polled; the server stops once it becomes true.
  const std::atomic<bool>* interrupt = nullptr;
  /// Called after the listener is bound, before serving.
  std::function<void(server::WebServer&, server::ProtocolServer&)> ready;
};

int cmdServe(const ServeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace psdbg::cli
