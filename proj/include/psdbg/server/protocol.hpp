#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "psdbg/debugger/session.hpp"

namespace psdbg::server {

inline constexpr int kProtocolVersion = 1;

using ConnectionId = std::uint64_t;
/// Receives every outgoing message of one connection, in order.
using Sink = std::function<void(const std::string&)>;

/// The JSON request/response/event protocol, independent of transport.
/// Requests: {id, method, params}. Responses: {id, ok, result|error}.
/// Events: {event, sessionId, payload}.
class ProtocolServer {
 public:
  ProtocolServer();
  ~ProtocolServer();

  ConnectionId connect(Sink sink);
  void disconnect(ConnectionId id);

  /// Handles one request. The response and then any events go out through
  /// the sinks. Safe to call from several threads.
  void handle(ConnectionId from, const std::string& message);

  /// Creates a session outside of any connection, as `session.create`
  /// would. Returns the session id.
  std::string createSession(const std::string& problemText, const std::string& scriptText,
                            const debugger::SessionOptions& options = {});

  /// Runs `fn` on a session under its lock. Throws UnknownSession.
  void withSession(const std::string& id, const std::function<void(debugger::DebugSession&)>& fn);

 private:
  struct Slot;
  struct Connection;

  std::shared_ptr<Slot> slot(const std::string& id);
  std::shared_ptr<Connection> connection(ConnectionId id);
  void send(ConnectionId to, const std::string& text);

  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::map<ConnectionId, std::shared_ptr<Connection>> connections_;
  ConnectionId nextConnection_ = 1;
  int nextSession_ = 1;
};

}  // namespace psdbg::server
