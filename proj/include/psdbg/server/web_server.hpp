#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "psdbg/server/protocol.hpp"

namespace psdbg::server {

/// Serves the protocol over WebSocket text frames on any path, and static
/// files from `staticRoot` for plain GET requests.
class WebServer {
 public:
  WebServer(ProtocolServer& protocol, std::string staticRoot);
  ~WebServer();
  WebServer(const WebServer&) = delete;
  WebServer& operator=(const WebServer&) = delete;

  /// Port 0 picks a free port. Throws IoError when the address is taken.
  void listen(const std::string& host, int port);
  int port() const { return port_; }
  /// Accept loop; returns after stop().
  void run();
  void stop();

 private:
  void serve(int fd);

  ProtocolServer& protocol_;
  std::string staticRoot_;
  int listenFd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<int> clients_;
  std::vector<std::thread> threads_;
};

/// Minimal blocking WebSocket client.
class WebSocketClient {
 public:
  WebSocketClient() = default;
  ~WebSocketClient();
  WebSocketClient(const WebSocketClient&) = delete;
  WebSocketClient& operator=(const WebSocketClient&) = delete;

  void connect(const std::string& host, int port, const std::string& path = "/ws");
  void sendText(const std::string& text);
  /// Next text message, or nullopt on timeout or close.
  std::optional<std::string> receive(std::chrono::milliseconds timeout = std::chrono::seconds(10));
  void close();

 private:
  int fd_ = -1;
  std::string buffer_;
};

/// Sec-WebSocket-Accept value for a client key.
std::string websocketAccept(const std::string& key);

}  // namespace psdbg::server
