#include "psdbg/server/web_server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <openssl/evp.h>
#include <openssl/sha.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace psdbg::server {

namespace {

constexpr const char* kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

std::string base64(const unsigned char* data, std::size_t n) {
  std::string out(4 * ((n + 2) / 3), '\0');
  int len = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data, static_cast<int>(n));
  out.resize(static_cast<std::size_t>(len));
  return out;
}

bool sendAll(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

/// Reads until `buffer` holds at least `n` bytes. False on EOF, error or
/// timeout (negative timeout waits forever).
bool fill(int fd, std::string& buffer, std::size_t n, int timeoutMs = -1) {
  while (buffer.size() < n) {
    pollfd p{fd, POLLIN, 0};
    int r = ::poll(&p, 1, timeoutMs);
    if (r <= 0) return false;
    char chunk[4096];
    ssize_t got = ::recv(fd, chunk, sizeof chunk, 0);
    if (got <= 0) return false;
    buffer.append(chunk, static_cast<std::size_t>(got));
  }
  return true;
}

bool readHead(int fd, std::string& buffer, std::string& head) {
  while (true) {
    auto end = buffer.find("\r\n\r\n");
    if (end != std::string::npos) {
      head = buffer.substr(0, end);
      buffer.erase(0, end + 4);
      return true;
    }
    if (buffer.size() > 64 * 1024) return false;
    if (!fill(fd, buffer, buffer.size() + 1, 30000)) return false;
  }
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> headers;
};

Request parseHead(const std::string& head) {
  Request r;
  std::istringstream in(head);
  std::string line;
  std::getline(in, line);
  std::istringstream first(line);
  first >> r.method >> r.path;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string value = line.substr(colon + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    r.headers[lower(line.substr(0, colon))] = value;
  }
  return r;
}

std::string frame(unsigned opcode, const std::string& payload, bool masked) {
  std::string out;
  out += static_cast<char>(0x80 | opcode);
  const unsigned maskBit = masked ? 0x80 : 0;
  const std::size_t n = payload.size();
  if (n < 126) {
    out += static_cast<char>(maskBit | n);
  } else if (n < 65536) {
    out += static_cast<char>(maskBit | 126);
    out += static_cast<char>((n >> 8) & 0xff);
    out += static_cast<char>(n & 0xff);
  } else {
    out += static_cast<char>(maskBit | 127);
    for (int i = 7; i >= 0; --i) out += static_cast<char>((static_cast<std::uint64_t>(n) >> (8 * i)) & 0xff);
  }
  if (!masked) return out + payload;
  static thread_local std::mt19937 rng(std::random_device{}());
  unsigned char key[4];
  for (unsigned char& k : key) k = static_cast<unsigned char>(rng());
  out.append(reinterpret_cast<const char*>(key), 4);
  for (std::size_t i = 0; i < n; ++i) out += static_cast<char>(payload[i] ^ key[i % 4]);
  return out;
}

struct Frame {
  bool fin = true;
  unsigned opcode = 0;
  std::string payload;
};

/// One frame from `buffer`/`fd`; nullopt on EOF, error or timeout.
std::optional<Frame> readFrame(int fd, std::string& buffer, int timeoutMs = -1) {
  if (!fill(fd, buffer, 2, timeoutMs)) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(buffer[0]);
  const auto b1 = static_cast<unsigned char>(buffer[1]);
  std::size_t pos = 2;
  std::uint64_t len = b1 & 0x7f;
  if (len == 126) {
    if (!fill(fd, buffer, 4, timeoutMs)) return std::nullopt;
    len = (static_cast<unsigned char>(buffer[2]) << 8) | static_cast<unsigned char>(buffer[3]);
    pos = 4;
  } else if (len == 127) {
    if (!fill(fd, buffer, 10, timeoutMs)) return std::nullopt;
    len = 0;
    for (int i = 0; i < 8; ++i) len = (len << 8) | static_cast<unsigned char>(buffer[2 + i]);
    pos = 10;
  }
  if (len > (64u << 20)) return std::nullopt;
  const bool masked = b1 & 0x80;
  unsigned char key[4] = {0, 0, 0, 0};
  if (masked) {
    if (!fill(fd, buffer, pos + 4, timeoutMs)) return std::nullopt;
    std::memcpy(key, buffer.data() + pos, 4);
    pos += 4;
  }
  if (!fill(fd, buffer, pos + len, timeoutMs)) return std::nullopt;
  Frame f;
  f.fin = b0 & 0x80;
  f.opcode = b0 & 0x0f;
  f.payload = buffer.substr(pos, len);
  if (masked)
    for (std::size_t i = 0; i < f.payload.size(); ++i) f.payload[i] = static_cast<char>(f.payload[i] ^ key[i % 4]);
  buffer.erase(0, pos + len);
  return f;
}

std::string contentType(const std::string& path) {
  static const std::map<std::string, std::string> types{
      {".html", "text/html; charset=utf-8"}, {".js", "text/javascript"},  {".mjs", "text/javascript"},
      {".css", "text/css"},                  {".json", "application/json"}, {".svg", "image/svg+xml"},
      {".png", "image/png"},                 {".ico", "image/x-icon"},    {".map", "application/json"},
      {".txt", "text/plain; charset=utf-8"}};
  auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    auto it = types.find(lower(path.substr(dot)));
    if (it != types.end()) return it->second;
  }
  return "application/octet-stream";
}

const char* kPlaceholder =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>psdbg</title></head><body>"
    "<h1>psdbg debug server</h1><p>No web UI assets were found. The protocol (version 1) is served over "
    "WebSocket at <code>/ws</code>.</p></body></html>\n";

std::string httpResponse(int status, const std::string& reason, const std::string& type, const std::string& body) {
  return "HTTP/1.1 " + std::to_string(status) + " " + reason + "\r\nContent-Type: " + type +
         "\r\nContent-Length: " + std::to_string(body.size()) + "\r\nConnection: close\r\n\r\n" + body;
}

}  // namespace

std::string websocketAccept(const std::string& key) {
  const std::string input = key + kGuid;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(), digest);
  return base64(digest, sizeof digest);
}

WebServer::WebServer(ProtocolServer& protocol, std::string staticRoot)
    : protocol_(protocol), staticRoot_(std::move(staticRoot)) {}

WebServer::~WebServer() { stop(); }

void WebServer::listen(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::IoError, "cannot resolve '" + host + "': " + gai_strerror(rc));
  }
  std::string lastError = "no usable address";
  for (addrinfo* a = res; a; a = a->ai_next) {
    int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      listenFd_ = fd;
      break;
    }
    lastError = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listenFd_ < 0) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + service + ": " + lastError);
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(listenFd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port
                                            : reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

void WebServer::run() {
  while (!stopping_) {
    pollfd p{listenFd_, POLLIN, 0};
    if (::poll(&p, 1, 200) <= 0) continue;
    int fd = ::accept(listenFd_, nullptr, nullptr);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    clients_.push_back(fd);
    threads_.emplace_back([this, fd] { serve(fd); });
  }
}

void WebServer::stop() {
  if (stopping_.exchange(true)) return;
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(mutex_);
    for (int fd : clients_) ::shutdown(fd, SHUT_RDWR);
    threads.swap(threads_);
  }
  for (std::thread& t : threads) t.join();
  if (listenFd_ >= 0) ::close(listenFd_);
  listenFd_ = -1;
}

void WebServer::serve(int fd) {
  std::string buffer, head;
  if (readHead(fd, buffer, head)) {
    Request req = parseHead(head);
    auto upgrade = req.headers.find("upgrade");
    if (upgrade != req.headers.end() && lower(upgrade->second) == "websocket" && req.headers.count("sec-websocket-key")) {
      sendAll(fd, "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                  "Sec-WebSocket-Accept: " + websocketAccept(req.headers["sec-websocket-key"]) + "\r\n\r\n");
      ConnectionId id = protocol_.connect([fd](const std::string& text) { sendAll(fd, frame(0x1, text, false)); });
      std::string message;
      while (auto f = readFrame(fd, buffer)) {
        if (f->opcode == 0x8) {
          sendAll(fd, frame(0x8, f->payload.substr(0, 2), false));
          break;
        }
        if (f->opcode == 0x9) {
          sendAll(fd, frame(0xA, f->payload, false));
          continue;
        }
        if (f->opcode == 0xA) continue;
        message += f->payload;
        if (f->fin) {
          protocol_.handle(id, message);
          message.clear();
        }
      }
      protocol_.disconnect(id);
    } else if (req.method != "GET" && req.method != "HEAD") {
      sendAll(fd, httpResponse(405, "Method Not Allowed", "text/plain", "method not allowed\n"));
    } else {
      std::string path = req.path.substr(0, req.path.find_first_of("?#"));
      if (path.empty() || path.back() == '/') path += "index.html";
      std::string body;
      bool found = false;
      if (path.find("..") == std::string::npos && !staticRoot_.empty()) {
        std::ifstream in(staticRoot_ + path, std::ios::binary);
        if (in) {
          std::ostringstream ss;
          ss << in.rdbuf();
          body = ss.str();
          found = true;
        }
      }
      std::string response;
      if (found) response = httpResponse(200, "OK", contentType(path), body);
      else if (path == "/index.html") response = httpResponse(200, "OK", contentType(path), kPlaceholder);
      else response = httpResponse(404, "Not Found", "text/plain", "not found\n");
      if (req.method == "HEAD") response.erase(response.find("\r\n\r\n") + 4);
      sendAll(fd, response);
    }
  }
  std::lock_guard lock(mutex_);
  clients_.erase(std::remove(clients_.begin(), clients_.end(), fd), clients_.end());
  ::close(fd);
}

// --- client ---------------------------------------------------------------------

WebSocketClient::~WebSocketClient() { close(); }

void WebSocketClient::connect(const std::string& host, int port, const std::string& path) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0) {
    throw Error(ErrorCode::IoError, "cannot resolve " + host);
  }
  for (addrinfo* a = res; a && fd_ < 0; a = a->ai_next) {
    int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) fd_ = fd;
    else ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw Error(ErrorCode::IoError, "cannot connect to " + host + ":" + std::to_string(port));
  unsigned char raw[16];
  std::random_device rd;
  for (unsigned char& b : raw) b = static_cast<unsigned char>(rd());
  const std::string key = base64(raw, sizeof raw);
  sendAll(fd_, "GET " + path + " HTTP/1.1\r\nHost: " + host + ":" + std::to_string(port) +
                   "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + key +
                   "\r\nSec-WebSocket-Version: 13\r\n\r\n");
  std::string head;
  if (!readHead(fd_, buffer_, head)) throw Error(ErrorCode::IoError, "no handshake response");
  Request r = parseHead(head);
  if (head.rfind("HTTP/1.1 101", 0) != 0 || r.headers["sec-websocket-accept"] != websocketAccept(key)) {
    throw Error(ErrorCode::IoError, "handshake rejected: " + head.substr(0, head.find('\r')));
  }
}

void WebSocketClient::sendText(const std::string& text) {
  if (fd_ < 0 || !sendAll(fd_, frame(0x1, text, true))) throw Error(ErrorCode::IoError, "connection closed");
}

std::optional<std::string> WebSocketClient::receive(std::chrono::milliseconds timeout) {
  if (fd_ < 0) return std::nullopt;
  std::string message;
  while (auto f = readFrame(fd_, buffer_, static_cast<int>(timeout.count()))) {
    if (f->opcode == 0x8) return std::nullopt;
    if (f->opcode == 0x9 || f->opcode == 0xA) continue;
    message += f->payload;
    if (f->fin) return message;
  }
  return std::nullopt;
}

void WebSocketClient::close() {
  if (fd_ < 0) return;
  sendAll(fd_, frame(0x8, std::string("\x03\xe8", 2), true));
  ::shutdown(fd_, SHUT_RDWR);
  ::close(fd_);
  fd_ = -1;
}

}  // namespace psdbg::server
