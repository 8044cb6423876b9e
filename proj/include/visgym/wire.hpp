#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "visgym/harness.hpp"

namespace visgym {

// ---------------------------------------------------------------------------
// Line transports
// ---------------------------------------------------------------------------

class LineTransport {
 public:
  virtual ~LineTransport() = default;
  virtual void send_line(const std::string& line) = 0;
  /// nullopt on timeout; throws TransportClosed when the peer is gone.
  virtual std::optional<std::string> recv_line(int timeout_ms) = 0;
};

class TcpTransport final : public LineTransport {
 public:
  explicit TcpTransport(int fd) : fd_(fd) {}
  ~TcpTransport() override {
    if (fd_ >= 0) ::close(fd_);
  }
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  static std::unique_ptr<TcpTransport> connect_to(const std::string& host, int port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res)
      throw TransportClosed("cannot resolve " + host);
    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw TransportClosed("cannot connect to " + host + ":" + std::to_string(port));
    return std::make_unique<TcpTransport>(fd);
  }

  void send_line(const std::string& line) override {
    std::string payload = line + "\n";
    std::size_t sent = 0;
    while (sent < payload.size()) {
      ssize_t n = ::send(fd_, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
      if (n <= 0) throw TransportClosed("send failed");
      sent += std::size_t(n);
    }
  }

  std::optional<std::string> recv_line(int timeout_ms) override {
    while (true) {
      auto pos = buf_.find('\n');
      if (pos != std::string::npos) {
        std::string line = buf_.substr(0, pos);
        buf_.erase(0, pos + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      timeval tv{timeout_ms / 1000, (timeout_ms % 1000) * 1000};
      ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
      char chunk[4096];
      ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n == 0) throw TransportClosed("connection closed");
      if (n < 0) {
        if (errno == EAGAIN || errno == EWOULDBLOCK) return std::nullopt;  // timeout
        throw TransportClosed("recv failed");
      }
      buf_.append(chunk, std::size_t(n));
    }
  }

 private:
  int fd_;
  std::string buf_;
};

class TcpListener {
 public:
  explicit TcpListener(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(std::uint16_t(port));
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
      throw std::runtime_error("bind failed on port " + std::to_string(port));
    if (::listen(fd_, 4) != 0) throw std::runtime_error("listen failed");
  }
  ~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
  }

  int port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    return ntohs(addr.sin_port);
  }

  std::unique_ptr<TcpTransport> accept_one() {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) throw std::runtime_error("accept failed");
    return std::make_unique<TcpTransport>(fd);
  }

 private:
  int fd_ = -1;
};

/// Speaks the protocol over this process's own stdin/stdout.
class StdioTransport final : public LineTransport {
 public:
  void send_line(const std::string& line) override { std::cout << line << "\n" << std::flush; }
  std::optional<std::string> recv_line(int) override {
    std::string line;
    if (!std::getline(std::cin, line)) throw TransportClosed("stdin closed");
    return line;
  }
};

// ---------------------------------------------------------------------------
// Base64 (for PNG payloads in turn messages)
// ---------------------------------------------------------------------------

inline std::string base64_encode(const std::uint8_t* data, std::size_t len) {
  static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    std::uint32_t v = std::uint32_t(data[i]) << 16;
    if (i + 1 < len) v |= std::uint32_t(data[i + 1]) << 8;
    if (i + 2 < len) v |= std::uint32_t(data[i + 2]);
    out.push_back(alphabet[(v >> 18) & 63]);
    out.push_back(alphabet[(v >> 12) & 63]);
    out.push_back(i + 1 < len ? alphabet[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? alphabet[v & 63] : '=');
  }
  return out;
}

inline std::vector<std::uint8_t> base64_decode(const std::string& text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    int v = value_of(c);
    if (v < 0) continue;
    acc = (acc << 6) | std::uint32_t(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(std::uint8_t((acc >> bits) & 0xFF));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Protocol messages
// ---------------------------------------------------------------------------

/// Server -> agent turn message. PNG bytes ride base64 in image_png_b64; the
/// instruction and goal observation appear on the first turn only; "history"
/// carries the window-limited prior turns.
inline Json make_turn_message(const AgentView& view) {
  Json j;
  j["type"] = "turn";
  if (view.turn_index == 0 && view.instruction) j["instruction"] = *view.instruction;
  Json hist = Json::array();
  for (const auto& turn : view.history) {
    Json h;
    if (turn.observation.text_view) h["text_view"] = *turn.observation.text_view;
    else if (turn.observation.image)
      h["image_png_b64"] = base64_encode(turn.observation.image->raw().data(),
                                         turn.observation.image->raw().size());
    h["raw_action"] = turn.raw_action;
    h["feedback"] = turn.feedback;
    hist.push_back(h);
  }
  j["history"] = hist;
  if (view.current) {
    if (view.current->text_view) {
      j["text_view"] = *view.current->text_view;
    } else if (view.current->image) {
      j["image_png_b64"] =
          base64_encode(view.current->image->raw().data(), view.current->image->raw().size());
    }
    j["feedback"] = view.current->feedback;
    j["steps_remaining"] = view.current->steps_remaining;
  }
  if (view.turn_index == 0 && view.goal) {
    if (view.goal->text_view) j["goal_text_view"] = *view.goal->text_view;
    else if (view.goal->image)
      j["goal_image_png_b64"] =
          base64_encode(view.goal->image->raw().data(), view.goal->image->raw().size());
  }
  return j;
}

inline Json make_done_message(const Trajectory& traj) {
  return Json{{"type", "done"},
              {"reward", traj.reward},
              {"terminated", traj.terminated},
              {"truncated", traj.truncated}};
}

/// Agent driven over a line transport. Timeouts are treated as malformed
/// output (the engine answers "invalid format"); a dropped connection ends
/// the episode as truncated.
class ExternalAgent final : public Agent {
 public:
  explicit ExternalAgent(std::unique_ptr<LineTransport> transport, int timeout_ms = 120000)
      : transport_(std::move(transport)), timeout_ms_(timeout_ms) {}

  std::string act(const AgentView& view) override {
    transport_->send_line(make_turn_message(view).dump());
    auto line = transport_->recv_line(timeout_ms_);
    if (!line) return "";  // timeout -> malformed
    Json j = Json::parse(*line, nullptr, false);
    if (j.is_discarded() || !j.contains("raw")) return *line;  // passed through as raw text
    return j["raw"].get<std::string>();
  }

  void end_episode(const Trajectory& traj) override {
    try {
      transport_->send_line(make_done_message(traj).dump());
    } catch (const TransportClosed&) {
      // Peer already gone; the result stands.
    }
  }

 private:
  std::unique_ptr<LineTransport> transport_;
  int timeout_ms_;
};

/// One connection per episode: accept, run, report, repeat.
inline void serve_episodes(TcpListener& listener, const EpisodeConfig& base_cfg, int episodes,
                           std::ostream& log) {
  for (int i = 0; i < episodes; ++i) {
    auto transport = listener.accept_one();
    EpisodeConfig cfg = base_cfg;
    cfg.seed = base_cfg.seed + std::uint64_t(i);
    ExternalAgent agent(std::move(transport));
    Trajectory traj = run_episode(cfg, agent);
    log << "episode " << i << " seed " << cfg.seed << " reward " << traj.reward
        << (traj.truncated ? " (truncated)" : "") << (traj.note.empty() ? "" : " [" + traj.note + "]")
        << "\n";
  }
}

}  // namespace visgym
