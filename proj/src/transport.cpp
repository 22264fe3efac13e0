#include "semisimp/transport.hpp"

#include "semisimp/log.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

namespace semisimp {

void serve_channel(LineChannel channel, std::optional<Document> model) {
  std::mutex out_mutex;
  auto emit = [&](const Json& msg) {
    const std::string line = msg.dump();
    std::lock_guard lock(out_mutex);
    channel.write_line(line);
  };
  Session session(emit);
  if (model) session.preload(std::move(*model));

  std::mutex queue_mutex;
  std::condition_variable ready;
  std::deque<std::string> queue;
  bool closed = false;

  std::thread worker([&] {
    for (;;) {
      std::string line;
      {
        std::unique_lock lock(queue_mutex);
        ready.wait(lock, [&] { return closed || !queue.empty(); });
        if (queue.empty()) return;
        line = std::move(queue.front());
        queue.pop_front();
      }
      session.handle_line(line);
    }
  });

  std::string line;
  while (channel.read_line(line)) {
    if (line.empty()) continue;
    // Cancellation bypasses the queue; everything else is serialized.
    Json msg = Json::parse(line, nullptr, false);
    if (!msg.is_discarded() && msg.is_object() && msg.value("kind", "") == "cancel" && msg.contains("id") &&
        msg["id"].is_number_integer()) {
      std::optional<long long> target;
      const Json payload = msg.value("payload", Json::object());
      if (payload.is_object() && payload.contains("request") && payload["request"].is_number_integer())
        target = payload["request"].get<long long>();
      session.request_cancel(target);
      emit(Json{{"id", msg["id"]}, {"result", {{"requested", true}}}});
      continue;
    }
    std::lock_guard lock(queue_mutex);
    queue.push_back(line);
    ready.notify_one();
  }
  {
    std::lock_guard lock(queue_mutex);
    closed = true;
  }
  ready.notify_one();
  worker.join();
}

void serve_streams(std::istream& in, std::ostream& out, std::optional<Document> model) {
  LineChannel ch;
  ch.read_line = [&](std::string& line) { return static_cast<bool>(std::getline(in, line)); };
  ch.write_line = [&](const std::string& line) { out << line << '\n' << std::flush; };
  serve_channel(std::move(ch), std::move(model));
}

namespace {

class Socket {
 public:
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  int fd() const { return fd_; }

 private:
  int fd_;
};

}  // namespace

void serve_tcp(int port, const std::optional<Document>& model, const std::function<void(int)>& on_listen,
               std::size_t max_connections) {
  Socket listener(::socket(AF_INET, SOCK_STREAM, 0));
  if (listener.fd() < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listener.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
    throw Error("cannot bind port " + std::to_string(port) + ": " + std::strerror(errno));
  if (::listen(listener.fd(), 4) < 0) throw Error(std::string("listen: ") + std::strerror(errno));
  socklen_t len = sizeof addr;
  ::getsockname(listener.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  const int bound = ntohs(addr.sin_port);
  log().info("listening on 127.0.0.1:{}", bound);
  if (on_listen) on_listen(bound);

  for (std::size_t served = 0; max_connections == 0 || served < max_connections; ++served) {
    Socket conn(::accept(listener.fd(), nullptr, nullptr));
    if (conn.fd() < 0) throw Error(std::string("accept: ") + std::strerror(errno));
    std::string pending;
    LineChannel ch;
    ch.read_line = [&](std::string& line) {
      for (;;) {
        const auto nl = pending.find('\n');
        if (nl != std::string::npos) {
          line = pending.substr(0, nl);
          if (!line.empty() && line.back() == '\r') line.pop_back();
          pending.erase(0, nl + 1);
          return true;
        }
        char buf[65536];
        const ssize_t n = ::recv(conn.fd(), buf, sizeof buf, 0);
        if (n <= 0) {
          if (pending.empty()) return false;
          line = std::move(pending);
          pending.clear();
          return true;
        }
        pending.append(buf, static_cast<std::size_t>(n));
      }
    };
    ch.write_line = [&](const std::string& line) {
      std::string data = line + '\n';
      std::size_t sent = 0;
      while (sent < data.size()) {
        const ssize_t n = ::send(conn.fd(), data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return;
        sent += static_cast<std::size_t>(n);
      }
    };
    serve_channel(std::move(ch), model);
  }
}

}  // namespace semisimp
