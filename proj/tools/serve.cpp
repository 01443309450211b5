#include "serve.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <memory>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <fmt/format.h>

#include "swarmview/runtime/live_session.hpp"
#include "swarmview/runtime/mission.hpp"

namespace swarmview::tools {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace ws = beast::websocket;
using tcp = asio::ip::tcp;
using runtime::LiveSession;

namespace {

class Server;

// Everything runs on one io_context thread: the tick timer is the only writer of the
// mission, and frames from clients are queued into the session between ticks.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Server& server) : ws_(std::move(socket)), server_(server) {}

  void start();
  void send(std::string frame);
  void close();

 private:
  void read();
  void write_next();

  ws::stream<beast::tcp_stream> ws_;
  Server& server_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  LiveSession::ClientId id_{0};
  bool open_{false};
};

class Server {
 public:
  Server(asio::io_context& io, const runtime::Scenario& scenario, const ServeOptions& opts)
      : io_(io), acceptor_(io, tcp::endpoint(tcp::v4(), opts.port)), timer_(io), mission_(scenario),
        session_(mission_), opts_(opts) {}

  void start() {
    fmt::print("serving '{}' on ws://0.0.0.0:{} (rtf {})\n", mission_.scenario().name, acceptor_.local_endpoint().port(),
               opts_.rtf);
    accept();
    next_tick_ = std::chrono::steady_clock::now();
    schedule();
  }

  LiveSession::ClientId join(const std::shared_ptr<Connection>& c) {
    const auto id = session_.connect();
    clients_[id] = c;
    return id;
  }

  void leave(LiveSession::ClientId id) {
    session_.disconnect(id);
    clients_.erase(id);
  }

  void received(LiveSession::ClientId id, std::string_view text) { deliver(session_.receive(id, text)); }

 private:
  void accept() {
    acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (!ec) {
        std::make_shared<Connection>(std::move(socket), *this)->start();
      }
      if (acceptor_.is_open()) {
        accept();
      }
    });
  }

  void schedule() {
    if (opts_.rtf > 0.0) {
      const auto period = std::chrono::duration<double>(mission_.scenario().dt / opts_.rtf);
      next_tick_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
      timer_.expires_at(next_tick_);
    } else {
      timer_.expires_after(std::chrono::steady_clock::duration::zero());
    }
    timer_.async_wait([this](beast::error_code ec) {
      if (!ec) {
        tick();
      }
    });
  }

  void tick() {
    if (opts_.wait_for_controller && !session_.controller()) {
      next_tick_ = std::chrono::steady_clock::now();
      schedule();
      return;
    }
    session_.apply_pending();
    const auto& report = mission_.step();
    deliver(session_.after_tick(report));
    for (const auto& f : report.failures) {
      fmt::print(stderr, "tick {}: {}\n", f.tick, f.reason);
    }
    if (mission_.finished()) {
      fmt::print("run finished after {} ticks\n", mission_.tick());
      acceptor_.close();
      for (auto& [id, c] : clients_) {
        if (auto conn = c.lock()) {
          conn->close();
        }
      }
      // give the close handshakes a moment, then leave io.run()
      timer_.expires_after(std::chrono::milliseconds(300));
      timer_.async_wait([this](beast::error_code) { io_.stop(); });
      return;
    }
    schedule();
  }

  void deliver(const std::vector<LiveSession::Outbound>& frames) {
    for (const auto& f : frames) {
      const auto it = clients_.find(f.client);
      if (it == clients_.end()) {
        continue;
      }
      if (auto conn = it->second.lock()) {
        conn->send(f.frame);
      }
    }
  }

  asio::io_context& io_;
  tcp::acceptor acceptor_;
  asio::steady_timer timer_;
  runtime::Mission mission_;
  LiveSession session_;
  ServeOptions opts_;
  std::chrono::steady_clock::time_point next_tick_;
  std::map<LiveSession::ClientId, std::weak_ptr<Connection>> clients_;
};

void Connection::start() {
  ws_.set_option(ws::stream_base::timeout::suggested(beast::role_type::server));
  ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
    if (ec) {
      return;
    }
    self->open_ = true;
    self->id_ = self->server_.join(self);
    self->read();
  });
}

void Connection::read() {
  ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
    if (ec) {
      self->open_ = false;
      self->server_.leave(self->id_);
      return;
    }
    const std::string text = beast::buffers_to_string(self->buffer_.data());
    self->buffer_.consume(self->buffer_.size());
    self->server_.received(self->id_, text);
    self->read();
  });
}

void Connection::send(std::string frame) {
  if (!open_) {
    return;
  }
  outbox_.push_back(std::move(frame));
  if (outbox_.size() == 1) {
    write_next();
  }
}

void Connection::write_next() {
  ws_.text(true);
  ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
    if (ec) {
      self->open_ = false;
      self->outbox_.clear();
      return;
    }
    self->outbox_.pop_front();
    if (!self->outbox_.empty()) {
      self->write_next();
    }
  });
}

void Connection::close() {
  if (!open_) {
    return;
  }
  open_ = false;
  ws_.async_close(ws::close_code::normal, [self = shared_from_this()](beast::error_code) {});
}

}  // namespace

int serve(const runtime::Scenario& scenario, const ServeOptions& options) {
  asio::io_context io;
  Server server(io, scenario, options);
  asio::signal_set signals(io, SIGINT, SIGTERM);
  signals.async_wait([&](beast::error_code, int) { io.stop(); });
  server.start();
  io.run();
  return 0;
}

}  // namespace swarmview::tools
