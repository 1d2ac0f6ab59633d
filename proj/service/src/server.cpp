#include "hrc/service/server.hpp"

#include <chrono>
#include <deque>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "hrc/random.hpp"

namespace hrc::service {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

class Connection;

struct Live {
  Live(Session s, net::io_context& ioc) : session(std::move(s)), timer(ioc) {}
  Session session;
  net::steady_timer timer;
  std::weak_ptr<Connection> connection;
  bool ticking = false;
};

}  // namespace

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  explicit Impl(ServerConfig c)
      : config(std::move(c)), acceptor(ioc, {net::ip::make_address(config.address), config.port}) {}

  void accept();
  std::shared_ptr<Live> open_session(const std::string& requested);
  void schedule(const std::shared_ptr<Live>& live);

  ServerConfig config;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::map<std::string, std::shared_ptr<Live>> sessions;
  std::uint64_t opened = 0;
};

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, std::shared_ptr<Server::Impl> server)
      : ws_(std::move(socket)), server_(std::move(server)) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (!ec) self->read();
    });
  }

  void send(const std::vector<Envelope>& messages) {
    for (const Envelope& m : messages) queue_.push_back(serialize(m));
    if (!writing_) write();
  }

  void close() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->detach();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->dispatch(text);
      self->read();
    });
  }

  void dispatch(const std::string& text) {
    if (!live_) {
      Envelope hello;
      try {
        hello = parse_envelope(text);
      } catch (const ProtocolError& e) {
        send({Envelope{"error", "", 0, {{"reason", e.what()}}}});
        return;
      }
      if (hello.type != "hello") {
        send({Envelope{"error", "", 0, {{"reason", "say hello first"}}}});
        return;
      }
      live_ = server_->open_session(hello.session_id);
      if (auto old = live_->connection.lock(); old && old.get() != this) old->close();
      live_->connection = weak_from_this();
      send(live_->session.handle_message(hello));
      server_->schedule(live_);
      return;
    }
    send(live_->session.handle_text(text));
    server_->schedule(live_);
  }

  void detach() {
    if (live_ && live_->connection.lock().get() == this) live_->connection.reset();
  }

  void write() {
    if (queue_.empty()) {
      writing_ = false;
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->queue_.pop_front();
      if (ec) {
        self->queue_.clear();
        self->writing_ = false;
        return;
      }
      self->write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<Server::Impl> server_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool writing_ = false;
  std::shared_ptr<Live> live_;
};

}  // namespace

void Server::Impl::accept() {
  acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<Connection>(std::move(socket), self)->start();
    self->accept();
  });
}

std::shared_ptr<Live> Server::Impl::open_session(const std::string& requested) {
  if (!requested.empty()) {
    if (auto it = sessions.find(requested); it != sessions.end()) return it->second;
  }
  const std::uint64_t seed = derive_seed(config.seed, opened++);
  std::ostringstream id;
  id << std::hex << std::setw(16) << std::setfill('0') << seed;
  auto live = std::make_shared<Live>(Session(id.str(), config.session, seed), ioc);
  sessions.emplace(id.str(), live);
  return live;
}

void Server::Impl::schedule(const std::shared_ptr<Live>& live) {
  if (live->ticking || live->session.phase() != Session::Phase::InTrial) return;
  live->ticking = true;
  const auto period = std::chrono::duration_cast<net::steady_timer::duration>(
      std::chrono::duration<double>(1.0 / config.session->ticks_per_second));
  live->timer.expires_after(period);
  live->timer.async_wait([self = shared_from_this(), live](beast::error_code ec) {
    live->ticking = false;
    if (ec) return;
    auto conn = live->connection.lock();
    if (!conn) return;  // paused until the player reconnects
    conn->send(live->session.pump_tick());
    self->schedule(live);
  });
}

Server::Server(ServerConfig config) : impl_(std::make_shared<Impl>(std::move(config))) {
  if (!impl_->config.session) throw std::invalid_argument("server needs a session configuration");
  impl_->config.session->validate();
}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  impl_->accept();
  impl_->ioc.run();
}

void Server::stop() {
  net::post(impl_->ioc, [impl = impl_] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    impl->ioc.stop();
  });
}

}  // namespace hrc::service
