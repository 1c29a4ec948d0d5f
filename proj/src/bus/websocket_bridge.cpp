#include "romr/bus/websocket_bridge.hpp"

#include <atomic>
#include <chrono>
#include <future>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <fmt/format.h>

#include "romr/bus/json_codec.hpp"

namespace romr::bus {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {
class Session;
}

struct WebSocketBridge::Impl : std::enable_shared_from_this<WebSocketBridge::Impl> {
  Impl(TopicBus& b, BridgeOptions o) : bus(b), opts(std::move(o)) {}

  double now() const {
    if (opts.clock) return opts.clock();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  void do_accept();
  void shutdown_all();

  TopicBus& bus;
  BridgeOptions opts;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::thread thread;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::atomic<bool> running{false};
  std::uint16_t port = 0;

  std::mutex mu;
  std::vector<std::weak_ptr<Session>> sessions;
  std::atomic<std::size_t> clients{0};
  std::atomic<std::size_t> dropped{0};
  std::atomic<std::size_t> rejected{0};
};

namespace {

using Impl = WebSocketBridge::Impl;

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, std::shared_ptr<Impl> impl)
      : ws_(std::move(socket)), impl_(std::move(impl)), queue_(impl_->opts.queue_depth) {}

  ~Session() { unsubscribe_all(); }

  void run() {
    net::dispatch(ws_.get_executor(), [self = shared_from_this()] {
      self->ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
      self->ws_.async_accept(beast::bind_front_handler(&Session::on_accept, self));
    });
  }

  /// Safe from any thread; never blocks on the socket.
  void push(std::string text) {
    {
      std::lock_guard lock(mu_);
      if (closed_) return;
      if (queue_.push(std::move(text))) ++impl_->dropped;
      if (writing_) return;
      writing_ = true;
    }
    net::post(ws_.get_executor(), beast::bind_front_handler(&Session::do_write, shared_from_this()));
  }

  void shutdown() {
    net::post(ws_.get_executor(), [self = shared_from_this()] { self->close(); });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return close();
    {
      std::lock_guard lock(mu_);
      if (closed_) return;
      accepted_ = true;
    }
    ++impl_->clients;
    ws_.text(true);
    do_read();
  }

  void do_read() {
    ws_.async_read(rbuf_, beast::bind_front_handler(&Session::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return close();
    const std::string text = beast::buffers_to_string(rbuf_.data());
    rbuf_.consume(rbuf_.size());
    handle(text);
    do_read();
  }

  void handle(const std::string& text) {
    try {
      const ClientRequest req = parse_client_request(text);
      const TopicInfo& info = impl_->bus.registry().by_name(req.topic);
      if (req.op == ClientRequest::Op::Subscribe) {
        if (!topics_.insert(req.topic).second) return;
        std::weak_ptr<Session> weak = shared_from_this();
        const auto id = impl_->bus.subscribe(req.topic, [weak](const TopicMessage& m) {
          if (auto s = weak.lock()) s->push(server_message(m));
        });
        std::lock_guard lock(mu_);
        subs_.push_back(id);
        return;
      }
      if (!impl_->opts.client_topics.count(req.topic)) {
        throw BusError(BusErrorCode::Protocol, fmt::format("clients may not publish to {}", req.topic));
      }
      const double stamp = impl_->now();
      impl_->bus.publish(req.topic, stamp, payload_from_json(req.msg, info.schema));
    } catch (const BusError& e) {
      ++impl_->rejected;
      push(error_message(e.what()));
    }
  }

  void do_write() {
    {
      std::lock_guard lock(mu_);
      auto next = closed_ ? std::nullopt : queue_.pop();
      if (!next) {
        writing_ = false;
        return;
      }
      current_ = std::move(*next);
    }
    ws_.async_write(net::buffer(current_),
                    beast::bind_front_handler(&Session::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return close();
    do_write();
  }

  void close() {
    bool was_accepted = false;
    {
      std::lock_guard lock(mu_);
      if (closed_) return;
      closed_ = true;
      was_accepted = accepted_;
    }
    if (was_accepted) --impl_->clients;
    unsubscribe_all();
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ignored);
    beast::get_lowest_layer(ws_).close();
  }

  void unsubscribe_all() {
    std::vector<SubscriptionId> subs;
    {
      std::lock_guard lock(mu_);
      subs.swap(subs_);
    }
    for (auto id : subs) impl_->bus.unsubscribe(id);
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<Impl> impl_;
  beast::flat_buffer rbuf_;
  std::set<std::string> topics_;  // touched on the session strand only

  std::mutex mu_;
  DropOldestQueue<std::string> queue_;
  std::vector<SubscriptionId> subs_;
  std::string current_;
  bool writing_ = false;
  bool closed_ = false;
  bool accepted_ = false;
};

}  // namespace

void Impl::do_accept() {
  acceptor.async_accept(net::make_strand(ioc), [self = shared_from_this()](beast::error_code ec,
                                                                           tcp::socket socket) {
    if (ec || !self->running) return;
    auto session = std::make_shared<Session>(std::move(socket), self);
    {
      std::lock_guard lock(self->mu);
      std::erase_if(self->sessions, [](const std::weak_ptr<Session>& w) { return w.expired(); });
      self->sessions.push_back(session);
    }
    session->run();
    self->do_accept();
  });
}

void Impl::shutdown_all() {
  beast::error_code ignored;
  acceptor.close(ignored);
  std::lock_guard lock(mu);
  for (auto& w : sessions) {
    if (auto s = w.lock()) s->shutdown();
  }
  sessions.clear();
}

WebSocketBridge::WebSocketBridge(TopicBus& bus, BridgeOptions opts)
    : impl_(std::make_shared<Impl>(bus, std::move(opts))) {}

WebSocketBridge::~WebSocketBridge() { stop(); }

void WebSocketBridge::start() {
  if (impl_->running) return;
  try {
    const tcp::endpoint ep(net::ip::make_address(impl_->opts.address), impl_->opts.port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen(net::socket_base::max_listen_connections);
    impl_->port = impl_->acceptor.local_endpoint().port();
  } catch (const boost::system::system_error& e) {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
    throw BusError(BusErrorCode::Io, fmt::format("cannot listen on {}:{}: {}", impl_->opts.address,
                                                 impl_->opts.port, e.what()));
  }
  impl_->running = true;
  impl_->do_accept();
  impl_->thread = std::thread([impl = impl_] { impl->ioc.run(); });
}

void WebSocketBridge::stop() {
  if (!impl_->running.exchange(false)) return;
  // Closing every socket lets the pending operations finish, after which
  // run() returns on its own and the sessions are released.
  auto done = std::make_shared<std::promise<void>>();
  net::post(impl_->ioc, [impl = impl_] { impl->shutdown_all(); });
  std::thread waiter([impl = impl_, done] {
    impl->thread.join();
    done->set_value();
  });
  if (done->get_future().wait_for(std::chrono::seconds(2)) != std::future_status::ready) {
    impl_->ioc.stop();
  }
  waiter.join();
}

std::uint16_t WebSocketBridge::port() const { return impl_->port; }

BridgeStats WebSocketBridge::stats() const {
  return {impl_->clients.load(), impl_->dropped.load(), impl_->rejected.load()};
}

}  // namespace romr::bus
