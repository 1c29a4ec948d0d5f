#pragma once

#include <sys/socket.h>
#include <sys/time.h>

#include <cstdint>
#include <string>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "romr/bus/json_codec.hpp"

namespace romr::testsupport {

// Blocking client with a 5 s receive timeout so a broken server fails the
// test instead of hanging it.
class WsClient {
 public:
  explicit WsClient(std::uint16_t port) {
    namespace net = boost::asio;
    net::ip::tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    timeval tv{5, 0};
    ::setsockopt(ws_.next_layer().native_handle(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ws_.handshake("127.0.0.1", "/");
    ws_.text(true);
  }
  void send(const std::string& s) { ws_.write(boost::asio::buffer(s)); }
  bus::Json recv() {
    boost::beast::flat_buffer b;
    ws_.read(b);
    return bus::Json::parse(boost::beast::buffers_to_string(b.data()));
  }
  // Requests are handled in order, so once the reply to a bad request
  // arrives everything sent before it has taken effect.
  bool sync() {
    send("{}");
    return recv().value("op", "") == "error";
  }

 private:
  boost::asio::io_context ioc_;
  boost::beast::websocket::stream<boost::asio::ip::tcp::socket> ws_{ioc_};
};

}  // namespace romr::testsupport
