#include "rcnav/bus/telemetry_server.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <deque>
#include <mutex>
#include <thread>
#include <variant>
#include <vector>

#include "rcnav/bus/wire.hpp"
#include "rcnav/esc/mux.hpp"

namespace rcnav {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using Frame = std::shared_ptr<const std::string>;

namespace {
class Session;
}

struct TelemetryServer::Impl {
    Bus& bus;
    Frame map_meta;
    TelemetryConfig config;
    net::io_context ioc{1};
    tcp::acceptor acceptor{ioc};
    std::thread thread;
    std::atomic<double> clock{0.0};
    std::atomic<bool> running{false};

    mutable std::mutex mutex;
    Frame latest;
    std::vector<std::weak_ptr<Session>> sessions;

    Bus::Subscription telemetry_sub;
    Bus::Subscription clock_sub;

    Impl(Bus& b, std::string meta, TelemetryConfig cfg)
        : bus(b), map_meta(std::make_shared<const std::string>(std::move(meta))), config(std::move(cfg)) {}

    Frame latest_frame() const {
        std::lock_guard lock(mutex);
        return latest;
    }

    void handle_client_text(const std::string& text, std::deque<Frame>& replies);
    void do_accept();
};

namespace {

class Session : public std::enable_shared_from_this<Session> {
public:
    Session(tcp::socket&& socket, TelemetryServer::Impl& server)
        : ws_(std::move(socket)), timer_(ws_.get_executor()), server_(server) {}

    void run() {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(beast::bind_front_handler(&Session::on_accept, shared_from_this()));
    }

    [[nodiscard]] bool open() const noexcept { return open_.load(); }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return fail(ec);
        open_ = true;
        control_.push_back(server_.map_meta);
        maybe_write();
        do_read();
        arm_timer();
    }

    void do_read() {
        ws_.async_read(buffer_, beast::bind_front_handler(&Session::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) return fail(ec);
        const std::string text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        server_.handle_client_text(text, control_);
        maybe_write();
        do_read();
    }

    void arm_timer() {
        const double rate = server_.config.snapshot_rate > 0.0 ? server_.config.snapshot_rate : 20.0;
        timer_.expires_after(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / rate)));
        timer_.async_wait(beast::bind_front_handler(&Session::on_timer, shared_from_this()));
    }

    void on_timer(beast::error_code ec) {
        if (ec || !open_) return;
        Frame frame = server_.latest_frame();
        if (frame && frame != last_offered_) {
            // Replaces any state frame still waiting behind a slow socket.
            pending_state_ = frame;
            last_offered_ = frame;
        }
        maybe_write();
        arm_timer();
    }

    void maybe_write() {
        if (writing_ || !open_) return;
        if (!control_.empty()) {
            in_flight_ = control_.front();
            control_.pop_front();
        } else if (pending_state_) {
            in_flight_ = std::move(pending_state_);
            pending_state_.reset();
        } else {
            return;
        }
        writing_ = true;
        ws_.text(true);
        ws_.async_write(net::buffer(*in_flight_), beast::bind_front_handler(&Session::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        writing_ = false;
        in_flight_.reset();
        if (ec) return fail(ec);
        maybe_write();
    }

    void fail(beast::error_code ec) {
        if (ec != websocket::error::closed && ec != net::error::operation_aborted) {
            spdlog::debug("telemetry: session closed: {}", ec.message());
        }
        open_ = false;
        timer_.cancel();
    }

    websocket::stream<beast::tcp_stream> ws_;
    net::steady_timer timer_;
    TelemetryServer::Impl& server_;
    beast::flat_buffer buffer_;
    std::deque<Frame> control_;
    Frame pending_state_;
    Frame last_offered_;
    Frame in_flight_;
    bool writing_{false};
    std::atomic<bool> open_{false};
};

}  // namespace

void TelemetryServer::Impl::handle_client_text(const std::string& text, std::deque<Frame>& replies) {
    const double now = clock.load();
    try {
        const auto msg = wire::parse_client_message(text);
        if (const auto* drive = std::get_if<wire::DriveMsg>(&msg)) {
            const AckermannDrive cmd = clamp_to_limits({drive->speed, drive->steering}, config.limits);
            bus.publish(topics::kTeleopCmd, StampedCommand{kTeleopSource, now, cmd});
        } else if (const auto* goal = std::get_if<wire::GoalMsg>(&msg)) {
            bus.publish(topics::kGoal, Point2D{goal->x, goal->y});
        } else {
            bus.publish(topics::kTeleopCmd, StampedCommand{kTeleopSource, now, {}});
        }
    } catch (const std::exception& e) {
        replies.push_back(std::make_shared<const std::string>(wire::encode_error(e.what(), now)));
    }
}

void TelemetryServer::Impl::do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) {
            if (ec != net::error::operation_aborted) spdlog::warn("telemetry: accept failed: {}", ec.message());
            if (!acceptor.is_open()) return;
        } else {
            auto session = std::make_shared<Session>(std::move(socket), *this);
            {
                std::lock_guard lock(mutex);
                std::erase_if(sessions, [](const std::weak_ptr<Session>& w) { return w.expired(); });
                sessions.push_back(session);
            }
            session->run();
        }
        do_accept();
    });
}

TelemetryServer::TelemetryServer(Bus& bus, std::string map_meta_frame, TelemetryConfig config)
    : impl_(std::make_unique<Impl>(bus, std::move(map_meta_frame), std::move(config))) {}

TelemetryServer::~TelemetryServer() { stop(); }

void TelemetryServer::start() {
    if (impl_->running) return;
    Impl& s = *impl_;
    const tcp::endpoint endpoint{net::ip::make_address(s.config.address), s.config.port};
    s.acceptor.open(endpoint.protocol());
    s.acceptor.set_option(net::socket_base::reuse_address(true));
    s.acceptor.bind(endpoint);
    s.acceptor.listen(net::socket_base::max_listen_connections);

    s.telemetry_sub = s.bus.subscribe<Frame>(topics::kTelemetry, [&s](const Frame& frame) {
        std::lock_guard lock(s.mutex);
        s.latest = frame;
    });
    s.clock_sub = s.bus.subscribe<double>(topics::kClock, [&s](const double& t) { s.clock.store(t); });

    s.do_accept();
    s.running = true;
    s.thread = std::thread([&s] { s.ioc.run(); });
    spdlog::info("telemetry: listening on ws://{}:{}", s.config.address, port());
}

void TelemetryServer::stop() {
    if (!impl_ || !impl_->running) return;
    Impl& s = *impl_;
    s.telemetry_sub.reset();
    s.clock_sub.reset();
    net::post(s.ioc, [&s] {
        beast::error_code ec;
        s.acceptor.close(ec);
    });
    s.ioc.stop();
    if (s.thread.joinable()) s.thread.join();
    s.running = false;
}

unsigned short TelemetryServer::port() const {
    beast::error_code ec;
    const auto ep = impl_->acceptor.local_endpoint(ec);
    return ec ? 0 : ep.port();
}

std::size_t TelemetryServer::client_count() const {
    std::lock_guard lock(impl_->mutex);
    std::size_t n = 0;
    for (const auto& w : impl_->sessions) {
        if (auto s = w.lock(); s && s->open()) ++n;
    }
    return n;
}

}  // namespace rcnav
