#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <typeindex>
#include <vector>

#include "rcnav/core/errors.hpp"

namespace rcnav {

/// Topic names used by the stack.
namespace topics {
inline constexpr const char* kScan = "/scan";
inline constexpr const char* kGroundTruth = "/sim/state";
inline constexpr const char* kTeleopCmd = "/teleop/cmd";
inline constexpr const char* kSafetyCmd = "/safety/cmd";
inline constexpr const char* kAutonomousCmd = "/autonomous/cmd";
inline constexpr const char* kGoal = "/goal";
inline constexpr const char* kMuxOut = "/mux/out";
inline constexpr const char* kClock = "/clock";
/// Serialized wire "state" frames (std::shared_ptr<const std::string>).
inline constexpr const char* kTelemetry = "/telemetry/state";
/// Serialized command records for the log (std::shared_ptr<const std::string>).
inline constexpr const char* kCommandLog = "/log/command";
}  // namespace topics

/// In-process publish/subscribe bus.
///
/// Each topic name is bound to one payload type on first use; publishing or subscribing with
/// another type throws ProtocolError. Delivery is synchronous on the publishing thread.
/// Publications to one topic are serialized, so every subscriber sees them in publication
/// order, and a subscriber's handler never runs concurrently with itself.
class Bus {
    struct Subscriber {
        std::uint64_t id{0};
        std::function<void(const void*)> fn;
        std::mutex exec;
        std::atomic<bool> active{true};
    };
    struct Topic {
        std::type_index type;
        std::string type_name;
        std::recursive_mutex order;
        std::mutex subs_mutex;
        std::vector<std::shared_ptr<Subscriber>> subs;
        Topic(std::type_index t, std::string n) : type(t), type_name(std::move(n)) {}
    };

public:
    /// Unsubscribes on destruction. Safe to outlive the bus.
    class Subscription {
    public:
        Subscription() = default;
        Subscription(Subscription&&) noexcept = default;
        Subscription& operator=(Subscription&& other) noexcept;
        Subscription(const Subscription&) = delete;
        Subscription& operator=(const Subscription&) = delete;
        ~Subscription() { reset(); }

        void reset();
        [[nodiscard]] bool active() const noexcept { return !topic_.expired(); }

    private:
        friend class Bus;
        Subscription(std::weak_ptr<Topic> topic, std::shared_ptr<Subscriber> sub)
            : topic_(std::move(topic)), sub_(std::move(sub)) {}
        std::weak_ptr<Topic> topic_;
        std::shared_ptr<Subscriber> sub_;
    };

    template <typename T>
    void publish(const std::string& name, const T& message) {
        auto topic = topic_for(name, typeid(T));
        std::lock_guard order(topic->order);
        std::vector<std::shared_ptr<Subscriber>> subs;
        {
            std::lock_guard lock(topic->subs_mutex);
            subs = topic->subs;
        }
        for (const auto& sub : subs) {
            std::lock_guard exec(sub->exec);
            if (sub->active.load()) sub->fn(&message);
        }
    }

    template <typename T>
    [[nodiscard]] Subscription subscribe(const std::string& name, std::function<void(const T&)> handler) {
        auto topic = topic_for(name, typeid(T));
        auto sub = std::make_shared<Subscriber>();
        sub->id = next_id_.fetch_add(1);
        sub->fn = [h = std::move(handler)](const void* msg) { h(*static_cast<const T*>(msg)); };
        {
            std::lock_guard lock(topic->subs_mutex);
            topic->subs.push_back(sub);
        }
        return Subscription(topic, sub);
    }

    [[nodiscard]] std::size_t subscriber_count(const std::string& name) const;

private:
    std::shared_ptr<Topic> topic_for(const std::string& name, const std::type_info& type);

    mutable std::mutex topics_mutex_;
    std::map<std::string, std::shared_ptr<Topic>> topics_;
    std::atomic<std::uint64_t> next_id_{1};
};

}  // namespace rcnav
