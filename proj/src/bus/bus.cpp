#include "rcnav/bus/bus.hpp"

#include <algorithm>

namespace rcnav {

Bus::Subscription& Bus::Subscription::operator=(Subscription&& other) noexcept {
    if (this != &other) {
        reset();
        topic_ = std::move(other.topic_);
        sub_ = std::move(other.sub_);
    }
    return *this;
}

void Bus::Subscription::reset() {
    if (sub_) sub_->active.store(false);
    if (auto topic = topic_.lock(); topic && sub_) {
        std::lock_guard lock(topic->subs_mutex);
        auto& subs = topic->subs;
        subs.erase(std::remove(subs.begin(), subs.end(), sub_), subs.end());
    }
    topic_.reset();
    sub_.reset();
}

std::shared_ptr<Bus::Topic> Bus::topic_for(const std::string& name, const std::type_info& type) {
    std::lock_guard lock(topics_mutex_);
    auto it = topics_.find(name);
    if (it == topics_.end()) {
        it = topics_.emplace(name, std::make_shared<Topic>(std::type_index(type), type.name())).first;
    } else if (it->second->type != std::type_index(type)) {
        throw ProtocolError("bus: topic '" + name + "' carries " + it->second->type_name + ", not " + type.name());
    }
    return it->second;
}

std::size_t Bus::subscriber_count(const std::string& name) const {
    std::lock_guard lock(topics_mutex_);
    const auto it = topics_.find(name);
    if (it == topics_.end()) return 0;
    std::lock_guard subs_lock(it->second->subs_mutex);
    return it->second->subs.size();
}

}  // namespace rcnav
