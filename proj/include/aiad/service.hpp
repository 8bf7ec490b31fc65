#pragma once

// Live advising sessions where a person plays the agent. SessionStore holds
// the sessions and speaks JSON; http.hpp puts it behind HTTP.

#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace aiad::service {

inline constexpr const char* kApiVersion = "aiad-service-1";

/// Error with the HTTP status it maps to.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, const std::string& msg) : std::runtime_error(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class Session;

class SessionStore {
public:
    SessionStore();
    ~SessionStore();

    /// {domain, seed?, config?, planner?, particles?, instance?}
    nlohmann::json create(const nlohmann::json& request);
    /// Public view; `full` adds the belief particles so the result can be
    /// passed to restore().
    nlohmann::json get(const std::string& id, bool full = false) const;
    /// {action} (day trip: POI index or "noop"; inventory: action id or
    /// {production: [p1, p2, p3]}).
    nlohmann::json submit(const std::string& id, const nlohmann::json& request);
    nlohmann::json advice(const std::string& id) const;
    nlohmann::json finish(const std::string& id);
    /// Recreates a session from a full snapshot under its original id.
    nlohmann::json restore(const nlohmann::json& snapshot);
    std::vector<std::string> ids() const;

private:
    std::shared_ptr<Session> find(const std::string& id) const;

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;
};

}  // namespace aiad::service
