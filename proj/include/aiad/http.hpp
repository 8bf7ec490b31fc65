#pragma once

#include "aiad/service.hpp"

#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace aiad::service {

/// Registers the session routes on `server`. If `static_dir` is given it is
/// mounted at / for a browser front end.
void mount_routes(httplib::Server& server, SessionStore& store, const std::optional<std::string>& static_dir = {});

}  // namespace aiad::service
