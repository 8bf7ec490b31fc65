#include "aiad/http.hpp"

#include <httplib.h>

namespace aiad::service {

namespace {

void send(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& msg) {
    send(res, status, {{"version", kApiVersion}, {"error", msg}, {"status", status}});
}

template <class F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const ServiceError& e) {
            send_error(res, e.status(), e.what());
        } catch (const nlohmann::json::exception& e) {
            send_error(res, 400, std::string("malformed JSON: ") + e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    };
}

nlohmann::json body(const httplib::Request& req) {
    if (req.body.empty()) return nlohmann::json::object();
    return nlohmann::json::parse(req.body);
}

}  // namespace

void mount_routes(httplib::Server& server, SessionStore& store, const std::optional<std::string>& static_dir) {
    server.Post("/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
        send(res, 201, store.create(body(req)));
    }));
    server.Get("/sessions", guarded([&store](const httplib::Request&, httplib::Response& res) {
        send(res, 200, {{"version", kApiVersion}, {"sessions", store.ids()}});
    }));
    server.Post("/sessions/restore", guarded([&store](const httplib::Request& req, httplib::Response& res) {
        send(res, 201, store.restore(body(req)));
    }));
    server.Get(R"(/sessions/([A-Za-z0-9_-]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
        const bool full = req.has_param("full") && req.get_param_value("full") != "0";
        send(res, 200, store.get(req.matches[1], full));
    }));
    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/actions)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
        send(res, 200, store.submit(req.matches[1], body(req)));
    }));
    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/advice)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
        send(res, 200, store.advice(req.matches[1]));
    }));
    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/finish)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
        send(res, 200, store.finish(req.matches[1]));
    }));
    if (static_dir) server.set_mount_point("/", *static_dir);
}

}  // namespace aiad::service
