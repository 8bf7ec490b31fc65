// Command line front end: run experiment specs, summarize or replay their
// output, and serve live advising sessions over HTTP.

#include "aiad/harness.hpp"
#include "aiad/http.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <iostream>

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

void print_summary(const nlohmann::json& summary) { std::cout << aiad::summary_csv(summary); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AIAD assistance engine"};
    app.require_subcommand(1);

    std::string spec_path, output;
    int runs = 0, threads = 0;
    auto* run = app.add_subcommand("run", "Run an experiment spec");
    run->add_option("spec", spec_path, "Spec JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", output, "Output directory (overrides the spec)");
    run->add_option("--runs", runs, "Number of runs (overrides the spec)");
    run->add_option("--threads", threads, "Worker threads (overrides the spec)");

    std::string dir;
    auto* summarize = app.add_subcommand("summarize", "Recompute summary tables from an output directory");
    summarize->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);

    std::optional<int> replay_run;
    std::optional<std::string> replay_mode;
    auto* replay = app.add_subcommand("replay", "Re-execute logged runs and compare logs byte for byte");
    replay->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
    replay->add_option("--run", replay_run);
    replay->add_option("--mode", replay_mode);

    int port = 8080;
    std::string host = "127.0.0.1";
    std::optional<std::string> static_dir;
    auto* serve = app.add_subcommand("serve", "Serve advising sessions over HTTP");
    serve->add_option("--port", port);
    serve->add_option("--host", host);
    serve->add_option("--static", static_dir, "Directory mounted at /")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto spec = aiad::load_spec(spec_path);
            if (!output.empty()) spec.output = output;
            if (runs > 0) spec.runs = runs;
            if (threads > 0) spec.threads = threads;
            const auto result = aiad::run_experiment(spec);
            print_summary(result.summary);
            if (!spec.output.empty()) std::cout << "wrote " << spec.output << "\n";
        } else if (*summarize) {
            const auto result = aiad::summarize_directory(dir);
            print_summary(result.summary);
        } else if (*replay) {
            const auto report = aiad::replay(dir, replay_run, replay_mode);
            for (const auto& m : report.messages) std::cout << m << "\n";
            std::cout << report.compared << " compared, " << report.mismatched << " mismatched\n";
            return report.mismatched == 0 && report.compared > 0 ? 0 : 1;
        } else if (*serve) {
            aiad::service::SessionStore store;
            httplib::Server server;
            aiad::service::mount_routes(server, store, static_dir);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on http://" << host << ":" << port << std::endl;
            if (!server.listen(host, port)) {
                std::cerr << "cannot listen on " << host << ":" << port << "\n";
                return 1;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
