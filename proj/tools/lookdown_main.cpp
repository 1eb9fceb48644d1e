#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>

#include "lookdown/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"neutral genealogy models, lookdown couplings, and their experiments"};
    app.set_version_flag("--version", LOOKDOWN_VERSION);

    std::string config_path;
    app.add_option("config", config_path, "JSON run configuration")->required();
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "override the config seed");
    int threads = 0;
    app.add_option("--threads", threads, "worker threads for replicate batches");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        return lookdown::run_config_file(config_path, seed, threads);
    } catch (const lookdown::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
