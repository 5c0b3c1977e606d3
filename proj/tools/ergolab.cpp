#include "ergolab/errors.hpp"
#include "ergolab/task.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

int write_payload(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return 1;
    }
    out << body;
    return out.good() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"measurable-dynamics workbench"};
    app.set_version_flag("--version", "ergolab 0.1.0");

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    int threads = 1;

    app.add_option("-c,--config", config_path, "task config (JSON file, or '-' for stdin)")
        ->required();
    app.add_option("-o,--out", out_path, "write the primary payload here instead of stdout");
    std::uint64_t seed_value = 0;
    auto* seed_opt =
        app.add_option("--seed", seed_value, "override the config seed for sampling tasks");
    app.add_option("--threads", threads, "worker threads for grid evaluations")
        ->check(CLI::Range(1, 256));

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) seed = seed_value;

    ergolab::Json config;
    try {
        if (config_path == "-") {
            config = ergolab::Json::parse(std::cin);
        } else {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot read config '" << config_path << "'\n";
                return 2;
            }
            config = ergolab::Json::parse(in);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: config is not valid JSON: " << e.what() << '\n';
        return 2;
    }

    try {
        const ergolab::TaskResult result = ergolab::run_task(config, seed, threads);
        if (out_path.empty()) {
            std::cout << result.text;
            for (const auto& [suffix, body] : result.extra)
                std::cout << "# --- " << suffix << " ---\n" << body;
        } else {
            if (const int rc = write_payload(out_path, result.text); rc != 0) return rc;
            for (const auto& [suffix, body] : result.extra)
                if (const int rc = write_payload(out_path + suffix, body); rc != 0) return rc;
        }
        if (!result.summary.empty()) std::cerr << result.summary << '\n';
        return 0;
    } catch (const ergolab::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        if (const auto b = e.best_bounds())
            std::cerr << "best bounds so far: [" << b->first << ", " << b->second << "]\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
