// Command-line front end: fermigibbs <subcommand> [--config file] [--out dir] ...
#include <iostream>

#include "CLI11.hpp"

#include "fermigibbs/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Dense numerical laboratory for KMS-detailed-balanced fermionic Lindbladians"};
    app.require_subcommand(1, 1);
    std::string config_path, out_dir, method;
    std::uint64_t seed = 0;
    int max_modes = 0;
    for (const auto& name : fg::io::subcommands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON experiment configuration");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--method", method, "dissipator coefficients")->check(CLI::IsMember({"closed", "quadrature", "both"}));
        sub->add_option("--max-modes", max_modes, "capacity cap on Dirac modes");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string subcommand = app.get_subcommands().front()->get_name();

    try {
        fg::io::ExperimentConfig cfg = config_path.empty() ? fg::io::parse_config("{}") : fg::io::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) cfg.seed = seed;
        if (!method.empty()) cfg.method = method;
        if (max_modes) cfg.max_modes = max_modes;
        const fg::io::RunReport report = fg::io::run(subcommand, cfg);
        for (const auto& c : report.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " " << c.value << " " << c.relation << " "
                      << c.tolerance << '\n';
        std::cout << (report.all_passed() ? "all checks passed" : "some checks failed") << " -> " << cfg.out_dir
                  << "/report.json\n";
        return report.all_passed() ? 0 : 1;
    } catch (const fg::io::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fg::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
