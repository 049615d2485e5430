#include <CLI11.hpp>

#include "wavefront/cli_commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"wavefront-lab: semi-wavefront analysis for non-local delayed "
                 "reaction-diffusion equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "seed for randomized sweeps")
            ->each([&](const std::string&) { seed_set = true; });
    };

    add_common(app.add_subcommand("speeds", "minimal speeds, characteristic roots and verdicts"));
    add_common(app.add_subcommand("solve", "solve the wave profile at one speed"));
    add_common(app.add_subcommand("verify", "uniqueness, hypothesis and non-existence experiments"));
    add_common(app.add_subcommand("sweep", "solve across a speed grid"));

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    return wavefront::run_command(command, config_path, out_dir,
                                  seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
}
