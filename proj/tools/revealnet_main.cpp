#include <optional>
#include <string>

#include <CLI11.hpp>

#include "revealnet/config.hpp"
#include "revealnet/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"RevealNet: decentralized attack-attribution simulation"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "experiment config (JSON)");
        if (config_required)
            opt->required();
        sub->add_option("--seed", seed, "override the master seed");
        sub->add_option("--out", out_dir, "override the output directory");
    };

    auto* run = app.add_subcommand("run", "ingest or synthesize a trace, simulate the WAN, and "
                                          "run attribution over the configured grid");
    add_common(run, true);
    auto* gen = app.add_subcommand("gen", "emit the seeded synthetic trace CSV");
    add_common(gen, true);
    auto* tables = app.add_subcommand("tables", "closed-form storage and bandwidth tables");
    add_common(tables, false);

    CLI11_PARSE(app, argc, argv);

    const revealnet::CliOverrides overrides{seed, out_dir};
    if (run->parsed())
        return revealnet::cmd_run(config_path, overrides);
    if (gen->parsed())
        return revealnet::cmd_gen(config_path, overrides);
    return revealnet::cmd_tables(
        config_path.empty() ? std::nullopt : std::optional<std::string>(config_path), overrides);
}
