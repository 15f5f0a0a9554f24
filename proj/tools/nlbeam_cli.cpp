// Command-line front end: simulate, exp <id>, nakao-suite, haraux-suite,
// stationary, list.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlbeam/config.hpp"
#include "nlbeam/errors.hpp"

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "override the configured seed");
    cmd->add_option("--out", c.out, "override the output directory");
    cmd->add_flag("--quiet", c.quiet, "do not print the report");
}

int launch(const std::string& id, const Common& c) {
    nlbeam::RunConfig cfg;
    if (c.config_path.empty()) {
        cfg = nlbeam::reference_config(id);
    } else {
        std::ifstream in(c.config_path);
        std::stringstream text;
        text << in.rdbuf();
        cfg = nlbeam::parse_config(text.str(), id);
        if (cfg.setup.id != id)
            throw nlbeam::InvalidConfiguration("configuration names experiment '" + cfg.setup.id +
                                               "' but '" + id + "' was requested");
    }
    if (c.seed) cfg.setup.seed = *c.seed;
    if (c.out) cfg.output_dir = *c.out;
    return nlbeam::run(cfg, std::cout, c.quiet);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Galerkin simulator for damped extensible beams"};
    app.set_version_flag("--version", std::string(nlbeam::kSoftwareVersion));
    app.require_subcommand(1);

    Common sim_opts, exp_opts, nakao_opts, haraux_opts, stat_opts;
    std::string exp_id;
    auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write its CSV");
    add_common(sim, sim_opts);
    auto* exp = app.add_subcommand("exp", "run a registered experiment");
    exp->add_option("id", exp_id, "experiment id (see list)")->required();
    add_common(exp, exp_opts);
    auto* nakao = app.add_subcommand("nakao-suite", "randomized Nakao lemma checks");
    add_common(nakao, nakao_opts);
    auto* haraux = app.add_subcommand("haraux-suite", "randomized power-difference bound checks");
    add_common(haraux, haraux_opts);
    auto* stat = app.add_subcommand("stationary", "stationary states by functional minimization");
    add_common(stat, stat_opts);
    auto* list = app.add_subcommand("list", "list experiments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            std::cout << nlbeam::list_experiments();
            return 0;
        }
        if (*sim) return launch("simulate", sim_opts);
        if (*exp) return launch(exp_id, exp_opts);
        if (*nakao) return launch("nakao_suite", nakao_opts);
        if (*haraux) return launch("haraux_suite", haraux_opts);
        if (*stat) return launch("stationary", stat_opts);
    } catch (const nlbeam::Error& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
