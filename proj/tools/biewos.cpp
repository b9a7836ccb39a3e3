#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "biewos/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"BIE-WOS hybrid Laplace solver: Neumann data from Dirichlet data"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    std::string mesh_dump;

    CLI::App* solve = app.add_subcommand("solve", "run the method described by a config file");
    solve->add_option("config", config_path, "config file path")->required();
    solve->add_option("--set", overrides, "override a config entry, section.key=value");
    solve->add_option("--seed", seed, "override [wos].seed")->each([&](const std::string&) {
        seed_set = true;
    });
    solve->add_option("--workers", workers, "override [wos].workers");
    solve->add_option("--dump-mesh", mesh_dump, "write the patch mesh to a file (biewos_patch)");

    std::string cmp_a, cmp_b;
    double tol = 0.0;
    CLI::App* compare = app.add_subcommand("compare", "compare two result CSV files");
    compare->add_option("a", cmp_a, "first CSV")->required();
    compare->add_option("b", cmp_b, "second CSV")->required();
    compare->add_option("tol", tol, "relative tolerance")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            biewos::RawConfig cfg = biewos::parse_config_file(config_path);
            for (const std::string& s : overrides) biewos::apply_override(cfg, s);
            biewos::RunOverrides ov;
            if (seed_set) ov.seed = seed;
            if (workers > 0) ov.workers = workers;
            ov.mesh_dump_path = mesh_dump;
            const biewos::RunRecord rec = biewos::run(cfg, ov);
            biewos::write_outputs(rec, cfg);
            std::cout << rec.csv_text;
            std::fprintf(stderr, "%s: %zu rows, %.0f paths, %.3f s\n", rec.method.c_str(),
                         rec.rows.size(), rec.paths_total, rec.wall_seconds);
            return 0;
        }
        return biewos::compare_csv(cmp_a, cmp_b, tol, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
