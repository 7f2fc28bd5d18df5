// sim <recipe> --config <path> --seed <u64> --out <dir>
//
// On success the manifest is printed to stdout. On failure a single JSON
// object {"error": {"kind", "message", ...}} goes to stderr and the exit
// code is nonzero: 2 for usage or config problems, 1 for everything else.

#include "ctfsyn/error.hpp"
#include "ctfsyn/exp/config.hpp"
#include "ctfsyn/exp/recipes.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

namespace {

int fail(const std::string& kind, const std::string& message, int code, nlohmann::ordered_json extra = {})
{
    nlohmann::ordered_json err{{"kind", kind}, {"message", message}};
    for (auto& [k, v] : extra.items())
        err[k] = v;
    std::cerr << nlohmann::ordered_json{{"error", err}}.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"CTF synapse simulator"};
    std::string recipe;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool print_config = false;

    std::string names;
    for (const auto& n : ctfsyn::exp::recipe_names())
        names += (names.empty() ? "" : ", ") + n;
    app.add_option("recipe", recipe, "one of: " + names);
    app.add_option("--config", config_path, "key = value config file (omit for defaults)");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--print-config", print_config, "print the effective config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        const auto cfg = config_path.empty() ? ctfsyn::exp::default_config() : ctfsyn::exp::load_config(config_path);
        if (print_config) {
            std::cout << ctfsyn::exp::dump(cfg);
            return 0;
        }
        if (recipe.empty() || out_dir.empty())
            return fail("usage", "a recipe and --out are required", 2);
        const auto m = ctfsyn::exp::run_recipe(recipe, cfg, seed, out_dir);
        std::cout << ctfsyn::exp::to_json(m);
        return 0;
    } catch (const ctfsyn::ConfigError& e) {
        return fail(e.kind(), e.what(), 2, {{"violations", e.violations()}});
    } catch (const ctfsyn::NumericError& e) {
        return fail(e.kind(), e.what(), 1, {{"residual", e.residual()}});
    } catch (const ctfsyn::Error& e) {
        return fail(e.kind(), e.what(), 1);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
