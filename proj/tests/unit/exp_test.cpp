#include "ctfsyn/csv.hpp"
#include "ctfsyn/error.hpp"
#include "ctfsyn/exp/config.hpp"
#include "ctfsyn/exp/manifest.hpp"
#include "ctfsyn/exp/recipes.hpp"
#include "ctfsyn/parallel.hpp"
#include "ctfsyn/rng.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

using namespace ctfsyn;
using namespace ctfsyn::exp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("ctfsyn_exp_test_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST(Sha256, KnownVector)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Seeds, DerivedStreamsAreDistinctAndStable)
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 100; ++k) {
        seen.insert(derive_seed(1, "a", k));
        seen.insert(derive_seed(1, "b", k));
    }
    EXPECT_EQ(seen.size(), 200u);
    EXPECT_EQ(derive_seed(9, "x", 3), derive_seed(9, "x", 3));
    EXPECT_NE(derive_seed(9, "x", 3), derive_seed(10, "x", 3));
}

TEST(Csv, NumbersRoundTripExactly)
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23})
        EXPECT_EQ(parse_number(format_number(v)), v);
    CsvTable t({"a", "b"});
    t.add_row(std::vector<double>{1.5, -2.0});
    const auto back = CsvTable::parse(t.str());
    EXPECT_EQ(back.rows(), t.rows());
    EXPECT_EQ(back.column("b"), 1u);
    EXPECT_THROW((void)back.column("c"), DomainError);
    EXPECT_THROW((void)CsvTable::parse("a,b\n1\n"), Error);
}

TEST(Parallel, PropagatesTaskException)
{
    EXPECT_THROW(parallel_for(8, [](std::size_t i) {
                     if (i == 5)
                         throw DomainError("boom");
                 }),
                 DomainError);
}

TEST(Recipes, UnknownNameAndInvalidConfigAreRejected)
{
    const auto dir = scratch("reject");
    EXPECT_THROW((void)run_recipe("fig9", default_config(), 1, dir), DomainError);
    auto cfg = default_config();
    cfg.device.v_t_min = 0.0;
    EXPECT_THROW((void)run_recipe("fig4-stdp", cfg, 1, dir), ConfigError);
}

TEST(ExpInvariant, RerunsAreBitIdentical)
{
    auto cfg = default_config();
    cfg.snn.seeds = 2;
    cfg.snn.epochs = 3;
    for (const std::string recipe : {"fig4-stdp", "fig7-snn"}) {
        const auto a = run_recipe(recipe, cfg, 7, scratch("a"));
        const auto b = run_recipe(recipe, cfg, 7, scratch("b"));
        ASSERT_EQ(a.outputs.size(), b.outputs.size());
        for (std::size_t i = 0; i < a.outputs.size(); ++i) {
            EXPECT_EQ(a.outputs[i].file, b.outputs[i].file);
            EXPECT_EQ(a.outputs[i].sha256, b.outputs[i].sha256) << recipe << "/" << a.outputs[i].file;
        }
        EXPECT_EQ(a.config_sha256, b.config_sha256);
        EXPECT_EQ(a.config_sha256, sha256_hex(dump(cfg)));
    }
}

TEST(Manifest, RecordsEveryOutputFile)
{
    const auto dir = scratch("manifest");
    const auto m = run_recipe("fig4-stdp", default_config(), 3, dir);
    EXPECT_EQ(m.recipe, "fig4-stdp");
    EXPECT_EQ(m.seed, 3u);
    EXPECT_EQ(m.version, version());
    ASSERT_EQ(m.outputs.size(), 2u);
    for (const auto& o : m.outputs) {
        EXPECT_EQ(sha256_file(dir / o.file), o.sha256);
        EXPECT_EQ(fs::file_size(dir / o.file), o.bytes);
    }
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    EXPECT_NE(to_json(m).find("\"config_sha256\""), std::string::npos);
}
