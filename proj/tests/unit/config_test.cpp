#include "ctfsyn/error.hpp"
#include "ctfsyn/exp/config.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace ctfsyn;
using namespace ctfsyn::exp;

namespace {

std::vector<std::string> violations_of(const std::string& text)
{
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle)
{
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

} // namespace

TEST(Config, EmptyTextGivesDefaults)
{
    EXPECT_EQ(dump(parse_config("")), dump(default_config()));
    EXPECT_EQ(dump(parse_config("# only a comment\n\n   \n")), dump(default_config()));
    EXPECT_TRUE(validate(default_config()).empty());
}

TEST(Config, ParsesValuesListsAndComments)
{
    const auto c = parse_config("pulse.program_v = 11.0  # lower\nthresholds.erase_v = -13, -14\n"
                                "snn.rules = ideal, device\nstdp.drain_shape = tail_then_spike\n");
    EXPECT_DOUBLE_EQ(c.pulse.program_v, 11.0);
    EXPECT_EQ(c.thresholds.erase_v, (std::vector<double>{-13.0, -14.0}));
    EXPECT_EQ(c.snn.rules, (std::vector<std::string>{"ideal", "device"}));
    EXPECT_EQ(c.stdp.setup.drain.shape, waveform::Shape::tail_then_spike);
}

TEST(Config, NegativePulseWidthNamesTheField)
{
    const auto v = violations_of("pulse.program_t_p = -1\n");
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("pulse.program_t_p"), std::string::npos);
    EXPECT_NE(v[0].find("line 1"), std::string::npos);
}

TEST(Config, UnknownAndDuplicateKeysAreRejected)
{
    const auto v = violations_of("pulse.program_v = 12\npulse.bogus = 1\npulse.program_v = 13\n");
    EXPECT_TRUE(any_contains(v, "line 2: unknown key 'pulse.bogus'"));
    EXPECT_TRUE(any_contains(v, "already set on line 1"));
}

TEST(Config, CollectsEveryViolation)
{
    const auto v = violations_of("garbage\npulse.erase_v = 3\nsnn.epochs = -2\nsnn.rules = hebbian\n");
    EXPECT_GE(v.size(), 4u);
    EXPECT_TRUE(any_contains(v, "line 1"));
    EXPECT_TRUE(any_contains(v, "pulse.erase_v"));
    EXPECT_TRUE(any_contains(v, "snn.epochs"));
    EXPECT_TRUE(any_contains(v, "snn.rules"));
}

TEST(Config, CrossFieldChecks)
{
    EXPECT_TRUE(any_contains(violations_of("device.v_t_min = 0\n"), "v_t_min must be below v_t_max"));
    EXPECT_TRUE(any_contains(violations_of("snn.init_lo = 0.8\nsnn.init_hi = 0.2\n"), "init_lo"));
}

TEST(Config, DumpRoundTrips)
{
    auto c = default_config();
    c.pulse.program_v = 11.75;
    c.levels.program_t_p = {3e-4, 7e-4};
    c.snn.seeds = 3;
    const std::string text = dump(c);
    EXPECT_EQ(dump(parse_config(text)), text);
    EXPECT_EQ(config_keys().size(), static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')));
}

TEST(Config, RelativeIrisPathResolvesAgainstConfigFile)
{
    const auto dir = std::filesystem::temp_directory_path() / "ctfsyn_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "run.cfg") << "snn.iris_path = data/iris.csv\n";
    }
    EXPECT_EQ(load_config(dir / "run.cfg").snn.iris_path, dir / "data/iris.csv");
    EXPECT_THROW((void)load_config(dir / "missing.cfg"), ConfigError);
    std::filesystem::remove_all(dir);
}
