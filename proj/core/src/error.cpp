#include "ctfsyn/error.hpp"

namespace ctfsyn {

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& item : items) {
        if (!out.empty())
            out += "; ";
        out += item;
    }
    return out;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error("invalid config: " + join(violations)), violations_(std::move(violations))
{
}

} // namespace ctfsyn
