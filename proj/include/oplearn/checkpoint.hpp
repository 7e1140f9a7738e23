#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oplearn/autodiff.hpp"

namespace oplearn {

// One file per model: a line-oriented text header (kind, seed, model
// metadata, parameter ids and shapes) followed by the raw little-endian
// float64 payload of every parameter in header order.
struct Checkpoint {
    std::string kind;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<Parameter> params;

    const std::string* find_meta(const std::string& key) const;
};

void write_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

} // namespace oplearn
