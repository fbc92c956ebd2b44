#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "acd/core/mat.hpp"

namespace acd {

inline constexpr char kCheckpointMagic[8] = {'A', 'C', 'D', 'C', 'K', 'P', 'T', '\0'};
inline constexpr uint32_t kCheckpointVersion = 1;

/// Checkpoints are a single container file: magic, a format-version
/// integer, then named sections. Parameter sections hold named arrays
/// (name -> shape -> raw little-endian 32-bit floats); the serialized
/// HyperConfig and run counters ride alongside as text sections.
struct Section {
    std::string name;
    std::string payload;
};

void write_container(std::ostream& out, const std::vector<Section>& sections);
std::vector<Section> read_container(std::istream& in);

const Section* find_section(const std::vector<Section>& sections, const std::string& name);

/// Named float32 arrays packed into a section payload.
std::string pack_named_arrays(const std::vector<std::pair<std::string, const Mat<float>*>>& arrays);

/// Unpacks into pre-shaped destination arrays; every expected name must be
/// present with the exact shape, and no unknown names may appear.
void unpack_named_arrays(const std::string& payload,
                         const std::vector<std::pair<std::string, Mat<float>*>>& arrays);

}  // namespace acd
