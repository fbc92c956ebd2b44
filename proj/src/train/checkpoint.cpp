#include "acd/train/checkpoint.hpp"

#include <cstring>
#include <map>
#include <sstream>
#include <stdexcept>

#include "acd/core/serial.hpp"

namespace acd {

void write_container(std::ostream& out, const std::vector<Section>& sections) {
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    write_pod<uint32_t>(out, kCheckpointVersion);
    write_pod<uint32_t>(out, static_cast<uint32_t>(sections.size()));
    for (const Section& s : sections) {
        write_string(out, s.name);
        write_string(out, s.payload);
    }
    if (!out) throw std::runtime_error("checkpoint: write failed");
}

std::vector<Section> read_container(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    const auto version = read_pod<uint32_t>(in);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported format version " +
                                 std::to_string(version));
    const auto count = read_pod<uint32_t>(in);
    std::vector<Section> sections(count);
    for (auto& s : sections) {
        s.name = read_string(in);
        s.payload = read_string(in);
    }
    return sections;
}

const Section* find_section(const std::vector<Section>& sections, const std::string& name) {
    for (const Section& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

std::string pack_named_arrays(
    const std::vector<std::pair<std::string, const Mat<float>*>>& arrays) {
    std::ostringstream out(std::ios::binary);
    write_pod<uint32_t>(out, static_cast<uint32_t>(arrays.size()));
    for (const auto& [name, mat] : arrays) {
        write_string(out, name);
        write_pod<uint32_t>(out, static_cast<uint32_t>(mat->rows));
        write_pod<uint32_t>(out, static_cast<uint32_t>(mat->cols));
        out.write(reinterpret_cast<const char*>(mat->data()),
                  static_cast<std::streamsize>(mat->size() * sizeof(float)));
    }
    return out.str();
}

void unpack_named_arrays(const std::string& payload,
                         const std::vector<std::pair<std::string, Mat<float>*>>& arrays) {
    std::istringstream in(payload, std::ios::binary);
    const auto count = read_pod<uint32_t>(in);
    std::map<std::string, Mat<float>*> expected;
    for (const auto& [name, mat] : arrays) expected[name] = mat;
    size_t matched = 0;
    for (uint32_t i = 0; i < count; i++) {
        const std::string name = read_string(in);
        const auto rows = read_pod<uint32_t>(in);
        const auto cols = read_pod<uint32_t>(in);
        const auto it = expected.find(name);
        if (it == expected.end())
            throw std::runtime_error("checkpoint: unexpected array '" + name + "'");
        Mat<float>* mat = it->second;
        if (mat->rows != static_cast<int>(rows) || mat->cols != static_cast<int>(cols))
            throw std::runtime_error("checkpoint: shape mismatch for '" + name + "'");
        in.read(reinterpret_cast<char*>(mat->data()),
                static_cast<std::streamsize>(mat->size() * sizeof(float)));
        if (!in) throw std::runtime_error("checkpoint: truncated array '" + name + "'");
        matched++;
    }
    if (matched != expected.size())
        throw std::runtime_error("checkpoint: missing arrays (" +
                                 std::to_string(expected.size() - matched) + ")");
}

}  // namespace acd
