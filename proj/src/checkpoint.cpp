#include "oplearn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "payloads are written as raw host doubles and tagged f64le");

namespace oplearn {

namespace {
constexpr const char* kMagic = "OPLEARN CHECKPOINT v1";

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("checkpoint " + path + ": " + what);
}
} // namespace

const std::string* Checkpoint::find_meta(const std::string& key) const {
    for (const auto& [k, v] : meta)
        if (k == key) return &v;
    return nullptr;
}

void write_checkpoint(const Checkpoint& ck, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");

    out << kMagic << '\n';
    out << "kind: " << ck.kind << '\n';
    out << "seed: " << ck.seed << '\n';
    out << "dtype: f64le\n";
    for (const auto& [k, v] : ck.meta) out << k << ": " << v << '\n';
    for (const Parameter& p : ck.params) {
        out << "param: " << p.id << " " << p.value.rank();
        for (long d : p.value.shape()) out << ' ' << d;
        out << '\n';
    }
    out << "END HEADER\n";
    for (const Parameter& p : ck.params) {
        out.write(reinterpret_cast<const char*>(p.value.data()),
                  static_cast<std::streamsize>(p.value.numel() * sizeof(double)));
    }
    if (!out) fail(path, "write failed");
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");

    std::string line;
    if (!std::getline(in, line) || line != kMagic) fail(path, "bad magic line");

    Checkpoint ck;
    bool saw_dtype = false;
    std::vector<std::pair<std::string, std::vector<long>>> shapes;
    while (std::getline(in, line)) {
        if (line == "END HEADER") break;
        const size_t colon = line.find(": ");
        if (colon == std::string::npos) fail(path, "malformed header line: " + line);
        const std::string key = line.substr(0, colon);
        const std::string value = line.substr(colon + 2);
        if (key == "kind") {
            ck.kind = value;
        } else if (key == "seed") {
            ck.seed = std::stoull(value);
        } else if (key == "dtype") {
            if (value != "f64le") fail(path, "unsupported dtype " + value);
            saw_dtype = true;
        } else if (key == "param") {
            std::istringstream is(value);
            std::string id;
            long rank = 0;
            if (!(is >> id >> rank) || rank < 1 || rank > 2) fail(path, "bad param line: " + line);
            std::vector<long> shape(static_cast<size_t>(rank));
            for (long& d : shape)
                if (!(is >> d) || d <= 0) fail(path, "bad param shape: " + line);
            shapes.emplace_back(id, std::move(shape));
        } else {
            ck.meta.emplace_back(key, value);
        }
    }
    if (line != "END HEADER") fail(path, "truncated header");
    if (ck.kind.empty()) fail(path, "missing kind");
    if (!saw_dtype) fail(path, "missing dtype");

    for (auto& [id, shape] : shapes) {
        Tensor t(shape);
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(t.numel() * sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(t.numel() * sizeof(double)))
            fail(path, "truncated payload for parameter " + id);
        ck.params.emplace_back(std::move(t), id);
    }
    char extra;
    if (in.read(&extra, 1)) fail(path, "trailing bytes after payload");
    return ck;
}

} // namespace oplearn
