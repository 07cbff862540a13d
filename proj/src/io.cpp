#include "graphct/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace graphct {

namespace fs = std::filesystem;

void atomic_write_binary(const std::string& path,
                         const std::function<std::string()>& produce) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        const std::string content = produce();
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

void atomic_write_file(const std::string& path, const std::string& content) {
    atomic_write_binary(path, [&content] { return content; });
}

void write_tensor_file(const std::string& path, const Tensor& tensor, const std::string& kind,
                       std::uint64_t geometry_hash) {
    atomic_write_binary(path, [&] {
        std::ostringstream out;
        out << "GCTBIN v1\n";
        out << "kind " << kind << "\n";
        out << "shape";
        for (int d : tensor.shape()) out << " " << d;
        out << "\n";
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(geometry_hash));
        out << "geom " << hex << "\n";
        out << "end\n";
        out.write(reinterpret_cast<const char*>(tensor.data()),
                  static_cast<std::streamsize>(tensor.numel() * sizeof(double)));
        return out.str();
    });
}

Tensor read_tensor_file(const std::string& path, std::string* kind,
                        std::uint64_t* geometry_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "GCTBIN v1")
        throw std::runtime_error("'" + path + "': not a GCTBIN v1 file");
    std::vector<int> shape;
    while (std::getline(in, line)) {
        if (line == "end") break;
        std::istringstream ls(line);
        std::string field;
        ls >> field;
        if (field == "kind") {
            std::string k;
            ls >> k;
            if (kind) *kind = k;
        } else if (field == "shape") {
            int d;
            while (ls >> d) shape.push_back(d);
        } else if (field == "geom") {
            std::string hex;
            ls >> hex;
            if (geometry_hash) *geometry_hash = std::stoull(hex, nullptr, 16);
        } else {
            throw std::runtime_error("'" + path + "': unknown header field '" + field + "'");
        }
    }
    if (shape.empty()) throw std::runtime_error("'" + path + "': missing shape");
    Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.numel() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != t.numel() * sizeof(double))
        throw std::runtime_error("'" + path + "': truncated data section");
    return t;
}

void write_pgm(const std::string& path, const Tensor& image) {
    if (image.rank() != 2) throw std::invalid_argument("write_pgm: image must be (H, W)");
    const int h = image.size(0), w = image.size(1);
    const double lo = image.min_value(), hi = image.max_value();
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    atomic_write_binary(path, [&] {
        std::ostringstream out;
        out << "P5\n" << w << " " << h << "\n255\n";
        for (std::size_t i = 0; i < image.numel(); ++i) {
            const int v = static_cast<int>(std::lround((image[i] - lo) * scale));
            out.put(static_cast<char>(v < 0 ? 0 : v > 255 ? 255 : v));
        }
        return out.str();
    });
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

} // namespace graphct
