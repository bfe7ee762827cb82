#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "rcnav-test-XXXXXX").string();
        if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Binary P5 image, rows top to bottom.
inline std::string pgm_p5(int w, int h, const std::vector<unsigned char>& pixels, int maxval = 255) {
    std::string s = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n" + std::to_string(maxval) + "\n";
    s.append(pixels.begin(), pixels.end());
    return s;
}

inline std::string map_yaml(const std::string& image, double res, const std::string& origin, int negate,
                            double occ = 0.65, double free = 0.196) {
    return "image: " + image + "\nresolution: " + std::to_string(res) + "\norigin: " + origin +
           "\nnegate: " + std::to_string(negate) + "\noccupied_thresh: " + std::to_string(occ) +
           "\nfree_thresh: " + std::to_string(free) + "\n";
}

}  // namespace testing
