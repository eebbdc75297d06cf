#include "support/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tonscan::testing {

std::filesystem::path fixtureDir() { return TONSCAN_FIXTURE_DIR; }

std::filesystem::path fixture(const std::string& relative) { return fixtureDir() / relative; }

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> fixtureFiles(const std::string& relative) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(fixture(relative))) {
        if (e.is_regular_file() && e.path().extension() == ".fc") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace tonscan::testing
