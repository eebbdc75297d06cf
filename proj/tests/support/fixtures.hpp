#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tonscan::testing {

std::filesystem::path fixtureDir();
std::filesystem::path fixture(const std::string& relative);
std::string readFile(const std::filesystem::path& path);
/// Every .fc file under `relative`, sorted by path.
std::vector<std::filesystem::path> fixtureFiles(const std::string& relative);

}  // namespace tonscan::testing
