#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace test_helpers {

inline std::filesystem::path fixture_dir() { return std::filesystem::path(PREREQX_FIXTURE_DIR); }

inline bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

// Scratch directory under the build tree, cleaned per use.
inline std::filesystem::path scratch_dir(const std::string& name) {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / ("prereqx_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace test_helpers
