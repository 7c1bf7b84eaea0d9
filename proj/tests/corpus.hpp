#pragma once

#include "geoprover/problem.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace corpus {

struct Entry {
  std::string name;
  std::string text;
  geo::Problem problem;
};

inline std::vector<Entry> load(const std::string& dir = GEOPROVER_CORPUS_DIR) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".geo") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Entry> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    out.push_back({f.filename().string(), ss.str(), geo::parse_problem(ss.str())});
  }
  return out;
}

inline const Entry& find(const std::vector<Entry>& all, const std::string& stem) {
  for (const auto& e : all)
    if (e.name.rfind(stem, 0) == 0 || e.name.find(stem) != std::string::npos) return e;
  throw std::runtime_error("no corpus problem " + stem);
}

}  // namespace corpus
