#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

struct CorruptCase {
  std::string name;
  std::string text;
  int line = 0;
  int column = 0;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Files under data/corrupt; the first line reads `# expect <line>:<col>`.
inline std::vector<CorruptCase> corrupt_corpus() {
  std::vector<CorruptCase> out;
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(SRCLAB_TEST_DATA) / "corrupt")) {
    CorruptCase c;
    c.name = e.path().filename().string();
    c.text = slurp(e.path());
    std::sscanf(c.text.c_str(), "# expect %d:%d", &c.line, &c.column);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace testsupport
