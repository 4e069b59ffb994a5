#include "tjl/data.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tjl {
namespace detail {
const std::map<std::string, std::string>& embedded_files();
}

namespace {
bool read_override(const std::string& name, std::string& out) {
  const char* dir = std::getenv("TJL_DATA_DIR");
  if (!dir || !*dir) return false;
  std::ifstream in(std::string(dir) + "/" + name, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}
}  // namespace

std::string data_file(const std::string& name) {
  std::string s;
  if (read_override(name, s)) return s;
  const auto& files = detail::embedded_files();
  auto it = files.find(name);
  if (it == files.end()) throw std::runtime_error("no data file: " + name);
  return it->second;
}

bool data_file_exists(const std::string& name) {
  std::string s;
  return read_override(name, s) || detail::embedded_files().count(name) > 0;
}

uint32_t crc32_of(const std::string& s) {
  return static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

std::string hex32(uint32_t x) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", x);
  return buf;
}

}  // namespace tjl
