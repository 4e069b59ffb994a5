#pragma once
#include <cstdint>
#include <string>

namespace tjl {

// contents of a bundled data file; TJL_DATA_DIR, when set, takes precedence
std::string data_file(const std::string& name);
bool data_file_exists(const std::string& name);
uint32_t crc32_of(const std::string& s);
std::string hex32(uint32_t x);

}  // namespace tjl
