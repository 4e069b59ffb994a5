#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tjl/quadring.hpp"

namespace tjl {

struct ReferenceRow {
  std::string key;  // "11" or "33A"
  long norm = 0;
  std::optional<QuadInt> gen;  // d = -2 rows carry the generator of p
  std::vector<std::pair<std::string, std::string>> groups;  // name -> invariant string
  std::vector<std::pair<long, int>> divisors;  // d = -491: odd prime powers
  bool infinite = false;  // d = -491: "inf"
  const std::string* group(const std::string& name) const;
};

struct ReferenceTable {
  long d = -2;
  std::vector<std::string> header;  // comment lines
  std::vector<ReferenceRow> rows;
  static ReferenceTable parse(const std::string& text, long d);
  std::string serialize() const;
  uint32_t checksum() const;  // crc32 of the serialization
  const ReferenceRow* find(long norm, const QuadInt* gen = nullptr) const;
};
ReferenceTable load_reference(long d);

// names of the split-side groups and the level each one is computed at
std::vector<std::pair<std::string, std::string>> split_side_levels(const QuadInt& p);

enum class RowStatus { exact, odd_match, mismatch, skipped };
std::string to_string(RowStatus s);
RowStatus parse_row_status(const std::string& s);

struct GroupCheck {
  std::string name, level, expected, computed;
  RowStatus status = RowStatus::exact;
};

struct ReproRow {
  std::string key;
  long norm = 0;
  std::string gen;
  RowStatus status = RowStatus::exact;
  std::vector<GroupCheck> groups;
  std::string ratio;  // A_p when every group is finite
  std::string note;
  double seconds = 0;
};

struct ReproReport {
  long d = -2;
  long max_norm = 0;
  bool deep = false;
  std::string config_hash;
  std::vector<ReproRow> rows;
  std::string self_check;  // d = -491 reference consistency result
  bool self_check_ok = true;
  bool ok() const;  // no mismatch and self check passed
};

struct ReproOptions {
  long d = -2;
  long max_norm = 20;
  bool deep = false;  // rows of norm > 100
  double row_budget_seconds = 0;  // 0: unlimited; rows over budget are reported but kept
  int threads = 0;  // 0: OpenMP default
};
ReproReport reproduce_tables(const ReproOptions& opt);

// deterministic content only (no runtimes)
std::string report_hash(const ReproReport& r);
std::string report_to_json(const ReproReport& r);
std::string report_to_text(const ReproReport& r);
ReproReport report_from_json(const std::string& text);
void export_report(const ReproReport& r, const std::string& path, const std::string& format);

// command line entry point; exit status 0 ok, 1 mathematical mismatch, 2 usage error
int run(int argc, char** argv);

}  // namespace tjl
