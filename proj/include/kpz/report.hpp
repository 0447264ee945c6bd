#pragma once

// Output plumbing: deterministic CSV files plus a JSON run summary.  Every
// file starts with comment lines carrying the config hash, the master seed,
// and the tool version, so results stay traceable to their inputs.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace kpz {

std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

// Shortest-round-trip decimal text for a double; integers print without a
// trailing ".0" so CSV columns of counts stay integral.
std::string fmt_double(double v);
std::string fmt_int(long long v);

struct RunContext {
  std::string out_dir;
  std::string run_id;
  std::uint64_t seed = 1;
  std::string config_hash;
  int workers = 1;

  // out_dir/run_id, created on demand.
  std::string run_dir() const;
};

class CsvWriter {
 public:
  // Opens out_dir/run_id/<name>.csv and writes the provenance comments.
  CsvWriter(const RunContext& ctx, const std::string& name);
  void comment(const std::string& text);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);
  std::string path() const { return path_; }

 private:
  std::ofstream out_;
  std::string path_;
};

void write_text_file(const std::string& path, const std::string& body);

// Reads the whole file into *out; returns false if it cannot be opened.
bool read_text_file(const std::string& path, std::string* out);

}  // namespace kpz
