#include "kpz/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "kpz/errors.hpp"

namespace kpz {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt_double(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return fmt_int(static_cast<long long>(v));
  }
  char buf[40];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_int(long long v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%lld", v);
  return buf;
}

std::string RunContext::run_dir() const {
  if (out_dir.empty()) throw ConfigError("output directory is empty");
  std::string dir = out_dir;
  if (!run_id.empty()) dir += "/" + run_id;
  return dir;
}

CsvWriter::CsvWriter(const RunContext& ctx, const std::string& name) {
  const std::string dir = ctx.run_dir();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir);
  path_ = dir + "/" + name + ".csv";
  out_.open(path_, std::ios::out | std::ios::trunc);
  if (!out_) throw ConfigError("cannot open " + path_ + " for writing");
  comment("config_hash=" + ctx.config_hash);
  comment("seed=" + fmt_int(static_cast<long long>(ctx.seed)));
}

void CsvWriter::comment(const std::string& text) {
  out_ << "# " << text << "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  row(cols);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
  if (!out_) throw ConfigError("write failed: " + path_);
}

void write_text_file(const std::string& path, const std::string& body) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw ConfigError("cannot create directory " + parent.string());
  }
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << body;
  if (!out) throw ConfigError("write failed: " + path);
}

bool read_text_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::in | std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  *out = buf.str();
  return true;
}

}  // namespace kpz
