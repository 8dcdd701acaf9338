#include "magtb/artifacts.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "magtb/common.hpp"

namespace magtb {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

nlohmann::json to_json(const ArtifactMeta& m) {
  return {{"command", m.command}, {"config_hash", m.config_hash}, {"version", m.version}};
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string with_csv_meta(const ArtifactMeta& meta, const std::string& body) {
  return "# " + to_json(meta).dump() + "\n" + body;
}

std::string with_json_meta(const ArtifactMeta& meta, const nlohmann::json& data) {
  nlohmann::json doc = data.is_object() ? data : nlohmann::json{{"data", data}};
  doc["meta"] = to_json(meta);
  return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error("short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ArgumentError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw ArgumentError("CSV has no column '" + name + "'");
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(std::stod(r[c]));
  return v;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      const auto j = nlohmann::json::parse(line.substr(1), nullptr, false);
      if (j.is_object()) t.meta.update(j);
      continue;
    }
    auto cells = split_commas(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) throw ArgumentError("ragged CSV row: " + line);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace magtb
