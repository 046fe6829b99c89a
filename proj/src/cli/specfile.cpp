#include "bundlecheck/cli/specfile.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bundlecheck::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

const std::string* Section::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

const std::string& Section::at(const std::string& key) const {
  const std::string* v = find(key);
  if (!v)
    throw ParseError(0, "[" + kind + " " + name + "] is missing required key '" + key + "'");
  return *v;
}

std::vector<const Section*> SpecFile::of_kind(const std::string& kind) const {
  std::vector<const Section*> out;
  for (const Section& s : sections)
    if (s.kind == kind) out.push_back(&s);
  return out;
}

const Section* SpecFile::named(const std::string& kind, const std::string& name) const {
  for (const Section& s : sections)
    if (s.kind == kind && s.name == name) return &s;
  return nullptr;
}

SpecFile parse_specfile(const std::string& text) {
  SpecFile spec;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  std::size_t offset = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::size_t line_start = offset;
    offset += raw.size() + 1;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(line_start, "unterminated section header on line " + std::to_string(lineno));
      std::string inner = trim(line.substr(1, line.size() - 2));
      std::size_t sp = inner.find_first_of(" \t");
      if (sp == std::string::npos)
        throw ParseError(line_start, "section header needs '[kind name]' on line " + std::to_string(lineno));
      Section s;
      s.kind = trim(inner.substr(0, sp));
      s.name = trim(inner.substr(sp + 1));
      s.line = lineno;
      if (!valid_name(s.kind) || !valid_name(s.name))
        throw ParseError(line_start, "bad section kind or name on line " + std::to_string(lineno));
      if (spec.named(s.kind, s.name))
        throw ParseError(line_start, "duplicate section [" + s.kind + " " + s.name + "]");
      spec.sections.push_back(std::move(s));
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_start, "expected 'key = value' on line " + std::to_string(lineno));
    if (spec.sections.empty())
      throw ParseError(line_start, "entry before any section on line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key))
      throw ParseError(line_start, "bad key '" + key + "' on line " + std::to_string(lineno));
    Section& open = spec.sections.back();
    if (open.find(key))
      throw ParseError(line_start, "duplicate key '" + key + "' in [" + open.kind + " " + open.name + "]");
    open.entries.emplace_back(std::move(key), std::move(value));
  }
  return spec;
}

std::string serialize_specfile(const SpecFile& spec) {
  std::ostringstream out;
  bool first = true;
  for (const Section& s : spec.sections) {
    if (!first) out << "\n";
    first = false;
    out << "[" << s.kind << " " << s.name << "]\n";
    for (const auto& [k, v] : s.entries) out << k << " = " << v << "\n";
  }
  return out.str();
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t semi = value.find(';', start);
    if (semi == std::string::npos) {
      out.push_back(trim(value.substr(start)));
      break;
    }
    out.push_back(trim(value.substr(start, semi - start)));
    start = semi + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> split_matrix(const std::string& value) {
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = value.find('|', start);
    std::string row = bar == std::string::npos ? value.substr(start) : value.substr(start, bar - start);
    rows.push_back(split_list(row));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return rows;
}

bool operator==(const Section& a, const Section& b) {
  return a.kind == b.kind && a.name == b.name && a.entries == b.entries;
}

bool operator==(const SpecFile& a, const SpecFile& b) { return a.sections == b.sections; }

}  // namespace bundlecheck::cli
