#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bundlecheck/errors.hpp"

namespace bundlecheck::cli {

// One [kind name] section: ordered key/value entries, values kept verbatim
// (trimmed). List values separate elements with ';', matrix values separate
// rows with '|'; both characters are outside the expression grammar.
struct Section {
  std::string kind;
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t line = 0;  // 1-based line of the section header

  const std::string* find(const std::string& key) const;
  // Required-key lookup; throws ParseError naming the section when absent.
  const std::string& at(const std::string& key) const;
};

struct SpecFile {
  std::vector<Section> sections;

  std::vector<const Section*> of_kind(const std::string& kind) const;
  const Section* named(const std::string& kind, const std::string& name) const;
};

// Line format: '[kind name]' opens a section; 'key = value' adds an entry to
// the open section; '#' starts a comment; blank lines are skipped. Repeated
// keys in one section and duplicate (kind, name) pairs are rejected.
SpecFile parse_specfile(const std::string& text);

// Canonical rendering: one section per block, single-space 'key = value'
// lines, one blank line between sections. parse(serialize(parse(t))) yields
// the same SpecFile as parse(t).
std::string serialize_specfile(const SpecFile& spec);

// Splits a list value on ';', trimming each element; empty input gives an
// empty list.
std::vector<std::string> split_list(const std::string& value);

// Splits a matrix value: rows on '|', elements on ';'.
std::vector<std::vector<std::string>> split_matrix(const std::string& value);

bool operator==(const Section& a, const Section& b);
bool operator==(const SpecFile& a, const SpecFile& b);

}  // namespace bundlecheck::cli
