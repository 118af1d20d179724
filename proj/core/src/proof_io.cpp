// Stable text form for proof trees: one node per line, pre-order, with
// tab-separated rule name, conclusion, and child count.
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "archproof/dsl.hpp"
#include "archproof/prover.hpp"

namespace archproof {

namespace {

void serialize_node(const ProofNode& node, std::string& out) {
  out += node.rule;
  out += '\t';
  out += to_string(node.conclusion);
  out += '\t';
  out += std::to_string(node.children.size());
  out += '\n';
  for (const ProofNode& child : node.children) serialize_node(child, out);
}

[[noreturn]] void bad(const std::string& why) {
  throw std::invalid_argument("malformed proof text: " + why);
}

// --- conclusion mini-parser -------------------------------------------------

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  bool eat(const char* lit) {
    std::size_t n = std::char_traits<char>::length(lit);
    if (text.compare(pos, n, lit) != 0) return false;
    pos += n;
    return true;
  }
  void expect(const char* lit) {
    if (!eat(lit)) bad("expected '" + std::string(lit) + "' in conclusion '" + text + "'");
  }
  std::string name() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) bad("expected a name in conclusion '" + text + "'");
    return text.substr(start, pos - start);
  }
  void done() {
    if (pos != text.size()) bad("trailing characters in conclusion '" + text + "'");
  }
};

Multiplicity parse_count(Cursor& c) {
  if (c.eat("inf")) return Multiplicity::infinite();
  std::string digits;
  while (c.pos < c.text.size() && std::isdigit(static_cast<unsigned char>(c.text[c.pos])))
    digits += c.text[c.pos++];
  if (digits.empty()) bad("expected a count in conclusion '" + c.text + "'");
  try {
    std::uint64_t n = std::stoull(digits);
    return Multiplicity::finite(n);
  } catch (const std::exception&) {
    bad("count out of range in conclusion '" + c.text + "'");
  }
}

ProofConclusion parse_conclusion(const std::string& rule, const std::string& text) {
  if (rule == "HN" || rule == "HN'") {
    Cursor c{text};
    c.expect("hasnone ");
    HasNoneFact f;
    f.comp = c.name();
    c.expect("(");
    f.subject = c.name();
    c.expect(")");
    c.done();
    f.is_const = rule == "HN'";
    return f;
  }
  if (rule == "K-AND" || rule == "I-AND") {
    try {
      return parse_query(text);
    } catch (const std::exception& e) {
      bad("invalid property conclusion '" + text + "': " + e.what());
    }
  }
  if (rule[0] == 'K' || rule.rfind("EQ-", 0) == 0) {
    Cursor c{text};
    c.expect("knows ");
    KnowFact f;
    f.comp = c.name();
    c.expect(" (");
    if (text.empty() || text.back() != ')') bad("expected ')' in conclusion '" + text + "'");
    try {
      f.eq = parse_equation_text(text.substr(c.pos, text.size() - c.pos - 1));
    } catch (const std::exception& e) {
      bad("invalid equation in conclusion '" + text + "': " + e.what());
    }
    return f;
  }
  if (rule[0] == 'H') {
    Cursor c{text};
    c.expect("has");
    HasFact f;
    if (c.eat("^")) {
      f.is_const = false;
      f.count = parse_count(c);
    } else {
      f.is_const = true;
      f.count = Multiplicity::infinite();
    }
    c.expect(" ");
    f.comp = c.name();
    c.expect("(");
    f.subject = c.name();
    c.expect(")");
    c.done();
    return f;
  }
  bad("unknown rule '" + rule + "'");
}

ProofNode parse_node(const std::vector<std::string>& lines, std::size_t& next) {
  if (next >= lines.size()) bad("unexpected end of input");
  const std::string& line = lines[next++];
  std::size_t tab1 = line.find('\t');
  std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
  if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos)
    bad("expected exactly three tab-separated fields in line '" + line + "'");
  ProofNode node;
  node.rule = line.substr(0, tab1);
  if (node.rule.empty()) bad("empty rule name in line '" + line + "'");
  std::string conclusion = line.substr(tab1 + 1, tab2 - tab1 - 1);
  std::string count_text = line.substr(tab2 + 1);
  std::size_t child_count = 0;
  try {
    std::size_t used = 0;
    child_count = std::stoull(count_text, &used);
    if (used != count_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    bad("invalid child count '" + count_text + "'");
  }
  node.conclusion = parse_conclusion(node.rule, conclusion);
  node.children.reserve(child_count);
  for (std::size_t i = 0; i < child_count; ++i)
    node.children.push_back(parse_node(lines, next));
  return node;
}

}  // namespace

std::string serialize_proof(const ProofNode& tree) {
  std::string out;
  serialize_node(tree, out);
  return out;
}

ProofNode parse_proof(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::size_t next = 0;
  ProofNode root = parse_node(lines, next);
  if (next != lines.size()) bad("trailing lines after the proof tree");
  return root;
}

}  // namespace archproof
