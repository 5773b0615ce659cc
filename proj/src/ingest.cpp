#include "matex/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "matex/error.hpp"
#include "matex/text.hpp"

namespace matex::ingest {

namespace {

bool tag_opener(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '/' || c == '!' || c == '?';
}

}  // namespace

std::string strip_markup(const std::string& fragment) {
  std::string out;
  out.reserve(fragment.size());
  std::size_t i = 0;
  const std::size_t n = fragment.size();
  while (i < n) {
    if (fragment[i] == '<' && i + 1 < n && tag_opener(fragment[i + 1])) {
      const auto close = fragment.find('>', i + 1);
      if (close != std::string::npos) {
        out.push_back(' ');  // one space per tag boundary
        i = close + 1;
        continue;
      }
    }
    out.push_back(fragment[i]);
    ++i;
  }
  return trim(collapse_spaces(out));
}

// ---------------------------------------------------------------------------
// minimal non-validating XML reader
// ---------------------------------------------------------------------------

namespace {

struct XmlNode {
  bool is_text = false;
  std::string text;  // when is_text
  std::string name;  // when element
  std::vector<std::unique_ptr<XmlNode>> children;
};

class XmlParser {
 public:
  explicit XmlParser(const std::string& input) : in_(input) {}

  std::unique_ptr<XmlNode> parse() {
    skip_prolog();
    auto root = parse_element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(msg() << "XML parse error at byte " << pos_ << ": " << what);
  }

  char peek() const { return pos_ < in_.size() ? in_[pos_] : '\0'; }
  bool eof() const { return pos_ >= in_.size(); }

  void skip_ws() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  bool consume(const std::string& s) {
    if (in_.compare(pos_, s.size(), s) == 0) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& s) {
    if (!consume(s)) fail(msg() << "expected '" << s << "'");
  }

  void skip_until(const std::string& terminator, const char* what) {
    const auto found = in_.find(terminator, pos_);
    if (found == std::string::npos) fail(msg() << "unterminated " << what);
    pos_ = found + terminator.size();
  }

  void skip_prolog() {
    skip_ws();
    while (!eof()) {
      if (in_.compare(pos_, 5, "<?xml") == 0 || in_.compare(pos_, 2, "<?") == 0) {
        skip_until("?>", "processing instruction");
      } else if (in_.compare(pos_, 4, "<!--") == 0) {
        skip_until("-->", "comment");
      } else if (in_.compare(pos_, 2, "<!") == 0) {
        skip_until(">", "declaration");  // DOCTYPE without internal subset
      } else {
        break;
      }
      skip_ws();
    }
  }

  void skip_misc() {
    skip_ws();
    while (!eof() && in_.compare(pos_, 4, "<!--") == 0) {
      skip_until("-->", "comment");
      skip_ws();
    }
  }

  std::string parse_name() {
    const std::size_t start = pos_;
    while (pos_ < in_.size()) {
      const char c = in_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
          c == '.') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a name");
    return in_.substr(start, pos_ - start);
  }

  void parse_attributes() {
    // attribute values are scanned for well-formedness but not retained
    while (true) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (peek() == '>' || peek() == '/') return;
      parse_name();
      skip_ws();
      expect("=");
      skip_ws();
      const char quote = peek();
      if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
      ++pos_;
      const auto close = in_.find(quote, pos_);
      if (close == std::string::npos) fail("unterminated attribute value");
      pos_ = close + 1;
    }
  }

  std::string decode_entity() {
    const std::size_t start = pos_;  // at '&'
    const auto semi = in_.find(';', pos_);
    if (semi == std::string::npos || semi - pos_ > 12) fail("unterminated entity reference");
    const std::string body = in_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (body == "amp") return "&";
    if (body == "lt") return "<";
    if (body == "gt") return ">";
    if (body == "apos") return "'";
    if (body == "quot") return "\"";
    // a few HTML names common in publisher feeds
    if (body == "deg") return "\xC2\xB0";
    if (body == "times") return "\xC3\x97";
    if (body == "plusmn") return "\xC2\xB1";
    if (body == "micro" || body == "mu") return "\xCE\xBC";
    if (body == "nbsp") return " ";
    if (!body.empty() && body[0] == '#') {
      char32_t code = 0;
      try {
        code = body[1] == 'x' || body[1] == 'X'
                   ? static_cast<char32_t>(std::stoul(body.substr(2), nullptr, 16))
                   : static_cast<char32_t>(std::stoul(body.substr(1), nullptr, 10));
      } catch (const std::exception&) {
        pos_ = start;
        fail(msg() << "bad numeric character reference '&" << body << ";'");
      }
      return encode_utf8(code);
    }
    pos_ = start;
    fail(msg() << "unknown entity '&" << body << ";'");
  }

  static std::string encode_utf8(char32_t c) {
    std::string s;
    if (c < 0x80) {
      s.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      s.push_back(static_cast<char>(0xC0 | (c >> 6)));
      s.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      s.push_back(static_cast<char>(0xE0 | (c >> 12)));
      s.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      s.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      s.push_back(static_cast<char>(0xF0 | (c >> 18)));
      s.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      s.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      s.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
    return s;
  }

  std::unique_ptr<XmlNode> parse_element() {
    skip_ws();
    if (peek() != '<') fail("expected start tag");
    ++pos_;
    auto node = std::make_unique<XmlNode>();
    node->name = parse_name();
    parse_attributes();
    if (consume("/>")) return node;
    expect(">");
    parse_content(*node, node->name);
    return node;
  }

  void parse_content(XmlNode& node, const std::string& open_name) {
    std::string text;
    auto flush_text = [&] {
      if (text.empty()) return;
      auto t = std::make_unique<XmlNode>();
      t->is_text = true;
      t->text = std::move(text);
      text.clear();
      node.children.push_back(std::move(t));
    };
    while (true) {
      if (eof()) fail(msg() << "unterminated element <" << open_name << ">");
      const char c = peek();
      if (c == '<') {
        if (in_.compare(pos_, 4, "<!--") == 0) {
          skip_until("-->", "comment");
          continue;
        }
        if (in_.compare(pos_, 9, "<![CDATA[") == 0) {
          pos_ += 9;
          const auto end = in_.find("]]>", pos_);
          if (end == std::string::npos) fail("unterminated CDATA section");
          text += in_.substr(pos_, end - pos_);
          pos_ = end + 3;
          continue;
        }
        if (in_.compare(pos_, 2, "<?") == 0) {
          skip_until("?>", "processing instruction");
          continue;
        }
        if (in_.compare(pos_, 2, "</") == 0) {
          flush_text();
          pos_ += 2;
          const std::string close_name = parse_name();
          if (close_name != open_name) {
            fail(msg() << "mismatched close tag </" << close_name << "> for <" << open_name
                       << ">");
          }
          skip_ws();
          expect(">");
          return;
        }
        if (pos_ + 1 < in_.size() && tag_opener(in_[pos_ + 1])) {
          flush_text();
          node.children.push_back(parse_element());
          continue;
        }
        text.push_back('<');  // literal '<' in character data
        ++pos_;
        continue;
      }
      if (c == '&') {
        text += decode_entity();
        continue;
      }
      text.push_back(c);
      ++pos_;
    }
  }

  const std::string& in_;
  std::size_t pos_ = 0;
};

std::string lower_name(const std::string& s) { return ascii_lower(s); }

// text content of a subtree with one space at every element boundary,
// collapsed and trimmed (same shape strip_markup produces)
void collect_text(const XmlNode& node, std::string& out) {
  if (node.is_text) {
    out += node.text;
    return;
  }
  out.push_back(' ');
  for (const auto& child : node.children) collect_text(*child, out);
  out.push_back(' ');
}

std::string subtree_text(const XmlNode& node) {
  std::string raw;
  for (const auto& child : node.children) collect_text(*child, raw);
  return trim(collapse_spaces(raw));
}

struct DocBuilder {
  Document doc;
  std::vector<std::string> heading_stack;
  bool saw_paragraph = false;

  void set_headings(Paragraph& p) const {
    // the two nearest enclosing headings become (section, subsection)
    const std::size_t depth = heading_stack.size();
    if (depth == 0) return;
    if (depth == 1) {
      p.section = heading_stack[0];
    } else {
      p.section = heading_stack[depth - 2];
      p.subsection = heading_stack[depth - 1];
    }
  }

  void walk(const XmlNode& node) {
    if (node.is_text) return;  // stray text outside paragraphs is dropped
    const std::string name = lower_name(node.name);
    if (name == "paragraph" || name == "p") {
      Paragraph p;
      p.text = subtree_text(node);
      set_headings(p);
      doc.paragraphs.push_back(std::move(p));
      saw_paragraph = true;
      return;
    }
    if (name == "section" || name == "abstract") {
      std::string heading = name == "abstract" ? "Abstract" : "";
      for (const auto& child : node.children) {
        if (child->is_text) continue;
        const std::string cn = lower_name(child->name);
        if (cn == "heading" || cn == "title") {
          heading = subtree_text(*child);
          break;
        }
      }
      heading_stack.push_back(heading);
      for (const auto& child : node.children) {
        if (child->is_text) continue;
        const std::string cn = lower_name(child->name);
        if (cn == "heading" || cn == "title") continue;  // consumed as the section name
        walk(*child);
      }
      heading_stack.pop_back();
      return;
    }
    if (name == "metadata" || name == "meta" || name == "front") {
      for (const auto& child : node.children) {
        if (child->is_text) continue;
        const std::string cn = lower_name(child->name);
        const std::string value = subtree_text(*child);
        if (cn == "year" && !value.empty()) {
          try {
            doc.year = std::stoi(value);
          } catch (const std::exception&) {
            throw Error(msg() << "metadata year '" << value << "' is not an integer");
          }
        } else if (cn == "country" && !value.empty()) {
          doc.country = value;
        } else if (cn == "title" && doc.title.empty()) {
          doc.title = value;
        }
      }
      return;
    }
    if ((name == "title" || name == "heading") && heading_stack.empty()) {
      if (doc.title.empty()) doc.title = subtree_text(node);
      return;
    }
    // unknown elements are transparent wrappers
    for (const auto& child : node.children) walk(*child);
  }
};

}  // namespace

Document parse_document(const std::string& xml_bytes, const std::string& doc_id,
                        std::string* warning) {
  if (doc_id.empty()) throw Error("doc_id must be nonempty");
  XmlParser parser(xml_bytes);
  const auto root = parser.parse();

  DocBuilder builder;
  builder.doc.doc_id = doc_id;
  builder.walk(*root);
  if (!builder.saw_paragraph && warning) {
    *warning = msg() << "document '" << doc_id << "' contains no paragraph elements";
  }
  return std::move(builder.doc);
}

std::vector<Paragraph> filter_sections(const Document& doc,
                                       const std::vector<std::string>& patterns) {
  std::vector<Paragraph> out;
  for (const auto& p : doc.paragraphs) {
    if (patterns.empty()) {
      out.push_back(p);
      continue;
    }
    for (const auto& pattern : patterns) {
      if (icontains(p.section, pattern)) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON-lines I/O
// ---------------------------------------------------------------------------

using nlohmann::json;

void write_documents_jsonl(const std::string& path, const std::vector<Document>& docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(msg() << "cannot write " << path);
  for (const auto& doc : docs) {
    json j;
    j["doc_id"] = doc.doc_id;
    if (doc.year) j["year"] = *doc.year;
    if (doc.country) j["country"] = *doc.country;
    j["title"] = doc.title;
    json paras = json::array();
    for (const auto& p : doc.paragraphs) {
      json jp;
      jp["section"] = p.section;
      if (!p.subsection.empty()) jp["subsection"] = p.subsection;
      jp["text"] = p.text;
      paras.push_back(std::move(jp));
    }
    j["paragraphs"] = std::move(paras);
    out << j.dump() << "\n";
  }
}

std::vector<Document> read_documents_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(msg() << "cannot open " << path);
  std::vector<Document> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(msg() << path << ":" << lineno << ": " << e.what());
    }
    Document doc;
    doc.doc_id = j.at("doc_id").get<std::string>();
    if (j.contains("year") && !j["year"].is_null()) doc.year = j["year"].get<int>();
    if (j.contains("country") && !j["country"].is_null())
      doc.country = j["country"].get<std::string>();
    doc.title = j.value("title", "");
    for (const auto& jp : j.value("paragraphs", json::array())) {
      Paragraph p;
      p.section = jp.value("section", "");
      p.subsection = jp.value("subsection", "");
      p.text = jp.value("text", "");
      doc.paragraphs.push_back(std::move(p));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::unordered_map<std::string, SidecarMeta> read_metadata_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(msg() << "cannot open " << path);
  std::unordered_map<std::string, SidecarMeta> meta;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(msg() << path << ":" << lineno << ": " << e.what());
    }
    SidecarMeta m;
    if (j.contains("year") && !j["year"].is_null()) m.year = j["year"].get<int>();
    if (j.contains("country") && !j["country"].is_null())
      m.country = j["country"].get<std::string>();
    meta[j.at("doc_id").get<std::string>()] = std::move(m);
  }
  return meta;
}

void apply_sidecar(Document& doc, const std::unordered_map<std::string, SidecarMeta>& meta) {
  const auto it = meta.find(doc.doc_id);
  if (it == meta.end()) return;
  if (!doc.year && it->second.year) doc.year = it->second.year;
  if (!doc.country && it->second.country) doc.country = it->second.country;
}

}  // namespace matex::ingest
