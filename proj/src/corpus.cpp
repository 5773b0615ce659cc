#include "matex/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "matex/error.hpp"
#include "matex/rng.hpp"
#include "matex/text.hpp"

namespace matex::corpus {

const std::array<std::string, 12>& entity_labels() {
  static const std::array<std::string, 12> labels = {
      "Mat-Final", "Mat-Solvent", "Mat-Start",  "Ope",
      "Prop-Equip", "Prop-Maker", "Prop-Method", "Prop-Temp",
      "Prop-Time",  "Chara-Name", "Chara-Act",   "Chara-Cond"};
  return labels;
}

const std::vector<std::string>& tag_inventory() {
  static const std::vector<std::string> tags = [] {
    std::vector<std::string> t;
    t.push_back("O");
    for (const auto& label : entity_labels()) {
      t.push_back("B-" + label);
      t.push_back("I-" + label);
    }
    return t;
  }();
  return tags;
}

int tag_index(const std::string& tag) {
  static const std::unordered_map<std::string, int> index = [] {
    std::unordered_map<std::string, int> m;
    const auto& tags = tag_inventory();
    for (std::size_t i = 0; i < tags.size(); ++i) m[tags[i]] = static_cast<int>(i);
    return m;
  }();
  const auto it = index.find(tag);
  return it == index.end() ? -1 : it->second;
}

bool is_valid_label(const std::string& label) {
  const auto& labels = entity_labels();
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

namespace {

bool is_ascii_alnum(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string known_labels_list() {
  std::string s;
  for (const auto& l : entity_labels()) {
    if (!s.empty()) s += ", ";
    s += l;
  }
  return s;
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  const auto cps = utf8_decode(text);
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (is_ascii_space(cps[i].value)) {
      ++i;
      continue;
    }
    if (is_ascii_alnum(cps[i].value)) {
      std::size_t j = i;
      while (j < n && is_ascii_alnum(cps[j].value)) ++j;
      const std::size_t byte_start = cps[i].byte_offset;
      const std::size_t byte_end = cps[j - 1].byte_offset + cps[j - 1].byte_len;
      tokens.push_back({text.substr(byte_start, byte_end - byte_start), i, j});
      i = j;
    } else {
      // punctuation and symbols are single-codepoint tokens
      tokens.push_back({text.substr(cps[i].byte_offset, cps[i].byte_len), i, i + 1});
      ++i;
    }
  }
  return tokens;
}

std::vector<std::string> encode_iob(const std::vector<Token>& tokens,
                                    const std::vector<EntitySpan>& spans,
                                    std::vector<std::string>* warnings) {
  std::vector<EntitySpan> ordered = spans;
  std::sort(ordered.begin(), ordered.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i].start < ordered[i - 1].end) {
      throw Error(msg() << "overlapping spans: [" << ordered[i - 1].start << ","
                        << ordered[i - 1].end << ") and [" << ordered[i].start << ","
                        << ordered[i].end << ")");
    }
  }

  std::vector<std::string> tags(tokens.size(), "O");
  for (const auto& span : ordered) {
    bool first = true;
    bool aligned_start = false;
    bool aligned_end = false;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (tokens[t].end <= span.start || tokens[t].start >= span.end) continue;
      if (tokens[t].start == span.start) aligned_start = true;
      if (tokens[t].end == span.end) aligned_end = true;
      tags[t] = (first ? "B-" : "I-") + span.label;
      first = false;
    }
    if (first) {
      if (warnings)
        warnings->push_back(msg() << "span [" << span.start << "," << span.end << ") '"
                                  << span.surface << "' covers no tokens; dropped");
      continue;
    }
    if ((!aligned_start || !aligned_end) && warnings) {
      warnings->push_back(msg() << "span [" << span.start << "," << span.end << ") '"
                                << span.surface << "' not token-aligned; snapped outward");
    }
  }
  return tags;
}

std::vector<EntitySpan> decode_iob(const std::string& text, const std::vector<Token>& tokens,
                                   const std::vector<std::string>& tags) {
  if (tokens.size() != tags.size()) {
    throw Error(msg() << "decode_iob: " << tokens.size() << " tokens vs " << tags.size()
                      << " tags");
  }
  std::vector<EntitySpan> spans;
  std::string open_label;
  std::size_t open_start = 0;
  std::size_t open_end = 0;
  auto flush = [&] {
    if (open_label.empty()) return;
    spans.push_back({open_label, open_start, open_end, cp_slice(text, open_start, open_end)});
    open_label.clear();
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag == "O") {
      flush();
      continue;
    }
    if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-') {
      throw Error(msg() << "decode_iob: malformed tag '" << tag << "' at position " << i);
    }
    const std::string label = tag.substr(2);
    if (tag[0] == 'I' && label == open_label) {
      open_end = tokens[i].end;  // continue the open span
      continue;
    }
    // B-X, or an I-X with no compatible predecessor (repaired to B-X)
    flush();
    open_label = label;
    open_start = tokens[i].start;
    open_end = tokens[i].end;
  }
  flush();
  return spans;
}

namespace {

struct AnnLine {
  std::string id;
  std::string label;
  std::size_t start;
  std::size_t end;
  std::string surface;
};

std::vector<AnnLine> parse_ann(const std::string& ann) {
  std::vector<AnnLine> lines;
  std::istringstream in(ann);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] != 'T') continue;  // only text-bound annotations; ignore notes/relations
    const auto tab1 = line.find('\t');
    if (tab1 == std::string::npos) throw Error(msg() << "bad ann line (no tab): " << line);
    const auto tab2 = line.find('\t', tab1 + 1);
    const std::string id = line.substr(0, tab1);
    const std::string middle =
        line.substr(tab1 + 1, (tab2 == std::string::npos ? line.size() : tab2) - tab1 - 1);
    const std::string surface = tab2 == std::string::npos ? "" : line.substr(tab2 + 1);
    std::istringstream mid(middle);
    AnnLine a;
    a.id = id;
    a.surface = surface;
    if (!(mid >> a.label >> a.start >> a.end)) {
      throw Error(msg() << "bad ann line (expected 'Label start end'): " << line);
    }
    lines.push_back(std::move(a));
  }
  return lines;
}

// newline-insensitive comparison; brat prints multi-line surfaces with spaces
bool surface_matches(const std::string& slice, const std::string& surface) {
  if (slice == surface) return true;
  std::string s = slice;
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s == surface;
}

}  // namespace

std::vector<AnnotatedParagraph> parse_standoff_content(const std::string& text,
                                                       const std::string& ann,
                                                       const std::string& doc_id) {
  const auto ann_lines = parse_ann(ann);

  for (const auto& a : ann_lines) {
    if (!is_valid_label(a.label)) {
      throw Error(msg() << "annotation " << a.id << ": unknown label '" << a.label
                        << "' (valid: " << known_labels_list() << ")");
    }
    if (a.start >= a.end) {
      throw Error(msg() << "annotation " << a.id << ": empty span [" << a.start << "," << a.end
                        << ")");
    }
    const std::string slice = cp_slice(text, a.start, a.end);
    if (!surface_matches(slice, a.surface)) {
      throw Error(msg() << "annotation " << a.id << ": surface '" << a.surface
                        << "' does not match text slice '" << slice << "'");
    }
  }

  // paragraph boundaries: blank-line-separated blocks, in code point space
  const auto cps = utf8_decode(text);
  struct Block {
    std::size_t cp_start, cp_end;
  };
  std::vector<Block> blocks;
  {
    std::size_t i = 0;
    const std::size_t n = cps.size();
    while (i < n) {
      while (i < n && (cps[i].value == '\n' || cps[i].value == '\r')) ++i;
      if (i >= n) break;
      std::size_t j = i;
      std::size_t newline_run = 0;
      std::size_t block_end = n;
      while (j < n) {
        if (cps[j].value == '\n') {
          ++newline_run;
          if (newline_run >= 2) {
            block_end = j - 1;  // end before the first newline of the blank line
            break;
          }
        } else if (cps[j].value != '\r') {
          newline_run = 0;
        }
        ++j;
      }
      if (j >= n) block_end = n;
      // trim trailing newline from single-newline-terminated final block
      while (block_end > i &&
             (cps[block_end - 1].value == '\n' || cps[block_end - 1].value == '\r'))
        --block_end;
      if (block_end > i) blocks.push_back({i, block_end});
      i = j + 1;
    }
  }

  std::vector<AnnotatedParagraph> out;
  for (const auto& block : blocks) {
    AnnotatedParagraph ap;
    ap.doc_id = doc_id;
    ap.paragraph.text = cp_slice(text, block.cp_start, block.cp_end);
    ap.tokens = tokenize(ap.paragraph.text);
    for (const auto& a : ann_lines) {
      if (a.end <= block.cp_start || a.start >= block.cp_end) continue;
      if (a.start < block.cp_start || a.end > block.cp_end) {
        throw Error(msg() << "annotation " << a.id << " crosses a paragraph boundary");
      }
      ap.spans.push_back(
          {a.label, a.start - block.cp_start, a.end - block.cp_start, a.surface});
    }
    std::sort(ap.spans.begin(), ap.spans.end(),
              [](const EntitySpan& x, const EntitySpan& y) { return x.start < y.start; });
    ap.tags = encode_iob(ap.tokens, ap.spans);
    out.push_back(std::move(ap));
  }
  return out;
}

std::vector<AnnotatedParagraph> parse_standoff(const std::string& text_path,
                                               const std::string& ann_path) {
  auto read_file = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(msg() << "cannot open " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string doc_id = text_path;
  const auto slash = doc_id.find_last_of("/\\");
  if (slash != std::string::npos) doc_id = doc_id.substr(slash + 1);
  const auto dot = doc_id.rfind('.');
  if (dot != std::string::npos) doc_id = doc_id.substr(0, dot);
  return parse_standoff_content(read_file(text_path), read_file(ann_path), doc_id);
}

SplitResult split_dataset(const std::vector<AnnotatedParagraph>& paragraphs,
                          const std::array<double, 3>& ratios, std::uint64_t seed,
                          bool by_doc) {
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (ratios[0] <= 0 || ratios[1] <= 0 || ratios[2] <= 0 || std::abs(sum - 1.0) > 1e-9) {
    throw Error(msg() << "split ratios must be positive and sum to 1, got " << ratios[0] << ":"
                      << ratios[1] << ":" << ratios[2]);
  }
  SplitResult result;
  if (paragraphs.empty()) return result;

  // units are paragraph indices, or groups of them when splitting by doc
  std::vector<std::vector<std::size_t>> units;
  if (by_doc) {
    std::map<std::string, std::vector<std::size_t>> groups;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
      if (groups.find(paragraphs[i].doc_id) == groups.end()) order.push_back(paragraphs[i].doc_id);
      groups[paragraphs[i].doc_id].push_back(i);
    }
    for (const auto& id : order) units.push_back(groups[id]);
  } else {
    for (std::size_t i = 0; i < paragraphs.size(); ++i) units.push_back({i});
  }

  Rng rng(seed);
  rng.shuffle(units);

  const std::size_t n = units.size();
  const auto n_dev = static_cast<std::size_t>(n * ratios[1]);
  const auto n_test = static_cast<std::size_t>(n * ratios[2]);
  const std::size_t n_train = n - n_dev - n_test;  // remainder goes to train

  auto emit = [&](std::size_t from, std::size_t count, std::vector<AnnotatedParagraph>& dst) {
    for (std::size_t u = from; u < from + count; ++u)
      for (std::size_t idx : units[u]) dst.push_back(paragraphs[idx]);
  };
  emit(0, n_train, result.train);
  emit(n_train, n_dev, result.dev);
  emit(n_train + n_dev, n_test, result.test);
  return result;
}

void write_iob_file(const std::string& path, const std::vector<AnnotatedParagraph>& paragraphs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(msg() << "cannot write " << path);
  bool first = true;
  for (const auto& p : paragraphs) {
    if (!first) out << "\n";
    first = false;
    out << "#doc " << (p.doc_id.empty() ? "-" : p.doc_id) << " "
        << (p.paragraph.section.empty() ? "-" : p.paragraph.section) << "\n";
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
      out << p.tokens[i].text << "\t" << p.tags[i] << "\n";
    }
  }
}

std::vector<AnnotatedParagraph> read_iob_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(msg() << "cannot open " << path);

  std::vector<AnnotatedParagraph> out;
  std::string doc_id;
  std::string section;
  std::vector<std::pair<std::string, std::string>> rows;  // token, tag

  auto flush = [&] {
    if (rows.empty()) return;
    AnnotatedParagraph ap;
    ap.doc_id = doc_id == "-" ? "" : doc_id;
    ap.paragraph.section = section == "-" ? "" : section;
    std::string text;
    std::size_t cp = 0;
    for (const auto& [tok, tag] : rows) {
      if (!text.empty()) {
        text += " ";
        ++cp;
      }
      const std::size_t len = cp_length(tok);
      ap.tokens.push_back({tok, cp, cp + len});
      ap.tags.push_back(tag);
      text += tok;
      cp += len;
    }
    ap.paragraph.text = text;
    ap.spans = decode_iob(ap.paragraph.text, ap.tokens, ap.tags);
    out.push_back(std::move(ap));
    rows.clear();
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.rfind("#doc ", 0) == 0) {
      flush();
      const std::string rest = line.substr(5);
      const auto space = rest.find(' ');
      doc_id = rest.substr(0, space);
      section = space == std::string::npos ? "" : rest.substr(space + 1);
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(msg() << path << ":" << lineno << ": expected 'token<TAB>tag'");
    }
    const std::string tok = line.substr(0, tab);
    const std::string tag = line.substr(tab + 1);
    if (tag != "O" && tag_index(tag) < 0) {
      throw Error(msg() << path << ":" << lineno << ": unknown tag '" << tag << "'");
    }
    rows.emplace_back(tok, tag);
  }
  flush();
  return out;
}

}  // namespace matex::corpus
