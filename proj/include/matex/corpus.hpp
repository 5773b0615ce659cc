#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "matex/document.hpp"

namespace matex::corpus {

// The 12 entity labels. Order is fixed; the tag inventory and every index
// used by the tagger derive from it.
const std::array<std::string, 12>& entity_labels();

// 25 tags: O first, then B-X, I-X per label in entity_labels() order.
const std::vector<std::string>& tag_inventory();

// index into tag_inventory(), -1 if unknown
int tag_index(const std::string& tag);

bool is_valid_label(const std::string& label);

struct Token {
  std::string text;
  std::size_t start;  // code point offset into the paragraph text
  std::size_t end;    // exclusive
};

struct EntitySpan {
  std::string label;
  std::size_t start;
  std::size_t end;  // exclusive
  std::string surface;
};

struct AnnotatedParagraph {
  std::string doc_id;
  Paragraph paragraph;
  std::vector<Token> tokens;
  std::vector<EntitySpan> spans;
  std::vector<std::string> tags;  // aligned 1:1 with tokens
};

// Maximal runs of ASCII letters/digits form tokens; every other non-space
// code point is its own token. Offsets are code points into `text`.
std::vector<Token> tokenize(const std::string& text);

// Spans snapped outward to covering tokens when misaligned (a note is pushed
// to `warnings`). Overlapping spans throw.
std::vector<std::string> encode_iob(const std::vector<Token>& tokens,
                                    const std::vector<EntitySpan>& spans,
                                    std::vector<std::string>* warnings = nullptr);

// Maximal B-X (I-X)* runs become spans; an I-X without a compatible
// predecessor is repaired to B-X. `text` supplies the surfaces.
std::vector<EntitySpan> decode_iob(const std::string& text, const std::vector<Token>& tokens,
                                   const std::vector<std::string>& tags);

// brat standoff: .txt with blank-line-separated paragraphs, .ann with
// `T<id><TAB><Label> <start> <end><TAB><surface>` lines. Span offsets are
// code points into the whole text file and are validated against it.
std::vector<AnnotatedParagraph> parse_standoff(const std::string& text_path,
                                               const std::string& ann_path);
std::vector<AnnotatedParagraph> parse_standoff_content(const std::string& text,
                                                       const std::string& ann,
                                                       const std::string& doc_id);

struct SplitResult {
  std::vector<AnnotatedParagraph> train, dev, test;
};

// Deterministic shuffle under `seed`; dev/test take floor shares, the
// remainder goes to train. `by_doc` keeps each doc_id's paragraphs together.
SplitResult split_dataset(const std::vector<AnnotatedParagraph>& paragraphs,
                          const std::array<double, 3>& ratios, std::uint64_t seed,
                          bool by_doc = false);

// IOB corpus file: `token<TAB>tag` lines, blank line between paragraphs,
// `#doc <doc_id> <section>` before each paragraph. Reading reconstructs the
// paragraph text as tokens joined by single spaces.
void write_iob_file(const std::string& path, const std::vector<AnnotatedParagraph>& paragraphs);
std::vector<AnnotatedParagraph> read_iob_file(const std::string& path);

}  // namespace matex::corpus
