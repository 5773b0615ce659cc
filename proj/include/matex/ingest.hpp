#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "matex/document.hpp"

namespace matex::ingest {

// Removes every <...> tag from an inline fragment, leaving one space at each
// tag boundary, then collapses space runs and trims. `10<sup>-3</sup>`
// becomes `10 -3`. A '<' that does not open a tag is kept literally.
std::string strip_markup(const std::string& fragment);

// Element vocabulary honored by the parser (anything else is a transparent
// wrapper contributing only its text content):
//   section            structural unit, nestable
//   heading | title    names the enclosing section; a root-level title names
//                      the document
//   paragraph | p      emits one Paragraph
//   abstract           section with implicit heading "Abstract"
//   metadata | meta | front   container for year / country elements
// Paragraph section/subsection come from the two nearest enclosing headings.
// Malformed XML throws with the byte offset of the problem. A document with
// no paragraph elements sets *warning and yields zero paragraphs.
Document parse_document(const std::string& xml_bytes, const std::string& doc_id,
                        std::string* warning = nullptr);

// Case-insensitive substring match on section names; empty pattern list
// returns everything, in document order.
std::vector<Paragraph> filter_sections(const Document& doc,
                                       const std::vector<std::string>& patterns);

struct SidecarMeta {
  std::optional<int> year;
  std::optional<std::string> country;
};

// JSON-lines: {doc_id, year, country, title, paragraphs:[{section, subsection, text}]}
void write_documents_jsonl(const std::string& path, const std::vector<Document>& docs);
std::vector<Document> read_documents_jsonl(const std::string& path);

// sidecar: JSON-lines {doc_id, year, country}
std::unordered_map<std::string, SidecarMeta> read_metadata_sidecar(const std::string& path);
void apply_sidecar(Document& doc, const std::unordered_map<std::string, SidecarMeta>& meta);

}  // namespace matex::ingest
