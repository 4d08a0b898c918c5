#include <algorithm>
#include <set>
#include <sstream>

#include "stylo/corpus.hpp"
#include "stylo/error.hpp"
#include "stylo/jsonl.hpp"
#include "stylo/text.hpp"

namespace stylo::jsonl {

void for_each(const std::filesystem::path& path,
              const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::malformed_record,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object()) {
      throw Error(ErrorKind::malformed_record,
                  path.string() + ":" + std::to_string(line_no) + ": record is not an object");
    }
    fn(record, line_no);
  }
}

Writer::Writer(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) throw Error(ErrorKind::io, "cannot write " + path.string());
}

void Writer::write(const json& record) {
  out_ << record.dump() << '\n';
  if (!out_) throw Error(ErrorKind::io, "write failed: " + path_.string());
}

const json& field(const json& record, const char* name, std::size_t line) {
  auto it = record.find(name);
  if (it == record.end()) {
    throw Error(ErrorKind::malformed_record,
                "line " + std::to_string(line) + ": missing field '" + name + "'");
  }
  return *it;
}

std::string string_field(const json& record, const char* name, std::size_t line) {
  const auto& v = field(record, name, line);
  if (!v.is_string()) {
    throw Error(ErrorKind::malformed_record,
                "line " + std::to_string(line) + ": field '" + name + "' is not a string");
  }
  return v.get<std::string>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

}  // namespace stylo::jsonl

namespace stylo::corpus {

using jsonl::json;

std::vector<RawDocument> load_corpus(const std::filesystem::path& path) {
  std::vector<RawDocument> docs;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) docs.push_back({f.stem().string(), jsonl::read_file(f), SourceDomain::other, {}});
  } else {
    jsonl::for_each(path, [&](const json& r, std::size_t line) {
      RawDocument d;
      d.id = jsonl::string_field(r, "id", line);
      d.text = jsonl::string_field(r, "text", line);
      if (auto it = r.find("source_domain"); it != r.end() && !it->is_null()) {
        d.source_domain = parse_source_domain(it->get<std::string>());
      }
      if (auto it = r.find("author_id"); it != r.end() && !it->is_null()) {
        d.author_id = it->get<std::string>();
      }
      docs.push_back(std::move(d));
    });
  }
  std::set<std::string> ids;
  for (const auto& d : docs) {
    if (d.id.empty()) throw Error(ErrorKind::malformed_record, "document with empty id");
    if (d.text.empty()) throw Error(ErrorKind::malformed_record, "document '" + d.id + "' has empty text");
    if (!ids.insert(d.id).second) throw Error(ErrorKind::duplicate_id, "duplicate document id '" + d.id + "'");
  }
  return docs;
}

void write_reports(const std::filesystem::path& path, std::span<const CleaningReport> reports) {
  jsonl::Writer w(path);
  for (const auto& r : reports) {
    json reasons = json::array();
    for (auto reason : r.reject_reasons) reasons.push_back(std::string(to_string(reason)));
    w.write({{"doc_id", r.doc_id},
             {"word_count", r.word_count},
             {"numeric_char_ratio", r.numeric_char_ratio},
             {"misspell_ratio", r.misspell_ratio},
             {"max_token_type_ratio", r.max_token_type_ratio},
             {"symbol_ratio", r.symbol_ratio},
             {"paratext_lines_removed", r.paratext_lines_removed},
             {"accepted", r.accepted},
             {"reject_reasons", reasons}});
  }
}

std::vector<CleaningReport> read_reports(const std::filesystem::path& path) {
  static const std::pair<std::string_view, RejectReason> kReasons[] = {
      {"too_short", RejectReason::too_short},
      {"too_numeric", RejectReason::too_numeric},
      {"too_misspelled", RejectReason::too_misspelled},
      {"token_dominance", RejectReason::token_dominance},
      {"too_symbolic", RejectReason::too_symbolic}};
  std::vector<CleaningReport> out;
  jsonl::for_each(path, [&](const json& r, std::size_t line) {
    try {
      CleaningReport c;
      c.doc_id = r.at("doc_id").get<std::string>();
      c.word_count = r.at("word_count").get<std::size_t>();
      c.numeric_char_ratio = r.at("numeric_char_ratio").get<double>();
      c.misspell_ratio = r.at("misspell_ratio").get<double>();
      c.max_token_type_ratio = r.at("max_token_type_ratio").get<double>();
      c.symbol_ratio = r.at("symbol_ratio").get<double>();
      c.paratext_lines_removed = r.at("paratext_lines_removed").get<std::size_t>();
      c.accepted = r.at("accepted").get<bool>();
      for (const auto& s : r.at("reject_reasons")) {
        const auto name = s.get<std::string>();
        auto it = std::find_if(std::begin(kReasons), std::end(kReasons),
                               [&](const auto& kv) { return kv.first == name; });
        if (it == std::end(kReasons)) throw Error(ErrorKind::malformed_record, "unknown reject reason " + name);
        c.reject_reasons.push_back(it->second);
      }
      out.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::malformed_record, path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

void write_segments(const std::filesystem::path& path, std::span<const Segment> segments) {
  jsonl::Writer w(path);
  for (const auto& s : segments) {
    json r = {{"doc_id", s.doc_id}, {"position", std::string(to_string(s.position))}, {"text", s.text}};
    if (s.author_id) r["author_id"] = *s.author_id;
    w.write(r);
  }
}

std::vector<Segment> read_segments(const std::filesystem::path& path) {
  std::vector<Segment> out;
  jsonl::for_each(path, [&](const json& r, std::size_t line) {
    Segment s;
    s.doc_id = jsonl::string_field(r, "doc_id", line);
    s.position = parse_position(jsonl::string_field(r, "position", line));
    s.text = jsonl::string_field(r, "text", line);
    s.word_count = text::count_words(s.text);
    if (auto it = r.find("author_id"); it != r.end() && it->is_string()) s.author_id = it->get<std::string>();
    out.push_back(std::move(s));
  });
  return out;
}

void write_pairs(const std::filesystem::path& path, std::span<const TextPair> pairs) {
  jsonl::Writer w(path);
  for (const auto& p : pairs) {
    w.write({{"a_doc", p.a.doc_id},
             {"a_pos", std::string(to_string(p.a.position))},
             {"b_doc", p.b.doc_id},
             {"b_pos", std::string(to_string(p.b.position))},
             {"label", std::string(to_string(p.label))}});
  }
}

std::vector<TextPair> read_pairs(const std::filesystem::path& path) {
  std::vector<TextPair> out;
  jsonl::for_each(path, [&](const json& r, std::size_t line) {
    TextPair p;
    p.a = {jsonl::string_field(r, "a_doc", line), parse_position(jsonl::string_field(r, "a_pos", line))};
    p.b = {jsonl::string_field(r, "b_doc", line), parse_position(jsonl::string_field(r, "b_pos", line))};
    p.label = parse_label(jsonl::string_field(r, "label", line));
    out.push_back(std::move(p));
  });
  return out;
}

}  // namespace stylo::corpus
