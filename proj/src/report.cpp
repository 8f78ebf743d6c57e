#include "dstsp/report.hpp"

#include <openssl/sha.h>

#include <charconv>
#include <iostream>
#include <sstream>

#include "dstsp/error.hpp"
#include "json.hpp"

namespace dstsp::report {
namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json to_json(const Field& f) {
  if (const auto* s = std::get_if<std::string>(&f)) return *s;
  if (const auto* d = std::get_if<double>(&f)) return *d;
  return std::get<std::int64_t>(f);
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  fail(ErrorKind::ConfigError, "field 'format': expected csv or json, got '" + name + "'");
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_text(const Field& f) {
  if (const auto* s = std::get_if<std::string>(&f)) return *s;
  if (const auto* d = std::get_if<double>(&f)) return format_number(*d);
  return std::to_string(std::get<std::int64_t>(f));
}

ReportWriter::ReportWriter(const std::string& path, Format format, std::vector<std::string> header)
    : path_(path), format_(format), header_(std::move(header)) {
  if (path_ == "-") {
    os_ = &std::cout;
  } else {
    file_ = std::make_unique<std::ofstream>(path_, std::ios::binary | std::ios::trunc);
    if (!*file_) fail(ErrorKind::IoError, "cannot open '" + path_ + "' for writing");
    os_ = file_.get();
  }
  if (format_ == Format::Csv) {
    for (std::size_t i = 0; i < header_.size(); ++i) *os_ << (i ? "," : "") << csv_escape(header_[i]);
    *os_ << '\n';
  } else {
    *os_ << '[';
  }
}

ReportWriter::~ReportWriter() {
  try {
    close();
  } catch (...) {
  }
}

void ReportWriter::row(const std::vector<Field>& fields) {
  if (closed_) fail(ErrorKind::IoError, "write to closed report '" + path_ + "'");
  if (fields.size() != header_.size()) fail(ErrorKind::InvalidArgument, "row width does not match the header");
  if (format_ == Format::Csv) {
    for (std::size_t i = 0; i < fields.size(); ++i) *os_ << (i ? "," : "") << csv_escape(to_text(fields[i]));
    *os_ << '\n';
  } else {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < fields.size(); ++i) obj[header_[i]] = to_json(fields[i]);
    *os_ << (rows_ ? ",\n" : "\n") << obj.dump();
  }
  ++rows_;
  if (!*os_) fail(ErrorKind::IoError, "write failed on '" + path_ + "'");
}

void ReportWriter::close() {
  if (closed_) return;
  closed_ = true;
  if (format_ == Format::Json) *os_ << (rows_ ? "\n]\n" : "]\n");
  os_->flush();
  if (!*os_) fail(ErrorKind::IoError, "write failed on '" + path_ + "'");
  if (file_) file_->close();
}

void emit_report(const Table& table, const std::string& path, Format format) {
  ReportWriter w(path, format, table.header);
  for (const auto& r : table.rows) w.row(r);
  w.close();
}

Table parse_csv(const std::string& text) {
  Table t;
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> cur;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cur.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      cur.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(cur));
      cur.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) fail(ErrorKind::ConfigError, "unterminated quoted CSV field");
  if (any) {
    cur.push_back(std::move(field));
    lines.push_back(std::move(cur));
  }
  if (lines.empty()) return t;
  t.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.header.size())
      fail(ErrorKind::ConfigError, "CSV line " + std::to_string(i + 1) + " has " + std::to_string(lines[i].size()) +
                                       " fields, expected " + std::to_string(t.header.size()));
    std::vector<Field> row(lines[i].begin(), lines[i].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorKind::IoError, "write failed on '" + path + "'");
}

std::string sha1_hex(const std::string& data) {
  unsigned char md[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : md) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob += '\0';
  blob += content;
  return sha1_hex(blob);
}

}  // namespace dstsp::report
