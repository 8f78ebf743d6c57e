#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace dstsp::report {

using Field = std::variant<std::string, double, std::int64_t>;

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_number(double v);
std::string to_text(const Field& f);

// Writes rows as they arrive. Path "-" writes to stdout.
class ReportWriter {
 public:
  ReportWriter(const std::string& path, Format format, std::vector<std::string> header);
  ReportWriter(const ReportWriter&) = delete;
  ReportWriter& operator=(const ReportWriter&) = delete;
  ~ReportWriter();

  void row(const std::vector<Field>& fields);
  void close();
  std::size_t rows() const { return rows_; }

 private:
  std::string path_;
  Format format_;
  std::vector<std::string> header_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
  std::size_t rows_ = 0;
  bool closed_ = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Field>> rows;
};

void emit_report(const Table& table, const std::string& path, Format format);

// Parses CSV text into string fields; quoted fields may hold commas, quotes and newlines.
Table parse_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string sha1_hex(const std::string& data);
// SHA-1 of "blob <size>\0<content>".
std::string git_blob_hash(const std::string& content);

}  // namespace dstsp::report
