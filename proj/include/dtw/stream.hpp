#pragma once
// Update-stream text format and the replay/bench driver.
//
//   n <N> k <K>
//   + u v | - u v | ? tw | ? mis | ? color q | ! dump <path>
//
// Blank lines and lines starting with '#' are skipped.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtw/dyntw.hpp"

namespace dtw {

struct StreamOp {
  enum Kind { Insert, Delete, QueryTw, QueryMis, QueryColor, Dump } kind = Insert;
  Vertex u = 0, v = 0;
  int q = 0;
  std::string path;
  int line = 0;
};

struct Stream {
  std::size_t n = 0;
  int k = 1;
  std::vector<StreamOp> ops;
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int l, const std::string& msg) : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

Stream parse_stream(std::istream& is);
void write_stream(std::ostream& os, const Stream& s);
const char* kind_name(StreamOp::Kind k);

struct ReplayOptions {
  bool validate = false;  // full check after every op
  bool promise = false;   // plain structure, no wrapper
  std::ostream* log = nullptr;  // prefix-update log
  std::ostream* csv = nullptr;  // per-op records plus a summary row
  DynConfig cfg;          // k is taken from the stream
};

struct ReplayResult {
  int exit_code = 0;  // 0 ok, 3 promise violated, 4 validation failure
  long long promise_violations = 0;
  long long validation_failures = 0;
  std::string first_error;
};

// Answers go to `out` (one line per query), diagnostics to `err`.
ReplayResult replay(const Stream& s, const ReplayOptions& opt, std::ostream& out, std::ostream& err);

inline constexpr const char* kCsvHeader = "op,kind,ns,log_size,height,size,width";

}  // namespace dtw
