#include "dtw/stream.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "dtw/wrapper.hpp"

namespace dtw {

const char* kind_name(StreamOp::Kind k) {
  switch (k) {
    case StreamOp::Insert: return "+";
    case StreamOp::Delete: return "-";
    case StreamOp::QueryTw: return "?tw";
    case StreamOp::QueryMis: return "?mis";
    case StreamOp::QueryColor: return "?color";
    case StreamOp::Dump: return "!dump";
  }
  return "";
}

namespace {

long long parse_int(const std::string& tok, int line, const char* what) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  if (pos != tok.size()) throw ParseError(line, std::string("expected integer ") + what + ", got '" + tok + "'");
  return x;
}

}  // namespace

Stream parse_stream(std::istream& is) {
  Stream s;
  bool header = false;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!header) {
      if (tok.size() != 4 || tok[0] != "n" || tok[2] != "k") throw ParseError(line, "expected header 'n <N> k <K>'");
      long long n = parse_int(tok[1], line, "N"), k = parse_int(tok[3], line, "K");
      if (n < 0) throw ParseError(line, "negative N");
      if (k < 0 || k > 8) throw ParseError(line, "K out of range [0, 8]");
      s.n = static_cast<std::size_t>(n);
      s.k = static_cast<int>(k);
      header = true;
      continue;
    }
    StreamOp op;
    op.line = line;
    auto vertex = [&](const std::string& t) {
      long long x = parse_int(t, line, "vertex");
      if (x < 0 || static_cast<std::size_t>(x) >= s.n)
        throw ParseError(line, "vertex " + t + " outside [0, " + std::to_string(s.n) + ")");
      return static_cast<Vertex>(x);
    };
    if (tok[0] == "+" || tok[0] == "-") {
      if (tok.size() != 3) throw ParseError(line, "expected '" + tok[0] + " u v'");
      op.kind = tok[0] == "+" ? StreamOp::Insert : StreamOp::Delete;
      op.u = vertex(tok[1]);
      op.v = vertex(tok[2]);
      if (op.u == op.v) throw ParseError(line, "self-loop");
    } else if (tok[0] == "?") {
      if (tok.size() == 2 && tok[1] == "tw") {
        op.kind = StreamOp::QueryTw;
      } else if (tok.size() == 2 && tok[1] == "mis") {
        op.kind = StreamOp::QueryMis;
      } else if (tok.size() == 3 && tok[1] == "color") {
        op.kind = StreamOp::QueryColor;
        long long q = parse_int(tok[2], line, "q");
        if (q < 1 || q > 8) throw ParseError(line, "q out of range [1, 8]");
        op.q = static_cast<int>(q);
      } else {
        throw ParseError(line, "unknown query");
      }
    } else if (tok[0] == "!") {
      if (tok.size() != 3 || tok[1] != "dump") throw ParseError(line, "expected '! dump <path>'");
      op.kind = StreamOp::Dump;
      op.path = tok[2];
    } else {
      throw ParseError(line, "unknown operation '" + tok[0] + "'");
    }
    s.ops.push_back(std::move(op));
  }
  if (!header) throw ParseError(line + 1, "missing header");
  return s;
}

void write_stream(std::ostream& os, const Stream& s) {
  os << "n " << s.n << " k " << s.k << '\n';
  for (const auto& op : s.ops) {
    switch (op.kind) {
      case StreamOp::Insert: os << "+ " << op.u << ' ' << op.v << '\n'; break;
      case StreamOp::Delete: os << "- " << op.u << ' ' << op.v << '\n'; break;
      case StreamOp::QueryTw: os << "? tw\n"; break;
      case StreamOp::QueryMis: os << "? mis\n"; break;
      case StreamOp::QueryColor: os << "? color " << op.q << '\n'; break;
      case StreamOp::Dump: os << "! dump " << op.path << '\n'; break;
    }
  }
}

namespace {

struct WidthAutomaton {
  using State = int;
  State leaf(const NodeView& v) const { return static_cast<int>(v.bag.size()) - 1; }
  State join(const NodeView& v, const State& a, const State* b) const {
    return std::max({static_cast<int>(v.bag.size()) - 1, a, b ? *b : -1});
  }
};

// Either the wrapper or a bare promise-mode structure, plus lazily
// registered problem automata on the exposed decomposition.
class Driver {
 public:
  Driver(const Stream& s, const ReplayOptions& opt) : opt_(opt) {
    DynConfig cfg = opt.cfg;
    cfg.k = s.k;
    if (opt.promise)
      plain_ = std::make_unique<DynTW>(s.n, cfg);
    else
      strong_ = std::make_unique<StrongDynTW>(s.n, cfg);
  }

  DynTW& main() { return plain_ ? *plain_ : strong_->main(); }

  bool has_edge(Vertex u, Vertex v) {
    return plain_ ? plain_->graph().has_edge(u, v) : strong_->has_edge(u, v);
  }

  std::vector<PrefixUpdate> insert(Vertex u, Vertex v) {
    if (strong_) return strong_->strong_insert(u, v);
    if (plain_->graph().has_edge(u, v)) return {};
    return plain_->insert_edge(u, v);
  }
  std::vector<PrefixUpdate> remove(Vertex u, Vertex v) {
    if (strong_) return strong_->strong_delete(u, v);
    if (!plain_->graph().has_edge(u, v)) return {};
    return plain_->delete_edge(u, v);
  }

  bool tw_ok() {
    if (strong_) return strong_->tw_ok();
    if (!bk_) bk_ = &plain_->register_automaton(BkAutomaton{plain_->k()});
    return bk_->automaton().accepting(plain_->root_state(*bk_));
  }

  int mis() {
    if (!mis_) mis_ = &main().register_automaton(MisAutomaton{});
    return MisAutomaton::value(main().root_state(*mis_));
  }

  bool color(int q) {
    auto& r = col_[q];
    if (!r) r = &main().register_automaton(ColoringAutomaton{q});
    return ColoringAutomaton::accepting(main().root_state(*r));
  }

  int height() { return main().subtree_height(main().td().root()); }
  int width() {
    if (!width_) width_ = &main().register_automaton(WidthAutomaton{});
    return main().root_state(*width_);
  }

  // Empty when fine.
  std::string validate() {
    if (strong_) {
      if (!strong_->tw_ok()) return "";
      std::string e = strong_->main().check();
      if (!e.empty()) return "main: " + e;
      e = strong_->relaxed().check();
      return e.empty() ? "" : "relaxed: " + e;
    }
    return plain_->check();
  }

 private:
  const ReplayOptions& opt_;
  std::unique_ptr<DynTW> plain_;
  std::unique_ptr<StrongDynTW> strong_;
  AutomatonRun<BkAutomaton>* bk_ = nullptr;
  AutomatonRun<MisAutomaton>* mis_ = nullptr;
  std::map<int, AutomatonRun<ColoringAutomaton>*> col_;
  AutomatonRun<WidthAutomaton>* width_ = nullptr;
};

}  // namespace

ReplayResult replay(const Stream& s, const ReplayOptions& opt, std::ostream& out, std::ostream& err) {
  ReplayResult res;
  Driver d(s, opt);
  if (opt.csv) *opt.csv << kCsvHeader << '\n';
  long double total_ns = 0, total_log = 0;
  int max_h = 0, max_w = -1;
  std::size_t max_size = 0;
  std::size_t idx = 0;
  auto fail = [&](long long& counter, int code, const std::string& msg) {
    ++counter;
    if (res.first_error.empty()) res.first_error = msg;
    if (res.exit_code == 0) res.exit_code = code;
    err << msg << '\n';
  };
  for (const auto& op : s.ops) {
    ++idx;
    std::vector<PrefixUpdate> log;
    auto t0 = std::chrono::steady_clock::now();
    switch (op.kind) {
      case StreamOp::Insert: log = d.insert(op.u, op.v); break;
      case StreamOp::Delete: log = d.remove(op.u, op.v); break;
      case StreamOp::QueryTw: out << "tw_ok " << (d.tw_ok() ? "true" : "false") << '\n'; break;
      case StreamOp::QueryMis:
        if (d.tw_ok())
          out << "mis " << d.mis() << '\n';
        else
          out << "mis unknown\n";
        break;
      case StreamOp::QueryColor:
        if (d.tw_ok())
          out << "color " << (d.color(op.q) ? "true" : "false") << '\n';
        else
          out << "color unknown\n";
        break;
      case StreamOp::Dump: {
        std::ofstream f(op.path);
        if (!f) {
          err << "line " << op.line << ": cannot write " << op.path << '\n';
          res.exit_code = 2;
          return res;
        }
        d.main().td().dump_pace(f, s.n);
        break;
      }
    }
    auto t1 = std::chrono::steady_clock::now();
    long long ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    if (opt.log)
      for (const auto& u : log) write_update(*opt.log, u);
    if (opt.promise && op.kind == StreamOp::Insert && opt.validate && !d.tw_ok())
      fail(res.promise_violations, 3, "line " + std::to_string(op.line) + ": promise violated (treewidth above k)");
    if (opt.validate) {
      std::string e = d.validate();
      if (!e.empty()) fail(res.validation_failures, 4, "line " + std::to_string(op.line) + ": " + e);
    }
    const auto& td = d.main().td();
    long long log_size = 0;
    for (const auto& u : log) log_size += static_cast<long long>(u.size());
    int h = d.height(), w = d.width();
    if (opt.csv)
      *opt.csv << idx << ',' << kind_name(op.kind) << ',' << ns << ',' << log_size << ',' << h << ',' << td.size()
               << ',' << w << '\n';
    total_ns += ns;
    total_log += log_size;
    max_h = std::max(max_h, h);
    max_w = std::max(max_w, w);
    max_size = std::max(max_size, td.size());
  }
  if (opt.csv) {
    long double m = idx ? static_cast<long double>(idx) : 1;
    *opt.csv << "summary," << idx << ',' << static_cast<long long>(total_ns / m) << ','
             << static_cast<double>(total_log / m) << ',' << max_h << ',' << max_size << ',' << max_w << '\n';
  }
  return res;
}

}  // namespace dtw
