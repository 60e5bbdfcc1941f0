// dtw: replay update streams, benchmark them, generate workloads.
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "dtw/oracle.hpp"
#include "dtw/stream.hpp"

namespace {

dtw::Stream load(const std::string& path) {
  if (path == "-") return dtw::parse_stream(std::cin);
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return dtw::parse_stream(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic treewidth: stream replay and benchmarks"};
  app.require_subcommand(1);

  std::string input = "-", log_path, csv_path;
  bool validate = false, promise = false, symmetric = false;
  std::string closure = "prefix";
  double C = 4.0;
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("stream", input, "stream file ('-' for stdin)");
    sc->add_flag("--validate", validate, "full validation after every operation");
    sc->add_flag("--promise", promise, "plain structure (caller promises tw <= k)");
    sc->add_option("--log", log_path, "write the prefix-update log");
    sc->add_flag("--symmetric", symmetric, "add both endpoints along the root paths");
    sc->add_option("--closure", closure, "prefix | exact")->check(CLI::IsMember({"prefix", "exact"}));
    sc->add_option("--C", C, "height schedule constant");
  };
  auto* rp = app.add_subcommand("replay", "replay a stream, answering queries");
  add_common(rp);
  auto* bp = app.add_subcommand("bench", "replay a stream and write per-op CSV records");
  add_common(bp);
  bp->add_option("--csv", csv_path, "output CSV")->required();

  auto* gp = app.add_subcommand("gen", "write a random stream over a hidden k-tree");
  std::size_t n = 100, ops = 1000;
  int k = 2;
  std::uint64_t seed = 1;
  double qrate = 0.0, bias = 0.6;
  bool free_edges = false;
  gp->add_option("--n", n, "vertices");
  gp->add_option("--k", k, "treewidth bound");
  gp->add_option("--ops", ops, "updates");
  gp->add_option("--seed", seed, "seed");
  gp->add_option("--queries", qrate, "probability of a query after each update");
  gp->add_option("--bias", bias, "insertion probability");
  gp->add_flag("--free", free_edges, "unconstrained edges instead of a k-tree host");

  CLI11_PARSE(app, argc, argv);

  if (gp->parsed()) {
    dtw::Stream s;
    s.n = n;
    s.k = k;
    auto raw = free_edges ? dtw::oracle::random_free_stream(n, ops, seed, bias)
                          : dtw::oracle::random_update_stream(n, k, ops, seed, bias);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> U(0, 1);
    for (const auto& o : raw) {
      dtw::StreamOp op;
      op.kind = o.kind == '+' ? dtw::StreamOp::Insert : dtw::StreamOp::Delete;
      op.u = o.u;
      op.v = o.v;
      s.ops.push_back(op);
      if (U(rng) < qrate) {
        dtw::StreamOp q;
        int which = static_cast<int>(rng() % 3);
        q.kind = which == 0 ? dtw::StreamOp::QueryTw : which == 1 ? dtw::StreamOp::QueryMis : dtw::StreamOp::QueryColor;
        q.q = 3;
        s.ops.push_back(q);
      }
    }
    dtw::write_stream(std::cout, s);
    return 0;
  }

  dtw::Stream s;
  try {
    s = load(input);
  } catch (const dtw::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  dtw::ReplayOptions opt;
  opt.validate = validate;
  opt.promise = promise;
  opt.cfg.symmetric = symmetric;
  opt.cfg.closure = closure == "exact" ? dtw::ClosureMode::exact : dtw::ClosureMode::prefix;
  opt.cfg.C = C;
  std::ofstream logf, csvf;
  if (!log_path.empty()) {
    logf.open(log_path);
    if (!logf) {
      std::cerr << "cannot write " << log_path << '\n';
      return 2;
    }
    opt.log = &logf;
  }
  if (bp->parsed()) {
    csvf.open(csv_path);
    if (!csvf) {
      std::cerr << "cannot write " << csv_path << '\n';
      return 2;
    }
    opt.csv = &csvf;
  }
  auto res = dtw::replay(s, opt, std::cout, std::cerr);
  return res.exit_code;
}
