#include "vmo/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "vmo/layout.hpp"
#include "vmo/ludecomp.hpp"
#include "vmo/matrix_market.hpp"
#include "vmo/ordering.hpp"
#include "vmo/render.hpp"

namespace vmo::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitSingular = 2;
constexpr int kExitFlags = 3;

std::string fmt_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    const int k = std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return std::string(buf, static_cast<std::size_t>(k));
  }
  return std::string(buf);
}

struct CommonFlags {
  std::string input;
  std::string repr = "bipartite";
  std::string form = "bbd";
  std::string cut = "none";
  Index min_block = 32;
  int dim = 4;
  std::uint64_t seed = 1;
  double threshold = 1e-6;
  bool no_matching = false;
  std::string geometry;
  std::string out_prefix = "vmo_out";
};

Representation parse_repr(const std::string& s) {
  if (s == "symmetric") return Representation::symmetric;
  if (s == "bipartite") return Representation::bipartite;
  if (s == "colnet") return Representation::column_net;
  if (s == "rownet") return Representation::row_net;
  if (s == "finegrain") return Representation::finegrain;
  throw CLI::ValidationError("--repr", "unknown representation '" + s + "'");
}

Index representation_vertex_count(const SparseMatrix& m, Representation r) {
  switch (r) {
    case Representation::symmetric: return m.nrows();
    case Representation::bipartite: return m.nrows() + m.ncols();
    case Representation::column_net: return m.nrows();
    case Representation::row_net: return m.ncols();
    case Representation::finegrain: return m.nnz();
  }
  return 0;
}

/// Layout of every connected component, shifted apart along the first axis.
PointSet layout_all_components(const Hypergraph& hg, const LayoutParams& params,
                               std::uint64_t seed) {
  LayoutParams lp = params;
  PointSet points(lp.dim, hg.num_vertices);
  const auto groups = connected_components(hg).groups();
  double offset = 0.0;
  for (std::size_t ci = 0; ci < groups.size(); ++ci) {
    lp.seed = mix_seed(seed, 0x10000 + static_cast<std::uint64_t>(ci));
    Hypergraph sub = induced_component(hg, groups[ci]);
    PointSet local = multilevel_layout(sub, lp);
    auto [lo, hi] = local.bounding_box();
    const double shift = offset - lo[0];
    for (std::size_t i = 0; i < groups[ci].size(); ++i) {
      auto dst = points[groups[ci][i]];
      auto src = local[static_cast<Index>(i)];
      for (int m = 0; m < lp.dim; ++m) dst[m] = src[m];
      dst[0] += shift;
    }
    offset += (hi[0] - lo[0]) + std::max(1.0, 0.25 * (hi[0] - lo[0]));
  }
  return points;
}

int cmd_order(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  if (flags.repr != "bipartite") {
    err << "order: only the bipartite representation drives the ordering pipeline\n";
    return kExitFlags;
  }
  if (flags.dim < 3) {
    err << "order: --dim must be at least 3\n";
    return kExitFlags;
  }
  const SparseMatrix m = read_matrix_market_file(flags.input);
  if (!m.square()) {
    err << "order: matrix must be square\n";
    return kExitFlags;
  }

  OrderOptions opts;
  opts.form = flags.form == "sbd" ? Form::sbd : Form::bbd;
  opts.cut = flags.cut == "schur"    ? CutStrategy::schur
             : flags.cut == "twobit" ? CutStrategy::twobit
                                     : CutStrategy::none;
  opts.min_block = flags.min_block;
  opts.use_matching = !flags.no_matching;
  opts.seed = flags.seed;
  opts.layout.dim = flags.dim;

  PointSet geometry;
  if (!flags.geometry.empty()) {
    const std::string text = read_text_file(flags.geometry);
    const Index nverts = m.nrows() + m.ncols();
    // accept one point per row/column pair or one per bipartite vertex
    PointSet pts;
    bool ok = false;
    try {
      pts = parse_coords(text, nverts);
      ok = true;
    } catch (const ParseError&) {
    }
    if (!ok) {
      try {
        PointSet shared = parse_coords(text, m.nrows());
        pts = PointSet(shared.dim(), nverts);
        for (Index i = 0; i < m.nrows(); ++i) {
          auto src = shared[i];
          auto r = pts[i];
          auto c = pts[m.nrows() + i];
          for (int mm = 0; mm < shared.dim(); ++mm) {
            r[mm] = src[mm];
            c[mm] = src[mm];
          }
        }
        ok = true;
      } catch (const ParseError&) {
      }
    }
    if (!ok) {
      err << "order: geometry file must hold " << nverts << " or " << m.nrows() << " points\n";
      return kExitFlags;
    }
    geometry = std::move(pts);
    opts.given_geometry = &geometry;
  }

  const OrderingTree tree = recursive_order(m, opts);
  const auto report = block_report(tree);
  write_text_file(flags.out_prefix + ".rowperm", write_permutation(tree.row_perm));
  write_text_file(flags.out_prefix + ".colperm", write_permutation(tree.col_perm));
  write_text_file(flags.out_prefix + ".blocks",
                  write_block_report(report, tree.nrows, tree.ncols,
                                     tree.form == Form::sbd ? "sbd" : "bbd"));
  const CutMetrics cm = cut_metrics(tree);
  out << "max cut: rows=" << cm.max_cut_rows << " cols=" << cm.max_cut_cols << "\n";
  out << "splits: " << cm.per_split.size() << "\n";
  return kExitOk;
}

int cmd_eval(const CommonFlags& flags, const std::string& rowperm_path,
             const std::string& colperm_path, const std::string& blocks_path, std::ostream& out,
             std::ostream& err) {
  const SparseMatrix m = read_matrix_market_file(flags.input);
  if (!m.square()) {
    err << "eval: matrix must be square\n";
    return kExitFlags;
  }
  const auto row_perm = parse_permutation(read_text_file(rowperm_path));
  const auto col_perm = parse_permutation(read_text_file(colperm_path));
  const auto blocks = parse_block_report(read_text_file(blocks_path));
  if (static_cast<Index>(row_perm.size()) != m.nrows() ||
      static_cast<Index>(col_perm.size()) != m.ncols()) {
    err << "eval: permutation length does not match the matrix\n";
    return kExitFlags;
  }

  const SparseMatrix permuted = m.permuted(row_perm, col_perm);
  const std::vector<Index> scopes = pivot_scopes_from_report(blocks, m.nrows());

  const Factors plain = lu_complete_pivot(permuted, PivotMode::none);
  out << "fill-in (no pivoting): " << fmt_double(fill_in(permuted, plain)) << "\n";
  out << "zero pivots (no pivoting): " << plain.zero_pivot_count() << "\n";

  const Factors restricted = lu_restricted(permuted, scopes, flags.threshold);
  out << "fill-in (threshold " << fmt_double(flags.threshold)
      << "): " << fmt_double(fill_in(permuted, restricted)) << "\n";
  out << "row swaps (threshold): " << restricted.swap_count() << "\n";

  std::vector<double> ones(static_cast<std::size_t>(m.nrows()), 1.0);
  const std::vector<double> b = permuted.multiply(ones);
  const SolveResult sol = solve_and_backward_error(permuted, restricted, b);
  out << "backward error: " << fmt_double(sol.backward_error) << "\n";
  return kExitOk;
}

int cmd_render(const CommonFlags& flags, const std::string& blocks_path, std::ostream& out,
               std::ostream& err) {
  if (flags.dim < 3) {
    err << "render: --dim must be at least 3\n";
    return kExitFlags;
  }
  const SparseMatrix m = read_matrix_market_file(flags.input);
  const Representation repr = parse_repr(flags.repr);

  std::optional<std::vector<BlockReportRow>> blocks;
  if (!blocks_path.empty()) blocks = parse_block_report(read_text_file(blocks_path));
  write_text_file(flags.out_prefix + ".spy.svg",
                  render_spy_svg(m, blocks ? &*blocks : nullptr));

  LayoutParams lp;
  lp.dim = flags.dim;
  PointSet points;
  if (!flags.geometry.empty()) {
    const Index expected = representation_vertex_count(m, repr);
    points = parse_coords(read_text_file(flags.geometry), expected);
  } else if (repr == Representation::finegrain) {
    const Hypergraph hg = from_matrix(m, Representation::bipartite);
    points = finegrain_points(layout_all_components(hg, lp, flags.seed), m);
  } else {
    const Hypergraph hg = from_matrix(m, repr);
    points = layout_all_components(hg, lp, flags.seed);
  }
  write_text_file(flags.out_prefix + ".layout.svg", render_layout_svg(points));
  out << "rendered " << m.nnz() << " nonzeros, " << points.size() << " layout points\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"geometric sparse matrix ordering and LU evaluation"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string rowperm_path, colperm_path, blocks_path;

  auto add_common = [&](CLI::App* cmd, bool with_order_flags) {
    cmd->add_option("input", flags.input, "Matrix Market file")->required();
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--dim", flags.dim, "layout dimension (>= 3)");
    cmd->add_option("--geometry", flags.geometry, "coordinate file bypassing the layout stage");
    cmd->add_option("--out-prefix", flags.out_prefix, "output path prefix");
    if (with_order_flags) {
      cmd->add_option("--repr", flags.repr, "hypergraph representation")
          ->check(CLI::IsMember({"symmetric", "bipartite", "colnet", "rownet", "finegrain"}));
      cmd->add_option("--form", flags.form, "separator placement")
          ->check(CLI::IsMember({"bbd", "sbd"}));
      cmd->add_option("--cut", flags.cut, "cut-block strategy")
          ->check(CLI::IsMember({"none", "schur", "twobit"}));
      cmd->add_option("--min-block", flags.min_block, "recursion stop size (rows)");
      cmd->add_flag("--no-matching", flags.no_matching, "skip the strengthened diagonal");
    }
  };

  CLI::App* order = app.add_subcommand("order", "layout, partition, and emit permutations");
  add_common(order, true);

  CLI::App* eval = app.add_subcommand("eval", "LU quality metrics for an ordering");
  add_common(eval, false);
  eval->add_option("--rowperm", rowperm_path, "row permutation file")->required();
  eval->add_option("--colperm", colperm_path, "column permutation file")->required();
  eval->add_option("--blocks", blocks_path, "block report file")->required();
  eval->add_option("--threshold", flags.threshold, "pivot threshold u in [0,1]");

  CLI::App* render = app.add_subcommand("render", "spy and layout SVG plots");
  add_common(render, false);
  render->add_option("--repr", flags.repr, "hypergraph representation")
      ->check(CLI::IsMember({"symmetric", "bipartite", "colnet", "rownet", "finegrain"}));
  render->add_option("--blocks", blocks_path, "block report overlay");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitFlags;
  }

  try {
    if (order->parsed()) return cmd_order(flags, out, err);
    if (eval->parsed()) return cmd_eval(flags, rowperm_path, colperm_path, blocks_path, out, err);
    if (render->parsed()) return cmd_render(flags, blocks_path, out, err);
    err << "error: no subcommand\n";
    return kExitFlags;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const StructuralSingularError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const SingularBlockError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const RepresentationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFlags;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitFlags;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 70;
  }
}

}  // namespace vmo::cli
