#include "vmo/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace vmo {

namespace {

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[48];
  const int k = std::snprintf(buf, sizeof buf, "%.4f", v);
  return std::string(buf, static_cast<std::size_t>(k));
}

// Jacobi eigendecomposition of a symmetric d x d matrix; deterministic sweep
// order. Returns eigenvalues (descending) and column eigenvectors.
void jacobi_eigen(std::vector<double>& a, int d, std::vector<double>& values,
                  std::vector<double>& vectors) {
  vectors.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) vectors[static_cast<std::size_t>(i * d + i)] = 1.0;
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * d + j)]; };
  auto V = [&](int i, int j) -> double& { return vectors[static_cast<std::size_t>(i * d + j)]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-24) break;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < d; ++i) {
          const double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < d; ++j) {
          const double apj = A(p, j), aqj = A(q, j);
          A(p, j) = c * apj - s * aqj;
          A(q, j) = s * apj + c * aqj;
        }
        for (int i = 0; i < d; ++i) {
          const double vip = V(i, p), viq = V(i, q);
          V(i, p) = c * vip - s * viq;
          V(i, q) = s * vip + c * viq;
        }
      }
  }
  values.assign(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) values[static_cast<std::size_t>(i)] = A(i, i);
}

}  // namespace

std::vector<std::array<double, 2>> principal_projection(const PointSet& points) {
  const int d = points.dim();
  const Index k = points.size();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (Index v = 0; v < k; ++v) {
    auto p = points[v];
    for (int m = 0; m < d; ++m) mean[static_cast<std::size_t>(m)] += p[m];
  }
  for (double& m : mean) m /= static_cast<double>(std::max<Index>(k, 1));

  std::vector<double> cov(static_cast<std::size_t>(d) * d, 0.0);
  for (Index v = 0; v < k; ++v) {
    auto p = points[v];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        cov[static_cast<std::size_t>(i * d + j)] += (p[i] - mean[static_cast<std::size_t>(i)]) *
                                                    (p[j] - mean[static_cast<std::size_t>(j)]);
  }

  std::vector<double> values, vectors;
  jacobi_eigen(cov, d, values, vectors);
  std::vector<int> order(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
  });

  std::array<std::vector<double>, 2> axes;
  for (int ax = 0; ax < 2; ++ax) {
    axes[static_cast<std::size_t>(ax)].assign(static_cast<std::size_t>(d), 0.0);
    const int col = order[static_cast<std::size_t>(std::min(ax, d - 1))];
    double largest = 0.0;
    int arg = 0;
    for (int i = 0; i < d; ++i) {
      const double v = vectors[static_cast<std::size_t>(i * d + col)];
      axes[static_cast<std::size_t>(ax)][static_cast<std::size_t>(i)] = v;
      if (std::abs(v) > std::abs(largest)) {
        largest = v;
        arg = i;
      }
    }
    (void)arg;
    if (largest < 0.0)
      for (double& v : axes[static_cast<std::size_t>(ax)]) v = -v;  // sign convention
  }

  std::vector<std::array<double, 2>> out(static_cast<std::size_t>(k));
  for (Index v = 0; v < k; ++v) {
    auto p = points[v];
    for (int ax = 0; ax < 2; ++ax) {
      double s = 0.0;
      for (int m = 0; m < d; ++m)
        s += (p[m] - mean[static_cast<std::size_t>(m)]) *
             axes[static_cast<std::size_t>(ax)][static_cast<std::size_t>(m)];
      out[static_cast<std::size_t>(v)][static_cast<std::size_t>(ax)] = s;
    }
  }
  return out;
}

std::string render_spy_svg(const SparseMatrix& m, const std::vector<BlockReportRow>* blocks) {
  const double target = 640.0;
  const double cell = std::clamp(target / static_cast<double>(std::max<Index>(
                                              std::max(m.nrows(), m.ncols()), 1)),
                                 0.5, 16.0);
  const double wpx = cell * static_cast<double>(m.ncols());
  const double hpx = cell * static_cast<double>(m.nrows());

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(wpx) + "\" height=\"" +
         fmt(hpx) + "\" viewBox=\"0 0 " + fmt(wpx) + " " + fmt(hpx) + "\">\n";
  svg += "<rect width=\"" + fmt(wpx) + "\" height=\"" + fmt(hpx) + "\" fill=\"white\"/>\n";
  for (const Triplet& t : m.entries()) {
    svg += "<rect class=\"nz\" x=\"" + fmt(cell * static_cast<double>(t.col)) + "\" y=\"" +
           fmt(cell * static_cast<double>(t.row)) + "\" width=\"" + fmt(cell) + "\" height=\"" +
           fmt(cell) + "\" fill=\"#1f3d7a\"/>\n";
  }
  if (blocks) {
    for (const BlockReportRow& r : *blocks) {
      svg += "<rect class=\"block\" x=\"" + fmt(cell * static_cast<double>(r.col_begin)) +
             "\" y=\"" + fmt(cell * static_cast<double>(r.row_begin)) + "\" width=\"" +
             fmt(cell * static_cast<double>(r.col_end - r.col_begin)) + "\" height=\"" +
             fmt(cell * static_cast<double>(r.row_end - r.row_begin)) +
             "\" fill=\"none\" stroke=\"#c03020\" stroke-width=\"" + fmt(std::max(cell * 0.1, 0.5)) +
             "\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_layout_svg(const PointSet& points, double px_per_unit) {
  auto proj = principal_projection(points);
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    xmin = std::min(xmin, proj[i][0]);
    xmax = std::max(xmax, proj[i][0]);
    ymin = std::min(ymin, proj[i][1]);
    ymax = std::max(ymax, proj[i][1]);
  }
  const double margin = 0.5;
  const double w = (xmax - xmin + 2 * margin) * px_per_unit;
  const double h = (ymax - ymin + 2 * margin) * px_per_unit;
  const double r = std::max(2.0, 0.02 * px_per_unit);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n";
  svg += "<rect width=\"" + fmt(w) + "\" height=\"" + fmt(h) + "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < proj.size(); ++i) {
    const double cx = (proj[i][0] - xmin + margin) * px_per_unit;
    const double cy = (proj[i][1] - ymin + margin) * px_per_unit;
    svg += "<circle class=\"pt\" cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
           "\" fill=\"#205080\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace vmo
