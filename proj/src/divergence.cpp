#include "divpath/divergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "divpath/error.hpp"

namespace divpath {

FDivergence builtin_f(std::string_view name, const FieldParams& params) {
  FDivergence d;
  d.name = std::string(name);
  d.params = params;
  if (name == "tv") {
    d.kind = FieldKind::TV;
    d.strictly_convex = false;
    d.f = [](double x) { return std::abs(1.0 - x); };
  } else if (name == "kl") {
    d.kind = FieldKind::KL;
    d.f = [](double x) { return -std::log(x); };
  } else if (name == "chi2") {
    d.kind = FieldKind::Chi2;
    d.f = [](double x) { return x * x - 1.0; };
  } else if (name == "hellinger") {
    d.kind = FieldKind::Hellinger;
    d.f = [](double x) {
      const double s = std::sqrt(x) - 1.0;
      return s * s;
    };
  } else if (name == "alpha") {
    if (!params.alpha || !std::isfinite(*params.alpha) || std::abs(*params.alpha) == 1.0) {
      throw Error(ErrorCode::InvalidArgument, "alpha divergence needs a finite alpha other than +-1");
    }
    const double a = *params.alpha;
    const double c = 4.0 / (1.0 - a * a), s = (1.0 + a) / 2.0;
    d.kind = FieldKind::Alpha;
    d.f = [c, s](double x) { return c * (1.0 - std::pow(x, s)); };
  } else if (name == "power" || name == "power-p") {
    if (!params.power || *params.power < 1) {
      throw Error(ErrorCode::InvalidArgument, "power divergence needs an integer exponent >= 1");
    }
    const int p = *params.power;
    d.name = "power";
    d.kind = FieldKind::Power;
    d.strictly_convex = p > 1;
    d.f = [p](double x) { return std::pow(std::abs(1.0 - x), p); };
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown divergence '" + std::string(name) + "'");
  }
  return d;
}

FDivergence custom_f(std::string name, std::function<double(double)> f, bool strictly_convex) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "custom divergence: empty function");
  const double f1 = f(1.0);
  if (!(std::abs(f1) <= 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "custom divergence: f(1) = " + std::to_string(f1) + ", expected 0");
  }
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(1e-6, 10.0);
  for (int i = 0; i < 100; ++i) {
    double xs[3] = {u(rng), u(rng), u(rng)};
    std::sort(xs, xs + 3);
    const auto [x, y, z] = xs;
    if (!(x < y && y < z)) continue;
    const double fx = f(x), fy = f(y), fz = f(z);
    const double interp = fx * (z - y) / (z - x) + fz * (y - x) / (z - x);
    if (fy > interp + 1e-9 * (1.0 + std::abs(interp))) {
      throw Error(ErrorCode::InvalidArgument, "custom divergence: f is not convex near x = " + std::to_string(y));
    }
  }
  FDivergence d;
  d.name = std::move(name);
  d.f = std::move(f);
  d.strictly_convex = strictly_convex;
  d.kind = FieldKind::CustomF;
  return d;
}

namespace {

// One summand w * f(v / w) with w taken from the weighting row.
struct TermEval {
  const FDivergence& f;
  const DivergenceOptions& opts;
  ClampStats* stats;

  double operator()(double w, double v) const {
    if (f.kind == FieldKind::TV) return std::abs(w - v);
    if (f.kind == FieldKind::KL) {
      if (w <= 0.0) return 0.0;
      if (v < opts.floor) {
        if (!opts.clamp) throw Error(ErrorCode::DivisionDomain, "KL: zero kernel entry in the log argument");
        if (stats) ++stats->clamps;
        v = opts.floor;
      }
      return w * (std::log(w) - std::log(v));
    }
    v = std::max(v, 0.0);
    if (w <= 0.0 && v == 0.0) return 0.0;
    if (w < opts.floor) {
      if (!opts.clamp) throw Error(ErrorCode::DivisionDomain, f.name + ": zero kernel entry in the denominator");
      if (stats) ++stats->clamps;
      w = opts.floor;
    }
    return w * f.f(v / w);
  }
};

void check_rows(const PoissonKernel& pk, int p, int q) {
  if (p < 0 || p >= pk.rows() || q < 0 || q >= pk.rows()) {
    throw Error(ErrorCode::InvalidTarget, "divergence: vertex out of range");
  }
}

template <class PairFn>
ScalarField field_from_pairs(const PoissonKernel& pk, const FDivergence& f, int p, int threads, PairFn pair) {
  const int n = pk.rows();
  check_rows(pk, p, p);
  ScalarField out;
  out.kind = f.kind;
  out.target = p;
  out.params = f.params;
  out.raw.resize(n);
  std::vector<long> clamps(n, 0);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::max(1, std::min(threads, n / 256 + 1));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    try {
      for (int start = next.fetch_add(256); start < n; start = next.fetch_add(256)) {
        for (int q = start; q < std::min(n, start + 256); ++q) {
          ClampStats st;
          out.raw[q] = pair(q, &st);
          clamps[q] = st.clamps;
        }
      }
    } catch (...) {
      std::lock_guard lock(mu);
      failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  const TriMesh* mesh = pk.mesh;
  for (int q = 0; q < n; ++q) {
    out.clamp_count += clamps[q];
    if (clamps[q] > 0 && (!mesh || !mesh->is_boundary(q))) out.precision_warning = true;
  }
  out.raw[p] = 0.0;
  out.values = out.raw;
  return out;
}

}  // namespace

double dv_pair(const PoissonKernel& pk, const FDivergence& f, int p, int q, const DivergenceOptions& opts,
               OpCounter* counter, ClampStats* stats) {
  check_rows(pk, p, q);
  if (p == q) return 0.0;
  const int wr = opts.weight_by_target ? p : q;
  const int vr = opts.weight_by_target ? q : p;
  const TermEval term{f, opts, stats};
  const double* w = pk.dense.row(wr).data();
  const double* v = pk.dense.row(vr).data();
  double sum = 0.0;
  const int k = pk.cols();
  for (int b = 0; b < k; ++b) sum += term(w[b], v[b]);
  if (counter) counter->ops += k;
  return sum;
}

ScalarField dv_field(const PoissonKernel& pk, const FDivergence& f, int p, const DivergenceOptions& opts,
                     int threads) {
  return field_from_pairs(pk, f, p, threads,
                          [&](int q, ClampStats* st) { return dv_pair(pk, f, p, q, opts, nullptr, st); });
}

double default_threshold(int n) { return 1.0 / std::sqrt(static_cast<double>(std::max(n, 1))); }

PoissonKernel sparsify(PoissonKernel pk, double threshold) {
  if (!(threshold >= 0.0) || threshold >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "sparsify: threshold must lie in [0, 1)");
  }
  const int n = pk.rows(), k = pk.cols();
  const double cut = threshold / std::max(k, 1);
  SparseRows s;
  s.offsets.assign(1, 0);
  s.dropped.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    for (int b = 0; b < k; ++b) {
      const double x = pk.dense(v, b);
      if (threshold > 0.0 && x < cut) {
        s.dropped[v] += std::max(x, 0.0);
        continue;
      }
      s.columns.push_back(b);
      s.values.push_back(x);
      s.logs.push_back(std::log(std::max(x, kLogFloor)));
    }
    s.offsets.push_back(static_cast<long>(s.columns.size()));
  }
  pk.logdense = pk.dense.unaryExpr([](double x) { return std::log(std::max(x, kLogFloor)); });
  pk.sparse = std::move(s);
  pk.threshold = threshold;
  return pk;
}

SparsityReport sparsity_report(const PoissonKernel& pk) {
  if (!pk.sparse) throw Error(ErrorCode::InvalidArgument, "sparsity_report: kernel is not sparsified");
  SparsityReport r;
  r.threshold = pk.threshold;
  long total = 0, dropped = 0;
  for (int v = 0; v < pk.rows(); ++v) {
    r.max_dropped_mass = std::max(r.max_dropped_mass, pk.sparse->dropped[v]);
    if (pk.mesh && pk.mesh->is_boundary(v)) continue;
    total += pk.cols();
    dropped += pk.cols() - pk.sparse->row_size(v);
  }
  r.percent = total > 0 ? 100.0 * static_cast<double>(dropped) / static_cast<double>(total) : 0.0;
  return r;
}

double dv_pair_sparse(const PoissonKernel& pk, const FDivergence& f, int p, int q, const DivergenceOptions& opts,
                      OpCounter* counter, ClampStats* stats) {
  if (!pk.sparse || pk.logdense.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "dv_pair_sparse: kernel has no sparse view; call sparsify first");
  }
  check_rows(pk, p, q);
  if (p == q) return 0.0;
  const SparseRows& s = *pk.sparse;
  const int wr = opts.weight_by_target ? p : q;
  const int vr = opts.weight_by_target ? q : p;
  double sum = 0.0;

  if (f.kind == FieldKind::KL) {
    const double* logv = pk.logdense.row(vr).data();
    const double log_floor = std::log(opts.floor);
    const double* v = pk.dense.row(vr).data();
    for (long j = s.offsets[wr]; j < s.offsets[wr + 1]; ++j) {
      const double w = s.values[j];
      if (w <= 0.0) continue;
      double lv = logv[s.columns[j]];
      if (v[s.columns[j]] < opts.floor) {
        if (!opts.clamp) throw Error(ErrorCode::DivisionDomain, "KL: zero kernel entry in the log argument");
        if (stats) ++stats->clamps;
        lv = log_floor;
      }
      sum += w * (s.logs[j] - lv);
    }
    if (counter) counter->ops += s.row_size(wr);
    return sum;
  }

  const TermEval term{f, opts, stats};
  long i = s.offsets[wr], ie = s.offsets[wr + 1];
  long j = s.offsets[vr], je = s.offsets[vr + 1];
  long ops = 0;
  while (i < ie || j < je) {
    const int ci = i < ie ? s.columns[i] : pk.cols();
    const int cj = j < je ? s.columns[j] : pk.cols();
    double w = 0.0, v = 0.0;
    if (ci <= cj) w = s.values[i++];
    if (cj <= ci) v = s.values[j++];
    sum += term(w, v);
    ++ops;
  }
  if (f.kind == FieldKind::TV) sum += std::abs(s.dropped[wr] - s.dropped[vr]);
  if (counter) counter->ops += ops;
  return sum;
}

ScalarField dv_field_sparse(const PoissonKernel& pk, const FDivergence& f, int p, const DivergenceOptions& opts) {
  return field_from_pairs(pk, f, p, 0,
                          [&](int q, ClampStats* st) { return dv_pair_sparse(pk, f, p, q, opts, nullptr, st); });
}

}  // namespace divpath
