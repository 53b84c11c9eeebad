#include "dpcjam/montecarlo.hpp"

#include "dpcjam/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace dpcjam {

namespace {

using C = Component;

double shaped_draw(Rng& rng, JammerShape shape) {
  switch (shape) {
    case JammerShape::Gaussian:
      return rng.normal();
    case JammerShape::Uniform:
      return rng.uniform(-std::sqrt(3.0), std::sqrt(3.0));
    case JammerShape::TwoPoint:
      return rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  return 0.0;
}

ComponentSet merged_layout(std::initializer_list<const ComponentSet*> sets) {
  ComponentSet out;
  for (const auto* s : sets) {
    for (C c : *s) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  return out;
}

using CovFunction = std::function<double(const JointCovariance&)>;

// Evaluates `fn` on the full-sample covariance and on each delete-one-fold
// covariance, all built from per-fold sums.
Estimate jackknife(const SampleBatch& batch, const ComponentSet& layout, const CovFunction& fn) {
  const int n = batch.n;
  const int d = n * static_cast<int>(layout.size());
  const int K = kJackknifeFolds;
  if (batch.N < 2 * K) throw DegenerateSample("jackknife: N must be at least 2x the fold count");

  std::vector<Vector> sums(K, Vector::Zero(d));
  std::vector<Matrix> products(K, Matrix::Zero(d, d));
  std::vector<long> counts(K, 0);
  Matrix rows(0, d);
  for (int k = 0; k < K; ++k) {
    const long begin = static_cast<long>(batch.N) * k / K;
    const long end = static_cast<long>(batch.N) * (k + 1) / K;
    rows.resize(end - begin, d);
    for (std::size_t c = 0; c < layout.size(); ++c) {
      rows.middleCols(static_cast<Eigen::Index>(c) * n, n) =
          batch.component(layout[c]).middleRows(begin, end - begin);
    }
    sums[k] = rows.colwise().sum().transpose();
    products[k].selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
    products[k] = products[k].selfadjointView<Eigen::Lower>();
    counts[k] = end - begin;
  }
  Vector total_sum = Vector::Zero(d);
  Matrix total_product = Matrix::Zero(d, d);
  long total = 0;
  for (int k = 0; k < K; ++k) {
    total_sum += sums[k];
    total_product += products[k];
    total += counts[k];
  }

  auto evaluate = [&](const Vector& s, const Matrix& q, long m) {
    const Vector mean = s / static_cast<double>(m);
    Matrix cov = (q - static_cast<double>(m) * mean * mean.transpose()) / static_cast<double>(m - 1);
    cov = linalg::symmetrize(cov);
    if (!cov.allFinite() || !linalg::is_psd(cov)) {
      throw DegenerateSample("sample covariance is not positive semidefinite");
    }
    try {
      return fn(JointCovariance::trusted(n, layout, cov));
    } catch (const SingularCovariance& e) {
      throw DegenerateSample(std::string("degenerate sample covariance: ") + e.what());
    }
  };

  Estimate out;
  out.folds = K;
  out.value = evaluate(total_sum, total_product, total);
  std::vector<double> leave_out(K);
  double mean = 0.0;
  for (int k = 0; k < K; ++k) {
    leave_out[k] = evaluate(total_sum - sums[k], total_product - products[k], total - counts[k]);
    mean += leave_out[k];
  }
  mean /= K;
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  out.standard_error = std::sqrt(ss * (K - 1) / K);
  return out;
}

}  // namespace

std::string_view to_string(JammerShape shape) {
  switch (shape) {
    case JammerShape::Gaussian: return "gaussian";
    case JammerShape::Uniform: return "uniform";
    case JammerShape::TwoPoint: return "two-point";
  }
  return "?";
}

JammerShape parse_jammer_shape(std::string_view text) {
  if (text == "gaussian") return JammerShape::Gaussian;
  if (text == "uniform") return JammerShape::Uniform;
  if (text == "two-point" || text == "twopoint") return JammerShape::TwoPoint;
  throw InvalidArgument("unknown jammer shape: " + std::string(text));
}

const Matrix& SampleBatch::component(Component c) const {
  switch (c) {
    case C::X: return X;
    case C::S: return S;
    case C::J: return J;
    case C::Z: return Z;
    case C::Y: return Y;
    case C::U: return U;
    case C::W: break;
  }
  throw InvalidArgument("SampleBatch does not store component W");
}

SampleBatch sample_system(const ChannelParams& ch, const UserStrategy& user,
                          const JammerStrategy& jammer, int N, std::uint64_t seed,
                          JammerShape shape) {
  ch.validate();
  if (N < 2) throw InvalidArgument("sample_system: N must be >= 2");
  if (!feasible(user, ch).feasible) throw InfeasiblePower("sample_system: user infeasible");
  if (!feasible(jammer, ch).feasible) throw InfeasiblePower("sample_system: jammer infeasible");

  const int n = ch.n;
  SampleBatch batch;
  batch.N = N;
  batch.n = n;
  batch.seed = seed;
  batch.base = ch.base;
  for (Matrix* m : {&batch.X, &batch.S, &batch.J, &batch.Z, &batch.Y, &batch.U}) {
    m->resize(N, n);
  }

  const Matrix g_root = linalg::psd_sqrt(user.innovation_cov);
  const Matrix r_root = linalg::psd_sqrt(jammer.innovation_cov);
  const double s_scale = std::sqrt(ch.sigmaS2);
  const double z_scale = std::sqrt(ch.sigma2);
  const int chunks = (N + kSampleChunkRows - 1) / kSampleChunkRows;

  auto fill_chunk = [&](int chunk) {
    Rng rng(derive_seed("sample_system", seed, static_cast<std::uint64_t>(chunk)));
    const int begin = chunk * kSampleChunkRows;
    const int rows = std::min(kSampleChunkRows, N - begin);
    Matrix s(n, rows), g(n, rows), r(n, rows), z(n, rows);
    for (int k = 0; k < rows; ++k) {
      for (int i = 0; i < n; ++i) s(i, k) = s_scale * rng.normal();
      for (int i = 0; i < n; ++i) g(i, k) = rng.normal();
      for (int i = 0; i < n; ++i) r(i, k) = shaped_draw(rng, shape);
      for (int i = 0; i < n; ++i) z(i, k) = z_scale * rng.normal();
    }
    const Matrix x = user.state_coupling * s + g_root * g;
    const Matrix j = (jammer.state_coupling * s + r_root * r).colwise() + jammer.mean;
    const Matrix y = x + s + j + z;
    const Matrix u = x + user.dpc_alpha * s;
    batch.S.middleRows(begin, rows) = s.transpose();
    batch.X.middleRows(begin, rows) = x.transpose();
    batch.J.middleRows(begin, rows) = j.transpose();
    batch.Z.middleRows(begin, rows) = z.transpose();
    batch.Y.middleRows(begin, rows) = y.transpose();
    batch.U.middleRows(begin, rows) = u.transpose();
  };

  const int workers =
      std::max(1, std::min<int>(chunks, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) fill_chunk(c);
    return batch;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int c = next++; c < chunks; c = next++) fill_chunk(c);
    });
  }
  for (auto& t : pool) t.join();
  return batch;
}

Estimate plugin_mi(const SampleBatch& batch, const ComponentSet& a, const ComponentSet& b,
                   const ComponentSet& given, LogBase base) {
  const auto layout = merged_layout({&a, &b, &given});
  return jackknife(batch, layout, [&](const JointCovariance& joint) {
    return mutual_information(joint, a, b, given, base, Inversion::Pseudo);
  });
}

Estimate plugin_utility(const SampleBatch& batch, GameKind game, LogBase base) {
  const double n = batch.n;
  if (game == GameKind::Costa) {
    return jackknife(batch, {C::Y, C::U, C::S}, [&](const JointCovariance& joint) {
      return (mutual_information(joint, {C::Y}, {C::U}, {}, base, Inversion::Pseudo) -
              mutual_information(joint, {C::U}, {C::S}, {}, base, Inversion::Pseudo)) /
             n;
    });
  }
  return jackknife(batch, {C::Y, C::X, C::S}, [&](const JointCovariance& joint) {
    return mutual_information(joint, {C::Y}, {C::X}, {C::S}, base, Inversion::Pseudo) / n;
  });
}

ReportBlock ProbeComparison::to_block() const {
  ReportBlock block;
  block.add("probe", std::string(to_string(shape)))
      .add("game", std::string(to_string(game)))
      .add("surrogate_utility", surrogate.value)
      .add("surrogate_se", surrogate.standard_error)
      .add("gaussian_utility", gaussian)
      .add("margin", margin)
      .add("passed", passed);
  return block;
}

ProbeComparison nongaussian_probe(const ChannelParams& ch, const UserStrategy& user,
                                  JammerShape shape, int N, std::uint64_t seed, GameKind game) {
  const auto jammer = iid_gaussian_jammer(ch);
  const auto batch = sample_system(ch, user, jammer, N, seed, shape);
  ProbeComparison out;
  out.shape = shape;
  out.game = game;
  out.surrogate = plugin_utility(batch, game, ch.base);
  out.gaussian = utility(game, ch, user, jammer);
  out.margin = out.surrogate.value - out.gaussian + 3.0 * out.surrogate.standard_error;
  out.passed = out.margin >= 0.0;
  return out;
}

}  // namespace dpcjam
