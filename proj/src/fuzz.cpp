#include "minarea/fuzz.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "minarea/json_writer.hpp"

namespace minarea {

namespace {

struct Extreme {
  double value = 0;
  long long index = -1;
  FuzzSampleInfo info;
};

// order-independent merge: ties broken by sample index
void merge_min(Extreme* best, const Extreme& candidate) {
  if (candidate.index < 0) return;
  if (best->index < 0 || candidate.value < best->value ||
      (candidate.value == best->value && candidate.index < best->index))
    *best = candidate;
}

void merge_max(Extreme* best, const Extreme& candidate) {
  if (candidate.index < 0) return;
  if (best->index < 0 || candidate.value > best->value ||
      (candidate.value == best->value && candidate.index < best->index))
    *best = candidate;
}

}  // namespace

FuzzReport run_field_fuzz(const FuzzConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("fuzz needs at least one sample");
  if (!(config.ymax > 0 && config.ymax < 1))
    throw std::invalid_argument("ymax must lie in (0, 1)");
  if (!(config.dmin > 0)) throw std::invalid_argument("dmin must be positive");

  std::vector<std::pair<int, int>> kn;
  for (int k : config.k_set)
    for (int n : config.n_set)
      if (k >= 2 && n >= k) kn.emplace_back(k, n);
  if (kn.empty()) throw std::invalid_argument("no admissible (k, n) pairs");

  // Every sample draws from its own substream of the master seed, so the
  // result is independent of how the index range is partitioned.
  auto probe = [&](long long index, Extreme* worst_deficit, Extreme* worst_fd) {
    Rng rng(config.seed, 0x5eed0000ull + static_cast<std::uint64_t>(index));
    const auto [k, n] = kn[static_cast<size_t>(rng.integer(kn.size()))];
    const Eigen::VectorXd y = rng.ball_point(n, config.ymax);
    Eigen::VectorXd x;
    do {
      x = rng.ball_point(n);
    } while ((x - y).norm() < config.dmin);
    const TangentFrame frame = random_frame_stream(rng, n, k);
    const CalibrationField field(y, k);

    const double def = deficit(field, x, frame);
    merge_min(worst_deficit, {def, index, {k, n, y, x}});

    const double closed = 1.0 - def;
    const double fd = divergence_trace_fd_quad(field, x, frame);
    const double rel = std::abs(closed - fd) / std::max(1.0, std::abs(closed));
    merge_max(worst_fd, {rel, index, {k, n, y, x}});
  };

  const int workers = std::max(1, config.workers);
  Extreme min_deficit, max_fd;
  if (workers == 1) {
    for (long long i = 0; i < config.samples; ++i) probe(i, &min_deficit, &max_fd);
  } else {
    std::vector<Extreme> local_min(workers), local_max(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (long long i = w; i < config.samples; i += workers)
          probe(i, &local_min[w], &local_max[w]);
      });
    }
    for (auto& t : pool) t.join();
    for (int w = 0; w < workers; ++w) {
      merge_min(&min_deficit, local_min[w]);
      merge_max(&max_fd, local_max[w]);
    }
  }

  FuzzReport rep;
  rep.samples = config.samples;
  rep.seed = config.seed;
  rep.min_deficit = min_deficit.value;
  rep.argmin = min_deficit.info;
  rep.fd_max_rel_err = max_fd.value;
  rep.fd_argmax = max_fd.info;
  rep.conditioning_warning = config.ymax > 0.95;
  rep.deficit_pass = rep.min_deficit >= -config.deficit_slack;
  rep.fd_pass = rep.fd_max_rel_err <= config.fd_rel_tol;
  rep.pass = rep.deficit_pass && rep.fd_pass;
  return rep;
}

namespace {

void write_sample_info(JsonWriter& w, const FuzzSampleInfo& info) {
  w.begin_object();
  w.kv("k", info.k);
  w.kv("n", info.n);
  w.kv("y", info.y);
  w.kv("x", info.x);
  w.end_object();
}

}  // namespace

std::string fuzz_report_to_json(const FuzzReport& rep, const FuzzConfig& config) {
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("kind", "field_fuzz");
  w.kv("samples", rep.samples);
  w.kv("seed", static_cast<unsigned long long>(rep.seed));
  w.key("k_set").begin_array();
  for (int k : config.k_set) w.value(k);
  w.end_array();
  w.key("n_set").begin_array();
  for (int n : config.n_set) w.value(n);
  w.end_array();
  w.kv("ymax", config.ymax);
  w.kv("dmin", config.dmin);
  w.kv("min_deficit", rep.min_deficit);
  w.key("argmin");
  write_sample_info(w, rep.argmin);
  w.kv("fd_max_rel_err", rep.fd_max_rel_err);
  w.key("fd_argmax");
  write_sample_info(w, rep.fd_argmax);
  w.kv("deficit_slack", config.deficit_slack);
  w.kv("fd_rel_tol", config.fd_rel_tol);
  w.kv("conditioning_warning", rep.conditioning_warning);
  w.kv("pass", rep.pass);
  w.end_object();
  return w.str();
}

}  // namespace minarea
