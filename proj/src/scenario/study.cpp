#include "lathom/scenario/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include <fmt/os.h>

#include "lathom/rve/rve.hpp"
#include "lathom/scenario/run.hpp"

namespace lathom::scenario {
namespace {

struct Accumulator {
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  void add(double v) {
    sum += v;
    sum2 += v * v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double std() const {
    if (n < 2) return 0.0;
    return std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1)));
  }
};

}  // namespace

StudyResult run_study(const ScenarioConfig& config, int threads) {
  const auto start = std::chrono::steady_clock::now();
  const int dim = config.geometry.n_dim;
  std::vector<double> sizes = config.study.sizes;
  if (sizes.empty()) sizes.push_back(config.geometry.rve_size[0]);
  const int per_size = config.study.structures * config.study.variants;

  StudyResult out;
  out.members.resize(sizes.size() * static_cast<std::size_t>(per_size));
  for (std::size_t k = 0; k < out.members.size(); ++k) {
    auto& m = out.members[k];
    const int local = static_cast<int>(k % static_cast<std::size_t>(per_size));
    m.size = sizes[k / static_cast<std::size_t>(per_size)];
    m.structure = local / config.study.variants;
    m.variant = local % config.study.variants;
    m.geometry_seed = config.geometry.seed + static_cast<std::uint64_t>(m.structure);
    m.random_seed = config.random.seed + static_cast<std::uint64_t>(local);
  }

  const double mean = config.material.mean_lambda0();
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (std::size_t k = next++; k < out.members.size(); k = next++) {
      try {
        auto& m = out.members[k];
        ScenarioConfig c = config;
        c.geometry.rve_size = Vec3::Constant(m.size);
        c.geometry.seed = m.geometry_seed;
        c.random.seed = m.random_seed;
        const auto net = build_rve(c);
        m.nodes = static_cast<int>(net.nodes.size());
        m.elements = static_cast<int>(net.elements.size());
        m.normalized = rve::effective_tensor(net).lambda / mean;
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(out.members.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t s = 0; s < sizes.size(); ++s) {
    Accumulator diag, off;
    for (int local = 0; local < per_size; ++local) {
      const auto& m = out.members[s * static_cast<std::size_t>(per_size) + static_cast<std::size_t>(local)];
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          if (i == j) diag.add(m.normalized(i, j));
          else if (i < j) off.add(std::abs(m.normalized(i, j)));
        }
    }
    out.summaries.push_back({sizes[s], per_size, diag.mean(), diag.std(), off.mean(), off.std()});
  }
  const double cov = config.random.cov;
  out.lower_bound = 1.0 / (1.0 + cov * cov);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_study(const ScenarioConfig& config, const StudyResult& r, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string header = output_header(config, "rve-study");
  {
    auto f = fmt::output_file((std::filesystem::path(out_dir) / "rve_study_members.csv").string());
    f.print("{}\n", header);
    f.print("size,structure,variant,geometry_seed,random_seed,nodes,elements,l11,l22,l33,l12,l13,l23\n");
    for (const auto& m : r.members) {
      const auto& L = m.normalized;
      f.print("{},{},{},{},{},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", m.size, m.structure, m.variant,
              m.geometry_seed, m.random_seed, m.nodes, m.elements, L(0, 0), L(1, 1), L(2, 2), L(0, 1), L(0, 2),
              L(1, 2));
    }
  }
  auto f = fmt::output_file((std::filesystem::path(out_dir) / "rve_study_summary.csv").string());
  f.print("{}\n", header);
  f.print("size,members,mean_diagonal,std_diagonal,mean_abs_off_diagonal,std_abs_off_diagonal,lower_bound,upper_bound\n");
  for (const auto& s : r.summaries)
    f.print("{},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},1\n", s.size, s.members, s.mean_diagonal, s.std_diagonal,
            s.mean_off_diagonal, s.std_off_diagonal, r.lower_bound);
}

}  // namespace lathom::scenario
