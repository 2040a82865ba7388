#include "jetlag/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace jetlag {

SamplingBox SamplingBox::uniform(const Dims& d, Interval all) {
  SamplingBox b;
  b.t.assign(d.p, all);
  b.x.assign(d.n, all);
  b.v.assign(d.vertical(), all);
  return b;
}

void SamplingBox::validate(const Dims& d) const {
  if (t.size() != d.p || x.size() != d.n || v.size() != d.vertical())
    throw DimensionError("sampling box does not match dims");
  auto check = [](const std::vector<Interval>& ivs) {
    for (const auto& iv : ivs)
      if (!(iv.lo <= iv.hi)) throw Error("sampling interval has lo > hi");
  };
  check(t);
  check(x);
  check(v);
}

double Sampler::uniform(double lo, double hi) {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

JetPoint Sampler::draw(const Dims& d, const SamplingBox& box) {
  JetPoint pt(d);
  for (std::size_t a = 0; a < d.p; ++a) pt.t[a] = uniform(box.t[a]);
  for (std::size_t i = 0; i < d.n; ++i) pt.x[i] = uniform(box.x[i]);
  for (std::size_t k = 0; k < d.vertical(); ++k) pt.v[k] = uniform(box.v[k]);
  return pt;
}

void Sampler::redraw_velocity(JetPoint& pt, const SamplingBox& box) {
  for (std::size_t k = 0; k < pt.v.size(); ++k) pt.v[k] = uniform(box.v[k]);
}

unsigned worker_count() {
  const char* env = std::getenv("JETLAG_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) return 1;
  return static_cast<unsigned>(std::min<long>(n, 256));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::size_t first_index = count;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        fn(k);
      } catch (...) {
        // Report the lowest failing index so errors do not depend on scheduling.
        std::lock_guard<std::mutex> lock(mu);
        if (k < first_index) {
          first_index = k;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace jetlag
