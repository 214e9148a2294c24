#include "nlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nlab {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kChunk = 2048;

void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& chunk_body) {
    const auto workers = static_cast<std::size_t>(std::max(1, g_threads.load()));
    if (workers == 1 || chunks < 2) {
        for (std::size_t c = 0; c < chunks; ++c) chunk_body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                chunk_body(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    const std::size_t n = std::min(workers, chunks);
    pool.reserve(n - 1);
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}
}  // namespace

void CompensatedSum::add(double x) noexcept {
    if (!std::isfinite(x) || !std::isfinite(sum_)) {
        sum_ += x;
        comp_ = 0.0;
        return;
    }
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

CompensatedSum& CompensatedSum::operator+=(const CompensatedSum& o) noexcept {
    add(o.sum_);
    add(o.comp_);
    return *this;
}

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

int thread_count() noexcept { return g_threads.load(); }

double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& body) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<CompensatedSum> partial(chunks);
    run_chunks(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) partial[c] += body(i);
    });
    CompensatedSum total;
    for (const auto& p : partial) total += p;
    return total.value();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    run_chunks(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) body(i);
    });
}

}  // namespace nlab
