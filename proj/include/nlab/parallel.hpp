#pragma once

#include <cstddef>
#include <functional>

namespace nlab {

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept;
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    CompensatedSum& operator+=(const CompensatedSum& o) noexcept;
    double value() const noexcept { return comp_ == 0.0 ? sum_ : sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void set_thread_count(int n);
int thread_count() noexcept;

// Sums body(i) for i in [0, n). Chunk boundaries depend only on n, and the
// per-chunk partial sums are combined in chunk order, so the result does not
// depend on the thread count.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& body);

// Runs body(i) for i in [0, n); body must only write to slot i of its output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nlab
