#include "gridstore/random.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gridstore {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : engine_(make_engine(seed, index)) {}

double RandomStream::uniform() {
    // 53 random mantissa bits, shifted half a step off zero.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_(engine_); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace gridstore
