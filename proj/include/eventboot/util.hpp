#pragma once

#include <atomic>
#include <charconv>
#include <cstdint>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eventboot {

// Raised for malformed or inconsistent input data. The CLI maps this to
// exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised for invalid configuration. The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline DataError data_error_at(std::size_t line_no, const std::string& field,
                               const std::string& what) {
    std::ostringstream os;
    os << "line " << line_no << ", field '" << field << "': " << what;
    return DataError(os.str());
}

// Shortest round-trip decimal representation of a double. Used everywhere a
// float is serialized so that rereading a file reproduces identical bits.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Deterministic RNG wrapper. std::mt19937_64 is fully specified by the
// standard; the distributions on top of it are not, so we roll our own
// bounded draw, shuffle, and sampling to keep outputs reproducible across
// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t bounded(std::uint64_t n) { return engine_() % n; }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices drawn uniformly from [0, n), in random order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(bounded(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

private:
    std::mt19937_64 engine_;
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Applies fn(i) for i in [0, n) across `workers` threads, collecting results
// indexed by i. Output order is fixed by index, so results are independent of
// the worker count.
template <typename Result, typename Fn>
std::vector<Result> parallel_map_indexed(std::size_t n, unsigned workers, Fn&& fn) {
    std::vector<Result> out(n);
    workers = resolve_workers(workers);
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> threads;
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::atomic<std::size_t> cursor{0};
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= n) return;
                try {
                    out[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace eventboot
